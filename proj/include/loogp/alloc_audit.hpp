#ifndef LOOGP_ALLOC_AUDIT_HPP
#define LOOGP_ALLOC_AUDIT_HPP

#include <cstddef>

namespace loogp::alloc_audit {

/// What the heap hooks observed between begin() and end().
struct Report {
  std::size_t max_block_bytes = 0;     // largest single allocation
  std::size_t peak_live_tracked = 0;   // peak simultaneously-live blocks >= threshold
  std::size_t total_tracked = 0;       // allocations >= threshold
};

/// Starts recording. Blocks of at least track_threshold_bytes count toward
/// the live/peak statistics; max_block_bytes covers every allocation.
/// Implemented by interposing the C allocation entry points, so it observes
/// Eigen's buffers as well as operator new. Only binaries linked against the
/// audit library have the hooks; everything else is unaffected.
void begin(std::size_t track_threshold_bytes);

/// Stops recording and returns the collected report.
Report end();

/// True when the interposed hooks are actually receiving calls (verified by
/// a probe allocation). Callers should treat a false result as "cannot
/// audit" rather than "no allocations happened".
bool hooks_active();

}  // namespace loogp::alloc_audit

#endif  // LOOGP_ALLOC_AUDIT_HPP
