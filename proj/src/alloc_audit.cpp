// Allocation auditing via glibc interposition. The hooks live in the same
// translation unit as begin()/end(), so any binary that links this library
// gets malloc/free and friends routed through the recorder. The recorder
// itself never allocates: live blocks are kept in a fixed open-addressing
// table guarded by a spinlock.

#include "loogp/alloc_audit.hpp"

#include <atomic>
#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <new>

extern "C" {
void* __libc_malloc(std::size_t size);
void* __libc_calloc(std::size_t n, std::size_t size);
void* __libc_realloc(void* ptr, std::size_t size);
void* __libc_memalign(std::size_t alignment, std::size_t size);
void __libc_free(void* ptr);
}

namespace loogp::alloc_audit {

namespace {

constexpr std::size_t kTableBits = 16;
constexpr std::size_t kTableSize = std::size_t{1} << kTableBits;

// Open-addressing slot: ptr == nullptr means empty (size 0) or tombstone
// (size 1). Tombstones keep probe chains intact after frees.
struct Slot {
  void* ptr;
  std::size_t size;
};
constexpr std::size_t kTombstone = 1;

std::atomic<bool> g_enabled{false};
std::atomic_flag g_lock = ATOMIC_FLAG_INIT;
std::size_t g_threshold = 0;
std::size_t g_max_block = 0;
std::size_t g_live = 0;
std::size_t g_peak_live = 0;
std::size_t g_total_tracked = 0;
std::size_t g_table_used = 0;
Slot g_table[kTableSize];

struct LockGuard {
  LockGuard() {
    while (g_lock.test_and_set(std::memory_order_acquire)) {
    }
  }
  ~LockGuard() { g_lock.clear(std::memory_order_release); }
};

std::size_t slot_of(const void* ptr) {
  auto h = reinterpret_cast<std::uintptr_t>(ptr);
  h ^= h >> 33;
  h *= 0xFF51AFD7ED558CCDULL;
  h ^= h >> 33;
  return static_cast<std::size_t>(h) & (kTableSize - 1);
}

void record_alloc(void* ptr, std::size_t size) {
  if (ptr == nullptr || !g_enabled.load(std::memory_order_relaxed)) return;
  LockGuard guard;
  if (!g_enabled.load(std::memory_order_relaxed)) return;
  if (size > g_max_block) g_max_block = size;
  if (size < g_threshold || g_table_used >= kTableSize / 2) return;
  std::size_t s = slot_of(ptr);
  while (g_table[s].ptr != nullptr) s = (s + 1) & (kTableSize - 1);
  if (g_table[s].size != kTombstone) ++g_table_used;  // fresh slot consumed
  g_table[s] = {ptr, size};
  ++g_total_tracked;
  ++g_live;
  if (g_live > g_peak_live) g_peak_live = g_live;
}

void record_free(void* ptr) {
  if (ptr == nullptr || !g_enabled.load(std::memory_order_relaxed)) return;
  LockGuard guard;
  std::size_t s = slot_of(ptr);
  for (std::size_t probes = 0; probes < kTableSize; ++probes) {
    if (g_table[s].ptr == ptr) {
      g_table[s].ptr = nullptr;
      g_table[s].size = kTombstone;
      if (g_live > 0) --g_live;
      return;
    }
    if (g_table[s].ptr == nullptr && g_table[s].size != kTombstone) return;  // untracked block
    s = (s + 1) & (kTableSize - 1);
  }
}

}  // namespace

void begin(std::size_t track_threshold_bytes) {
  LockGuard guard;
  g_threshold = track_threshold_bytes;
  g_max_block = 0;
  g_live = 0;
  g_peak_live = 0;
  g_total_tracked = 0;
  g_table_used = 0;
  std::memset(static_cast<void*>(g_table), 0, sizeof(g_table));
  g_enabled.store(true, std::memory_order_release);
}

Report end() {
  Report report;
  LockGuard guard;
  g_enabled.store(false, std::memory_order_release);
  report.max_block_bytes = g_max_block;
  report.peak_live_tracked = g_peak_live;
  report.total_tracked = g_total_tracked;
  return report;
}

bool hooks_active() {
  begin(1);
  void* probe = std::malloc(1024);
  std::free(probe);
  const Report report = end();
  return report.max_block_bytes >= 1024;
}

}  // namespace loogp::alloc_audit

// ---- interposed entry points -----------------------------------------------

extern "C" {

void* malloc(std::size_t size) {
  void* ptr = __libc_malloc(size);
  loogp::alloc_audit::record_alloc(ptr, size);
  return ptr;
}

void* calloc(std::size_t n, std::size_t size) {
  void* ptr = __libc_calloc(n, size);
  loogp::alloc_audit::record_alloc(ptr, n * size);
  return ptr;
}

void* realloc(void* old_ptr, std::size_t size) {
  loogp::alloc_audit::record_free(old_ptr);
  void* ptr = __libc_realloc(old_ptr, size);
  loogp::alloc_audit::record_alloc(ptr, size);
  return ptr;
}

void* memalign(std::size_t alignment, std::size_t size) {
  void* ptr = __libc_memalign(alignment, size);
  loogp::alloc_audit::record_alloc(ptr, size);
  return ptr;
}

void* aligned_alloc(std::size_t alignment, std::size_t size) {
  void* ptr = __libc_memalign(alignment, size);
  loogp::alloc_audit::record_alloc(ptr, size);
  return ptr;
}

int posix_memalign(void** out, std::size_t alignment, std::size_t size) {
  if (out == nullptr || alignment % sizeof(void*) != 0 || (alignment & (alignment - 1)) != 0) {
    return EINVAL;
  }
  void* ptr = __libc_memalign(alignment, size);
  if (ptr == nullptr) return ENOMEM;
  loogp::alloc_audit::record_alloc(ptr, size);
  *out = ptr;
  return 0;
}

void free(void* ptr) {
  loogp::alloc_audit::record_free(ptr);
  __libc_free(ptr);
}

}  // extern "C"
