#ifndef LOOGP_CLI_HPP
#define LOOGP_CLI_HPP

namespace loogp {

/// Entry point behind the loogp binary. Subcommands: fit, simulate, design,
/// scatter, bench. Returns 0 on success, 1 on usage errors, 2 on numerical
/// or I/O failures.
int run_cli(int argc, const char* const* argv);

}  // namespace loogp

#endif  // LOOGP_CLI_HPP
