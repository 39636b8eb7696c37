#pragma once

namespace homtype {

/// Entry point of the homtype command line: generate, delta, dimension,
/// sset-test, cover, verify. Returns the process exit code (0 ok, 2 refusal,
/// 3 invariant violation, 4 IO or schema).
int run_cli(int argc, const char* const* argv);

}  // namespace homtype
