#pragma once

// Batch front end. Subcommands: kfun, efun, holmstedt, majorize, partition,
// split, norms, tab, counterexample, witness, sqcheck.
//
// Exit codes: 0 success/pass, 2 certified failure (witness printed),
// 3 undecided (enclosure overlap), 64 usage error, 65 malformed input.

namespace lpq {

int run_cli(int argc, const char* const* argv);

}  // namespace lpq
