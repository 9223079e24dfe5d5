#pragma once
// Command-line surface: bound evaluation, path simulation, Monte Carlo
// verification sweeps, estimator envelopes, and the three-point sharpness
// study. Reports are machine-readable (CSV or JSON), carry the tool version
// and a fully-resolved copy of the run configuration, and are written
// atomically (temp file + rename) when an output path is given.
//
// Exit codes: 0 success (and, for verify, all verdicts passed); 2 at least
// one verdict failed; 1 configuration or domain errors, reported on stderr
// as a single line `error: CODE: text`.

#include <iosfwd>
#include <string>
#include <vector>

namespace tailbound::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Runs one invocation. `args` excludes the program name. Output streams are
// injectable for testing; the binary passes std::cout/std::cerr.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace tailbound::cli
