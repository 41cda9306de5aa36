#pragma once

#include <ostream>

#include "nnl/config.hpp"

namespace nnl {

/// Exit codes shared by the CLI commands.
enum ExitCode : int {
    kExitOk = 0,
    kExitParse = 1,        ///< config/CLI/input parse failure (also failed verification)
    kExitIncompatible = 2, ///< solvability condition violated by the data
    kExitUnsupported = 3,  ///< singular system or hypotheses outside solver support
};

/// Builds the problem from the config, solves it, writes solution.csv and
/// report.json (plus operator/grid dumps when requested) into the output
/// directory.  Returns an ExitCode.
int run_solve(const ProblemConfig& cfg, std::ostream& log);

/// Runs the analyses toggled in the config and writes report.json.
int run_analyze(const ProblemConfig& cfg, std::ostream& log);

/// Built-in verification suites over the reference kernels:
/// identities | solvers | robin | trace | constants | all.
/// Prints one PASS/FAIL line per check; inject_fault corrupts one quadrature
/// weight first (the suite must then fail, exercising the harness itself).
int run_verify(const std::string& suite, unsigned long seed, bool inject_fault,
               std::ostream& log);

} // namespace nnl
