#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "nnl/domain.hpp"

namespace nnl {

/// Parsed problem description (INI format, see README for the schema).
/// String-valued data entries (f, g, alpha, kappa) hold either an expression
/// in x and y or a "csv:<path>" reference resolved by the runner.
struct ProblemConfig {
    // [domain]
    int dim = 1;
    std::vector<Box> boxes;

    // [kernel]
    std::string kernel_type; // truncated | fractional | custom-table
    double delta = 0.0;      // truncated: interaction horizon
    double amplitude = 1.0;  // truncated: constant value
    double s = 0.0;          // fractional: order
    std::string table_path;  // custom-table: CSV of cell-pair values
    bool table_symmetric = true;
    std::optional<double> table_horizon;

    // [discretization]
    double h = 0.0;
    double radius = 0.0;       // truncation radius of the computational box
    double epsilon = -1.0;     // boundary-detection threshold (default h-scaled)

    // [problem]
    std::string problem_type; // neumann | neumann-nonhom | regularized |
                              // nonsymmetric | dirichlet-v0 | robin (empty: analyze-only)
    std::string f = "0";
    std::string g = "0";
    std::string alpha = "0";
    std::string kappa = "0";
    double tol = 1e-12;

    // [analysis]
    bool poincare = false;
    double poincare_pair_distance = 0.0; // 0: skip the pair condition
    bool friedrichs = false;
    bool trace_norm = false;
    double trace_shift = 1.0;
    int green_probes = 0;
    bool coercivity = false;
    int embeddings = 0; // number of probe fields for the norm relations
    bool surjectivity = false;
    bool robin_identity = false;

    // [output]
    std::string output_dir = "out";
    bool dump_operators = false;
    unsigned long seed = 0;

    std::string source; ///< config path (diagnostics only)
};

/// Parses the INI stream; throws ConfigError with a 1-based line number on
/// malformed input, unknown sections/keys, or failed validation.
ProblemConfig parse_config(std::istream& in, const std::string& source_name = "<stream>");

/// Opens and parses a config file.
ProblemConfig parse_config_file(const std::string& path);

} // namespace nnl
