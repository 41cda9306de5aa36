#include "nnl/config.hpp"

#include <fstream>
#include <sstream>

#include "nnl/errors.hpp"

namespace nnl {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("expected a number, got '" + v + "'", line);
}

int parse_int(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const int d = std::stoi(v, &used);
        if (trim(v.substr(used)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("expected an integer, got '" + v + "'", line);
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ConfigError("expected a boolean (true/false), got '" + v + "'", line);
}

std::vector<double> parse_numbers(const std::string& v, int line) {
    std::istringstream iss(v);
    std::vector<double> out;
    std::string tok;
    while (iss >> tok) out.push_back(parse_double(tok, line));
    return out;
}

} // namespace

ProblemConfig parse_config(std::istream& in, const std::string& source_name) {
    ProblemConfig cfg;
    cfg.source = source_name;
    std::string section;
    std::string raw;
    int line = 0;
    bool dim_seen = false;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find_first_of("#;");
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("unterminated section header", line);
            section = trim(s.substr(1, s.size() - 2));
            if (section != "domain" && section != "kernel" && section != "discretization" &&
                section != "problem" && section != "analysis" && section != "output")
                throw ConfigError("unknown section [" + section + "]", line);
            continue;
        }

        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line);
        if (val.empty()) throw ConfigError("empty value for key '" + key + "'", line);

        if (section == "domain") {
            if (key == "dim") {
                cfg.dim = parse_int(val, line);
                if (cfg.dim != 1 && cfg.dim != 2)
                    throw ConfigError("dim must be 1 or 2", line);
                dim_seen = true;
            } else if (key == "box") {
                if (!dim_seen) throw ConfigError("set dim before box", line);
                const std::vector<double> v = parse_numbers(val, line);
                if (static_cast<int>(v.size()) != 2 * cfg.dim)
                    throw ConfigError("box needs " + std::to_string(2 * cfg.dim) +
                                          " numbers (lo/hi per axis)",
                                      line);
                Box b;
                if (cfg.dim == 1) {
                    b = Box{Point(v[0], 0.0), Point(v[1], 1.0)};
                } else {
                    b = Box{Point(v[0], v[2]), Point(v[1], v[3])};
                }
                cfg.boxes.push_back(b);
            } else {
                throw ConfigError("unknown key '" + key + "' in [domain]", line);
            }
        } else if (section == "kernel") {
            if (key == "type") {
                if (val != "truncated" && val != "fractional" && val != "custom-table")
                    throw ConfigError("kernel type must be truncated, fractional or custom-table",
                                      line);
                cfg.kernel_type = val;
            } else if (key == "delta") cfg.delta = parse_double(val, line);
            else if (key == "amplitude") cfg.amplitude = parse_double(val, line);
            else if (key == "s") cfg.s = parse_double(val, line);
            else if (key == "table") cfg.table_path = val;
            else if (key == "symmetric") cfg.table_symmetric = parse_bool(val, line);
            else if (key == "horizon") cfg.table_horizon = parse_double(val, line);
            else throw ConfigError("unknown key '" + key + "' in [kernel]", line);
        } else if (section == "discretization") {
            if (key == "h") cfg.h = parse_double(val, line);
            else if (key == "radius") cfg.radius = parse_double(val, line);
            else if (key == "epsilon") cfg.epsilon = parse_double(val, line);
            else throw ConfigError("unknown key '" + key + "' in [discretization]", line);
        } else if (section == "problem") {
            if (key == "type") {
                if (val != "neumann" && val != "neumann-nonhom" && val != "regularized" &&
                    val != "nonsymmetric" && val != "dirichlet-v0" && val != "robin")
                    throw ConfigError("unknown problem type '" + val + "'", line);
                cfg.problem_type = val;
            } else if (key == "f") cfg.f = val;
            else if (key == "g") cfg.g = val;
            else if (key == "alpha") cfg.alpha = val;
            else if (key == "kappa") cfg.kappa = val;
            else if (key == "tol") cfg.tol = parse_double(val, line);
            else throw ConfigError("unknown key '" + key + "' in [problem]", line);
        } else if (section == "analysis") {
            if (key == "poincare") cfg.poincare = parse_bool(val, line);
            else if (key == "poincare_pair_distance")
                cfg.poincare_pair_distance = parse_double(val, line);
            else if (key == "friedrichs") cfg.friedrichs = parse_bool(val, line);
            else if (key == "trace_norm") cfg.trace_norm = parse_bool(val, line);
            else if (key == "trace_shift") cfg.trace_shift = parse_double(val, line);
            else if (key == "green_probes") cfg.green_probes = parse_int(val, line);
            else if (key == "coercivity") cfg.coercivity = parse_bool(val, line);
            else if (key == "embeddings") cfg.embeddings = parse_int(val, line);
            else if (key == "surjectivity") cfg.surjectivity = parse_bool(val, line);
            else if (key == "robin_identity") cfg.robin_identity = parse_bool(val, line);
            else throw ConfigError("unknown key '" + key + "' in [analysis]", line);
        } else if (section == "output") {
            if (key == "dir") cfg.output_dir = val;
            else if (key == "dump_operators") cfg.dump_operators = parse_bool(val, line);
            else if (key == "seed") cfg.seed = static_cast<unsigned long>(parse_int(val, line));
            else throw ConfigError("unknown key '" + key + "' in [output]", line);
        } else {
            throw ConfigError("key '" + key + "' outside of any section", line);
        }
    }

    if (cfg.boxes.empty()) throw ConfigError("missing [domain] box");
    if (cfg.kernel_type.empty()) throw ConfigError("missing [kernel] type");
    if (cfg.kernel_type == "truncated" && cfg.delta <= 0.0)
        throw ConfigError("truncated kernel needs delta > 0");
    if (cfg.kernel_type == "fractional" && !(cfg.s > 0.0 && cfg.s < 1.0))
        throw ConfigError("fractional kernel needs 0 < s < 1");
    if (cfg.kernel_type == "custom-table" && cfg.table_path.empty())
        throw ConfigError("custom-table kernel needs a table path");
    if (cfg.h <= 0.0) throw ConfigError("missing or nonpositive [discretization] h");
    if (cfg.radius <= 0.0) throw ConfigError("missing or nonpositive [discretization] radius");
    return cfg;
}

ProblemConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

} // namespace nnl
