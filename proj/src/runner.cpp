#include "nnl/runner.hpp"

#include <filesystem>
#include <random>

#include "nnl/analysis.hpp"
#include "nnl/expression.hpp"
#include "nnl/io.hpp"
#include "nnl/solve.hpp"

namespace nnl {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using RowIt = Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator;

struct Setting {
    Kernel kernel;
    OmegaSpec omega;
    Grid grid;
    QuadratureTable table;
};

OmegaSpec omega_from(const ProblemConfig& cfg) {
    OmegaSpec om;
    om.dim = cfg.dim;
    om.boxes = cfg.boxes;
    om.validate();
    return om;
}

Kernel kernel_from(const ProblemConfig& cfg) {
    if (cfg.kernel_type == "truncated")
        return make_truncated_constant(cfg.delta, cfg.amplitude, cfg.dim);
    if (cfg.kernel_type == "fractional") return make_fractional(cfg.s, cfg.dim);
    KernelTableData data = read_kernel_table_csv(cfg.table_path, cfg.dim);
    data.symmetric = cfg.table_symmetric;
    data.horizon = cfg.table_horizon;
    return make_table_kernel(omega_from(cfg), cfg.h, std::move(data));
}

Setting build_setting(const ProblemConfig& cfg) {
    Setting s;
    s.kernel = kernel_from(cfg);
    s.omega = omega_from(cfg);
    s.grid = build_grid(s.omega, s.kernel, cfg.h, cfg.radius, cfg.epsilon);
    s.table = build_pair_table(s.grid, s.kernel);
    return s;
}

/// Evaluates a data entry ("csv:<path>" or an expression in x, y) on the dof
/// range [offset, offset+count).
Eigen::VectorXd eval_spec(const std::string& spec, const Setting& s, int offset, int count,
                          const char* what) {
    if (spec.rfind("csv:", 0) == 0) {
        const Eigen::VectorXd full = read_field_csv(spec.substr(4), s.grid);
        return full.segment(offset, count);
    }
    Expression e;
    try {
        e = parse_expression(spec);
    } catch (const ContractError& err) {
        throw ConfigError(std::string(what) + ": " + err.what());
    }
    Eigen::VectorXd out(count);
    for (int i = 0; i < count; ++i) {
        const Point c = s.grid.center_of_dof(offset + i);
        out[i] = e.eval(c[0], s.grid.dim == 2 ? c[1] : 0.0);
    }
    return out;
}

ordered_json grid_json(const Setting& s, const ProblemConfig& cfg) {
    ordered_json j;
    j["kernel"] = s.kernel.label;
    j["h"] = cfg.h;
    j["radius"] = cfg.radius;
    j["cells"] = {{"omega", s.grid.n_omega},
                  {"gamma", s.grid.n_gamma},
                  {"gamma_hat_only", s.grid.n_gamma_hat_only}};
    return j;
}

ordered_json constant_json(const ConstantReport& r) {
    ordered_json j;
    j["name"] = r.name;
    j["value"] = r.infinite ? json_number(std::numeric_limits<double>::infinity())
                            : json_number(r.value);
    j["infinite"] = r.infinite;
    j["bound"] = r.bound ? json_number(*r.bound) : ordered_json(nullptr);
    j["bound_provenance"] = r.bound_provenance;
    j["method"] = r.method;
    j["margin"] = json_number(r.margin);
    std::string status = "computed";
    if (r.infinite)
        status = "infinite";
    else if (r.bound)
        status = r.value <= *r.bound * (1.0 + 1e-12) ? "within_bound" : "exceeds_bound";
    j["status"] = status;
    return j;
}

int exit_for(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return kExitOk;
        case SolveStatus::Incompatible: return kExitIncompatible;
        case SolveStatus::Singular:
        case SolveStatus::Unsupported: return kExitUnsupported;
    }
    return kExitUnsupported;
}

DiscreteField random_field(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DiscreteField u(grid);
    for (int k = 0; k < grid.n_active(); ++k) u.values[k] = dist(rng);
    return u;
}

} // namespace

int run_solve(const ProblemConfig& cfg, std::ostream& log) {
    if (cfg.problem_type.empty())
        throw ConfigError("solve requires a [problem] type entry");
    const Setting s = build_setting(cfg);
    const Grid& grid = s.grid;
    SolveOptions opts;
    opts.cg_tol = cfg.tol;
    const int n_om = grid.n_omega;
    const int n_bd = grid.n_boundary();

    SolveReport rep;
    ordered_json extra;
    Eigen::SparseMatrix<double> op_matrix;
    const bool want_ops = cfg.dump_operators;

    if (cfg.problem_type == "neumann") {
        const Eigen::VectorXd f = eval_spec(cfg.f, s, 0, n_om, "f");
        const Eigen::VectorXd g = eval_spec(cfg.g, s, n_om, n_bd, "g");
        rep = solve_neumann(grid, s.table, s.kernel, f, g, opts);
        if (want_ops) op_matrix = stiffness_form(grid, s.table, s.kernel).matrix();
    } else if (cfg.problem_type == "neumann-nonhom") {
        const Eigen::VectorXd f = eval_spec(cfg.f, s, 0, n_om, "f");
        const Eigen::VectorXd g = eval_spec(cfg.g, s, n_om, n_bd, "g");
        const TransformedProblem tp = transform_nonhom_to_hom(grid, s.table, f, g);
        rep = solve_neumann(grid, s.table, s.kernel, tp.f_new, Eigen::VectorXd::Zero(n_bd), opts);
        if (rep.solution.values.size() == grid.n_active())
            rep.solution.values += tp.g_lift.values;
        extra["defect_original"] = json_number(tp.defect_original);
        extra["defect_transformed"] = json_number(tp.defect_transformed);
        if (want_ops) op_matrix = stiffness_form(grid, s.table, s.kernel).matrix();
    } else if (cfg.problem_type == "regularized") {
        const Eigen::VectorXd f = eval_spec(cfg.f, s, 0, n_om, "f");
        const Eigen::VectorXd g = eval_spec(cfg.g, s, n_om, n_bd, "g");
        const Eigen::VectorXd kappa = eval_spec(cfg.kappa, s, 0, n_om, "kappa");
        rep = solve_regularized(grid, s.table, s.kernel, f, g, kappa, opts);
        if (want_ops) {
            DifferenceForm k = stiffness_form(grid, s.table, s.kernel);
            k.diag.head(n_om) += kappa * grid.volume();
            op_matrix = k.matrix();
        }
    } else if (cfg.problem_type == "nonsymmetric") {
        const Eigen::VectorXd f = eval_spec(cfg.f, s, 0, n_om, "f");
        const Eigen::VectorXd g = eval_spec(cfg.g, s, n_om, n_bd, "g");
        const Eigen::VectorXd alpha = eval_spec(cfg.alpha, s, 0, n_om, "alpha");
        rep = solve_nonsymmetric(grid, s.table, s.kernel, f, g, alpha, opts);
        if (want_ops) op_matrix = assemble_nonsym(grid, s.table, alpha);
    } else if (cfg.problem_type == "dirichlet-v0") {
        const Eigen::VectorXd f = eval_spec(cfg.f, s, 0, n_om, "f");
        rep = solve_dirichlet_v0(grid, s.table, s.kernel, f, opts);
        if (want_ops) op_matrix = v0_gram_form(grid, s.table).matrix();
    } else if (cfg.problem_type == "robin") {
        const Eigen::VectorXd f = eval_spec(cfg.f, s, 0, n_om, "f");
        const Eigen::VectorXd alpha = eval_spec(cfg.alpha, s, n_om, grid.n_gamma, "alpha");
        const Eigen::VectorXd g = eval_spec(cfg.g, s, n_om, grid.n_gamma, "g");
        rep = solve_robin_regional(grid, s.table, s.kernel, f, alpha, g, opts);
        if (want_ops) {
            const RobinKernelSet set = robin_transform(grid, s.table, alpha, g);
            DifferenceForm k(n_om);
            for (int i = 0; i < n_om; ++i)
                for (RowIt it(set.gamma_alpha, i); it; ++it)
                    if (it.col() > i)
                        k.add_pair(i, static_cast<int>(it.col()),
                                   0.5 * (it.value() + set.gamma_alpha.coeff(it.col(), i)));
            k.diag = set.gamma_alpha_omega * grid.volume();
            op_matrix = k.matrix();
        }
    } else {
        throw ConfigError("unknown problem type '" + cfg.problem_type + "'");
    }

    fs::create_directories(cfg.output_dir);
    const std::string dir = cfg.output_dir + "/";
    if (rep.solution.values.size() == grid.n_active())
        write_field_csv(dir + "solution.csv", grid, rep.solution.values);
    if (want_ops) {
        write_matrix_market(dir + "operator.mtx", op_matrix);
        write_matrix_market(dir + "weights.mtx", Eigen::SparseMatrix<double>(s.table.w));
        write_grid_csv(dir + "grid.csv", grid);
    }

    ordered_json report;
    report["command"] = "solve";
    report["problem"] = cfg.problem_type;
    report["discretization"] = grid_json(s, cfg);
    report["status"] = to_string(rep.status);
    report["residual_2norm"] = json_number(rep.residual_2norm);
    report["compatibility_defect"] = json_number(rep.compatibility_defect);
    report["multiplier"] = json_number(rep.multiplier);
    report["iterations"] = rep.iterations;
    for (auto& [k, v] : extra.items()) report[k] = v;
    write_json(dir + "report.json", report);

    log << "solve " << cfg.problem_type << ": status " << to_string(rep.status) << ", residual "
        << format_double(rep.residual_2norm) << ", outputs in " << cfg.output_dir << "\n";
    return exit_for(rep.status);
}

int run_analyze(const ProblemConfig& cfg, std::ostream& log) {
    const Setting s = build_setting(cfg);
    const Grid& grid = s.grid;
    fs::create_directories(cfg.output_dir);

    ordered_json report;
    report["command"] = "analyze";
    report["discretization"] = grid_json(s, cfg);
    ordered_json constants = ordered_json::array();
    ordered_json checks;

    auto log_constant = [&](const ConstantReport& r) {
        constants.push_back(constant_json(r));
        log << "constant " << r.name << ": value "
            << (r.infinite ? "inf" : format_double(r.value));
        if (r.bound) log << ", bound " << format_double(*r.bound);
        log << "\n";
    };

    if (cfg.green_probes > 0) {
        double max_res = 0.0, max_special = 0.0;
        for (int p = 0; p < cfg.green_probes; ++p) {
            const DiscreteField u = random_field(grid, cfg.seed * 1000003ULL + 2 * p);
            const DiscreteField v = random_field(grid, cfg.seed * 1000003ULL + 2 * p + 1);
            const GreenReport gr = verify_green_identity(grid, s.table, u, v);
            max_res = std::max(max_res, gr.residual);
            max_special = std::max(max_special, gr.residual_special);
        }
        checks["green"] = {{"probes", cfg.green_probes},
                           {"max_residual", json_number(max_res)},
                           {"max_residual_special", json_number(max_special)}};
        log << "green identity: max residual " << format_double(max_res) << "\n";
    }

    if (cfg.poincare) {
        ConstantReport r = estimate_poincare(grid, s.table);
        const PoincareSufficiency suff =
            check_poincare_sufficient_conditions(grid, s.kernel, cfg.poincare_pair_distance);
        if (suff.bound) {
            r.bound = suff.bound;
            r.bound_provenance = "2λ(Ω) / ∫ inf_{x∈Ω} γ(y,x) dy";
            if (!r.infinite) r.margin = *r.bound - r.value;
        }
        log_constant(r);
        checks["poincare_sufficiency"] = {{"uniform_mass", json_number(suff.uniform_mass)},
                                          {"pair_mass", json_number(suff.pair_mass)},
                                          {"pair_distance", json_number(suff.pair_distance)}};
    }
    if (cfg.friedrichs) log_constant(estimate_friedrichs(grid, s.table));
    if (cfg.trace_norm) log_constant(trace_operator_norm(grid, s.table, cfg.trace_shift));

    if (cfg.coercivity) {
        const Eigen::VectorXd alpha = eval_spec(cfg.alpha, s, 0, grid.n_omega, "alpha");
        const NonsymCoercivity c = check_nonsym_coercivity(grid, s.table, alpha);
        checks["coercivity"] = {{"margin", json_number(c.margin)},
                                {"orientation_bound", json_number(c.orientation_bound)},
                                {"certified", c.margin > 0.0}};
        log << "coercivity margin: " << format_double(c.margin) << "\n";
    }

    if (cfg.embeddings > 0) {
        double max_iso = 0.0, max_ext = 0.0, max_restr = 0.0;
        for (int p = 0; p < cfg.embeddings; ++p) {
            const DiscreteField u = random_field(grid, cfg.seed * 7777777ULL + p);
            const EmbeddingReport er = verify_regional_embeddings(grid, s.table, s.kernel, u);
            max_iso = std::max(max_iso, er.isometry_residual);
            max_ext = std::max(max_ext, er.extension_ratio);
            max_restr = std::max(max_restr, er.restriction_ratio);
        }
        checks["embeddings"] = {{"probes", cfg.embeddings},
                                {"max_isometry_residual", json_number(max_iso)},
                                {"max_extension_ratio", json_number(max_ext)},
                                {"max_restriction_ratio", json_number(max_restr)}};
        log << "embeddings: max extension ratio " << format_double(max_ext)
            << ", max restriction ratio " << format_double(max_restr) << "\n";
    }

    if (cfg.surjectivity) {
        const SurjectivityCheck sc =
            check_trace_surjectivity_condition(grid, s.table, cfg.trace_shift);
        checks["surjectivity"] = {{"e1", json_number(sc.e1)},
                                  {"e2", json_number(sc.e2)},
                                  {"shift", json_number(cfg.trace_shift)}};
        log << "surjectivity oscillation: e1 " << format_double(sc.e1) << ", e2 "
            << format_double(sc.e2) << "\n";
    }

    if (cfg.robin_identity) {
        const Eigen::VectorXd alpha = eval_spec(cfg.alpha, s, grid.n_omega, grid.n_gamma, "alpha");
        const Eigen::VectorXd g = eval_spec(cfg.g, s, grid.n_omega, grid.n_gamma, "g");
        const RobinIdentityReport rr = verify_robin_identity(grid, s.table, alpha, g);
        checks["robin_identity"] = {
            {"elimination_residual", json_number(rr.elimination_residual)},
            {"compatibility_residual", json_number(rr.compatibility_residual)}};
        log << "robin elimination residual: " << format_double(rr.elimination_residual) << "\n";
    }

    report["constants"] = constants;
    report["checks"] = checks;
    write_json(cfg.output_dir + "/report.json", report);
    log << "analyze: report in " << cfg.output_dir << "/report.json\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Verification suites.

namespace {

struct CheckList {
    std::ostream& log;
    int total = 0;
    int failed = 0;

    void add(const std::string& name, bool pass, const std::string& detail) {
        ++total;
        if (!pass) ++failed;
        log << (pass ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) log << "  [" << detail << "]";
        log << "\n";
    }
};

Setting make_setting(const Kernel& k, const OmegaSpec& om, double h, double radius) {
    Setting s;
    s.kernel = k;
    s.omega = om;
    s.grid = build_grid(s.omega, s.kernel, h, radius);
    s.table = build_pair_table(s.grid, s.kernel);
    return s;
}

OmegaSpec unit_interval() { return interval(0.0, 1.0); }

Setting make_k1(double h) {
    return make_setting(make_truncated_constant(0.5, 1.0, 1), unit_interval(), h, 0.5);
}
Setting make_k2(double h) {
    return make_setting(make_truncated_constant(2.0, 1.0, 1), unit_interval(), h, 2.0);
}
Setting make_fractional_setting(double h, double radius) {
    return make_setting(make_fractional(0.25, 1), unit_interval(), h, radius);
}
Setting make_asym(double h) {
    Kernel k;
    k.dim = 1;
    k.symmetric = false;
    k.horizon = 0.5;
    k.label = "truncated-skewed";
    k.eval = [](const Point& a, const Point& b) {
        const double d = std::abs(a[0] - b[0]);
        if (d >= 0.5) return 0.0;
        const double skew = a[0] > b[0] ? 0.1 : (a[0] < b[0] ? -0.1 : 0.0);
        return 1.0 + skew;
    };
    return make_setting(k, unit_interval(), h, 0.5);
}
Setting make_one_sided(double h) {
    Kernel k;
    k.dim = 1;
    k.symmetric = false;
    k.horizon = 0.5;
    k.label = "truncated-one-sided";
    k.eval = [](const Point& a, const Point& b) {
        return (std::abs(a[0] - b[0]) < 0.5 && a[0] > -0.1) ? 1.0 : 0.0;
    };
    return make_setting(k, unit_interval(), h, 0.5);
}
Setting make_uniform(double h, double radius) {
    Kernel k;
    k.dim = 1;
    k.symmetric = true;
    k.label = "uniform";
    k.eval = [](const Point&, const Point&) { return 1.0; };
    return make_setting(k, unit_interval(), h, radius);
}
Setting make_regional(double h) {
    Kernel k;
    k.dim = 1;
    k.symmetric = true;
    k.regional = true;
    k.label = "regional-uniform";
    OmegaSpec om = unit_interval();
    k.eval = [om](const Point& a, const Point& b) {
        return om.contains(a) && om.contains(b) ? 1.0 : 0.0;
    };
    return make_setting(k, om, h, 0.25);
}

void inject_weight_fault(Setting& s) {
    for (int r = 0; r < s.table.w.rows(); ++r) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(s.table.w, r); it;
             ++it) {
            it.valueRef() *= 1.01;
            return;
        }
    }
}

/// Recomputes a sample of stored weights straight from the kernel; bitwise
/// agreement is expected because the same quadrature dispatch produced them.
void check_weights_match(CheckList& cl, const Setting& s, const std::string& label) {
    double max_rel = 0.0;
    int sampled = 0;
    for (int r = 0; r < s.grid.n_omega && sampled < 24; ++r) {
        for (RowIt it(s.table.w, r); it && sampled < 24; ++it) {
            const int c = static_cast<int>(it.col());
            if (c <= r) continue;
            const double ref = cell_pair_weight(s.grid, s.kernel, s.grid.dof_to_cell[r],
                                                s.grid.dof_to_cell[c]);
            const double denom = std::max({std::abs(ref), std::abs(it.value()), 1e-300});
            max_rel = std::max(max_rel, std::abs(ref - it.value()) / denom);
            ++sampled;
        }
    }
    cl.add("weights-match-kernel-" + label, max_rel <= 1e-15,
           "max rel diff " + format_double(max_rel));
}

void suite_identities(CheckList& cl, unsigned long seed, bool inject) {
    Setting k1 = make_k1(1.0 / 32);
    Setting asym = make_asym(1.0 / 32);
    Setting frac = make_fractional_setting(1.0 / 32, 1.0);
    if (inject) inject_weight_fault(k1);

    check_weights_match(cl, k1, "k1");

    {
        double max_def = 0.0;
        for (int p = 0; p < 5; ++p) {
            const DiscreteField u = random_field(k1.grid, seed + p);
            const Eigen::VectorXd lu = apply_diffusion(k1.grid, k1.table, u);
            const Eigen::VectorXd nu = apply_flux(k1.grid, k1.table, u);
            max_def = std::max(max_def,
                               std::abs(lu.sum() * k1.grid.volume() + nu.sum() * k1.grid.volume()));
        }
        cl.add("divergence-defect", max_def <= 1e-11, "max " + format_double(max_def));
    }
    {
        auto green_max = [&](const Setting& s, std::uint64_t salt) {
            double mx = 0.0;
            for (int p = 0; p < 5; ++p) {
                const DiscreteField u = random_field(s.grid, seed + salt + 2 * p);
                const DiscreteField v = random_field(s.grid, seed + salt + 2 * p + 1);
                Eigen::VectorXd alpha = Eigen::VectorXd::Zero(s.grid.n_omega);
                for (int i = 0; i < s.grid.n_omega; ++i)
                    alpha[i] = 0.5 + 0.5 * std::sin(7.0 * i);
                const GreenReport gr = verify_green_identity(s.grid, s.table, u, v, alpha);
                const double scale = std::max(1.0, std::abs(gr.form_value));
                mx = std::max(mx, gr.residual / scale);
            }
            return mx;
        };
        cl.add("green-symmetric", green_max(k1, 100) <= 1e-11, "");
        cl.add("green-asymmetric", green_max(asym, 200) <= 1e-10, "");
        cl.add("green-fractional", green_max(frac, 300) <= 1e-10, "");
    }
    {
        bool bitwise = true;
        for (int r = 0; r < k1.grid.n_omega && bitwise; ++r)
            for (RowIt it(k1.table.w, r); it; ++it)
                if (it.col() > r && it.value() != k1.table.w.coeff(it.col(), r)) {
                    bitwise = false;
                    break;
                }
        cl.add("table-symmetry-bitwise", bitwise, "");
    }
    {
        const DifferenceForm k = stiffness_form(k1.grid, k1.table, k1.kernel);
        const double kill =
            k.apply(Eigen::VectorXd::Ones(k1.grid.n_active())).cwiseAbs().maxCoeff();
        cl.add("stiffness-kills-constants", kill == 0.0, "max " + format_double(kill));
    }
    {
        // On outflow-only cells the flux reduces to −∫_Ω u γ(x,y) dx / vol.
        Setting ones = make_one_sided(1.0 / 32);
        double max_diff = 0.0;
        const DiscreteField u = random_field(ones.grid, seed + 400);
        const Eigen::VectorXd nu = apply_flux(ones.grid, ones.table, u);
        const int base = ones.grid.n_omega + ones.grid.n_gamma;
        for (int k = base; k < ones.grid.n_active(); ++k) {
            double row_dot = 0.0;
            for (RowIt it(ones.table.w, k); it; ++it) row_dot += u.values[it.col()] * it.value();
            const double reduced = -row_dot / ones.grid.volume();
            max_diff = std::max(max_diff, std::abs(nu[k - ones.grid.n_omega] - reduced));
        }
        cl.add("flux-reduction-one-sided",
               ones.grid.n_gamma_hat_only > 0 && max_diff <= 1e-12,
               "one-sided cells " + std::to_string(ones.grid.n_gamma_hat_only) + ", max " +
                   format_double(max_diff));
    }
}

void suite_solvers(CheckList& cl, unsigned long seed, bool inject) {
    Setting k1 = make_k1(1.0 / 64);
    Setting frac = make_fractional_setting(1.0 / 64, 2.0);
    Setting asym = make_asym(1.0 / 32);
    if (inject) inject_weight_fault(k1);

    check_weights_match(cl, k1, "k1");
    check_weights_match(cl, frac, "fractional");

    auto manufactured = [&](const Setting& s, std::uint64_t salt) {
        double worst = 0.0;
        for (int p = 0; p < 5; ++p) {
            DiscreteField u = random_field(s.grid, seed + salt + p);
            u = mean_center(u);
            const Eigen::VectorXd f = apply_diffusion(s.grid, s.table, u);
            const Eigen::VectorXd g = apply_flux(s.grid, s.table, u);
            const SolveReport rep = solve_neumann(s.grid, s.table, s.kernel, f, g);
            if (rep.status != SolveStatus::Converged) return 1e9;
            Eigen::VectorXd diff = rep.solution.values - u.values;
            diff.array() -= diff.head(s.grid.n_omega).mean();
            worst = std::max(worst, diff.cwiseAbs().maxCoeff());
        }
        return worst;
    };
    cl.add("manufactured-neumann-k1", manufactured(k1, 10) <= 1e-8, "");
    cl.add("manufactured-neumann-fractional", manufactured(frac, 20) <= 1e-8, "");

    {
        const int n_om = k1.grid.n_omega;
        Eigen::VectorXd f(n_om), kappa(n_om);
        for (int i = 0; i < n_om; ++i) {
            const double x = k1.grid.center_of_dof(i)[0];
            f[i] = std::sin(3.0 * x);
            kappa[i] = 1.0 + x * x;
        }
        const Eigen::VectorXd g = Eigen::VectorXd::Zero(k1.grid.n_boundary());
        const SolveReport rep = solve_regularized(k1.grid, k1.table, k1.kernel, f, g, kappa);
        cl.add("regularized-residual",
               rep.status == SolveStatus::Converged && rep.residual_2norm <= 1e-10,
               "residual " + format_double(rep.residual_2norm));

        // Energy inequality  uᵀ(K+M_κ)u ≥ min{1/2, min κ}·(‖u‖² + |u|²_V).
        DifferenceForm k = stiffness_form(k1.grid, k1.table, k1.kernel);
        k.diag.head(n_om) += kappa * k1.grid.volume();
        const DifferenceForm dv = v_seminorm_form(k1.grid, k1.table);
        const double cmin = std::min(0.5, kappa.minCoeff());
        bool ok = true;
        for (int p = 0; p < 5; ++p) {
            const DiscreteField u = random_field(k1.grid, seed + 30 + p);
            const double lhs = k.energy(u.values);
            const double rhs = k1.grid.volume() * u.omega().squaredNorm() + dv.energy(u.values);
            if (lhs < cmin * rhs * (1.0 - 1e-12)) ok = false;
        }
        cl.add("regularized-energy-bound", ok, "");
    }
    {
        Eigen::VectorXd f(frac.grid.n_omega);
        for (int i = 0; i < frac.grid.n_omega; ++i)
            f[i] = std::cos(2.0 * frac.grid.center_of_dof(i)[0]);
        const SolveReport rep = solve_dirichlet_v0(frac.grid, frac.table, frac.kernel, f);
        cl.add("dirichlet-residual",
               rep.status == SolveStatus::Converged && rep.residual_2norm <= 1e-10,
               "residual " + format_double(rep.residual_2norm));
    }
    {
        DiscreteField u = mean_center(random_field(k1.grid, seed + 40));
        const Eigen::VectorXd f = apply_diffusion(k1.grid, k1.table, u);
        const Eigen::VectorXd g = apply_flux(k1.grid, k1.table, u);
        const TransformedProblem tp = transform_nonhom_to_hom(k1.grid, k1.table, f, g);

        const Eigen::VectorXd n_lift = apply_flux(k1.grid, k1.table, tp.g_lift);
        const double flux_err = (n_lift - g).cwiseAbs().maxCoeff();
        const Eigen::VectorXd l_lift = apply_diffusion(k1.grid, k1.table, tp.g_lift);
        const double diff_err = (l_lift - (f - tp.f_new)).cwiseAbs().maxCoeff();
        cl.add("lift-flux-exact", flux_err <= 1e-12, "max " + format_double(flux_err));
        cl.add("lift-diffusion-exact", diff_err <= 1e-12, "max " + format_double(diff_err));
        cl.add("lift-defect-preserved",
               std::abs(tp.defect_original - tp.defect_transformed) <= 1e-12, "");

        const SolveReport direct = solve_neumann(k1.grid, k1.table, k1.kernel, f, g);
        SolveReport viahom = solve_neumann(k1.grid, k1.table, k1.kernel, tp.f_new,
                                           Eigen::VectorXd::Zero(k1.grid.n_boundary()));
        viahom.solution.values += tp.g_lift.values;
        Eigen::VectorXd diff = direct.solution.values - viahom.solution.values;
        diff.array() -= diff.head(k1.grid.n_omega).mean();
        cl.add("nonhom-roundtrip", diff.cwiseAbs().maxCoeff() <= 1e-8,
               "max " + format_double(diff.cwiseAbs().maxCoeff()));
    }
    {
        const Eigen::VectorXd alpha = Eigen::VectorXd::Ones(asym.grid.n_omega);
        Eigen::VectorXd f(asym.grid.n_omega);
        for (int i = 0; i < asym.grid.n_omega; ++i)
            f[i] = std::sin(5.0 * asym.grid.center_of_dof(i)[0]);
        const Eigen::VectorXd g = Eigen::VectorXd::Zero(asym.grid.n_boundary());
        const NonsymCoercivity cert = check_nonsym_coercivity(asym.grid, asym.table, alpha);
        const SolveReport rep = solve_nonsymmetric(asym.grid, asym.table, asym.kernel, f, g, alpha);
        cl.add("nonsym-coercive-solve",
               cert.margin > 0.0 && rep.status == SolveStatus::Converged &&
                   rep.residual_2norm <= 1e-10,
               "margin " + format_double(cert.margin));
    }
    {
        // On a symmetric kernel the general solver must agree with the
        // symmetric factorization path.
        const Eigen::VectorXd alpha = Eigen::VectorXd::Ones(k1.grid.n_omega);
        Eigen::VectorXd f(k1.grid.n_omega);
        for (int i = 0; i < k1.grid.n_omega; ++i)
            f[i] = std::cos(4.0 * k1.grid.center_of_dof(i)[0]);
        const Eigen::VectorXd g = Eigen::VectorXd::Zero(k1.grid.n_boundary());
        const SolveReport a = solve_nonsymmetric(k1.grid, k1.table, k1.kernel, f, g, alpha);
        const SolveReport b = solve_regularized(k1.grid, k1.table, k1.kernel, f, g, alpha);
        const double diff = a.status == SolveStatus::Converged && b.status == SolveStatus::Converged
                                ? (a.solution.values - b.solution.values).cwiseAbs().maxCoeff()
                                : 1e9;
        cl.add("nonsym-matches-regularized", diff <= 1e-10, "max " + format_double(diff));
    }
}

void suite_robin(CheckList& cl, unsigned long seed, bool inject) {
    Setting k1 = make_k1(1.0 / 64);
    if (inject) inject_weight_fault(k1);
    const Grid& grid = k1.grid;
    const int n_om = grid.n_omega;
    const int n_ga = grid.n_gamma;

    check_weights_match(cl, k1, "k1");

    std::mt19937_64 rng(seed + 500);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);

    {
        double worst = 0.0;
        for (int p = 0; p < 5; ++p) {
            Eigen::VectorXd alpha(n_ga), g(n_ga), f(n_om);
            for (int k = 0; k < n_ga; ++k) alpha[k] = unit(rng);
            for (int k = 0; k < n_ga; ++k) g[k] = sym(rng);
            for (int i = 0; i < n_om; ++i) f[i] = sym(rng);
            const SolveReport rep =
                solve_robin_regional(grid, k1.table, k1.kernel, f, alpha, g);
            if (rep.status != SolveStatus::Converged) {
                worst = 1e9;
                break;
            }
            // Coupled-system residual of the recovered full field.
            const Eigen::VectorXd lu = apply_diffusion(grid, k1.table, rep.solution);
            const Eigen::VectorXd nu = apply_flux(grid, k1.table, rep.solution);
            for (int i = 0; i < n_om; ++i) worst = std::max(worst, std::abs(lu[i] - f[i]));
            for (int k = 0; k < n_ga; ++k) {
                const double bc = (1.0 - alpha[k]) * nu[k] +
                                  alpha[k] * rep.solution.values[n_om + k] - g[k];
                worst = std::max(worst, std::abs(bc));
            }
        }
        cl.add("robin-coupled-residual", worst <= 1e-8, "max " + format_double(worst));
    }
    {
        Eigen::VectorXd alpha = Eigen::VectorXd::Ones(n_ga);
        Eigen::VectorXd g(n_ga), f(n_om);
        for (int k = 0; k < n_ga; ++k) g[k] = std::sin(2.0 * grid.center_of_dof(n_om + k)[0]);
        for (int i = 0; i < n_om; ++i) f[i] = std::cos(3.0 * grid.center_of_dof(i)[0]);
        const SolveReport rep = solve_robin_regional(grid, k1.table, k1.kernel, f, alpha, g);
        const double diff = (rep.solution.gamma() - g).cwiseAbs().maxCoeff();
        cl.add("robin-dirichlet-endpoint", rep.status == SolveStatus::Converged && diff == 0.0,
               "max " + format_double(diff));
    }
    {
        Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n_ga);
        // Compatible pure-flux data: g with zero total boundary mass.
        Eigen::VectorXd g(n_ga), f = Eigen::VectorXd::Zero(n_om);
        for (int k = 0; k < n_ga; ++k) g[k] = grid.center_of_dof(n_om + k)[0] < 0.0 ? 1.0 : -1.0;
        g.array() -= g.mean();
        const SolveReport robin = solve_robin_regional(grid, k1.table, k1.kernel, f, alpha, g);
        Eigen::VectorXd g_full = Eigen::VectorXd::Zero(grid.n_boundary());
        g_full.head(n_ga) = g;
        const SolveReport neumann = solve_neumann(grid, k1.table, k1.kernel, f, g_full);
        double diff = 1e9;
        if (robin.status == SolveStatus::Converged && neumann.status == SolveStatus::Converged) {
            Eigen::VectorXd d = robin.solution.values - neumann.solution.values;
            d.array() -= d.head(n_om).mean();
            diff = d.cwiseAbs().maxCoeff();
        }
        cl.add("robin-neumann-endpoint", diff <= 1e-8, "max " + format_double(diff));
    }
    {
        Eigen::VectorXd alpha(n_ga), g(n_ga);
        for (int k = 0; k < n_ga; ++k) alpha[k] = unit(rng);
        for (int k = 0; k < n_ga; ++k) g[k] = sym(rng);
        const RobinIdentityReport rr = verify_robin_identity(grid, k1.table, alpha, g);
        cl.add("robin-elimination-identity", rr.elimination_residual <= 1e-10,
               "max " + format_double(rr.elimination_residual));
        const RobinIdentityReport rz = verify_robin_identity(
            grid, k1.table, Eigen::VectorXd::Zero(n_ga), g);
        cl.add("robin-source-mass-preserved", rz.compatibility_residual <= 1e-12,
               "defect " + format_double(rz.compatibility_residual));
    }
    {
        const Eigen::VectorXd g = Eigen::VectorXd::Zero(n_ga);
        const RobinKernelSet lo = robin_transform(grid, k1.table,
                                                  Eigen::VectorXd::Constant(n_ga, 0.3), g);
        const RobinKernelSet hi = robin_transform(grid, k1.table,
                                                  Eigen::VectorXd::Constant(n_ga, 0.6), g);
        double min_gap = 0.0;
        for (int i = 0; i < n_om; ++i)
            for (RowIt it(lo.gamma_alpha, i); it; ++it)
                min_gap = std::min(min_gap,
                                   it.value() - hi.gamma_alpha.coeff(i, it.col()));
        cl.add("robin-kernel-monotone-in-alpha", min_gap >= -1e-12,
               "min gap " + format_double(min_gap));
    }
}

void suite_trace(CheckList& cl, unsigned long seed, bool inject) {
    Setting k1 = make_k1(1.0 / 64);
    if (inject) inject_weight_fault(k1);
    const Grid& grid = k1.grid;
    const double vol = grid.volume();
    const double c = 1.0;

    check_weights_match(cl, k1, "k1");

    const Eigen::VectorXd w1 = trace_weights(grid, k1.table, 1, c);
    const Eigen::VectorXd w2 = trace_weights(grid, k1.table, 2);
    {
        const double total = w1.sum() * vol;
        cl.add("trace-weight-budget", total <= grid.omega_measure() * (1.0 + 1e-12),
               "total " + format_double(total));
    }
    {
        // Independent form of the budget: Σ_k w_k vol = Σ_i vol·D_i/(D_i+c).
        const Eigen::VectorXd d = interior_boundary_density(grid, k1.table);
        double rhs = 0.0;
        for (int i = 0; i < grid.n_omega; ++i) rhs += vol * d[i] / (d[i] + c);
        const double lhs = w1.sum() * vol;
        cl.add("trace-budget-identity", std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs),
               "defect " + format_double(std::abs(lhs - rhs)));
    }
    {
        // Closed forms at y = −1/4: ∫₀^{1/4} dx/(3/2−x) = ln(6/5) for the
        // normalized weight, ∫₀^{1/4} dx = 1/4 for the plain-mass weight.
        int left = -1, right = -1;
        for (int k = 0; k < grid.n_gamma; ++k) {
            const double y = grid.center_of_dof(grid.n_omega + k)[0];
            if (std::abs(y - (-0.25 - 0.5 * grid.h)) < 1e-12) left = k;
            if (std::abs(y - (-0.25 + 0.5 * grid.h)) < 1e-12) right = k;
        }
        if (left < 0 || right < 0) {
            cl.add("trace-weight-normalized-value", false, "probe cells not found");
            cl.add("trace-weight-mass-value", false, "probe cells not found");
        } else {
            const double v1 = 0.5 * (w1[left] + w1[right]);
            const double v2 = 0.5 * (w2[left] + w2[right]);
            cl.add("trace-weight-normalized-value", std::abs(v1 - std::log(1.2)) <= 1e-3,
                   "value " + format_double(v1));
            cl.add("trace-weight-mass-value", std::abs(v2 - 0.25) <= 5e-3,
                   "value " + format_double(v2));
        }
    }
    {
        std::mt19937_64 rng(seed + 600);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Eigen::VectorXd vg(grid.n_gamma);
        for (int k = 0; k < grid.n_gamma; ++k) vg[k] = dist(rng);

        const DiscreteField z = ext_zero(grid, vg);
        const double energy = v_seminorm_form(grid, k1.table).energy(z.values);
        double ref = 0.0;
        for (int k = 0; k < grid.n_gamma; ++k)
            ref += vg[k] * vg[k] * vol * k1.table.row_sum_first[grid.n_omega + k];
        cl.add("ext-zero-isometry", std::abs(energy - ref) <= 1e-12 * std::max(1.0, ref),
               "defect " + format_double(std::abs(energy - ref)));

        const double wsq = w_norm_squared(grid, k1.table, c, vg);
        const DiscreteField ext = extend_smoothing(grid, k1.table, c, vg);
        const double lhs = extension_energy(grid, k1.table, ext);
        const double bound = std::max(1.0 + 2.0 * c, 2.0) * wsq;
        cl.add("smoothing-extension-energy-bound", lhs <= bound * (1.0 + 1e-12),
               "ratio " + format_double(wsq > 0 ? lhs / wsq : 0.0));
        cl.add("smoothing-extension-trace-exact",
               (ext.gamma() - vg).cwiseAbs().maxCoeff() == 0.0, "");
    }
    {
        Setting uni = make_uniform(1.0 / 32, 0.5);
        const SurjectivityCheck sc = check_trace_surjectivity_condition(uni.grid, uni.table, c);
        cl.add("surjectivity-flat-kernel-zero", sc.e1 == 0.0 && sc.e2 == 0.0,
               "e1 " + format_double(sc.e1) + ", e2 " + format_double(sc.e2));
    }
}

void suite_constants(CheckList& cl, unsigned long seed, bool inject) {
    Setting k2 = make_k2(1.0 / 64);
    Setting k1 = make_k1(1.0 / 64);
    if (inject) inject_weight_fault(k2);

    check_weights_match(cl, k2, "k2");

    {
        const ConstantReport r = estimate_poincare(k2.grid, k2.table);
        const PoincareSufficiency suff =
            check_poincare_sufficient_conditions(k2.grid, k2.kernel, 0.0);
        const bool mass_ok = std::abs(suff.uniform_mass - 3.0) <= 0.1;
        const bool bound_ok =
            !r.infinite && suff.bound && r.value <= *suff.bound * (1.0 + 1e-3) && r.value > 0.0;
        cl.add("poincare-uniform-mass", mass_ok, "mass " + format_double(suff.uniform_mass));
        cl.add("poincare-within-bound", bound_ok,
               "value " + format_double(r.value) +
                   (suff.bound ? ", bound " + format_double(*suff.bound) : ""));
    }
    {
        // Mean-oscillation identity: Σ_{ij} vol²(u_i−u_j)² = 2λ(Ω)‖u−ū‖².
        const DiscreteField u = random_field(k2.grid, seed + 700);
        const int n_om = k2.grid.n_omega;
        const double vol = k2.grid.volume();
        double direct = 0.0;
        for (int i = 0; i < n_om; ++i)
            for (int j = 0; j < n_om; ++j) {
                const double d = u.values[i] - u.values[j];
                direct += vol * vol * d * d;
            }
        const double mean = u.omega().mean();
        const double centered =
            2.0 * k2.grid.omega_measure() * vol * (u.omega().array() - mean).square().sum();
        cl.add("mean-oscillation-identity",
               std::abs(direct - centered) <= 1e-12 * std::max(1.0, direct),
               "defect " + format_double(std::abs(direct - centered)));
    }
    {
        const ConstantReport r = estimate_friedrichs(k1.grid, k1.table);
        cl.add("friedrichs-k1-finite", !r.infinite && r.value > 0.0,
               "value " + format_double(r.value));
    }
    {
        const ConstantReport a = estimate_friedrichs(make_fractional_setting(1.0 / 32, 1.0).grid,
                                                     make_fractional_setting(1.0 / 32, 1.0).table);
        const ConstantReport b = estimate_friedrichs(make_fractional_setting(1.0 / 16, 1.0).grid,
                                                     make_fractional_setting(1.0 / 16, 1.0).table);
        const bool ok = !a.infinite && !b.infinite && a.value > 0.0 &&
                        std::abs(a.value - b.value) <= 0.15 * a.value;
        cl.add("friedrichs-fractional-stable", ok,
               format_double(b.value) + " -> " + format_double(a.value));
    }
    {
        const ConstantReport r = estimate_friedrichs(make_regional(1.0 / 32).grid,
                                                     make_regional(1.0 / 32).table);
        cl.add("friedrichs-regional-infinite", r.infinite, "");
    }
    {
        const ConstantReport r = trace_operator_norm(k1.grid, k1.table, 1.0);
        cl.add("trace-norm-within-bound",
               !r.infinite && r.bound && r.value <= *r.bound * (1.0 + 1e-12) && r.value > 0.0,
               "value " + format_double(r.value) + ", bound " + format_double(*r.bound));
    }
    {
        const NonsymCoercivity one = check_nonsym_coercivity(
            k1.grid, k1.table, Eigen::VectorXd::Ones(k1.grid.n_omega));
        const NonsymCoercivity zero = check_nonsym_coercivity(
            k1.grid, k1.table, Eigen::VectorXd::Zero(k1.grid.n_omega));
        cl.add("coercivity-symmetric-endpoints", one.margin == 1.0 && zero.margin == 0.0,
               "margins " + format_double(one.margin) + ", " + format_double(zero.margin));
    }
    {
        double worst_iso = 0.0, worst_ext = 0.0, worst_restr = 0.0;
        for (int p = 0; p < 5; ++p) {
            const DiscreteField u = random_field(k1.grid, seed + 800 + p);
            const EmbeddingReport er = verify_regional_embeddings(k1.grid, k1.table, k1.kernel, u);
            worst_iso = std::max(worst_iso, er.isometry_residual);
            worst_ext = std::max(worst_ext, er.extension_ratio);
            worst_restr = std::max(worst_restr, er.restriction_ratio);
        }
        cl.add("embedding-isometry", worst_iso <= 1e-12, "max " + format_double(worst_iso));
        cl.add("embedding-extension-contractive", worst_ext <= 1.0 + 1e-12,
               "max ratio " + format_double(worst_ext));
        cl.add("embedding-restriction-bounded", worst_restr <= 2.0 + 1e-12,
               "max ratio " + format_double(worst_restr));
    }
}

} // namespace

int run_verify(const std::string& suite, unsigned long seed, bool inject_fault,
               std::ostream& log) {
    CheckList cl{log};
    const bool all = suite == "all";
    bool known = all;
    if (all || suite == "identities") suite_identities(cl, seed, inject_fault), known = true;
    if (all || suite == "solvers") suite_solvers(cl, seed, inject_fault), known = true;
    if (all || suite == "robin") suite_robin(cl, seed, inject_fault), known = true;
    if (all || suite == "trace") suite_trace(cl, seed, inject_fault), known = true;
    if (all || suite == "constants") suite_constants(cl, seed, inject_fault), known = true;
    if (!known)
        throw ConfigError("unknown verify suite '" + suite +
                          "' (identities|solvers|robin|trace|constants|all)");
    log << "verify " << suite << ": " << cl.total - cl.failed << "/" << cl.total
        << " checks passed\n";
    return cl.failed == 0 ? kExitOk : kExitParse;
}

} // namespace nnl
