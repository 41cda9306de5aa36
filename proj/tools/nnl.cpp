/// Command-line front end: solve and analyze problems described by INI
/// configs, or run the built-in verification suites.
#include <iostream>

#include <CLI11.hpp>

#include "nnl/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Workbench for nonlocal Neumann and Robin boundary-value problems"};
    app.require_subcommand(1);

    std::string config_path;
    bool dump_ops = false;
    std::string out_dir;

    CLI::App* solve = app.add_subcommand("solve", "Solve the problem described by a config file");
    solve->add_option("config", config_path, "INI problem description")->required();
    solve->add_flag("--dump-operators", dump_ops, "also write operator.mtx / weights.mtx / grid.csv");
    solve->add_option("--output-dir", out_dir, "override the config's output directory");

    CLI::App* analyze =
        app.add_subcommand("analyze", "Run the analyses toggled in a config file");
    analyze->add_option("config", config_path, "INI problem description")->required();
    analyze->add_flag("--dump-operators", dump_ops,
                      "also write operator.mtx / weights.mtx / grid.csv");
    analyze->add_option("--output-dir", out_dir, "override the config's output directory");

    std::string suite = "all";
    unsigned long seed = 0;
    bool inject = false;
    CLI::App* verify = app.add_subcommand("verify", "Run built-in verification suites");
    verify->add_option("--suite", suite,
                       "identities | solvers | robin | trace | constants | all");
    verify->add_option("--seed", seed, "seed for the randomized probe fields");
    verify->add_flag("--inject-fault", inject,
                     "corrupt one quadrature weight first; the suite must then fail");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return nnl::run_verify(suite, seed, inject, std::cout);

        nnl::ProblemConfig cfg = nnl::parse_config_file(config_path);
        if (dump_ops) cfg.dump_operators = true;
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (solve->parsed()) return nnl::run_solve(cfg, std::cout);
        return nnl::run_analyze(cfg, std::cout);
    } catch (const nnl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return nnl::kExitParse;
    } catch (const nnl::ContractError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return nnl::kExitParse;
    } catch (const nnl::HypothesisError& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return nnl::kExitUnsupported;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return nnl::kExitParse;
    }
}
