// Command-line frontend: analyze (full attractor pipeline), scan
// (bifurcation table over lambda), verify (property suites).
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sturm/report.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string out_dir = "out";
    int threads = 1;
    double lambda_override = std::numeric_limits<double>::quiet_NaN();
    unsigned seed = 0;
    bool seed_set = false;
};

sturm::ProblemSpec load(const CommonOpts& opts) {
    sturm::ProblemSpec spec = sturm::load_problem_spec(opts.config);
    if (!std::isnan(opts.lambda_override)) spec.lambda = opts.lambda_override;
    if (opts.seed_set) spec.seed = opts.seed;
    spec.validate();
    return spec;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config, "problem config file")->required();
    cmd->add_option("--out", opts.out_dir, "artifact output directory");
    cmd->add_option("--threads", opts.threads, "worker thread count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", opts.lambda_override, "override [problem] lambda");
    cmd->add_option("--seed", opts.seed, "override [numerics] seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sturm attractor analysis for axisymmetric parabolic equations"};
    app.require_subcommand(1);

    CommonOpts a_opts;
    CLI::App* analyze = app.add_subcommand("analyze", "compute equilibria, permutation, graph");
    add_common(analyze, a_opts);

    CommonOpts s_opts;
    double lambda_min = 0.5, lambda_max = 21.0;
    int steps = 50;
    CLI::App* scan = app.add_subcommand("scan", "equilibrium counts over a lambda range");
    add_common(scan, s_opts);
    scan->add_option("--lambda-min", lambda_min, "scan lower bound");
    scan->add_option("--lambda-max", lambda_max, "scan upper bound");
    scan->add_option("--steps", steps, "coarse sample count")->check(CLI::PositiveNumber);

    CommonOpts v_opts;
    std::vector<std::string> suites;
    CLI::App* verify = app.add_subcommand("verify", "run property suites");
    add_common(verify, v_opts);
    verify->add_option("--suite", suites, "suite name (repeatable); default: all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*analyze) {
            sturm::ProblemSpec spec = load(a_opts);
            auto out = sturm::analyze_problem(spec, a_opts.threads);
            sturm::write_artifacts(out, a_opts.out_dir);
            std::cout << "equilibria: " << out.records.size()
                      << "  sigma: " << (out.sigma.n ? out.sigma.cycles() : "-")
                      << "  edges: " << out.graph.edges.size() << "\n";
            if (out.exit_code == 2)
                std::cerr << "warning: non-hyperbolic equilibria present\n";
            if (out.exit_code == 3) std::cerr << "error: consistency checks failed\n";
            return out.exit_code;
        }
        if (*scan) {
            sturm::ProblemSpec spec = load(s_opts);
            auto out = sturm::scan_lambda(spec, lambda_min, lambda_max, steps, s_opts.threads);
            std::filesystem::create_directories(s_opts.out_dir);
            std::ofstream f(std::filesystem::path(s_opts.out_dir) / "scan.json");
            f << out.report.dump(2) << "\n";
            for (auto& b : out.bifurcations)
                std::cout << "bifurcation near lambda=" << b.lambda << " ("
                          << b.count_before << " -> " << b.count_after << ")\n";
            return 0;
        }
        if (*verify) {
            sturm::ProblemSpec spec = load(v_opts);
            if (suites.empty()) suites = sturm::suite_names();
            bool all = true;
            for (const auto& name : suites) {
                auto r = sturm::run_suite(name, spec, v_opts.threads);
                std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  "
                          << r.details << "\n";
                all = all && r.pass;
            }
            return all ? 0 : 3;
        }
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    }
    return 0;
}
