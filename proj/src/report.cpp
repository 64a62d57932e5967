#include "sturm/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sturm {

namespace {

double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

nlohmann::ordered_json spec_echo(const ProblemSpec& spec) {
    nlohmann::ordered_json j;
    j["a"] = spec.a_text;
    j["f"] = spec.f_text;
    j["lambda"] = spec.lambda;
    j["eps_theta"] = spec.eps_theta;
    j["ode_tol"] = spec.ode_tol;
    j["grid_n"] = spec.grid_n;
    j["d_range"] = {spec.d_range.lo, spec.d_range.hi};
    j["e_range"] = {spec.e_range.lo, spec.e_range.hi};
    j["samples"] = spec.samples;
    j["seed"] = spec.seed;
    j["theta_cut"] = spec.theta_cut;
    j["root_tol"] = spec.root_tol;
    j["merge_tol"] = spec.merge_tol;
    j["angle_tol"] = spec.angle_tol;
    j["conv_tol"] = spec.conv_tol;
    return j;
}

// Newton-refined intersection list, as (d, e) pairs sorted by d
std::vector<std::pair<double, double>> crossing_seeds(const ProblemSpec& spec,
                                                      const CoefficientField& cf,
                                                      int threads) {
    SampledCurve cu = cross_section(spec, cf, Side::Unstable, spec.theta_cut, spec.d_range,
                                    spec.samples, threads);
    SampledCurve cs = cross_section(spec, cf, Side::Stable, spec.theta_cut, spec.e_range,
                                    spec.samples, threads);
    return find_intersections(cu, cs, spec, cf, threads);
}

std::string sigma_of_seeds(std::vector<std::pair<double, double>> seeds) {
    if (seeds.empty()) return "";
    SturmPermutation perm;
    perm.n = static_cast<int>(seeds.size());
    std::sort(seeds.begin(), seeds.end());  // d-order gives labels
    std::vector<int> order(seeds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return seeds[a].second < seeds[b].second; });
    for (int lbl : order) perm.sigma.push_back(lbl + 1);
    return perm.cycles();
}

}  // namespace

std::string spec_hash(const ProblemSpec& spec) {
    std::string s = spec.a_text + "|" + spec.f_text + "|" + fmt(spec.lambda) + "|" +
                    fmt(spec.eps_theta) + "|" + fmt(spec.ode_tol) + "|" +
                    std::to_string(spec.grid_n) + "|" + fmt(spec.d_range.lo) + "|" +
                    fmt(spec.d_range.hi) + "|" + fmt(spec.e_range.lo) + "|" +
                    fmt(spec.e_range.hi) + "|" + std::to_string(spec.samples) + "|" +
                    std::to_string(spec.seed) + "|" + fmt(spec.theta_cut);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

int count_equilibria_sampled(const ProblemSpec& spec, int threads) {
    ProblemSpec sp = spec;
    sp.ode_tol = std::max(spec.ode_tol, 1e-9);
    CoefficientField cf = sp.field();
    return static_cast<int>(crossing_seeds(sp, cf, threads).size());
}

AnalyzeOutput analyze_problem(const ProblemSpec& spec, int threads) {
    AnalyzeOutput out;
    double t0 = now_ms();
    out.records = compute_equilibria(spec, threads);
    double t1 = now_ms();

    auto& rep = out.report;
    rep["spec"] = spec_echo(spec);
    rep["spec_hash"] = spec_hash(spec);
    rep["equilibria_count"] = out.records.size();

    nlohmann::ordered_json eqs = nlohmann::ordered_json::array();
    bool all_hyperbolic = true;
    for (const auto& r : out.records) {
        nlohmann::ordered_json e;
        e["label"] = r.label_u;
        e["d"] = r.d;
        e["e"] = r.e;
        e["u_at_0"] = r.u_at_0;
        e["morse_index"] = r.morse_index;
        e["zeta"] = r.zeta;
        e["hyperbolic"] = r.hyperbolic;
        e["label_s"] = r.label_s;
        e["neumann_residual"] = r.neumann_residual;
        e["joint_mismatch"] = r.joint_mismatch;
        char name[32];
        std::snprintf(name, sizeof name, "equilibria/eq_%02d.csv", r.label_u);
        e["profile"] = name;
        eqs.push_back(e);
        all_hyperbolic = all_hyperbolic && r.hyperbolic;
    }
    rep["equilibria"] = eqs;

    if (!all_hyperbolic) {
        rep["status"] = "non-hyperbolic equilibria present; graph not built";
        rep["timings"] = {{"equilibria_ms", t1 - t0}};
        out.exit_code = 2;
        return out;
    }

    out.sigma = build_permutation(out.records, spec.merge_tol);
    out.ztable = zero_number_table(out.records, spec, threads);
    out.graph = heteroclinic_edges(out.records, out.ztable);
    double t2 = now_ms();

    rep["sigma"] = out.sigma.sigma;
    rep["sigma_cycles"] = out.sigma.cycles();
    rep["sigma_warnings"] = out.sigma.warnings;
    rep["morse_indices"] = [&] {
        std::vector<int> v;
        for (const auto& r : out.records) v.push_back(r.morse_index);
        return v;
    }();
    rep["zero_numbers"] = out.ztable.z;

    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (auto& [a, b] : out.graph.edges) edges.push_back({a, b});
    rep["graph"] = {{"nodes", out.graph.n}, {"edges", edges}};

    // internal consistency: the independent index routes and graph gradings
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    bool all_pass = true;
    auto add_check = [&](const std::string& name, bool pass, const std::string& note) {
        checks.push_back({{"name", name}, {"pass", pass}, {"note", note}});
        all_pass = all_pass && pass;
    };
    try {
        auto perm_idx = morse_from_permutation(out.sigma);
        bool same = perm_idx.size() == out.records.size();
        for (std::size_t i = 0; same && i < perm_idx.size(); ++i)
            same = perm_idx[i] == out.records[i].morse_index;
        add_check("index_routes_agree", same, "permutation recursion vs tangent angle");
    } catch (const std::exception& ex) {
        add_check("index_routes_agree", false, ex.what());
    }
    add_check("graded_acyclic", is_graded_acyclic(out.graph), "");
    bool zrange = true;
    for (auto& [a, b] : out.graph.edges) {
        int z = out.ztable.z[a - 1][b - 1];
        if (!(out.records[b - 1].morse_index <= z && z < out.records[a - 1].morse_index))
            zrange = false;
    }
    add_check("zero_number_range", zrange, "i(to) <= z(from - to) < i(from) on edges");
    bool flagged = false;
    for (auto& row : out.ztable.flagged)
        for (bool f : row) flagged = flagged || f;
    add_check("zero_numbers_resolved", !flagged, "no unresolved near-tangencies");

    rep["checks"] = checks;
    rep["timings"] = {{"equilibria_ms", t1 - t0}, {"combinatorics_ms", t2 - t1}};
    out.exit_code = all_pass ? 0 : 3;
    return out;
}

ScanOutput scan_lambda(const ProblemSpec& spec, double lambda_min, double lambda_max,
                       int steps, int threads) {
    if (!(lambda_min < lambda_max))
        throw std::invalid_argument("scan_lambda: need lambda_min < lambda_max");
    ScanOutput out;
    ProblemSpec sp = spec;
    sp.ode_tol = std::max(spec.ode_tol, 1e-9);

    auto count_at = [&](double lam) -> int {
        ProblemSpec s = sp;
        s.lambda = lam;
        try {
            CoefficientField cf = s.field();
            return static_cast<int>(crossing_seeds(s, cf, threads).size());
        } catch (const std::exception&) {
            return -1;
        }
    };

    for (int i = 0; i <= steps; ++i) {
        ScanRow row;
        row.lambda = lambda_min + (lambda_max - lambda_min) * i / steps;
        ProblemSpec s = sp;
        s.lambda = row.lambda;
        try {
            CoefficientField cf = s.field();
            auto seeds = crossing_seeds(s, cf, threads);
            row.count = static_cast<int>(seeds.size());
            row.sigma = sigma_of_seeds(seeds);
        } catch (const std::exception&) {
            row.count = -1;
        }
        out.rows.push_back(row);
    }

    for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
        int ca = out.rows[i].count, cb = out.rows[i + 1].count;
        if (ca < 0 || cb < 0 || ca == cb) continue;
        double lo = out.rows[i].lambda, hi = out.rows[i + 1].lambda;
        while (hi - lo > 1e-3) {
            double mid = 0.5 * (lo + hi);
            int cm = count_at(mid);
            if (cm == ca)
                lo = mid;
            else
                hi = mid;
        }
        out.bifurcations.push_back({0.5 * (lo + hi), ca, cb});
    }

    auto& rep = out.report;
    rep["spec"] = spec_echo(spec);
    rep["scan"] = {{"lambda_min", lambda_min}, {"lambda_max", lambda_max}, {"steps", steps}};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (auto& r : out.rows)
        rows.push_back({{"lambda", r.lambda}, {"count", r.count}, {"sigma", r.sigma}});
    rep["rows"] = rows;
    nlohmann::ordered_json bifs = nlohmann::ordered_json::array();
    for (auto& b : out.bifurcations)
        bifs.push_back({{"lambda", b.lambda},
                        {"count_before", b.count_before},
                        {"count_after", b.count_after}});
    rep["bifurcations"] = bifs;
    return out;
}

void write_artifacts(const AnalyzeOutput& out, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "equilibria");
    {
        std::ofstream f(fs::path(out_dir) / "report.json");
        f << out.report.dump(2) << "\n";
    }
    {
        std::ofstream f(fs::path(out_dir) / "attractor.dot");
        f << to_dot(out.graph);
    }
    for (const auto& r : out.records) {
        char name[32];
        std::snprintf(name, sizeof name, "eq_%02d.csv", r.label_u);
        std::ofstream f(fs::path(out_dir) / "equilibria" / name);
        f << "theta,u\n" << std::setprecision(17);
        for (int j = 0; j <= r.profile.n; ++j)
            f << r.profile.theta(j) << "," << r.profile[j] << "\n";
    }
}

}  // namespace sturm
