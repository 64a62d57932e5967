// Analysis pipelines behind the CLI: full attractor analysis, the lambda
// scan with bifurcation localization, and artifact emission.
#ifndef STURM_REPORT_HPP
#define STURM_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "sturm/connections.hpp"
#include "sturm/suites.hpp"

namespace sturm {

struct AnalyzeOutput {
    nlohmann::ordered_json report;
    int exit_code = 0;  // 0 ok, 2 non-hyperbolic equilibria, 3 consistency failure
    std::vector<EquilibriumRecord> records;
    SturmPermutation sigma;
    ZeroNumberTable ztable;
    ConnectionGraph graph;
};

// shooting -> equilibria -> permutation -> connections, with the internal
// consistency checks (index route agreement, graded acyclicity, zero-number
// range). Timing fields live under "timings" and are excluded from golden
// comparisons.
AnalyzeOutput analyze_problem(const ProblemSpec& spec, int threads = 1);

// Fast equilibrium count at the configured lambda: sampled cross-sections
// and their segment crossings, no Newton refinement.
int count_equilibria_sampled(const ProblemSpec& spec, int threads = 1);

struct ScanRow {
    double lambda = 0.0;
    int count = -1;      // -1 when the sample failed
    std::string sigma;   // cycle notation estimated from crossing order
};
struct Bifurcation {
    double lambda = 0.0;  // localized to width <= 1e-3
    int count_before = 0;
    int count_after = 0;
};
struct ScanOutput {
    std::vector<ScanRow> rows;
    std::vector<Bifurcation> bifurcations;
    nlohmann::ordered_json report;
};
ScanOutput scan_lambda(const ProblemSpec& spec, double lambda_min, double lambda_max,
                       int steps, int threads = 1);

// report.json, attractor.dot and equilibria/*.csv under out_dir.
void write_artifacts(const AnalyzeOutput& out, const std::string& out_dir);

// FNV-1a over the problem-defining fields; stable across runs.
std::string spec_hash(const ProblemSpec& spec);

}  // namespace sturm

#endif
