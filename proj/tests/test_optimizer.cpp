#include <doctest.h>

#include <cmath>
#include <sstream>

#include "optimizer.hpp"

using namespace dcfcoex;

namespace {

OptimizationProblem base_problem(int np, int ns, Scheme scheme) {
    OptimizationProblem p;
    p.scheme = scheme;
    p.net.n_primary = np;
    p.net.n_secondary = ns;
    p.timing = preset_paper_2011().timing;
    return p;
}

} // namespace

TEST_CASE("sensing optimization reproduces the reference row") {
    OptimizationProblem p = base_problem(16, 4, Scheme::Sensing);
    OptimizationResult r = optimize(p);
    REQUIRE(r.feasible);
    CHECK(std::fabs(r.st - 0.064) <= 0.005);
    CHECK(r.pt >= 0.682);
    CHECK(r.pt >= (1.0 - p.loss_cap) * r.baseline_pt);
    CHECK(r.w_s == 11);
    CHECK(r.t_us == 10.0);

    // the reported optimum satisfies its constraint when re-evaluated
    Scenario sc = preset_paper_2011();
    sc.net = p.net;
    sc.net.w_secondary = r.w_s;
    sc.timing.scan_t = normalize_us(r.t_us, sc.timing.idle_slot_us);
    SolvedScenario solved = solve_scenario(sc);
    CHECK(solved.report.pt == doctest::Approx(r.pt).epsilon(1e-12));
    CHECK(solved.report.st == doctest::Approx(r.st).epsilon(1e-12));
}

TEST_CASE("coexistence optimization reproduces the reference row") {
    OptimizationProblem p = base_problem(16, 4, Scheme::Coexist);
    OptimizationResult r = optimize(p);
    REQUIRE(r.feasible);
    CHECK(r.w_s == 80);
    CHECK(std::fabs(r.st - 0.065) <= 0.005);
    CHECK(r.pt >= 0.682);
}

TEST_CASE("silent-period with a unit beta grid equals coexistence") {
    OptimizationProblem sil = base_problem(32, 8, Scheme::SilentPeriod);
    sil.beta_grid = {1.0};
    OptimizationProblem coex = base_problem(32, 8, Scheme::Coexist);
    OptimizationResult a = optimize(sil);
    OptimizationResult b = optimize(coex);
    CHECK(a.feasible == b.feasible);
    CHECK(a.w_s == b.w_s);
    CHECK(a.st == b.st);
    CHECK(a.pt == b.pt);
    CHECK(a.baseline_pt == b.baseline_pt);
}

TEST_CASE("enlarging the grid never lowers the optimum") {
    OptimizationProblem small = base_problem(16, 8, Scheme::Coexist);
    for (int w = 4; w <= 256; ++w) small.ws_grid.push_back(w);
    OptimizationProblem large = base_problem(16, 8, Scheme::Coexist);
    for (int w = 4; w <= 512; ++w) large.ws_grid.push_back(w);
    CHECK(optimize(large).st >= optimize(small).st);
}

TEST_CASE("no secondaries: trivial zero-throughput optimum at the smallest window") {
    OptimizationProblem p = base_problem(16, 0, Scheme::Coexist);
    p.ws_grid = {8, 16, 32};
    OptimizationResult r = optimize(p);
    CHECK(r.feasible);
    CHECK(r.st == 0.0);
    CHECK(r.w_s == 8);
    CHECK(r.pt == doctest::Approx(r.baseline_pt).epsilon(1e-12));
}

TEST_CASE("a vacuous cap reduces sensing with t=0 to the state-2 maximum") {
    OptimizationProblem p = base_problem(16, 8, Scheme::Sensing);
    p.loss_cap = 0.999;
    p.t_us_grid = {0.0};
    p.ws_grid = {4, 8, 16, 32};
    OptimizationResult r = optimize(p);
    REQUIRE(r.feasible);
    // every point feasible, so the optimum is the plain state-2 argmax
    double best_st = -1.0;
    int best_ws = 0;
    for (const GridPoint& g : r.grid)
        if (g.st > best_st) {
            best_st = g.st;
            best_ws = g.w_s;
        }
    CHECK(r.w_s == best_ws);
    CHECK(r.st == best_st);
}

TEST_CASE("an unreachable cap reports infeasible with a best-effort point") {
    OptimizationProblem p = base_problem(16, 8, Scheme::Coexist);
    p.loss_cap = 1e-6;
    p.ws_grid = {4, 8};
    OptimizationResult r = optimize(p);
    CHECK_FALSE(r.feasible);
    CHECK(r.grid.size() == 2);
    CHECK(r.pt > 0.0);
}

TEST_CASE("grid CSV has the documented column order") {
    OptimizationProblem p = base_problem(16, 0, Scheme::Coexist);
    p.ws_grid = {8};
    OptimizationResult r = optimize(p);
    std::ostringstream out;
    write_grid_csv(r, out);
    CHECK(out.str().rfind("scheme,t_us,w_s,beta,pt,st,feasible\n", 0) == 0);
    CHECK(out.str().find("coexist,") != std::string::npos);
}

TEST_CASE("robustness sweep: matching assumption is the degenerate mismatch") {
    OptimizationProblem base = base_problem(16, 4, Scheme::Sensing);
    MismatchCase same{base.net, base.net};
    auto rows = robustness_sweep(base, std::span<const MismatchCase>(&same, 1));
    REQUIRE(rows.size() == 3);
    for (const RobustnessRow& row : rows) {
        CHECK(row.achieved_pt == doctest::Approx(row.design.pt).epsilon(1e-12));
        CHECK(row.achieved_st == doctest::Approx(row.design.st).epsilon(1e-12));
        if (row.design.feasible)
            CHECK(row.achieved_pt >=
                  (1.0 - base.loss_cap) * row.actual_baseline_pt - 1e-12);
    }
}

TEST_CASE("robustness sweep: overestimating the primary count stays above 85%") {
    OptimizationProblem base = base_problem(16, 8, Scheme::Sensing);
    std::vector<MismatchCase> cases;
    for (int actual : {8, 16, 24}) {
        NetworkParams assumed = base.net;
        assumed.n_primary = static_cast<int>(std::lround(actual * 1.3));
        NetworkParams real = base.net;
        real.n_primary = actual;
        cases.push_back({assumed, real});
    }
    auto rows = robustness_sweep(base, cases);
    for (const RobustnessRow& row : rows) {
        CHECK(row.achieved_pt >= 0.85 * row.actual_baseline_pt);
        CHECK(row.achieved_pt <= row.actual_baseline_pt + 1e-12);
    }
}
