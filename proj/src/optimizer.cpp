#include "optimizer.hpp"

#include <cmath>
#include <ostream>

namespace dcfcoex {

void OptimizationProblem::fill_default_grids() {
    if (t_us_grid.empty())
        for (int t = 0; t <= 600; t += 5) t_us_grid.push_back(t);
    if (ws_grid.empty())
        for (int w = 4; w <= 512; ++w) ws_grid.push_back(w);
    if (beta_grid.empty())
        for (int b = 5; b <= 100; b += 5) beta_grid.push_back(b / 100.0);
}

namespace {

struct Candidate {
    GridPoint point;
    bool valid = false;
};

// Deterministic argmax: strictly larger ST wins; exact ties go to the
// smaller window, then the shorter scan, then the larger contention
// fraction. Order-independent, so parallel evaluation cannot change the
// result.
bool better(const GridPoint& a, const GridPoint& b) {
    if (a.st != b.st) return a.st > b.st;
    if (a.w_s != b.w_s) return a.w_s < b.w_s;
    if (a.t_us != b.t_us) return a.t_us < b.t_us;
    return a.beta > b.beta;
}

} // namespace

OptimizationResult optimize(const OptimizationProblem& problem_in) {
    OptimizationProblem problem = problem_in;
    problem.fill_default_grids();
    validate(problem.net);
    validate(problem.timing);
    if (!(problem.loss_cap > 0.0 && problem.loss_cap < 1.0))
        throw InvalidParameter("loss_cap must be in (0,1)");
    if (problem.ws_grid.empty()) throw InvalidParameter("ws_grid must be non-empty");

    OptimizationResult result;
    result.scheme = problem.scheme;

    const State1Solution s1 = solve_state1(problem.net);
    const State1SlotDistribution d1 =
        state1_slots(s1, problem.net.n_primary, problem.timing);
    result.baseline_pt = d1.p_slot * d1.p_succ * problem.timing.success_slot_primary();
    const double floor_pt = (1.0 - problem.loss_cap) * result.baseline_pt;

    Candidate best;
    auto consider = [&](const GridPoint& p) {
        result.grid.push_back(p);
        if (!p.feasible) return;
        if (!best.valid || better(p, best.point)) {
            best.point = p;
            best.valid = true;
        }
    };

    for (int ws : problem.ws_grid) {
        NetworkParams net = problem.net;
        net.w_secondary = ws;
        const State2Solution s2 = solve_state2(net);
        const State2SlotDistribution d2 = state2_slots(s2, net, problem.timing);

        switch (problem.scheme) {
        case Scheme::Sensing: {
            if (problem.t_us_grid.empty())
                throw InvalidParameter("t_us_grid must be non-empty for the sensing scheme");
            for (double t_us : problem.t_us_grid) {
                TimingParams timing = problem.timing;
                timing.scan_t = normalize_us(t_us, timing.idle_slot_us);
                const ScanOutcomeModel scan = scan_outcomes(d1, d2, timing);
                const ThroughputReport r = throughput_sensing(d1, d2, scan, timing);
                GridPoint p{t_us, ws, 1.0, r.pt, r.st, r.pt >= floor_pt};
                consider(p);
            }
            break;
        }
        case Scheme::SilentPeriod: {
            if (problem.beta_grid.empty())
                throw InvalidParameter("beta_grid must be non-empty for the silent-period scheme");
            for (double beta : problem.beta_grid) {
                const ThroughputReport r = throughput_silence(d1, d2, beta, problem.timing);
                GridPoint p{0.0, ws, beta, r.pt, r.st, r.pt >= floor_pt};
                consider(p);
            }
            break;
        }
        case Scheme::Coexist: {
            const ThroughputReport r = throughput_coexist(d1, d2, problem.timing);
            GridPoint p{0.0, ws, 1.0, r.pt, r.st, r.pt >= floor_pt};
            consider(p);
            break;
        }
        }
    }

    if (best.valid) {
        result.feasible = true;
        result.t_us = best.point.t_us;
        result.w_s = best.point.w_s;
        result.beta = best.point.beta;
        result.st = best.point.st;
        result.pt = best.point.pt;
    } else {
        // Infeasible grid: report the least-damaging point so callers still
        // see what the search looked at.
        result.feasible = false;
        const GridPoint* least_bad = nullptr;
        for (const GridPoint& p : result.grid)
            if (!least_bad || p.pt > least_bad->pt) least_bad = &p;
        if (least_bad) {
            result.t_us = least_bad->t_us;
            result.w_s = least_bad->w_s;
            result.beta = least_bad->beta;
            result.st = least_bad->st;
            result.pt = least_bad->pt;
        }
    }
    return result;
}

std::vector<RobustnessRow> robustness_sweep(const OptimizationProblem& base,
                                            std::span<const MismatchCase> cases) {
    std::vector<RobustnessRow> rows;
    for (const MismatchCase& c : cases) {
        validate(c.assumed);
        validate(c.actual);
        for (Scheme scheme : {Scheme::Sensing, Scheme::Coexist, Scheme::SilentPeriod}) {
            OptimizationProblem p = base;
            p.scheme = scheme;
            p.net = c.assumed;
            RobustnessRow row;
            row.scheme = scheme;
            row.mismatch = c;
            row.design = optimize(p);

            NetworkParams actual = c.actual;
            actual.w_secondary = row.design.w_s;
            TimingParams timing = base.timing;
            timing.scan_t = normalize_us(row.design.t_us, timing.idle_slot_us);
            const State1Solution s1 = solve_state1(actual);
            const State1SlotDistribution d1 = state1_slots(s1, actual.n_primary, timing);
            const State2Solution s2 = solve_state2(actual);
            const State2SlotDistribution d2 = state2_slots(s2, actual, timing);
            ThroughputReport r;
            switch (scheme) {
            case Scheme::Sensing:
                r = throughput_sensing(d1, d2, scan_outcomes(d1, d2, timing), timing);
                break;
            case Scheme::SilentPeriod:
                r = throughput_silence(d1, d2, row.design.beta, timing);
                break;
            case Scheme::Coexist:
                r = throughput_coexist(d1, d2, timing);
                break;
            }
            row.achieved_pt = r.pt;
            row.achieved_st = r.st;
            row.actual_baseline_pt = r.baseline_pt;
            rows.push_back(row);
        }
    }
    return rows;
}

void write_grid_csv(const OptimizationResult& result, std::ostream& out) {
    out << "scheme,t_us,w_s,beta,pt,st,feasible\n";
    for (const GridPoint& p : result.grid)
        out << scheme_name(result.scheme) << ',' << p.t_us << ',' << p.w_s << ','
            << p.beta << ',' << p.pt << ',' << p.st << ',' << (p.feasible ? 1 : 0)
            << '\n';
}

} // namespace dcfcoex
