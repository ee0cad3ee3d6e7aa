#ifndef DCFCOEX_OPTIMIZER_HPP
#define DCFCOEX_OPTIMIZER_HPP

#include <span>
#include <vector>

#include "throughput.hpp"

namespace dcfcoex {

// Exhaustive search over the secondary's knobs (scan length, contention
// window, contention fraction) maximizing secondary throughput subject to a
// cap on the primary throughput loss relative to the no-secondary baseline.
struct OptimizationProblem {
    Scheme scheme = Scheme::Sensing;
    double loss_cap = 0.10;
    std::vector<double> t_us_grid;  // sensing only
    std::vector<int> ws_grid;
    std::vector<double> beta_grid;  // silent-period only
    NetworkParams net;
    TimingParams timing;

    // t in {0,5,...,600} us, Ws in {4..512}, beta in {0.05,...,1.00}; wide
    // enough to contain every optimum of the reference study with margin.
    void fill_default_grids();
};

struct GridPoint {
    double t_us = 0.0;
    int w_s = 0;
    double beta = 1.0;
    double pt = 0.0;
    double st = 0.0;
    bool feasible = false;
};

struct OptimizationResult {
    Scheme scheme = Scheme::Sensing;
    bool feasible = false;
    double t_us = 0.0;
    int w_s = 0;
    double beta = 1.0;
    double st = 0.0;
    double pt = 0.0;
    double baseline_pt = 0.0;
    std::vector<GridPoint> grid; // every evaluated point, input order
};

OptimizationResult optimize(const OptimizationProblem& problem);

struct MismatchCase {
    NetworkParams assumed;
    NetworkParams actual;
};

struct RobustnessRow {
    Scheme scheme = Scheme::Sensing;
    MismatchCase mismatch;
    OptimizationResult design;   // optimized against the assumed parameters
    double achieved_pt = 0.0;    // evaluated under the actual parameters
    double achieved_st = 0.0;
    double actual_baseline_pt = 0.0;
};

// For each mismatch pair and each of the three schemes: optimize assuming
// `assumed`, then evaluate the chosen design under `actual`.
std::vector<RobustnessRow> robustness_sweep(const OptimizationProblem& base,
                                            std::span<const MismatchCase> cases);

void write_grid_csv(const OptimizationResult& result, std::ostream& out);

} // namespace dcfcoex

#endif
