#ifndef DCFCOEX_FIXED_POINT_HPP
#define DCFCOEX_FIXED_POINT_HPP

#include <stdexcept>
#include <vector>

#include "params.hpp"

namespace dcfcoex {

class NoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Per-node transmission/collision probability when only the primary network
// contends.
struct State1Solution {
    double tau_p1 = 0.0;
    double p_p1 = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

// Coupled solution when both networks contend. With n_secondary = 0 this
// degenerates to the State-1 solution with tau_s2 = p_s2 = 0.
struct State2Solution {
    double tau_p2 = 0.0;
    double tau_s2 = 0.0;
    double p_p2 = 0.0;
    double p_s2 = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

// Stationary distribution of the per-node back-off chain with an extra
// empty-queue state. s(i,j) for stages i in [0,m], counters j in [0, 2^i*W-1];
// idle holds the empty-queue mass.
struct StationaryDistribution {
    int w0 = 0;
    int stages = 0;
    double idle = 0.0;
    std::vector<std::vector<double>> s;

    double stage_window(int i) const { return static_cast<double>(w0) * (1 << i); }
    double total() const;
};

// Transmission probability of a node given its collision probability, for a
// saturated node (always has a packet). Evaluated in geometric-sum form,
// which is continuous through p = 1/2.
double tau_of_p_saturated(double p, int w, int m);

// Same with traffic intensity lambda in (0,1]; identical to the saturated
// form at lambda = 1.
double tau_of_p_unsaturated(double p, int w, int m, double lambda);

// Single-network fixed point of { tau(p), p = 1-(1-tau)^(N-1) }. The map is
// monotone, so bracketed bisection on p is exact and unique.
State1Solution solve_bianchi(int n, int w, int m, double lambda = 1.0);

StationaryDistribution stationary_distribution(double p, int w, int m, double lambda);

State1Solution solve_state1(const NetworkParams& net);

// Damped fixed-point iteration on (p_p2, p_s2), damping 0.5, started from
// (0,0). Residual is the max absolute mismatch of the two collision-probability
// equations at the returned point.
State2Solution solve_state2(const NetworkParams& net);

} // namespace dcfcoex

#endif
