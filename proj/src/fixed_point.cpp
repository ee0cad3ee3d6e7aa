#include "fixed_point.hpp"

#include <cmath>
#include <string>

namespace dcfcoex {

namespace {

constexpr double kTol = 1e-10;
constexpr int kMaxIter = 10'000;

// p*W * (1-(2p)^m)/(1-2p) rewritten as the geometric sum p*W * sum_{i<m}(2p)^i.
// Exact for integer m and well-defined at p = 1/2.
double backoff_series(double p, int w, int m) {
    double sum = 0.0;
    double term = 1.0;
    for (int i = 0; i < m; ++i) {
        sum += term;
        term *= 2.0 * p;
    }
    return p * static_cast<double>(w) * sum;
}

} // namespace

double tau_of_p_saturated(double p, int w, int m) {
    return 2.0 / ((1.0 + w) + backoff_series(p, w, m));
}

double tau_of_p_unsaturated(double p, int w, int m, double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw InvalidParameter("lambda must be in (0,1]");
    const double idle_term = 2.0 * (1.0 - p) * (1.0 - lambda) / lambda;
    return 2.0 / ((1.0 + w) + backoff_series(p, w, m) + idle_term);
}

State1Solution solve_bianchi(int n, int w, int m, double lambda) {
    if (n < 1) throw InvalidParameter("n must be >= 1");
    State1Solution sol;
    if (n == 1) {
        sol.tau_p1 = tau_of_p_unsaturated(0.0, w, m, lambda);
        sol.p_p1 = 0.0;
        sol.residual = 0.0;
        sol.iterations = 0;
        return sol;
    }
    // F(p) = p - (1-(1-tau(p))^(n-1)) is strictly increasing: tau decreases
    // in p, so the induced collision probability decreases as well.
    auto mismatch = [&](double p) {
        double tau = tau_of_p_unsaturated(p, w, m, lambda);
        return p - (1.0 - std::pow(1.0 - tau, n - 1));
    };
    double lo = 0.0, hi = 1.0;
    int it = 0;
    while (hi - lo > 1e-16 && it < kMaxIter) {
        double mid = 0.5 * (lo + hi);
        (mismatch(mid) < 0.0 ? lo : hi) = mid;
        ++it;
    }
    double p = 0.5 * (lo + hi);
    sol.tau_p1 = tau_of_p_unsaturated(p, w, m, lambda);
    sol.p_p1 = p;
    sol.residual = std::fabs(mismatch(p));
    sol.iterations = it;
    if (sol.residual > kTol)
        throw NoConvergence("single-network fixed point did not converge, residual " +
                            std::to_string(sol.residual));
    return sol;
}

StationaryDistribution stationary_distribution(double p, int w, int m, double lambda) {
    if (!(p >= 0.0 && p < 1.0)) throw InvalidParameter("p must be in [0,1)");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidParameter("lambda must be in (0,1]");
    if (w < 1) throw InvalidParameter("w must be >= 1");
    if (m < 0) throw InvalidParameter("m must be >= 0");

    StationaryDistribution d;
    d.w0 = w;
    d.stages = m;
    d.s.assign(m + 1, {});

    // s00 = 2(1-2p)(1-p) / [(1-2p)(W+1) + pW(1-(2p)^m) + 2(1-2p)(1-p)(1-lambda)/lambda]
    // evaluated through the same geometric-sum form as tau (shared factor
    // (1-2p) cancelled), so p = 1/2 needs no special case.
    const double denom = (1.0 + w) + backoff_series(p, w, m) +
                         2.0 * (1.0 - p) * (1.0 - lambda) / lambda;
    const double s00 = 2.0 * (1.0 - p) / denom;

    d.idle = (1.0 - lambda) / lambda * s00;
    double stage_mass = s00; // p^i * s00, with the 1/(1-p) boost at the cap
    for (int i = 0; i <= m; ++i) {
        double wi = d.stage_window(i);
        double level = (i == m) ? stage_mass / (1.0 - p) : stage_mass;
        auto& row = d.s[i];
        row.resize(static_cast<std::size_t>(wi));
        for (int j = 0; j < static_cast<int>(wi); ++j)
            row[static_cast<std::size_t>(j)] = (wi - j) / wi * level;
        stage_mass *= p;
    }
    return d;
}

double StationaryDistribution::total() const {
    double t = idle;
    for (const auto& row : s)
        for (double v : row) t += v;
    return t;
}

State1Solution solve_state1(const NetworkParams& net) {
    validate(net);
    return solve_bianchi(net.n_primary, net.w_primary, net.m_primary,
                         net.lambda_primary);
}

State2Solution solve_state2(const NetworkParams& net) {
    validate(net);
    State2Solution sol;
    if (net.n_secondary == 0) {
        State1Solution s1 = solve_state1(net);
        sol.tau_p2 = s1.tau_p1;
        sol.p_p2 = s1.p_p1;
        sol.tau_s2 = 0.0;
        sol.p_s2 = 0.0;
        sol.residual = s1.residual;
        sol.iterations = s1.iterations;
        return sol;
    }

    const int np = net.n_primary, ns = net.n_secondary;
    double pp = 0.0, ps = 0.0;
    constexpr double kDamping = 0.5;
    int it = 0;
    double residual = 0.0;
    for (; it < kMaxIter; ++it) {
        double tp = tau_of_p_unsaturated(pp, net.w_primary, net.m_primary,
                                         net.lambda_primary);
        double ts = tau_of_p_unsaturated(ps, net.w_secondary, net.m_secondary,
                                         net.lambda_secondary);
        double pp_next = 1.0 - std::pow(1.0 - tp, np - 1) * std::pow(1.0 - ts, ns);
        double ps_next = 1.0 - std::pow(1.0 - tp, np) * std::pow(1.0 - ts, ns - 1);
        residual = std::max(std::fabs(pp_next - pp), std::fabs(ps_next - ps));
        if (residual <= kTol) break;
        pp += kDamping * (pp_next - pp);
        ps += kDamping * (ps_next - ps);
    }
    if (residual > kTol)
        throw NoConvergence("coupled two-network fixed point did not converge, residual " +
                            std::to_string(residual));
    sol.p_p2 = pp;
    sol.p_s2 = ps;
    sol.tau_p2 = tau_of_p_unsaturated(pp, net.w_primary, net.m_primary, net.lambda_primary);
    sol.tau_s2 = tau_of_p_unsaturated(ps, net.w_secondary, net.m_secondary,
                                      net.lambda_secondary);
    sol.residual = residual;
    sol.iterations = it;
    return sol;
}

} // namespace dcfcoex
