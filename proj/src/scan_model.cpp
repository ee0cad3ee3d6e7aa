#include "scan_model.hpp"

#include <cmath>

namespace dcfcoex {

double pos_part(double x) { return x > 0.0 ? x : 0.0; }

double State1SlotDistribution::mean_slot_length(const TimingParams& t) const {
    return p_succ * t.success_slot_primary() + p_coll * t.collision_slot_primary() + p_idle;
}

double State2SlotDistribution::mean_slot_length(const TimingParams& t) const {
    return q_si * t.success_slot_primary() + q_is * t.success_slot_secondary() +
           q_ci * t.collision_slot_primary() + q_ic * t.collision_slot_secondary() +
           q_cc * t.collision_slot_cross() + q_ii;
}

State1SlotDistribution state1_slots(const State1Solution& sol, int n_primary,
                                    const TimingParams& timing) {
    if (n_primary < 1) throw InvalidParameter("n_primary must be >= 1");
    const double tau = sol.tau_p1;
    State1SlotDistribution d;
    d.p_idle = std::pow(1.0 - tau, n_primary);
    d.p_succ = n_primary * tau * std::pow(1.0 - tau, n_primary - 1);
    d.p_coll = 1.0 - d.p_idle - d.p_succ;
    if (d.p_coll < 0.0) d.p_coll = 0.0; // n_primary = 1 up to rounding
    d.p_slot = 1.0 / d.mean_slot_length(timing);
    return d;
}

State2SlotDistribution state2_slots(const State2Solution& sol, const NetworkParams& net,
                                    const TimingParams& timing) {
    const double tp = sol.tau_p2, ts = sol.tau_s2;
    const int np = net.n_primary, ns = net.n_secondary;
    const double p_allidle = std::pow(1.0 - tp, np);
    const double s_allidle = std::pow(1.0 - ts, ns);
    const double p_onewins = np * tp * std::pow(1.0 - tp, np - 1);
    const double s_onewins = ns == 0 ? 0.0 : ns * ts * std::pow(1.0 - ts, ns - 1);

    State2SlotDistribution d;
    d.q_ii = p_allidle * s_allidle;
    d.q_si = p_onewins * s_allidle;
    d.q_is = p_allidle * s_onewins;
    d.q_ci = pos_part(1.0 - p_onewins - p_allidle) * s_allidle;
    d.q_ic = p_allidle * pos_part(1.0 - s_onewins - s_allidle);
    d.q_cc = (1.0 - p_allidle) * (1.0 - s_allidle);
    d.q_idle_primary = p_allidle;
    d.q_slot = 1.0 / d.mean_slot_length(timing);
    return d;
}

namespace {

// (q^a - q^b) / (1 - q) for q in [0,1), numerically stable as q -> 1.
double power_gap_over_one_minus(double q, double a, double b) {
    if (q <= 0.0) return (a == 0.0 ? 1.0 : 0.0) - (b == 0.0 ? 1.0 : 0.0);
    const double lq = std::log(q);
    return std::exp(a * lq) * std::expm1((b - a) * lq) / std::expm1(lq);
}

} // namespace

double alpha_busy_given_busy(const State1SlotDistribution& d, const TimingParams& timing) {
    const double t = timing.scan_t;
    const double busy_mass = d.p_succ + d.p_coll;
    if (busy_mass <= 0.0) return 0.0; // nobody ever transmits
    const double td = t - timing.difs;
    const double te = t - timing.collision_gap();
    const double pi = d.p_idle;
    const double tail = (d.p_succ * std::pow(pi, pos_part(td)) +
                         d.p_coll * std::pow(pi, pos_part(te))) / busy_mass;
    const double inside = d.p_succ * pos_part(-td) + d.p_coll * pos_part(-te);
    return 1.0 - d.p_slot * (tail + inside);
}

double alpha_busy_given_idle(const State2SlotDistribution& d, const TimingParams& timing) {
    const double qi = d.q_idle_primary;
    if (qi >= 1.0) return 0.0; // primaries never transmit
    const double t = timing.scan_t;
    const double td = t - timing.difs;
    const double te = t - timing.collision_gap();
    const double ptd = pos_part(td), pte = pos_part(te);

    // Scans starting at a slot boundary see primary-only contention: each
    // in-scan slot is idle with probability q_idle_primary.
    double idle = std::pow(qi, t);
    // Scans landing in the gap after a successful transmission (primary or
    // secondary), then riding out the rest on idle slots.
    idle += (power_gap_over_one_minus(qi, ptd, t) + pos_part(-td)) * (d.q_si + d.q_is);
    // Scans that would land inside a secondary packet: the packet is cut
    // short at the scan boundary and its gap covers the start of the scan.
    idle += (timing.ts_suc - 1.0) * d.q_is * std::pow(qi, ptd);
    idle += (timing.ts_col - 1.0) * d.q_ic * std::pow(qi, pte);
    // Scans landing in the quiet period after any collision.
    idle += (power_gap_over_one_minus(qi, pte, t) + pos_part(-te)) *
            (d.q_ci + d.q_ic + d.q_cc);
    return 1.0 - d.q_slot * idle;
}

double alpha_busy_steady(double alpha_b, double alpha_i) {
    if (!(alpha_b >= 0.0 && alpha_b <= 1.0) || !(alpha_i >= 0.0 && alpha_i <= 1.0))
        throw InvalidParameter("alpha_b and alpha_i must be probabilities");
    if (alpha_i == 0.0) return 0.0;
    return alpha_i / (1.0 + alpha_i - alpha_b);
}

double alpha_busy_step(double alpha_b, double alpha_i, double alpha_prev) {
    return alpha_b * alpha_prev + alpha_i * (1.0 - alpha_prev);
}

ScanOutcomeModel scan_outcomes(const State1SlotDistribution& d1,
                               const State2SlotDistribution& d2,
                               const TimingParams& timing) {
    ScanOutcomeModel m;
    m.alpha_b = alpha_busy_given_busy(d1, timing);
    m.alpha_i = alpha_busy_given_idle(d2, timing);
    m.alpha_c = alpha_busy_steady(m.alpha_b, m.alpha_i);
    return m;
}

} // namespace dcfcoex
