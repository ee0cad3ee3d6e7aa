#ifndef DCFCOEX_SCAN_MODEL_HPP
#define DCFCOEX_SCAN_MODEL_HPP

#include "fixed_point.hpp"
#include "params.hpp"

namespace dcfcoex {

// Transmission-slot type probabilities with only the primary network active,
// and the probability that a given real-time slot starts a transmission slot.
struct State1SlotDistribution {
    double p_idle = 0.0;
    double p_succ = 0.0;
    double p_coll = 0.0;
    double p_slot = 0.0;

    double mean_slot_length(const TimingParams& t) const;
};

// Slot-type probabilities with both networks active. Naming: first index is
// the primary outcome, second the secondary (i idle, s success, c collision);
// q_cc is the cross-network collision. q_idle_primary is the chance a slot has
// no primary transmission at all, which is what an in-scan slot needs to look
// idle (the secondaries are silent while scanning).
struct State2SlotDistribution {
    double q_ii = 0.0;
    double q_si = 0.0;
    double q_is = 0.0;
    double q_ci = 0.0;
    double q_ic = 0.0;
    double q_cc = 0.0;
    double q_slot = 0.0;
    double q_idle_primary = 0.0;

    double mean_slot_length(const TimingParams& t) const;
};

// Scan-outcome chain: probability the scan finds the channel busy given the
// previous result was busy (alpha_b) or idle (alpha_i), and the steady state
// alpha_c of the two-state chain they define.
struct ScanOutcomeModel {
    double alpha_b = 0.0;
    double alpha_i = 0.0;
    double alpha_c = 0.0;
};

double pos_part(double x);

State1SlotDistribution state1_slots(const State1Solution& sol, int n_primary,
                                    const TimingParams& timing);
State2SlotDistribution state2_slots(const State2Solution& sol, const NetworkParams& net,
                                    const TimingParams& timing);

// Probability a scan of length timing.scan_t overlaps a primary transmission,
// conditioned on only primaries having been active (previous result busy).
double alpha_busy_given_busy(const State1SlotDistribution& d, const TimingParams& timing);

// Same conditioned on both networks having been active (previous result idle).
// Secondary packets that would straddle the scan are fragmented to end at the
// scan boundary, so only primary transmissions can make the result busy.
double alpha_busy_given_idle(const State2SlotDistribution& d, const TimingParams& timing);

// Steady state of alpha[n] = alpha_b*alpha[n-1] + alpha_i*(1-alpha[n-1]).
double alpha_busy_steady(double alpha_b, double alpha_i);

// One step of the recursion, for transient evolution.
double alpha_busy_step(double alpha_b, double alpha_i, double alpha_prev);

ScanOutcomeModel scan_outcomes(const State1SlotDistribution& d1,
                               const State2SlotDistribution& d2,
                               const TimingParams& timing);

} // namespace dcfcoex

#endif
