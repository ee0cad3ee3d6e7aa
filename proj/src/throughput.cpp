#include "throughput.hpp"

namespace dcfcoex {

namespace {

// Time shares of successful slots. A successful slot's whole length,
// including its trailing DIFS, counts as useful time.
double primary_share_state1(const State1SlotDistribution& d1, const TimingParams& t) {
    return d1.p_slot * d1.p_succ * t.success_slot_primary();
}

double primary_share_state2(const State2SlotDistribution& d2, const TimingParams& t) {
    return d2.q_slot * d2.q_si * t.success_slot_primary();
}

double secondary_share_state2(const State2SlotDistribution& d2, const TimingParams& t) {
    return d2.q_slot * d2.q_is * t.success_slot_secondary();
}

} // namespace

ThroughputReport throughput_sensing(const State1SlotDistribution& d1,
                                    const State2SlotDistribution& d2,
                                    const ScanOutcomeModel& scan,
                                    const TimingParams& timing) {
    ThroughputReport r;
    r.scheme = Scheme::Sensing;
    r.alpha_c = scan.alpha_c;
    r.baseline_pt = primary_share_state1(d1, timing);
    r.pt = scan.alpha_c * r.baseline_pt +
           (1.0 - scan.alpha_c) * primary_share_state2(d2, timing);
    r.st_conditional = secondary_share_state2(d2, timing);
    r.st = (1.0 - scan.alpha_c) * r.st_conditional;
    return r;
}

ThroughputReport throughput_silence(const State1SlotDistribution& d1,
                                    const State2SlotDistribution& d2, double beta,
                                    const TimingParams& timing) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw InvalidParameter("beta must be in [0,1]");
    ThroughputReport r;
    r.scheme = Scheme::SilentPeriod;
    r.beta = beta;
    r.baseline_pt = primary_share_state1(d1, timing);
    r.pt = (1.0 - beta) * r.baseline_pt + beta * primary_share_state2(d2, timing);
    r.st_conditional = secondary_share_state2(d2, timing);
    r.st = beta * r.st_conditional;
    return r;
}

ThroughputReport throughput_coexist(const State1SlotDistribution& d1,
                                    const State2SlotDistribution& d2,
                                    const TimingParams& timing) {
    ThroughputReport r = throughput_silence(d1, d2, 1.0, timing);
    r.scheme = Scheme::Coexist;
    r.beta = 1.0;
    return r;
}

SolvedScenario solve_scenario(const Scenario& sc) {
    validate(sc);
    SolvedScenario out;
    out.scenario = sc;
    out.state1 = solve_state1(sc.net);
    out.state2 = solve_state2(sc.net);
    out.slots1 = state1_slots(out.state1, sc.net.n_primary, sc.timing);
    out.slots2 = state2_slots(out.state2, sc.net, sc.timing);
    out.scan = scan_outcomes(out.slots1, out.slots2, sc.timing);
    switch (sc.scheme.scheme) {
    case Scheme::Sensing:
        out.report = throughput_sensing(out.slots1, out.slots2, out.scan, sc.timing);
        break;
    case Scheme::SilentPeriod:
        out.report = throughput_silence(out.slots1, out.slots2, sc.scheme.beta, sc.timing);
        break;
    case Scheme::Coexist:
        out.report = throughput_coexist(out.slots1, out.slots2, sc.timing);
        break;
    }
    return out;
}

} // namespace dcfcoex
