#ifndef DCFCOEX_THROUGHPUT_HPP
#define DCFCOEX_THROUGHPUT_HPP

#include "scan_model.hpp"

namespace dcfcoex {

// Primary/secondary throughput as fractions of real time spent in successful
// transmission slots. st_conditional is the secondary throughput given both
// networks are contending (no availability factor); st applies the
// scheme-specific availability weight ((1-alpha_c) for sensing, beta for the
// silent-period scheme, 1 for plain coexistence).
struct ThroughputReport {
    Scheme scheme = Scheme::Sensing;
    double pt = 0.0;
    double st = 0.0;
    double st_conditional = 0.0;
    double alpha_c = 0.0; // sensing only; 0 otherwise
    double beta = 1.0;    // silent-period weight; 1 otherwise
    double baseline_pt = 0.0; // primary alone, no secondary admitted
};

ThroughputReport throughput_sensing(const State1SlotDistribution& d1,
                                    const State2SlotDistribution& d2,
                                    const ScanOutcomeModel& scan,
                                    const TimingParams& timing);

ThroughputReport throughput_silence(const State1SlotDistribution& d1,
                                    const State2SlotDistribution& d2, double beta,
                                    const TimingParams& timing);

ThroughputReport throughput_coexist(const State1SlotDistribution& d1,
                                    const State2SlotDistribution& d2,
                                    const TimingParams& timing);

// Everything solved for one scenario, in dependency order.
struct SolvedScenario {
    Scenario scenario;
    State1Solution state1;
    State2Solution state2;
    State1SlotDistribution slots1;
    State2SlotDistribution slots2;
    ScanOutcomeModel scan;
    ThroughputReport report;
};

SolvedScenario solve_scenario(const Scenario& sc);

} // namespace dcfcoex

#endif
