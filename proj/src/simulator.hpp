#ifndef DCFCOEX_SIMULATOR_HPP
#define DCFCOEX_SIMULATOR_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "throughput.hpp"

namespace dcfcoex {

// How the scanning nodes decide a window was busy. SlotSampled polls the
// channel once per idle-slot tick of the window (the carrier-sense
// granularity of a slotted MAC, and what the analytic model's per-slot event
// accounting describes); ContinuousOverlap flags any nonzero intersection
// with a primary transmission.
enum class ScanDetection { SlotSampled, ContinuousOverlap };

// Slot-level simulation of the two contending networks. Real time is kept in
// integer ticks (ticks_per_slot per idle slot) so scan-window overlap tests
// and time conservation are exact; every duration in the scenario must land
// on a tick boundary.
struct SimConfig {
    Scenario scenario;
    std::uint64_t run_length_ts = 500'000; // transmission slots to simulate
    std::uint64_t warmup_ts = kDefaultWarmup; // discarded before counting
    std::uint64_t seed = 1;
    int ticks_per_slot = 20;
    ScanDetection detection = ScanDetection::SlotSampled;
    int occupancy_stride = 0; // sample primary back-off states every k TS (0 = off)
    std::ostream* trace = nullptr; // one line per TS when set

    static constexpr std::uint64_t kDefaultWarmup =
        std::numeric_limits<std::uint64_t>::max(); // resolves to 5% of run_length
};

struct RatioEstimate {
    double tau = std::numeric_limits<double>::quiet_NaN();
    bool available = false;
};

struct SimStats {
    // Transmission-slot counts, split by whether the secondaries were
    // contending (state2) or not (state1), measured after warmup.
    std::uint64_t s1_idle = 0, s1_succ = 0, s1_coll = 0;
    std::uint64_t s2_ii = 0, s2_si = 0, s2_is = 0, s2_ci = 0, s2_ic = 0, s2_cc = 0;
    std::uint64_t frag_success = 0, frag_collision = 0;
    std::uint64_t scans_total = 0, scans_busy = 0;
    std::uint64_t ts_total = 0, ts_measured = 0;

    // Exact time accounting in ticks.
    std::int64_t ticks_total = 0;        // final clock value
    std::int64_t ticks_by_slots = 0;     // sum of every TS duration
    std::int64_t ticks_measured = 0;     // clock advance after warmup
    std::int64_t useful_primary_ticks = 0;
    std::int64_t useful_secondary_ticks = 0;

    // Optional back-off-state occupancy of primary nodes (see
    // SimConfig::occupancy_stride); flat index stage-major, counters within.
    std::vector<std::uint64_t> occupancy;
    std::uint64_t occupancy_idle = 0, occupancy_samples = 0;

    // Derived estimates.
    RatioEstimate tau_p1_hat, tau_p2_hat, tau_s2_hat;
    double alpha_c_hat = std::numeric_limits<double>::quiet_NaN();
    double pt_hat = 0.0;
    double st_hat = 0.0;

    std::uint64_t state1_ts() const { return s1_idle + s1_succ + s1_coll; }
    std::uint64_t state2_ts() const {
        return s2_ii + s2_si + s2_is + s2_ci + s2_ic + s2_cc;
    }
};

SimStats run_simulation(const SimConfig& cfg);

// Success/collision count ratio inverted through the slot-type probabilities
// of an n-node network (the ratio is strictly decreasing in tau). Unavailable
// when either count is zero.
RatioEstimate tau_from_success_collision(std::uint64_t successes,
                                         std::uint64_t collisions, int n_nodes);

// Forward ratio p_succ/p_coll as a function of tau, exposed for testing the
// inversion round-trip.
double success_collision_ratio(double tau, int n_nodes);

struct MetricComparison {
    const char* name = "";
    double simulated = 0.0;
    double analytic = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    bool pass = true;
};

struct DiscrepancyReport {
    std::vector<MetricComparison> metrics;
    bool pass = true;
};

// Per-metric simulated-vs-analytic errors. Throws if the simulation config
// and the solved scenario disagree.
DiscrepancyReport compare_to_analytical(const SimStats& stats, const SimConfig& cfg,
                                        const SolvedScenario& solved, double rel_tol);

} // namespace dcfcoex

#endif
