#ifndef DCFCOEX_PARAMS_HPP
#define DCFCOEX_PARAMS_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace dcfcoex {

class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Node counts, contention windows, back-off stage counts and traffic
// intensities for the two networks. Stage-i windows are 2^i * W0 and are
// always derived, never stored.
struct NetworkParams {
    int n_primary = 6;
    int n_secondary = 15;
    int w_primary = 32;
    int w_secondary = 32;
    int m_primary = 4;
    int m_secondary = 4;
    double lambda_primary = 1.0;   // 1 = saturated
    double lambda_secondary = 1.0;

    bool operator==(const NetworkParams&) const = default;
};

// All durations in idle-slot units (real-valued). idle_slot_us is kept only
// for converting user inputs/outputs; the model itself never sees microseconds.
struct TimingParams {
    double tp_suc = 0.0;
    double ts_suc = 0.0;
    double tp_col = 0.0;
    double ts_col = 0.0;
    double difs = 0.0;
    double eifs = 0.0;
    double scan_t = 0.0;
    double period_T = 0.0;
    double idle_slot_us = 20.0;

    bool operator==(const TimingParams&) const = default;

    // Effective slot lengths. A successful transmission occupies its airtime
    // plus the DIFS everyone waits before contending again. After a collision
    // the medium stays quiet for EIFS followed by the regular DIFS, so the
    // collision slot carries the combined gap.
    double success_slot_primary() const { return tp_suc + difs; }
    double success_slot_secondary() const { return ts_suc + difs; }
    double collision_gap() const { return eifs + difs; }
    double collision_slot_primary() const { return tp_col + collision_gap(); }
    double collision_slot_secondary() const { return ts_col + collision_gap(); }
    double collision_slot_cross() const {
        return (tp_col > ts_col ? tp_col : ts_col) + collision_gap();
    }
};

enum class Scheme { Sensing, SilentPeriod, Coexist };

// beta is the fraction of time the secondary contends; it is a free knob only
// for SilentPeriod. Coexist pins beta = 1.
struct SchemeConfig {
    Scheme scheme = Scheme::Sensing;
    double beta = 1.0;

    bool operator==(const SchemeConfig&) const = default;
};

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// One fully specified scenario: everything the analytic path, the optimizer
// and the simulator need, minus run-control (seeds, run length).
struct Scenario {
    NetworkParams net;
    TimingParams timing;
    SchemeConfig scheme;

    bool operator==(const Scenario&) const = default;
};

// duration_us / idle_slot_us, no rounding. Throws on idle_slot_us <= 0.
double normalize_us(double duration_us, double idle_slot_us);
double denormalize_slots(double slots, double idle_slot_us);

// Checks every invariant and throws InvalidParameter naming the first
// violated one. Returns the inputs untouched on success.
const NetworkParams& validate(const NetworkParams& net);
const TimingParams& validate(const TimingParams& timing);
const Scenario& validate(const Scenario& sc);

// The IEEE 802.11 parameter set used throughout the study this tool
// reproduces: Wp=Ws=32, mp=ms=4, TpSuc=TsSuc=1178us, TpCol=TsCol=864us,
// DIFS=50us, EIFS=364us, T=500ms, t=50us, 20us idle slots, both networks
// saturated, sensing scheme. Ws/ms are not stated in the source study for
// the node sweeps; 32/4 is the documented assumption.
Scenario preset_paper_2011();

// Flat key=value config I/O. Keys match the field names; microsecond keys
// carry the _us suffix and are normalized at load.
Scenario load_scenario(std::istream& in);
Scenario load_scenario_file(const std::string& path);
void save_scenario(const Scenario& sc, std::ostream& out);
void scenario_set(Scenario& sc, const std::string& key, const std::string& value);
double scenario_get(const Scenario& sc, const std::string& key);

} // namespace dcfcoex

#endif
