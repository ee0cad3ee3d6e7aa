#include "simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <string>

namespace dcfcoex {

namespace {

// Deterministic uniform helpers on top of mt19937_64 (whose output sequence
// is fixed by the standard); the std distributions are not portable across
// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint32_t below(std::uint32_t n) {
        // unbiased rejection sampling
        const std::uint64_t span = n;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return static_cast<std::uint32_t>(v % span);
    }

    bool bernoulli(double p) {
        if (p >= 1.0) return true;
        if (p <= 0.0) return false;
        return unit() < p;
    }

    double unit() { return (eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

struct Node {
    int stage = 0;
    int counter = 0;
    bool queued = true; // false = empty-queue state
};

std::int64_t to_ticks(double slots, int ticks_per_slot, const char* what) {
    const double scaled = slots * ticks_per_slot;
    const double rounded = std::round(scaled);
    if (std::fabs(scaled - rounded) > 1e-6)
        throw InvalidParameter(std::string(what) +
                               " does not land on the simulator tick grid");
    return static_cast<std::int64_t>(rounded);
}

enum class SlotType { Idle, SuccP, SuccS, CollP, CollS, CollX };

const char* slot_type_name(SlotType t) {
    switch (t) {
    case SlotType::Idle: return "idle";
    case SlotType::SuccP: return "succ_p";
    case SlotType::SuccS: return "succ_s";
    case SlotType::CollP: return "coll_p";
    case SlotType::CollS: return "coll_s";
    case SlotType::CollX: return "coll_x";
    }
    return "?";
}

} // namespace

double success_collision_ratio(double tau, int n_nodes) {
    const double idle = std::pow(1.0 - tau, n_nodes);
    const double succ = n_nodes * tau * std::pow(1.0 - tau, n_nodes - 1);
    const double coll = 1.0 - idle - succ;
    return succ / coll;
}

RatioEstimate tau_from_success_collision(std::uint64_t successes,
                                         std::uint64_t collisions, int n_nodes) {
    RatioEstimate est;
    if (successes == 0 || collisions == 0 || n_nodes < 2) return est;
    const double target = static_cast<double>(successes) / static_cast<double>(collisions);
    // ratio(tau) decreases monotonically from +inf (tau -> 0) to 0 (tau -> 1)
    double lo = 1e-12, hi = 1.0 - 1e-12;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (success_collision_ratio(mid, n_nodes) > target ? lo : hi) = mid;
    }
    est.tau = 0.5 * (lo + hi);
    est.available = true;
    return est;
}

SimStats run_simulation(const SimConfig& cfg) {
    const Scenario& sc = cfg.scenario;
    validate(sc);
    if (cfg.ticks_per_slot < 1) throw InvalidParameter("ticks_per_slot must be >= 1");
    std::uint64_t warmup = cfg.warmup_ts == SimConfig::kDefaultWarmup
                               ? cfg.run_length_ts / 20
                               : cfg.warmup_ts;
    if (cfg.run_length_ts <= warmup)
        throw InvalidParameter("run_length must exceed the warmup");

    const int tps = cfg.ticks_per_slot;
    const std::int64_t slot_ticks = tps;
    const std::int64_t tpsuc = to_ticks(sc.timing.tp_suc, tps, "tp_suc");
    const std::int64_t tssuc = to_ticks(sc.timing.ts_suc, tps, "ts_suc");
    const std::int64_t tpcol = to_ticks(sc.timing.tp_col, tps, "tp_col");
    const std::int64_t tscol = to_ticks(sc.timing.ts_col, tps, "ts_col");
    const std::int64_t difs = to_ticks(sc.timing.difs, tps, "difs");
    const std::int64_t gap = to_ticks(sc.timing.eifs + sc.timing.difs, tps, "eifs");
    const std::int64_t scan_len = to_ticks(sc.timing.scan_t, tps, "scan_t");
    const std::int64_t period = to_ticks(sc.timing.period_T, tps, "period_T");

    // Zero-length windows neither freeze anybody nor can they overlap a
    // transmission; sensing with t = 0 behaves like plain coexistence.
    const bool has_windows =
        (sc.scheme.scheme != Scheme::Coexist) && scan_len > 0;
    const bool scanning = sc.scheme.scheme == Scheme::Sensing && has_windows;

    Rng rng(cfg.seed);
    const int np = sc.net.n_primary, ns = sc.net.n_secondary;
    std::vector<Node> prim(static_cast<std::size_t>(np));
    std::vector<Node> sec(static_cast<std::size_t>(ns));
    for (Node& n : prim) n.counter = static_cast<int>(rng.below(sc.net.w_primary));
    for (Node& n : sec) n.counter = static_cast<int>(rng.below(sc.net.w_secondary));

    SimStats st;
    if (cfg.occupancy_stride > 0)
        st.occupancy.assign(static_cast<std::size_t>(sc.net.w_primary) *
                                ((1u << (sc.net.m_primary + 1)) - 1u),
                            0);

    std::int64_t now = 0;
    std::int64_t measure_start = 0;
    std::int64_t cur_window = 0;       // next window whose end we have not passed
    bool sec_admitted = false;         // last scan result was idle
    std::map<std::int64_t, bool> window_hit; // windows touched by primary airtime

    auto window_start = [&](std::int64_t k) { return k * period; };
    auto window_end = [&](std::int64_t k) { return k * period + scan_len; };

    // Mark every scan window that detects a primary transmission [a, b).
    // Sample instants sit at whole-slot offsets from the window start.
    auto mark_primary_air = [&](std::int64_t a, std::int64_t b) {
        if (!scanning || b <= a) return;
        for (std::int64_t k = a / period; k * period < b; ++k) {
            const std::int64_t ws = window_start(k);
            if (cfg.detection == ScanDetection::ContinuousOverlap) {
                if (std::max(a, ws) < std::min(b, window_end(k))) window_hit[k] = true;
            } else {
                // first/last sample index of the window hit by [a, b)
                const std::int64_t samples = (scan_len + slot_ticks - 1) / slot_ticks;
                std::int64_t lo = (a - ws + slot_ticks - 1) / slot_ticks;
                std::int64_t hi = (b - 1 - ws) / slot_ticks;
                if (lo < 0) lo = 0;
                if (hi > samples - 1) hi = samples - 1;
                if (lo <= hi) window_hit[k] = true;
            }
        }
    };

    std::vector<int> ptx, stx;
    ptx.reserve(static_cast<std::size_t>(np));
    stx.reserve(static_cast<std::size_t>(ns));

    const std::uint64_t total_ts = cfg.run_length_ts;
    for (std::uint64_t ts = 0; ts < total_ts; ++ts) {
        const bool measured = ts >= warmup;
        if (ts == warmup) measure_start = now;

        if (has_windows) {
            while (now >= window_end(cur_window)) {
                if (scanning) {
                    auto it = window_hit.find(cur_window);
                    const bool busy = it != window_hit.end();
                    if (it != window_hit.end()) window_hit.erase(it);
                    sec_admitted = !busy;
                    if (measured) {
                        ++st.scans_total;
                        if (busy) ++st.scans_busy;
                    }
                }
                ++cur_window;
            }
        }
        const bool in_window = has_windows && now >= window_start(cur_window);
        const bool sec_active =
            ns > 0 && !in_window &&
            (sc.scheme.scheme == Scheme::Coexist ||
             sc.scheme.scheme == Scheme::SilentPeriod || !has_windows || sec_admitted);

        ptx.clear();
        stx.clear();
        for (int i = 0; i < np; ++i)
            if (prim[static_cast<std::size_t>(i)].queued &&
                prim[static_cast<std::size_t>(i)].counter == 0)
                ptx.push_back(i);
        if (sec_active)
            for (int i = 0; i < ns; ++i)
                if (sec[static_cast<std::size_t>(i)].queued &&
                    sec[static_cast<std::size_t>(i)].counter == 0)
                    stx.push_back(i);

        // Secondaries know the window schedule and cut their transmission
        // short so nothing of theirs overlaps the next window.
        const std::int64_t to_boundary =
            has_windows ? window_start(cur_window) - now
                        : std::numeric_limits<std::int64_t>::max();

        SlotType type;
        std::int64_t air_p = 0, air_s = 0, dur = 0;
        bool fragmented = false;
        if (ptx.empty() && stx.empty()) {
            type = SlotType::Idle;
            dur = slot_ticks;
        } else if (ptx.size() == 1 && stx.empty()) {
            type = SlotType::SuccP;
            air_p = tpsuc;
            dur = air_p + difs;
        } else if (ptx.empty() && stx.size() == 1) {
            type = SlotType::SuccS;
            air_s = std::min(tssuc, to_boundary);
            fragmented = air_s < tssuc;
            dur = air_s + difs;
        } else if (stx.empty()) {
            type = SlotType::CollP;
            air_p = tpcol;
            dur = air_p + gap;
        } else if (ptx.empty()) {
            type = SlotType::CollS;
            air_s = std::min(tscol, to_boundary);
            fragmented = air_s < tscol;
            dur = air_s + gap;
        } else {
            type = SlotType::CollX;
            air_p = tpcol;
            air_s = std::min(tscol, to_boundary);
            fragmented = air_s < tscol;
            dur = std::max(air_p, air_s) + gap;
        }

        mark_primary_air(now, now + air_p);

        if (cfg.occupancy_stride > 0 && measured &&
            ts % static_cast<std::uint64_t>(cfg.occupancy_stride) == 0) {
            for (const Node& n : prim) {
                if (!n.queued) {
                    ++st.occupancy_idle;
                } else {
                    const std::size_t base =
                        static_cast<std::size_t>(sc.net.w_primary) *
                        ((1u << n.stage) - 1u);
                    ++st.occupancy[base + static_cast<std::size_t>(n.counter)];
                }
            }
            ++st.occupancy_samples;
        }

        if (measured) {
            ++st.ts_measured;
            if (sec_active) {
                switch (type) {
                case SlotType::Idle: ++st.s2_ii; break;
                case SlotType::SuccP: ++st.s2_si; break;
                case SlotType::SuccS: ++st.s2_is; break;
                case SlotType::CollP: ++st.s2_ci; break;
                case SlotType::CollS: ++st.s2_ic; break;
                case SlotType::CollX: ++st.s2_cc; break;
                }
            } else {
                switch (type) {
                case SlotType::Idle: ++st.s1_idle; break;
                case SlotType::SuccP: ++st.s1_succ; break;
                default: ++st.s1_coll; break;
                }
            }
            if (type == SlotType::SuccP) st.useful_primary_ticks += air_p + difs;
            if (type == SlotType::SuccS) st.useful_secondary_ticks += air_s + difs;
            if (fragmented) {
                if (type == SlotType::SuccS) ++st.frag_success;
                else ++st.frag_collision;
            }
        }

        if (cfg.trace) {
            std::ostream& out = *cfg.trace;
            out << ts << ',' << static_cast<double>(now) / tps << ','
                << (sec_active ? 2 : 1) << ',' << slot_type_name(type) << ',';
            bool first = true;
            for (int i : ptx) {
                out << (first ? "" : ";") << 'p' << i;
                first = false;
            }
            for (int i : stx) {
                out << (first ? "" : ";") << 's' << i;
                first = false;
            }
            if (first) out << '-';
            out << '\n';
        }

        // Back-off chain step for every participating node.
        const bool success = ptx.size() + stx.size() == 1;
        auto after_transmit = [&](Node& n, int w0, int stages, double lambda) {
            if (success) {
                if (rng.bernoulli(lambda)) {
                    n.queued = true;
                    n.stage = 0;
                    n.counter = static_cast<int>(rng.below(static_cast<std::uint32_t>(w0)));
                } else {
                    n.queued = false;
                    n.stage = 0;
                    n.counter = 0;
                }
            } else {
                n.stage = std::min(n.stage + 1, stages);
                n.counter = static_cast<int>(
                    rng.below(static_cast<std::uint32_t>(w0) << n.stage));
            }
        };
        for (int i = 0; i < np; ++i) {
            Node& n = prim[static_cast<std::size_t>(i)];
            if (n.queued && n.counter == 0)
                after_transmit(n, sc.net.w_primary, sc.net.m_primary,
                               sc.net.lambda_primary);
            else if (n.queued)
                --n.counter;
            else if (rng.bernoulli(sc.net.lambda_primary)) {
                n.queued = true;
                n.stage = 0;
                n.counter = static_cast<int>(
                    rng.below(static_cast<std::uint32_t>(sc.net.w_primary)));
            }
        }
        if (sec_active) {
            for (int i = 0; i < ns; ++i) {
                Node& n = sec[static_cast<std::size_t>(i)];
                if (n.queued && n.counter == 0)
                    after_transmit(n, sc.net.w_secondary, sc.net.m_secondary,
                                   sc.net.lambda_secondary);
                else if (n.queued)
                    --n.counter;
                else if (rng.bernoulli(sc.net.lambda_secondary)) {
                    n.queued = true;
                    n.stage = 0;
                    n.counter = static_cast<int>(
                        rng.below(static_cast<std::uint32_t>(sc.net.w_secondary)));
                }
            }
        }

        now += dur;
        st.ticks_by_slots += dur;
        ++st.ts_total;
    }

    st.ticks_total = now;
    st.ticks_measured = now - measure_start;

    st.tau_p1_hat = tau_from_success_collision(st.s1_succ, st.s1_coll, np);
    st.tau_p2_hat = tau_from_success_collision(st.s2_si, st.s2_ci, np);
    st.tau_s2_hat = tau_from_success_collision(st.s2_is, st.s2_ic, ns);
    if (st.scans_total > 0)
        st.alpha_c_hat = static_cast<double>(st.scans_busy) /
                         static_cast<double>(st.scans_total);
    if (st.ticks_measured > 0) {
        st.pt_hat = static_cast<double>(st.useful_primary_ticks) /
                    static_cast<double>(st.ticks_measured);
        st.st_hat = static_cast<double>(st.useful_secondary_ticks) /
                    static_cast<double>(st.ticks_measured);
    }
    return st;
}

DiscrepancyReport compare_to_analytical(const SimStats& stats, const SimConfig& cfg,
                                        const SolvedScenario& solved, double rel_tol) {
    if (!(cfg.scenario == solved.scenario))
        throw InvalidParameter("simulation and analytic configurations differ");

    DiscrepancyReport rep;
    auto add = [&](const char* name, double sim, double ana) {
        MetricComparison m;
        m.name = name;
        m.simulated = sim;
        m.analytic = ana;
        m.abs_err = std::fabs(sim - ana);
        m.rel_err = m.abs_err / std::max(std::fabs(ana), 1e-12);
        m.pass = m.rel_err <= rel_tol;
        rep.metrics.push_back(m);
        rep.pass = rep.pass && m.pass;
    };
    if (stats.tau_p1_hat.available)
        add("tau_p1", stats.tau_p1_hat.tau, solved.state1.tau_p1);
    if (stats.tau_p2_hat.available)
        add("tau_p2", stats.tau_p2_hat.tau, solved.state2.tau_p2);
    if (stats.tau_s2_hat.available)
        add("tau_s2", stats.tau_s2_hat.tau, solved.state2.tau_s2);
    if (stats.scans_total > 0)
        add("alpha_c", stats.alpha_c_hat, solved.scan.alpha_c);
    add("pt", stats.pt_hat, solved.report.pt);
    add("st", stats.st_hat, solved.report.st);
    return rep;
}

} // namespace dcfcoex
