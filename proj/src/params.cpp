#include "params.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>
#include <vector>

namespace dcfcoex {

const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::Sensing: return "sensing";
    case Scheme::SilentPeriod: return "silence";
    case Scheme::Coexist: return "coexist";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "sensing") return Scheme::Sensing;
    if (name == "silence" || name == "silent" || name == "silent-period")
        return Scheme::SilentPeriod;
    if (name == "coexist" || name == "coexistence") return Scheme::Coexist;
    throw InvalidParameter("unknown scheme '" + name +
                           "' (expected sensing, silence or coexist)");
}

double normalize_us(double duration_us, double idle_slot_us) {
    if (!(idle_slot_us > 0.0))
        throw InvalidParameter("idle_slot_us must be > 0");
    return duration_us / idle_slot_us;
}

double denormalize_slots(double slots, double idle_slot_us) {
    if (!(idle_slot_us > 0.0))
        throw InvalidParameter("idle_slot_us must be > 0");
    return slots * idle_slot_us;
}

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw InvalidParameter(msg);
}

} // namespace

const NetworkParams& validate(const NetworkParams& net) {
    require(net.n_primary >= 1, "n_primary must be >= 1");
    require(net.n_secondary >= 0, "n_secondary must be >= 0");
    require(net.w_primary >= 1, "w_primary must be >= 1");
    require(net.w_secondary >= 1, "w_secondary must be >= 1");
    require(net.m_primary >= 0, "m_primary must be >= 0");
    require(net.m_secondary >= 0, "m_secondary must be >= 0");
    require(net.lambda_primary > 0.0 && net.lambda_primary <= 1.0,
            "lambda_primary must be in (0,1]");
    require(net.lambda_secondary > 0.0 && net.lambda_secondary <= 1.0,
            "lambda_secondary must be in (0,1]");
    return net;
}

const TimingParams& validate(const TimingParams& timing) {
    require(timing.tp_suc >= 0.0, "tp_suc must be >= 0");
    require(timing.ts_suc >= 0.0, "ts_suc must be >= 0");
    require(timing.tp_col >= 0.0, "tp_col must be >= 0");
    require(timing.ts_col >= 0.0, "ts_col must be >= 0");
    require(timing.difs >= 0.0, "difs must be >= 0");
    require(timing.eifs >= 0.0, "eifs must be >= 0");
    require(timing.scan_t >= 0.0, "scan_t must be >= 0");
    require(timing.period_T > timing.scan_t, "period_T must exceed scan_t");
    require(timing.idle_slot_us > 0.0, "idle_slot_us must be > 0");
    return timing;
}

const Scenario& validate(const Scenario& sc) {
    validate(sc.net);
    validate(sc.timing);
    require(sc.scheme.beta > 0.0 && sc.scheme.beta <= 1.0, "beta must be in (0,1]");
    require(sc.scheme.scheme != Scheme::Coexist || sc.scheme.beta == 1.0,
            "coexist scheme requires beta = 1");
    return sc;
}

Scenario preset_paper_2011() {
    Scenario sc;
    sc.net = NetworkParams{};
    const double slot_us = 20.0;
    sc.timing.idle_slot_us = slot_us;
    sc.timing.tp_suc = normalize_us(1178.0, slot_us);
    sc.timing.ts_suc = normalize_us(1178.0, slot_us);
    sc.timing.tp_col = normalize_us(864.0, slot_us);
    sc.timing.ts_col = normalize_us(864.0, slot_us);
    sc.timing.difs = normalize_us(50.0, slot_us);
    sc.timing.eifs = normalize_us(364.0, slot_us);
    sc.timing.scan_t = normalize_us(50.0, slot_us);
    sc.timing.period_T = normalize_us(500'000.0, slot_us);
    sc.scheme = SchemeConfig{Scheme::Sensing, 1.0};
    return sc;
}

namespace {

// Microsecond-valued timing fields, stored normalized.
double* us_field(Scenario& sc, const std::string& key) {
    if (key == "tp_suc_us") return &sc.timing.tp_suc;
    if (key == "ts_suc_us") return &sc.timing.ts_suc;
    if (key == "tp_col_us") return &sc.timing.tp_col;
    if (key == "ts_col_us") return &sc.timing.ts_col;
    if (key == "difs_us") return &sc.timing.difs;
    if (key == "eifs_us") return &sc.timing.eifs;
    if (key == "scan_t_us") return &sc.timing.scan_t;
    if (key == "period_T_us") return &sc.timing.period_T;
    return nullptr;
}

int* int_field(Scenario& sc, const std::string& key) {
    if (key == "n_primary") return &sc.net.n_primary;
    if (key == "n_secondary") return &sc.net.n_secondary;
    if (key == "w_primary") return &sc.net.w_primary;
    if (key == "w_secondary") return &sc.net.w_secondary;
    if (key == "m_primary") return &sc.net.m_primary;
    if (key == "m_secondary") return &sc.net.m_secondary;
    return nullptr;
}

double* real_field(Scenario& sc, const std::string& key) {
    if (key == "lambda_primary") return &sc.net.lambda_primary;
    if (key == "lambda_secondary") return &sc.net.lambda_secondary;
    if (key == "beta") return &sc.scheme.beta;
    if (key == "idle_slot_us") return &sc.timing.idle_slot_us;
    return nullptr;
}

double parse_number(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw InvalidParameter("bad numeric value '" + value + "' for " + key);
    }
    while (used < value.size() && std::isspace(static_cast<unsigned char>(value[used])))
        ++used;
    if (used != value.size())
        throw InvalidParameter("bad numeric value '" + value + "' for " + key);
    return v;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

void scenario_set(Scenario& sc, const std::string& key, const std::string& value) {
    if (key == "scheme") {
        sc.scheme.scheme = scheme_from_name(trim(value));
        if (sc.scheme.scheme == Scheme::Coexist) sc.scheme.beta = 1.0;
        return;
    }
    if (double* f = us_field(sc, key)) {
        *f = normalize_us(parse_number(key, value), sc.timing.idle_slot_us);
        return;
    }
    if (int* f = int_field(sc, key)) {
        double v = parse_number(key, value);
        if (v != std::floor(v))
            throw InvalidParameter(key + " must be an integer");
        *f = static_cast<int>(v);
        return;
    }
    if (double* f = real_field(sc, key)) {
        double old_slot = sc.timing.idle_slot_us;
        *f = parse_number(key, value);
        if (key == "idle_slot_us") {
            if (!(sc.timing.idle_slot_us > 0.0)) {
                sc.timing.idle_slot_us = old_slot;
                throw InvalidParameter("idle_slot_us must be > 0");
            }
            // Re-express already-loaded durations in the new slot unit.
            double scale = old_slot / sc.timing.idle_slot_us;
            for (double* d : {&sc.timing.tp_suc, &sc.timing.ts_suc, &sc.timing.tp_col,
                              &sc.timing.ts_col, &sc.timing.difs, &sc.timing.eifs,
                              &sc.timing.scan_t, &sc.timing.period_T})
                *d *= scale;
        }
        return;
    }
    throw InvalidParameter("unknown config key '" + key + "'");
}

double scenario_get(const Scenario& sc, const std::string& key) {
    Scenario& mut = const_cast<Scenario&>(sc);
    if (key == "scheme") return static_cast<double>(static_cast<int>(sc.scheme.scheme));
    if (double* f = us_field(mut, key))
        return denormalize_slots(*f, sc.timing.idle_slot_us);
    if (int* f = int_field(mut, key)) return static_cast<double>(*f);
    if (double* f = real_field(mut, key)) return *f;
    throw InvalidParameter("unknown config key '" + key + "'");
}

Scenario load_scenario(std::istream& in) {
    Scenario sc = preset_paper_2011();
    std::string line;
    int lineno = 0;
    // idle_slot_us must take effect before microsecond keys are normalized,
    // so collect everything first and apply it ahead of the rest.
    std::vector<std::pair<std::string, std::string>> kv;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config line " + std::to_string(lineno) +
                                   ": expected key = value");
        kv.emplace_back(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    for (auto& [k, v] : kv)
        if (k == "idle_slot_us") scenario_set(sc, k, v);
    for (auto& [k, v] : kv)
        if (k != "idle_slot_us") scenario_set(sc, k, v);
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open config file '" + path + "'");
    return load_scenario(in);
}

void save_scenario(const Scenario& sc, std::ostream& out) {
    const double slot = sc.timing.idle_slot_us;
    out << "n_primary = " << sc.net.n_primary << '\n'
        << "n_secondary = " << sc.net.n_secondary << '\n'
        << "w_primary = " << sc.net.w_primary << '\n'
        << "w_secondary = " << sc.net.w_secondary << '\n'
        << "m_primary = " << sc.net.m_primary << '\n'
        << "m_secondary = " << sc.net.m_secondary << '\n'
        << "lambda_primary = " << sc.net.lambda_primary << '\n'
        << "lambda_secondary = " << sc.net.lambda_secondary << '\n'
        << "idle_slot_us = " << slot << '\n'
        << "tp_suc_us = " << denormalize_slots(sc.timing.tp_suc, slot) << '\n'
        << "ts_suc_us = " << denormalize_slots(sc.timing.ts_suc, slot) << '\n'
        << "tp_col_us = " << denormalize_slots(sc.timing.tp_col, slot) << '\n'
        << "ts_col_us = " << denormalize_slots(sc.timing.ts_col, slot) << '\n'
        << "difs_us = " << denormalize_slots(sc.timing.difs, slot) << '\n'
        << "eifs_us = " << denormalize_slots(sc.timing.eifs, slot) << '\n'
        << "scan_t_us = " << denormalize_slots(sc.timing.scan_t, slot) << '\n'
        << "period_T_us = " << denormalize_slots(sc.timing.period_T, slot) << '\n'
        << "scheme = " << scheme_name(sc.scheme.scheme) << '\n'
        << "beta = " << sc.scheme.beta << '\n';
}

} // namespace dcfcoex
