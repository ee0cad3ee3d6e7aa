#include "dcfcoex/dcfcoex.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "optimizer.hpp"
#include "params.hpp"
#include "simulator.hpp"
#include "throughput.hpp"

using namespace dcfcoex;

struct dcx_scenario {
    Scenario sc;
};

struct dcx_opt_result {
    OptimizationResult r;
};

namespace {

thread_local std::string g_last_error;

dcx_status fail(dcx_status code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename Fn>
dcx_status guarded(Fn&& fn) {
    try {
        fn();
        return DCX_OK;
    } catch (const NoConvergence& e) {
        return fail(DCX_ERR_NO_CONVERGE, e.what());
    } catch (const InvalidParameter& e) {
        return fail(DCX_ERR_INVALID, e.what());
    } catch (const std::bad_alloc&) {
        return fail(DCX_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DCX_ERR_INTERNAL, e.what());
    }
}

dcx_scheme to_c(Scheme s) {
    switch (s) {
    case Scheme::Sensing: return DCX_SCHEME_SENSING;
    case Scheme::SilentPeriod: return DCX_SCHEME_SILENCE;
    case Scheme::Coexist: return DCX_SCHEME_COEXIST;
    }
    return DCX_SCHEME_SENSING;
}

} // namespace

extern "C" {

const char* dcx_last_error(void) { return g_last_error.c_str(); }

const char* dcx_version(void) { return "dcfcoex 1.0.0"; }

dcx_scenario* dcx_scenario_new(void) {
    try {
        return new dcx_scenario{preset_paper_2011()};
    } catch (...) {
        return nullptr;
    }
}

dcx_scenario* dcx_scenario_clone(const dcx_scenario* sc) {
    if (!sc) return nullptr;
    try {
        return new dcx_scenario{sc->sc};
    } catch (...) {
        return nullptr;
    }
}

dcx_scenario* dcx_scenario_load(const char* path) {
    if (!path) {
        g_last_error = "path is null";
        return nullptr;
    }
    try {
        return new dcx_scenario{load_scenario_file(path)};
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return nullptr;
    }
}

void dcx_scenario_free(dcx_scenario* sc) { delete sc; }

dcx_status dcx_scenario_set(dcx_scenario* sc, const char* key, const char* value) {
    if (!sc || !key || !value) return fail(DCX_ERR_INVALID, "null argument");
    return guarded([&] { scenario_set(sc->sc, key, value); });
}

dcx_status dcx_scenario_get(const dcx_scenario* sc, const char* key, double* out) {
    if (!sc || !key || !out) return fail(DCX_ERR_INVALID, "null argument");
    return guarded([&] { *out = scenario_get(sc->sc, key); });
}

dcx_status dcx_scenario_validate(const dcx_scenario* sc) {
    if (!sc) return fail(DCX_ERR_INVALID, "null argument");
    return guarded([&] { validate(sc->sc); });
}

dcx_status dcx_scenario_save(const dcx_scenario* sc, const char* path) {
    if (!sc || !path) return fail(DCX_ERR_INVALID, "null argument");
    return guarded([&] {
        std::ofstream out(path);
        if (!out) throw std::runtime_error(std::string("cannot open '") + path + "'");
        save_scenario(sc->sc, out);
        if (!out) throw std::runtime_error(std::string("write failed for '") + path + "'");
    });
}

dcx_status dcx_solve(const dcx_scenario* sc, dcx_solution* out) {
    if (!sc || !out) return fail(DCX_ERR_INVALID, "null argument");
    return guarded([&] {
        validate(sc->sc);
        State1Solution s1 = solve_state1(sc->sc.net);
        State2Solution s2 = solve_state2(sc->sc.net);
        *out = dcx_solution{s1.tau_p1, s1.p_p1, s2.tau_p2, s2.tau_s2,
                            s2.p_p2, s2.p_s2, s1.residual, s2.residual,
                            s1.iterations, s2.iterations};
    });
}

dcx_status dcx_scan(const dcx_scenario* sc, dcx_scan_model* out) {
    if (!sc || !out) return fail(DCX_ERR_INVALID, "null argument");
    return guarded([&] {
        SolvedScenario s = solve_scenario(sc->sc);
        *out = dcx_scan_model{s.slots1.p_idle, s.slots1.p_succ, s.slots1.p_coll,
                              s.slots1.p_slot, s.slots2.q_ii, s.slots2.q_si,
                              s.slots2.q_is, s.slots2.q_ci, s.slots2.q_ic,
                              s.slots2.q_cc, s.slots2.q_slot,
                              s.slots2.q_idle_primary, s.scan.alpha_b,
                              s.scan.alpha_i, s.scan.alpha_c};
    });
}

dcx_status dcx_throughput_report(const dcx_scenario* sc, dcx_throughput* out) {
    if (!sc || !out) return fail(DCX_ERR_INVALID, "null argument");
    return guarded([&] {
        SolvedScenario s = solve_scenario(sc->sc);
        *out = dcx_throughput{static_cast<int32_t>(to_c(s.report.scheme)),
                              s.report.pt, s.report.st, s.report.st_conditional,
                              s.report.alpha_c, s.report.beta, s.report.baseline_pt};
    });
}

void dcx_sim_options_init(dcx_sim_options* opt) {
    if (!opt) return;
    opt->run_length_ts = 0;
    opt->warmup_ts = UINT64_MAX;
    opt->seed = 1;
    opt->ticks_per_slot = 0;
    opt->continuous_overlap_detection = 0;
    opt->trace_path = nullptr;
}

dcx_status dcx_simulate(const dcx_scenario* sc, const dcx_sim_options* opt,
                        dcx_sim_stats* out) {
    if (!sc || !out) return fail(DCX_ERR_INVALID, "null argument");
    return guarded([&] {
        SimConfig cfg;
        cfg.scenario = sc->sc;
        if (opt) {
            if (opt->run_length_ts) cfg.run_length_ts = opt->run_length_ts;
            cfg.warmup_ts = opt->warmup_ts == UINT64_MAX ? SimConfig::kDefaultWarmup
                                                         : opt->warmup_ts;
            cfg.seed = opt->seed;
            if (opt->ticks_per_slot) cfg.ticks_per_slot = opt->ticks_per_slot;
            cfg.detection = opt->continuous_overlap_detection
                                ? ScanDetection::ContinuousOverlap
                                : ScanDetection::SlotSampled;
        }
        std::ofstream trace;
        if (opt && opt->trace_path) {
            trace.open(opt->trace_path);
            if (!trace)
                throw std::runtime_error(std::string("cannot open trace file '") +
                                         opt->trace_path + "'");
            cfg.trace = &trace;
        }
        SimStats s = run_simulation(cfg);
        *out = dcx_sim_stats{};
        out->s1_idle = s.s1_idle;
        out->s1_succ = s.s1_succ;
        out->s1_coll = s.s1_coll;
        out->s2_ii = s.s2_ii;
        out->s2_si = s.s2_si;
        out->s2_is = s.s2_is;
        out->s2_ci = s.s2_ci;
        out->s2_ic = s.s2_ic;
        out->s2_cc = s.s2_cc;
        out->frag_success = s.frag_success;
        out->frag_collision = s.frag_collision;
        out->scans_total = s.scans_total;
        out->scans_busy = s.scans_busy;
        out->ts_total = s.ts_total;
        out->ts_measured = s.ts_measured;
        out->ticks_total = s.ticks_total;
        out->ticks_measured = s.ticks_measured;
        out->useful_primary_ticks = s.useful_primary_ticks;
        out->useful_secondary_ticks = s.useful_secondary_ticks;
        out->tau_p1_hat = s.tau_p1_hat.tau;
        out->tau_p2_hat = s.tau_p2_hat.tau;
        out->tau_s2_hat = s.tau_s2_hat.tau;
        out->tau_p1_ok = s.tau_p1_hat.available;
        out->tau_p2_ok = s.tau_p2_hat.available;
        out->tau_s2_ok = s.tau_s2_hat.available;
        out->alpha_c_hat = s.alpha_c_hat;
        out->pt_hat = s.pt_hat;
        out->st_hat = s.st_hat;
    });
}

void dcx_opt_request_init(dcx_opt_request* req) {
    if (!req) return;
    std::memset(req, 0, sizeof(*req));
}

dcx_status dcx_optimize(const dcx_scenario* sc, const dcx_opt_request* req,
                        dcx_opt_result** out) {
    if (!sc || !out) return fail(DCX_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        OptimizationProblem p;
        p.scheme = sc->sc.scheme.scheme;
        p.net = sc->sc.net;
        p.timing = sc->sc.timing;
        p.loss_cap = 0.10;
        if (req) {
            if (req->loss_cap != 0.0) p.loss_cap = req->loss_cap;
            if (req->t_us_grid)
                p.t_us_grid.assign(req->t_us_grid, req->t_us_grid + req->t_us_count);
            if (req->ws_grid)
                p.ws_grid.assign(req->ws_grid, req->ws_grid + req->ws_count);
            if (req->beta_grid)
                p.beta_grid.assign(req->beta_grid, req->beta_grid + req->beta_count);
        }
        auto* result = new dcx_opt_result{optimize(p)};
        *out = result;
    });
}

void dcx_opt_result_free(dcx_opt_result* r) { delete r; }

int32_t dcx_opt_result_feasible(const dcx_opt_result* r) {
    return r && r->r.feasible ? 1 : 0;
}

double dcx_opt_result_baseline_pt(const dcx_opt_result* r) {
    return r ? r->r.baseline_pt : 0.0;
}

dcx_status dcx_opt_result_best(const dcx_opt_result* r, dcx_opt_point* out) {
    if (!r || !out) return fail(DCX_ERR_INVALID, "null argument");
    *out = dcx_opt_point{r->r.t_us, r->r.w_s, r->r.beta, r->r.pt, r->r.st,
                         r->r.feasible ? 1 : 0};
    return DCX_OK;
}

size_t dcx_opt_result_rows(const dcx_opt_result* r) {
    return r ? r->r.grid.size() : 0;
}

dcx_status dcx_opt_result_row(const dcx_opt_result* r, size_t index,
                              dcx_opt_point* out) {
    if (!r || !out) return fail(DCX_ERR_INVALID, "null argument");
    if (index >= r->r.grid.size()) return fail(DCX_ERR_INVALID, "row index out of range");
    const GridPoint& p = r->r.grid[index];
    *out = dcx_opt_point{p.t_us, p.w_s, p.beta, p.pt, p.st, p.feasible ? 1 : 0};
    return DCX_OK;
}

} // extern "C"
