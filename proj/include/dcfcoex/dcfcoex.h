/* dcfcoex -- throughput analysis and simulation of a primary 802.11 DCF
 * network sharing a channel with a periodically-scanning secondary network.
 *
 * C interface: opaque handles plus plain structs of doubles. Every function
 * returning dcx_status reports failure details through dcx_last_error().
 * Handles are not thread-safe; use one per thread or guard externally.
 */
#ifndef DCFCOEX_H
#define DCFCOEX_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DCX_API __declspec(dllexport)
#else
#define DCX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dcx_status {
    DCX_OK = 0,
    DCX_ERR_INVALID = 1,   /* bad parameter / config key / infeasible input */
    DCX_ERR_NO_CONVERGE = 2,
    DCX_ERR_IO = 3,
    DCX_ERR_INTERNAL = 4
} dcx_status;

typedef enum dcx_scheme {
    DCX_SCHEME_SENSING = 0,
    DCX_SCHEME_SILENCE = 1,
    DCX_SCHEME_COEXIST = 2
} dcx_scheme;

/* Message for the most recent failure on the calling thread. */
DCX_API const char* dcx_last_error(void);
DCX_API const char* dcx_version(void);

/* --- scenario ----------------------------------------------------------- */

/* A scenario bundles node counts, contention parameters, traffic
 * intensities, all timing durations and the secondary-access scheme. */
typedef struct dcx_scenario dcx_scenario;

/* Fresh scenario preloaded with the reference 802.11 parameter set
 * (W=32, m=4, TpSuc=TsSuc=1178us, TpCol=TsCol=864us, DIFS=50us, EIFS=364us,
 * T=500ms, t=50us, 20us idle slot, 6 primary / 15 secondary saturated nodes,
 * sensing scheme). */
DCX_API dcx_scenario* dcx_scenario_new(void);
DCX_API dcx_scenario* dcx_scenario_clone(const dcx_scenario* sc);
/* Load from a flat key=value file ('#' comments). NULL on error. */
DCX_API dcx_scenario* dcx_scenario_load(const char* path);
DCX_API void dcx_scenario_free(dcx_scenario* sc);

/* Keys: n_primary n_secondary w_primary w_secondary m_primary m_secondary
 * lambda_primary lambda_secondary tp_suc_us ts_suc_us tp_col_us ts_col_us
 * difs_us eifs_us scan_t_us period_T_us idle_slot_us scheme beta.
 * Values are decimal strings; scheme takes sensing|silence|coexist. */
DCX_API dcx_status dcx_scenario_set(dcx_scenario* sc, const char* key,
                                    const char* value);
/* Numeric read-back; microsecond keys return microseconds. */
DCX_API dcx_status dcx_scenario_get(const dcx_scenario* sc, const char* key,
                                    double* out);
DCX_API dcx_status dcx_scenario_validate(const dcx_scenario* sc);
DCX_API dcx_status dcx_scenario_save(const dcx_scenario* sc, const char* path);

/* --- analytic solution --------------------------------------------------- */

typedef struct dcx_solution {
    /* primary-only contention */
    double tau_p1, p_p1;
    /* both networks contending */
    double tau_p2, tau_s2, p_p2, p_s2;
    double residual1, residual2;
    int32_t iterations1, iterations2;
} dcx_solution;

typedef struct dcx_scan_model {
    /* slot-type probabilities, primary-only */
    double p_idle, p_succ, p_coll, p_slot;
    /* slot-type probabilities, both networks */
    double q_ii, q_si, q_is, q_ci, q_ic, q_cc, q_slot, q_idle_primary;
    /* scan outcome chain */
    double alpha_b, alpha_i, alpha_c;
} dcx_scan_model;

typedef struct dcx_throughput {
    int32_t scheme; /* dcx_scheme */
    double pt;
    double st;
    double st_conditional;
    double alpha_c;
    double beta;
    double baseline_pt;
} dcx_throughput;

DCX_API dcx_status dcx_solve(const dcx_scenario* sc, dcx_solution* out);
DCX_API dcx_status dcx_scan(const dcx_scenario* sc, dcx_scan_model* out);
DCX_API dcx_status dcx_throughput_report(const dcx_scenario* sc, dcx_throughput* out);

/* --- simulator ----------------------------------------------------------- */

typedef struct dcx_sim_options {
    uint64_t run_length_ts; /* 0 = 500000 */
    uint64_t warmup_ts;     /* UINT64_MAX = 5% of run length */
    uint64_t seed;
    int32_t ticks_per_slot; /* 0 = 20 */
    /* 0 = scans poll the channel once per slot of the window (default);
     * 1 = any nonzero overlap with a primary transmission counts */
    int32_t continuous_overlap_detection;
    const char* trace_path; /* NULL = no per-slot trace */
} dcx_sim_options;

typedef struct dcx_sim_stats {
    uint64_t s1_idle, s1_succ, s1_coll;
    uint64_t s2_ii, s2_si, s2_is, s2_ci, s2_ic, s2_cc;
    uint64_t frag_success, frag_collision;
    uint64_t scans_total, scans_busy;
    uint64_t ts_total, ts_measured;
    int64_t ticks_total, ticks_measured;
    int64_t useful_primary_ticks, useful_secondary_ticks;
    /* estimates; *_ok flags are 0 when the counts could not support one */
    double tau_p1_hat, tau_p2_hat, tau_s2_hat;
    int32_t tau_p1_ok, tau_p2_ok, tau_s2_ok;
    double alpha_c_hat; /* NaN without scans */
    double pt_hat, st_hat;
} dcx_sim_stats;

DCX_API void dcx_sim_options_init(dcx_sim_options* opt);
DCX_API dcx_status dcx_simulate(const dcx_scenario* sc, const dcx_sim_options* opt,
                                dcx_sim_stats* out);

/* --- optimizer ----------------------------------------------------------- */

typedef struct dcx_opt_request {
    double loss_cap; /* 0 = 0.10 */
    /* NULL grids fall back to t in {0,5,..,600}us, Ws in {4..512},
     * beta in {0.05,..,1.00} */
    const double* t_us_grid;
    size_t t_us_count;
    const int32_t* ws_grid;
    size_t ws_count;
    const double* beta_grid;
    size_t beta_count;
} dcx_opt_request;

typedef struct dcx_opt_point {
    double t_us;
    int32_t w_s;
    double beta;
    double pt, st;
    int32_t feasible;
} dcx_opt_point;

typedef struct dcx_opt_result dcx_opt_result;

DCX_API void dcx_opt_request_init(dcx_opt_request* req);
/* Scheme and fixed parameters come from the scenario. */
DCX_API dcx_status dcx_optimize(const dcx_scenario* sc, const dcx_opt_request* req,
                                dcx_opt_result** out);
DCX_API void dcx_opt_result_free(dcx_opt_result* r);
DCX_API int32_t dcx_opt_result_feasible(const dcx_opt_result* r);
DCX_API double dcx_opt_result_baseline_pt(const dcx_opt_result* r);
DCX_API dcx_status dcx_opt_result_best(const dcx_opt_result* r, dcx_opt_point* out);
DCX_API size_t dcx_opt_result_rows(const dcx_opt_result* r);
DCX_API dcx_status dcx_opt_result_row(const dcx_opt_result* r, size_t index,
                                      dcx_opt_point* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DCFCOEX_H */
