// Command-line front end: solve one scenario, sweep a variable, optimize the
// secondary parameters, run seeded simulations, or validate the analytic
// model against the simulator. Talks to the library exclusively through the
// C API. All tabular output is CSV with a fixed column order so repeated runs
// with identical inputs produce byte-identical files.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcfcoex/dcfcoex.h"

namespace {

struct ScenarioDeleter {
    void operator()(dcx_scenario* sc) const { dcx_scenario_free(sc); }
};
using ScenarioPtr = std::unique_ptr<dcx_scenario, ScenarioDeleter>;

struct OptResultDeleter {
    void operator()(dcx_opt_result* r) const { dcx_opt_result_free(r); }
};
using OptResultPtr = std::unique_ptr<dcx_opt_result, OptResultDeleter>;

[[noreturn]] void die(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(2);
}

void check(dcx_status st, const std::string& what) {
    if (st != DCX_OK) die(what + ": " + dcx_last_error());
}

const std::vector<std::string>& scenario_keys() {
    static const std::vector<std::string> keys = {
        "n_primary",       "n_secondary",      "w_primary",   "w_secondary",
        "m_primary",       "m_secondary",      "lambda_primary",
        "lambda_secondary","idle_slot_us",     "tp_suc_us",   "ts_suc_us",
        "tp_col_us",       "ts_col_us",        "difs_us",     "eifs_us",
        "scan_t_us",       "period_T_us",      "beta"};
    return keys;
}

// Shared scenario-building flags: --preset/--config plus one flag per
// config key.
struct ScenarioFlags {
    std::string preset = "paper-2011";
    std::string config_path;
    std::string scheme;
    std::map<std::string, std::string> values;

    void attach(CLI::App* cmd) {
        cmd->add_option("--preset", preset, "named parameter preset (paper-2011)")
            ->capture_default_str();
        cmd->add_option("--config", config_path, "scenario config file (key = value)");
        cmd->add_option("--scheme", scheme, "sensing | silence | coexist");
        for (const std::string& key : scenario_keys()) {
            auto setter = [this, key](const std::string& v) {
                values[key] = v;
                return true;
            };
            cmd->add_option_function<std::string>("--" + key, setter, "config key " + key);
        }
    }

    ScenarioPtr build() const {
        ScenarioPtr sc;
        if (!config_path.empty()) {
            sc.reset(dcx_scenario_load(config_path.c_str()));
            if (!sc) die(std::string("loading config: ") + dcx_last_error());
        } else {
            if (preset != "paper-2011") die("unknown preset '" + preset + "'");
            sc.reset(dcx_scenario_new());
            if (!sc) die("scenario allocation failed");
        }
        if (!scheme.empty())
            check(dcx_scenario_set(sc.get(), "scheme", scheme.c_str()), "--scheme");
        for (const auto& [k, v] : values)
            check(dcx_scenario_set(sc.get(), k.c_str(), v.c_str()), "--" + k);
        check(dcx_scenario_validate(sc.get()), "scenario");
        return sc;
    }
};

std::vector<double> parse_values(const std::string& spec) {
    std::vector<double> out;
    if (spec.empty()) return out;
    if (spec.find(':') != std::string::npos) {
        double a = 0, b = 0, s = 1;
        char c1 = 0, c2 = 0;
        std::istringstream in(spec);
        in >> a >> c1 >> b >> c2 >> s;
        if (!in || c1 != ':' || c2 != ':' || s <= 0) die("bad range spec '" + spec + "'");
        for (double v = a; v <= b + 1e-9; v += s) out.push_back(v);
        return out;
    }
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) die("cannot open output file '" + path + "'");
    return file;
}

struct Summary {
    double mean = 0.0, se = 0.0;
    int n = 0;
};

Summary summarize(const std::vector<double>& xs) {
    Summary s;
    s.n = static_cast<int>(xs.size());
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= s.n;
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.se = std::sqrt(ss / (s.n - 1) / s.n);
    }
    return s;
}

int cmd_solve(const ScenarioFlags& flags, const std::string& csv_path) {
    ScenarioPtr sc = flags.build();
    dcx_solution sol{};
    dcx_scan_model scan{};
    dcx_throughput tp{};
    check(dcx_solve(sc.get(), &sol), "solve");
    check(dcx_scan(sc.get(), &scan), "scan model");
    check(dcx_throughput_report(sc.get(), &tp), "throughput");

    double ns = 0;
    check(dcx_scenario_get(sc.get(), "n_secondary", &ns), "n_secondary");

    std::cout.precision(6);
    std::cout << "state-1: tau_p1=" << sol.tau_p1 << " p_p1=" << sol.p_p1
              << "  (residual " << sol.residual1 << ")\n";
    if (ns == 0)
        std::cout << "state-2: degenerate (no secondary nodes), equals state-1\n";
    else
        std::cout << "state-2: tau_p2=" << sol.tau_p2 << " tau_s2=" << sol.tau_s2
                  << " p_p2=" << sol.p_p2 << " p_s2=" << sol.p_s2 << "  (residual "
                  << sol.residual2 << ")\n";
    std::cout << "slots-1: idle=" << scan.p_idle << " succ=" << scan.p_succ
              << " coll=" << scan.p_coll << " p_slot=" << scan.p_slot << "\n"
              << "slots-2: ii=" << scan.q_ii << " si=" << scan.q_si
              << " is=" << scan.q_is << " ci=" << scan.q_ci << " ic=" << scan.q_ic
              << " cc=" << scan.q_cc << " q_slot=" << scan.q_slot << "\n"
              << "scan:    alpha_b=" << scan.alpha_b << " alpha_i=" << scan.alpha_i
              << " alpha_c=" << scan.alpha_c << "\n"
              << "throughput: pt=" << tp.pt << " st=" << tp.st
              << " st_conditional=" << tp.st_conditional
              << " baseline_pt=" << tp.baseline_pt << "\n";

    if (!csv_path.empty()) {
        std::ofstream file;
        std::ostream& out = open_out(file, csv_path);
        out.precision(10);
        out << "tau_p1,p_p1,tau_p2,tau_s2,p_p2,p_s2,p_idle,p_succ,p_coll,p_slot,"
               "q_ii,q_si,q_is,q_ci,q_ic,q_cc,q_slot,alpha_b,alpha_i,alpha_c,"
               "pt,st,st_conditional,baseline_pt\n";
        out << sol.tau_p1 << ',' << sol.p_p1 << ',' << sol.tau_p2 << ',' << sol.tau_s2
            << ',' << sol.p_p2 << ',' << sol.p_s2 << ',' << scan.p_idle << ','
            << scan.p_succ << ',' << scan.p_coll << ',' << scan.p_slot << ','
            << scan.q_ii << ',' << scan.q_si << ',' << scan.q_is << ',' << scan.q_ci
            << ',' << scan.q_ic << ',' << scan.q_cc << ',' << scan.q_slot << ','
            << scan.alpha_b << ',' << scan.alpha_i << ',' << scan.alpha_c << ','
            << tp.pt << ',' << tp.st << ',' << tp.st_conditional << ','
            << tp.baseline_pt << '\n';
    }
    return 0;
}

int cmd_sweep(const ScenarioFlags& flags, const std::string& var,
              const std::string& values_spec, const std::string& out_path) {
    const std::vector<double> values = parse_values(values_spec);
    if (values.empty()) die("sweep needs a non-empty --values list");
    bool known = var == "beta" || var == "scan_t_us";
    for (const std::string& k :
         {"n_primary", "n_secondary", "w_secondary", "w_primary", "lambda_primary",
          "lambda_secondary", "m_primary", "m_secondary", "period_T_us"})
        known = known || var == k;
    if (!known) die("unknown sweep variable '" + var + "'");

    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out.precision(10);
    out << var
        << ",tau_p1,tau_p2,tau_s2,alpha_b,alpha_i,alpha_c,pt,st,st_conditional,"
           "baseline_pt\n";
    for (double v : values) {
        ScenarioPtr sc = flags.build();
        std::ostringstream vs;
        vs.precision(12);
        vs << v;
        check(dcx_scenario_set(sc.get(), var.c_str(), vs.str().c_str()), "--values");
        check(dcx_scenario_validate(sc.get()), "swept scenario");
        dcx_solution sol{};
        dcx_scan_model scan{};
        dcx_throughput tp{};
        check(dcx_solve(sc.get(), &sol), "solve");
        check(dcx_scan(sc.get(), &scan), "scan model");
        check(dcx_throughput_report(sc.get(), &tp), "throughput");
        out << vs.str() << ',' << sol.tau_p1 << ',' << sol.tau_p2 << ',' << sol.tau_s2
            << ',' << scan.alpha_b << ',' << scan.alpha_i << ',' << scan.alpha_c << ','
            << tp.pt << ',' << tp.st << ',' << tp.st_conditional << ','
            << tp.baseline_pt << '\n';
    }
    return 0;
}

int cmd_optimize(const ScenarioFlags& flags, double loss_cap,
                 const std::string& t_grid, const std::string& ws_grid,
                 const std::string& beta_grid, const std::string& grid_out) {
    ScenarioPtr sc = flags.build();
    dcx_opt_request req;
    dcx_opt_request_init(&req);
    req.loss_cap = loss_cap;
    std::vector<double> tg = parse_values(t_grid);
    std::vector<double> bg = parse_values(beta_grid);
    std::vector<int32_t> wg;
    for (double w : parse_values(ws_grid)) wg.push_back(static_cast<int32_t>(w));
    if (!tg.empty()) {
        req.t_us_grid = tg.data();
        req.t_us_count = tg.size();
    }
    if (!wg.empty()) {
        req.ws_grid = wg.data();
        req.ws_count = wg.size();
    }
    if (!bg.empty()) {
        req.beta_grid = bg.data();
        req.beta_count = bg.size();
    }

    dcx_opt_result* raw = nullptr;
    check(dcx_optimize(sc.get(), &req, &raw), "optimize");
    OptResultPtr result(raw);

    dcx_opt_point best{};
    check(dcx_opt_result_best(result.get(), &best), "result");
    double scheme = 0;
    dcx_scenario_get(sc.get(), "scheme", &scheme);
    const char* scheme_names[] = {"sensing", "silence", "coexist"};
    const char* sname = scheme_names[static_cast<int>(scheme)];

    std::cout.precision(6);
    std::cout << "scheme=" << sname
              << " feasible=" << (dcx_opt_result_feasible(result.get()) ? "yes" : "no")
              << " baseline_pt=" << dcx_opt_result_baseline_pt(result.get()) << "\n"
              << "best: w_s=" << best.w_s;
    if (scheme == 0) std::cout << " t_us=" << best.t_us;
    if (scheme == 1) std::cout << " beta=" << best.beta;
    std::cout << " st=" << best.st << " pt=" << best.pt << "\n";

    if (!grid_out.empty()) {
        std::ofstream file;
        std::ostream& out = open_out(file, grid_out);
        out.precision(10);
        out << "scheme,t_us,w_s,beta,pt,st,feasible\n";
        const size_t rows = dcx_opt_result_rows(result.get());
        for (size_t i = 0; i < rows; ++i) {
            dcx_opt_point p{};
            check(dcx_opt_result_row(result.get(), i, &p), "grid row");
            out << sname << ',' << p.t_us << ',' << p.w_s << ',' << p.beta << ','
                << p.pt << ',' << p.st << ',' << p.feasible << '\n';
        }
    }
    return dcx_opt_result_feasible(result.get()) ? 0 : 1;
}

int cmd_simulate(const ScenarioFlags& flags, std::uint64_t seed, int replications,
                 std::uint64_t run_length, std::uint64_t warmup,
                 const std::string& out_path, const std::string& trace_path) {
    if (replications < 1) die("--replications must be >= 1");
    if (!trace_path.empty() && replications != 1)
        die("--trace requires --replications 1");
    ScenarioPtr sc = flags.build();

    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out.precision(10);
    out << "replication,seed,ts_measured,scans,scans_busy,tau_p1_hat,tau_p2_hat,"
           "tau_s2_hat,alpha_c_hat,pt_hat,st_hat\n";

    std::vector<double> pts, sts, acs, t1s, t2s, ts2s;
    for (int rep = 0; rep < replications; ++rep) {
        dcx_sim_options opt;
        dcx_sim_options_init(&opt);
        opt.run_length_ts = run_length;
        opt.warmup_ts = warmup;
        opt.seed = seed + static_cast<std::uint64_t>(rep);
        if (!trace_path.empty()) opt.trace_path = trace_path.c_str();
        dcx_sim_stats st{};
        check(dcx_simulate(sc.get(), &opt, &st), "simulate");
        out << rep << ',' << opt.seed << ',' << st.ts_measured << ','
            << st.scans_total << ',' << st.scans_busy << ','
            << (st.tau_p1_ok ? st.tau_p1_hat : std::nan("")) << ','
            << (st.tau_p2_ok ? st.tau_p2_hat : std::nan("")) << ','
            << (st.tau_s2_ok ? st.tau_s2_hat : std::nan("")) << ','
            << st.alpha_c_hat << ',' << st.pt_hat << ',' << st.st_hat << '\n';
        pts.push_back(st.pt_hat);
        sts.push_back(st.st_hat);
        if (st.scans_total) acs.push_back(st.alpha_c_hat);
        if (st.tau_p1_ok) t1s.push_back(st.tau_p1_hat);
        if (st.tau_p2_ok) t2s.push_back(st.tau_p2_hat);
        if (st.tau_s2_ok) ts2s.push_back(st.tau_s2_hat);
    }

    auto report = [](const char* name, const Summary& s) {
        if (s.n == 0) return;
        std::cout << name << " = " << s.mean << " (se " << s.se << ", n=" << s.n
                  << ")\n";
    };
    std::cout.precision(6);
    report("pt", summarize(pts));
    report("st", summarize(sts));
    report("alpha_c", summarize(acs));
    report("tau_p1", summarize(t1s));
    report("tau_p2", summarize(t2s));
    report("tau_s2", summarize(ts2s));
    return 0;
}

struct ValidationScenario {
    std::string label;
    ScenarioPtr sc;
};

int cmd_validate(const ScenarioFlags& flags, bool paper_family,
                 const std::vector<std::string>& files, std::uint64_t seed,
                 int replications, std::uint64_t run_length) {
    std::vector<ValidationScenario> list;
    if (paper_family) {
        for (int npri : {6, 15, 30}) {
            for (int t_us : {50, 100, 150}) {
                ScenarioPtr sc = flags.build();
                check(dcx_scenario_set(sc.get(), "n_primary",
                                       std::to_string(npri).c_str()), "n_primary");
                check(dcx_scenario_set(sc.get(), "scan_t_us",
                                       std::to_string(t_us).c_str()), "scan_t_us");
                list.push_back({"np=" + std::to_string(npri) +
                                    ",t=" + std::to_string(t_us) + "us",
                                std::move(sc)});
            }
        }
    }
    for (const std::string& path : files) {
        ScenarioPtr sc(dcx_scenario_load(path.c_str()));
        if (!sc) die("loading '" + path + "': " + dcx_last_error());
        check(dcx_scenario_validate(sc.get()), path);
        list.push_back({path, std::move(sc)});
    }

    bool all_pass = true;
    std::cout << "scenario,metric,analytic,simulated,se,pass\n";
    for (const ValidationScenario& v : list) {
        dcx_solution sol{};
        dcx_scan_model scan{};
        dcx_throughput tp{};
        check(dcx_solve(v.sc.get(), &sol), "solve");
        check(dcx_scan(v.sc.get(), &scan), "scan");
        check(dcx_throughput_report(v.sc.get(), &tp), "throughput");

        std::vector<double> pts, sts, acs, t1s, t2s, ts2s;
        for (int rep = 0; rep < replications; ++rep) {
            dcx_sim_options opt;
            dcx_sim_options_init(&opt);
            opt.run_length_ts = run_length;
            opt.seed = seed + static_cast<std::uint64_t>(rep);
            dcx_sim_stats st{};
            check(dcx_simulate(v.sc.get(), &opt, &st), "simulate");
            pts.push_back(st.pt_hat);
            sts.push_back(st.st_hat);
            if (st.scans_total) acs.push_back(st.alpha_c_hat);
            if (st.tau_p1_ok) t1s.push_back(st.tau_p1_hat);
            if (st.tau_p2_ok) t2s.push_back(st.tau_p2_hat);
            if (st.tau_s2_ok) ts2s.push_back(st.tau_s2_hat);
        }
        auto row = [&](const char* metric, const Summary& s, double analytic,
                       bool extra_rel_check = false) {
            if (s.n == 0) return;
            // three standard errors, with a floor so a tiny SE on an
            // all-but-deterministic metric does not turn noise into failure
            double tol = 3.0 * s.se + 1e-9;
            bool pass = std::fabs(s.mean - analytic) <= tol;
            if (extra_rel_check && analytic > 0)
                pass = pass && std::fabs(s.mean - analytic) / analytic <= 0.05;
            all_pass = all_pass && pass;
            std::cout.precision(8);
            std::cout << v.label << ',' << metric << ',' << analytic << ',' << s.mean
                      << ',' << s.se << ',' << (pass ? 1 : 0) << '\n';
        };
        row("tau_p1", summarize(t1s), sol.tau_p1);
        row("tau_p2", summarize(t2s), sol.tau_p2);
        row("tau_s2", summarize(ts2s), sol.tau_s2);
        row("alpha_c", summarize(acs), scan.alpha_c);
        row("pt", summarize(pts), tp.pt, true);
        row("st", summarize(sts), tp.st);
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coexisting 802.11 DCF primary/secondary network analysis"};
    app.require_subcommand(1);

    ScenarioFlags solve_flags, sweep_flags, opt_flags, sim_flags, val_flags;

    auto* solve = app.add_subcommand("solve", "solve one scenario analytically");
    solve_flags.attach(solve);
    std::string solve_csv;
    solve->add_option("--csv", solve_csv, "also write the solution as CSV");

    auto* sweep = app.add_subcommand("sweep", "solve across a swept variable");
    sweep_flags.attach(sweep);
    std::string sweep_var, sweep_values, sweep_out;
    sweep->add_option("--var", sweep_var, "variable to sweep")->required();
    sweep->add_option("--values", sweep_values,
                      "comma list or start:stop:step range")->required();
    sweep->add_option("--out", sweep_out, "output CSV path (default stdout)");

    auto* opt = app.add_subcommand("optimize", "grid-search the secondary parameters");
    opt_flags.attach(opt);
    double loss_cap = 0.10;
    std::string t_grid, ws_grid, beta_grid, grid_out;
    opt->add_option("--loss-cap", loss_cap, "max primary throughput loss")
        ->capture_default_str();
    opt->add_option("--t-grid", t_grid, "scan lengths in us (list or range)");
    opt->add_option("--ws-grid", ws_grid, "secondary windows (list or range)");
    opt->add_option("--beta-grid", beta_grid, "contention fractions (list or range)");
    opt->add_option("--grid-out", grid_out, "write every evaluated point as CSV");

    auto* sim = app.add_subcommand("simulate", "run the slot-level simulator");
    sim_flags.attach(sim);
    std::uint64_t seed = 1, run_length = 500'000;
    std::uint64_t warmup = UINT64_MAX;
    int replications = 1;
    std::string sim_out, trace_path;
    sim->add_option("--seed", seed, "base RNG seed")->capture_default_str();
    sim->add_option("--replications", replications, "independent replications")
        ->capture_default_str();
    sim->add_option("--run-length", run_length, "transmission slots per replication")
        ->capture_default_str();
    sim->add_option("--warmup", warmup, "warmup slots discarded (default 5%)");
    sim->add_option("--out", sim_out, "per-replication CSV path (default stdout)");
    sim->add_option("--trace", trace_path, "per-slot trace file (1 replication only)");

    auto* val = app.add_subcommand("validate", "simulator vs analytic comparison");
    val_flags.attach(val);
    bool paper_family = false;
    std::vector<std::string> val_files;
    std::uint64_t val_seed = 1, val_run_length = 500'000;
    int val_reps = 10;
    val->add_flag("--paper-family", paper_family,
                  "include the built-in 9-scenario family (np x scan length)");
    val->add_option("scenarios", val_files, "scenario config files to validate");
    val->add_option("--seed", val_seed, "base RNG seed")->capture_default_str();
    val->add_option("--replications", val_reps, "replications per scenario")
        ->capture_default_str();
    val->add_option("--run-length", val_run_length, "slots per replication")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return cmd_solve(solve_flags, solve_csv);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_var, sweep_values, sweep_out);
    if (opt->parsed())
        return cmd_optimize(opt_flags, loss_cap, t_grid, ws_grid, beta_grid, grid_out);
    if (sim->parsed())
        return cmd_simulate(sim_flags, seed, replications, run_length, warmup, sim_out,
                            trace_path);
    if (val->parsed())
        return cmd_validate(val_flags, paper_family, val_files, val_seed, val_reps,
                            val_run_length);
    return 2;
}
