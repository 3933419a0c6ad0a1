#include "randapprox/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "randapprox/approxsets.hpp"
#include "randapprox/config.hpp"
#include "randapprox/csv.hpp"
#include "randapprox/stats.hpp"

namespace randapprox {

namespace {

namespace fs = std::filesystem;

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct VerifyFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunContext {
    std::string config_path;
    std::string out_dir = "out";
    std::string frozen_path = "configs/frozen_thresholds.json";
    std::optional<std::uint64_t> seed_override;
    std::optional<std::uint64_t> exact_bound_override;
    unsigned threads = 0;
    bool ci = false;

    Json raw_config;
    Json frozen;  // null unless loaded

    void load() {
        raw_config = load_json_file(config_path);
        set_worker_threads(threads);
    }

    ExperimentConfig config(const Json& j) const {
        ExperimentConfig cfg = config_from_json(j);
        if (seed_override) cfg.seed = *seed_override;
        if (exact_bound_override) cfg.exact_bound = *exact_bound_override;
        return cfg;
    }

    ExperimentConfig config() const { return config(raw_config); }

    void load_frozen() {
        frozen = load_json_file(frozen_path);
        if (!frozen.is_object() || !frozen.contains("oracle_run"))
            throw ConfigError("frozen thresholds file must name its oracle_run");
    }

    void emit(const std::string& name, const std::string& body) const {
        fs::create_directories(out_dir);
        write_text_file((fs::path(out_dir) / name).string(), body);
    }

    void write_manifest(const std::string& command, const ExperimentConfig& cfg, const std::string& started) const {
        RunManifest manifest;
        manifest.command = command;
        manifest.seed = cfg.seed;
        manifest.hash = config_hash(cfg);
        manifest.config = config_to_json(cfg);
        manifest.frozen = frozen;
        manifest.started = started;
        manifest.finished = iso_now();
        emit("manifest.json", canonical_dump(manifest.to_json()));
    }
};

std::string kind_name(SetKind k) {
    switch (k) {
        case SetKind::P: return "P";
        case SetKind::S: return "S";
        case SetKind::Q: return "Q";
        case SetKind::Explicit: return "explicit";
    }
    return "?";
}

void require_exact_window(const ExperimentConfig& cfg) {
    if (cfg.window_hi > cfg.exact_bound)
        throw ResourceError("window_hi " + std::to_string(cfg.window_hi) + " exceeds exact bound " +
                            std::to_string(cfg.exact_bound));
}

void run_sets(RunContext& ctx) {
    const ExperimentConfig cfg = ctx.config();
    require_exact_window(cfg);
    const std::string started = iso_now();
    const MembershipOracle oracle(cfg.seed, cfg.p, cfg.epsilon, cfg.window_hi);
    std::optional<SieveTables> tables;
    if (cfg.n_max >= cfg.window_hi && cfg.n_max >= 2) tables.emplace(cfg.n_max);
    CsvWriter csv({"n", "kind", "a"});
    for (std::uint64_t n = cfg.window_lo; n <= cfg.window_hi; ++n) {
        const NumeratorSet s = s_set(n, cfg.epsilon);
        // divisor-sum route must agree with the scan when tables are on
        if (tables && n >= 2 && s.members.size() != phi_divisor_sum_at(n, cfg.epsilon, &*tables))
            throw std::logic_error("S-set count disagrees with the divisor-sum route at n=" + std::to_string(n));
        const NumeratorSet p = oracle.sample_p(n);
        const NumeratorSet q = oracle.sample_q_from(s);
        for (const NumeratorSet* set : {&s, &p, &q})
            for (std::uint64_t a : set->members)
                csv.row({std::to_string(n), kind_name(set->kind), std::to_string(a)});
    }
    ctx.emit("sets.csv", csv.body());
    ctx.write_manifest("sets", cfg, started);
}

void run_measure(RunContext& ctx) {
    const ExperimentConfig cfg = ctx.config();
    require_exact_window(cfg);
    const std::string started = iso_now();
    const MembershipOracle oracle(cfg.seed, cfg.p, cfg.epsilon, cfg.window_hi);
    CsvWriter csv({"n", "kind", "count", "lambda_num", "lambda_den", "lambda_dec"});
    for (std::uint64_t n = cfg.window_lo; n <= cfg.window_hi; ++n) {
        const Dyadic64 psi_n = eval_psi(cfg.psi, n);
        const NumeratorSet s = s_set(n, cfg.epsilon);
        for (const NumeratorSet& set : {s, oracle.sample_p(n), oracle.sample_q_from(s)}) {
            const ApproxSet e = build_e(set, psi_n);
            std::vector<std::string> cells{std::to_string(n), kind_name(set.kind),
                                           std::to_string(set.members.size())};
            for (std::string& c : rat_cells(e.arcs.measure())) cells.push_back(std::move(c));
            csv.row(cells);
        }
    }
    ctx.emit("measures.csv", csv.body());
    ctx.write_manifest("measure", cfg, started);
}

void run_overlap(RunContext& ctx) {
    const ExperimentConfig cfg = ctx.config();
    require_exact_window(cfg);
    const std::uint64_t width = cfg.window_hi - cfg.window_lo + 1;
    if (width * (width + 1) / 2 > 500000)
        throw ResourceError("overlap window too wide: " + std::to_string(width) + " values");
    const std::string started = iso_now();
    const MembershipOracle oracle(cfg.seed, cfg.p, cfg.epsilon, cfg.window_hi);
    std::vector<ApproxSet> e_q;
    for (std::uint64_t n = cfg.window_lo; n <= cfg.window_hi; ++n)
        e_q.push_back(build_e(oracle.sample_q(n), eval_psi(cfg.psi, n)));
    CsvWriter csv({"m", "n", "lambda_exact_num", "lambda_exact_den", "expected_num", "expected_den"});
    for (std::uint64_t m = cfg.window_lo; m <= cfg.window_hi; ++m) {
        for (std::uint64_t n = m; n <= cfg.window_hi; ++n) {
            const ApproxSet& em = e_q[m - cfg.window_lo];
            const ApproxSet& en = e_q[n - cfg.window_lo];
            const Rat exact = m == n ? em.arcs.measure() : overlap(em, en);
            const Rat expected = expected_overlap_q(m, n, cfg.psi, cfg.p, cfg.epsilon);
            csv.row({std::to_string(m), std::to_string(n), rat_num(exact).str(), rat_den(exact).str(),
                     rat_num(expected).str(), rat_den(expected).str()});
        }
    }
    ctx.emit("overlap.csv", csv.body());
    ctx.write_manifest("overlap", cfg, started);
}

void run_expect(RunContext& ctx) {
    const ExperimentConfig cfg = ctx.config();
    require_exact_window(cfg);
    const std::string started = iso_now();
    CsvWriter csv({"n", "arc", "expected_num", "expected_den", "expected_dec"});
    for (std::uint64_t n = cfg.window_lo; n <= cfg.window_hi; ++n) {
        for (std::uint32_t arc = 0; arc < cfg.partition; ++arc) {
            const Arc j = Arc::half(Rat(Int(arc), Int(cfg.partition)), Rat(Int(arc + 1), Int(cfg.partition)));
            const Rat expected = expected_measure_q(n, cfg.psi, cfg.p, cfg.epsilon, j);
            std::vector<std::string> cells{std::to_string(n), std::to_string(arc)};
            for (std::string& c : rat_cells(expected)) cells.push_back(std::move(c));
            csv.row(cells);
        }
    }
    ctx.emit("expect.csv", csv.body());
    ctx.write_manifest("expect", cfg, started);
}

std::string qia_csv(const QiaSeries& series) {
    CsvWriter csv({"t", "N_t", "J_index", "num_num", "num_den", "den_num", "den_den", "ratio_num", "ratio_den",
                   "ratio_dec", "rol_num", "rol_den", "rol_dec"});
    for (const QiaPoint& pt : series.points) {
        std::vector<std::string> cells{std::to_string(pt.t), std::to_string(pt.n_t), std::to_string(pt.arc),
                                       rat_num(pt.numerator_sum).str(), rat_den(pt.numerator_sum).str(),
                                       rat_num(pt.denominator_sum).str(), rat_den(pt.denominator_sum).str()};
        if (pt.ratio) {
            cells.push_back(rat_num(*pt.ratio).str());
            cells.push_back(rat_den(*pt.ratio).str());
            cells.push_back(rat_to_decimal(*pt.ratio));
            cells.push_back(rat_num(*pt.ratio_over_lambda).str());
            cells.push_back(rat_den(*pt.ratio_over_lambda).str());
            cells.push_back(rat_to_decimal(*pt.ratio_over_lambda));
        } else {
            for (int i = 0; i < 6; ++i) cells.push_back("NA");
        }
        csv.row(cells);
    }
    return csv.body();
}

void run_qia(RunContext& ctx) {
    const ExperimentConfig cfg = ctx.config();
    const std::string started = iso_now();
    const QiaSeries series = qia_experiment(cfg);
    ctx.emit("qia.csv", qia_csv(series));
    Json report;
    report["checkpoints"] = series.checkpoints;
    report["truncated"] = series.truncated;
    if (series.min_ratio_over_lambda) {
        report["min_ratio_over_lambda"] = rat_to_string(*series.min_ratio_over_lambda);
        report["min_ratio_over_lambda_dec"] = rat_to_decimal(*series.min_ratio_over_lambda);
    } else {
        report["min_ratio_over_lambda"] = nullptr;
    }
    ctx.emit("qia_report.json", canonical_dump(report));
    ctx.write_manifest("qia", cfg, started);
}

void run_coverage(RunContext& ctx) {
    const ExperimentConfig cfg = ctx.config();
    const std::string started = iso_now();
    CsvWriter csv({"window_lo", "window_hi", "mode", "method", "grid", "fraction"});
    for (HitMode mode : {HitMode::P, HitMode::Q}) {
        const CoverageResult r = window_coverage(cfg, mode, CoverageMethod::Grid);
        csv.row({std::to_string(cfg.window_lo), std::to_string(cfg.window_hi), mode == HitMode::P ? "P" : "Q",
                 "grid", std::to_string(cfg.grid), rat_to_decimal(Rat(Int(r.hits), Int(r.grid)))});
        if (cfg.window_hi <= cfg.exact_bound) {
            const CoverageResult e = window_coverage(cfg, mode, CoverageMethod::Exact);
            csv.row({std::to_string(cfg.window_lo), std::to_string(cfg.window_hi),
                     mode == HitMode::P ? "P" : "Q", "exact", std::to_string(cfg.grid),
                     rat_to_decimal(*e.exact_measure)});
        }
    }
    ctx.emit("coverage.csv", csv.body());
    ctx.write_manifest("coverage", cfg, started);
}

void run_dichotomy(RunContext& ctx) {
    if (!ctx.raw_config.contains("convergent") || !ctx.raw_config.contains("divergent"))
        throw ConfigError("dichotomy config needs {convergent, divergent} sub-configs");
    const ExperimentConfig conv = ctx.config(ctx.raw_config.at("convergent"));
    const ExperimentConfig div = ctx.config(ctx.raw_config.at("divergent"));
    const std::string started = iso_now();
    const DichotomyReport report = dichotomy_experiment(conv, div);

    CsvWriter csv({"branch", "window_lo", "n", "coverage"});
    csv.row({"convergent", std::to_string(conv.window_lo), std::to_string(conv.window_hi),
             rat_to_decimal(Rat(Int(static_cast<std::uint64_t>(report.conv_coverage * conv.grid + 0.5)),
                                Int(conv.grid)))});
    for (const auto& [n_t, frac] : report.div_trajectory)
        csv.row({"divergent", std::to_string(div.window_lo), std::to_string(n_t),
                 rat_to_decimal(Rat(Int(static_cast<std::uint64_t>(frac * div.grid + 0.5)), Int(div.grid)))});
    ctx.emit("dichotomy.csv", csv.body());

    Json j;
    j["convergent"]["tail_bound"] = rat_to_string(report.conv_tail_bound);
    j["convergent"]["tail_bound_dec"] = rat_to_decimal(report.conv_tail_bound);
    j["convergent"]["coverage"] = report.conv_coverage;
    j["divergent"]["coverage"] = report.div_coverage;
    j["divergent"]["sparse_checkpoints"] = report.div_sparse;
    ctx.emit("dichotomy_report.json", canonical_dump(j));

    // manifest carries the divergent branch; the convergent branch is
    // recoverable from the config file itself
    ctx.write_manifest("dichotomy", div, started);
}

Rat frozen_rat(const Json& frozen, const char* section, const char* key) {
    if (!frozen.contains(section) || !frozen.at(section).contains(key))
        throw ConfigError(std::string("frozen thresholds missing ") + section + "." + key);
    return parse_rational(frozen.at(section).at(key).get<std::string>());
}

void run_verify(RunContext& ctx, const std::string& lemma_id) {
    const ExperimentConfig cfg = ctx.config();
    if (ctx.ci) ctx.load_frozen();
    const std::string started = iso_now();
    Json report;
    report["lemma"] = lemma_id;
    bool ok = true;
    std::string failure;

    if (lemma_id == "lemma-S") {
        const Arc j = ctx.raw_config.contains("arc") ? arc_from_json(ctx.raw_config.at("arc"))
                                                     : Arc::half(Rat(0), Rat(1));
        const LemmaSReport r = verify_lemma_s(cfg.window_lo, cfg.window_hi, cfg.epsilon, j, true);
        CsvWriter csv({"n", "count", "ratio_num", "ratio_den", "ratio_dec"});
        for (const LemmaSRow& row : r.rows) {
            std::vector<std::string> cells{std::to_string(row.n), std::to_string(row.count)};
            for (std::string& c : rat_cells(row.ratio)) cells.push_back(std::move(c));
            csv.row(cells);
        }
        ctx.emit("verify_lemma_s.csv", csv.body());
        report["min_ratio"] = rat_to_string(r.min_ratio);
        report["min_ratio_dec"] = rat_to_decimal(r.min_ratio);
        report["argmin_n"] = r.argmin_n;
        report["first_positive_n"] = r.first_positive_n;
        if (ctx.ci) {
            const Rat want = frozen_rat(ctx.frozen, "lemma_s", "min_ratio");
            if (r.min_ratio != want) {
                ok = false;
                failure = "min ratio " + rat_to_string(r.min_ratio) + " != frozen " + rat_to_string(want);
            }
        }
    } else if (lemma_id == "overlap-bound") {
        std::vector<std::uint64_t> grid;
        if (ctx.raw_config.contains("n_grid")) {
            for (const auto& v : ctx.raw_config.at("n_grid"))
                grid.push_back(parse_rational(v.get<std::string>()).convert_to<std::uint64_t>());
        } else {
            for (int i = 0; i < 10; ++i)
                grid.push_back(cfg.window_lo + (cfg.window_hi - cfg.window_lo) * i / 9);
        }
        const OverlapBoundReport r = verify_overlap_bound(grid, cfg.psi, cfg.p, cfg.epsilon);
        CsvWriter csv({"N", "lhs_num", "lhs_den", "lhs_dec", "rhs_core_dec", "rhs_linear_dec", "ratio_dec"});
        for (const OverlapBoundRow& row : r.rows)
            csv.row({std::to_string(row.n_cap), rat_num(row.lhs).str(), rat_den(row.lhs).str(),
                     rat_to_decimal(row.lhs), rat_to_decimal(row.rhs_core), rat_to_decimal(row.rhs_linear),
                     rat_to_decimal(row.ratio)});
        ctx.emit("verify_overlap_bound.csv", csv.body());
        report["max_c"] = rat_to_string(r.max_ratio);
        report["max_c_dec"] = rat_to_decimal(r.max_ratio);
        report["log_slope"] = r.log_slope;
        if (ctx.ci) {
            const Rat want = frozen_rat(ctx.frozen, "overlap_bound", "max_c");
            const double slope_max = std::stod(ctx.frozen.at("overlap_bound").at("slope_max").get<std::string>());
            if (r.max_ratio != want) {
                ok = false;
                failure = "max C " + rat_to_string(r.max_ratio) + " != frozen " + rat_to_string(want);
            } else if (r.log_slope > slope_max) {
                ok = false;
                failure = "C grows with N: slope " + std::to_string(r.log_slope);
            }
        }
    } else if (lemma_id == "var-subadd") {
        require_exact_window(cfg);
        const VarSubaddReport r =
            verify_var_subadditivity(cfg.psi, cfg.p, cfg.epsilon, cfg.window_hi, cfg.partition, cfg.trials, cfg.seed);
        report["lhs_var"] = rat_to_string(r.lhs_var);
        report["rhs_sum_var"] = rat_to_string(r.rhs_sum_var);
        report["ratio"] = r.ratio;
        report["trials"] = r.trials;
        report["status"] = r.status == VerifyStatus::Ok ? "ok" : "warning";
        if (ctx.ci) {
            const Rat tau = frozen_rat(ctx.frozen, "var_subadd", "tau");
            if (r.lhs_var > (Rat(1) + tau) * r.rhs_sum_var) {
                ok = false;
                failure = "variance subadditivity violated beyond tau";
            }
        }
    } else if (lemma_id == "vartwo") {
        require_exact_window(cfg);
        const VartwoReport r =
            verify_vartwo_bound(cfg.psi, cfg.p, cfg.epsilon, cfg.window_hi, cfg.partition, cfg.trials, cfg.seed);
        CsvWriter csv({"m", "n", "var_num", "var_den", "base_num", "base_den", "c"});
        for (const VartwoRow& row : r.rows)
            csv.row({std::to_string(row.m), std::to_string(row.n), rat_num(row.variance).str(),
                     rat_den(row.variance).str(), rat_num(row.base).str(), rat_den(row.base).str(),
                     rat_to_decimal(Rat(Int(static_cast<std::int64_t>(row.c * 1e9)), Int(1000000000)))});
        ctx.emit("verify_vartwo.csv", csv.body());
        report["max_c"] = r.max_c;
        if (ctx.ci) {
            const double c_max = std::stod(ctx.frozen.at("vartwo").at("max_c_allowed").get<std::string>());
            if (r.max_c > c_max) {
                ok = false;
                failure = "vartwo constant " + std::to_string(r.max_c) + " above frozen cap";
            }
        }
    } else if (lemma_id == "qk-bound") {
        PsiSpec quarter = cfg.psi;
        quarter.clamp_quarter = true;
        std::uint64_t bound_violations = 0, single_violations = 0, pairs = 0;
        for (std::uint64_t n = 3; n <= cfg.window_hi; ++n) {
            for (std::uint64_t m = 2; m < n; ++m) {
                const QkProfile profile = qk_profile(m, n, quarter, cfg.epsilon);
                ++pairs;
                if (!profile.bound_ok) ++bound_violations;
                if (!profile.single_intersection) ++single_violations;
            }
        }
        report["pairs"] = pairs;
        report["bound_violations"] = bound_violations;
        report["single_intersection_violations"] = single_violations;
        if (ctx.ci && (bound_violations > 0 || single_violations > 0)) {
            ok = false;
            failure = "qk violations detected";
        }
    } else {
        throw ConfigError("unknown lemma id: " + lemma_id +
                          " (expected lemma-S | overlap-bound | var-subadd | vartwo | qk-bound)");
    }

    report["ci"] = ctx.ci;
    report["ok"] = ok;
    if (!ok) report["failure"] = failure;
    ctx.emit("verify_" + lemma_id + ".json", canonical_dump(report));
    ctx.write_manifest("verify " + lemma_id, cfg, started);
    if (!ok) throw VerifyFailure(failure);
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"randapprox: exact measures and seeded experiments for randomly restricted rational approximation"};
    app.require_subcommand(1);

    RunContext ctx;
    app.add_option("--config", ctx.config_path, "JSON config path")->required();
    app.add_option("--out", ctx.out_dir, "output directory");
    std::uint64_t seed_opt = 0;
    auto* seed_flag = app.add_option("--seed", seed_opt, "override config seed");
    std::uint64_t bound_opt = 0;
    auto* bound_flag = app.add_option("--exact-bound", bound_opt, "override exact materialization bound");
    app.add_option("--threads", ctx.threads, "worker threads (0 = auto)");

    auto* cmd_sets = app.add_subcommand("sets", "emit S_n / P_n / Q_n tables");
    auto* cmd_measure = app.add_subcommand("measure", "emit exact E-set measures");
    auto* cmd_overlap = app.add_subcommand("overlap", "emit exact and expected overlap matrices");
    auto* cmd_expect = app.add_subcommand("expect", "emit closed-form expectations per partition arc");
    auto* cmd_qia = app.add_subcommand("qia", "quasi-independence-on-average ratios at sparse checkpoints");
    auto* cmd_coverage = app.add_subcommand("coverage", "grid/exact window coverage");
    auto* cmd_dichotomy = app.add_subcommand("dichotomy", "paired convergence/divergence experiment");
    auto* cmd_verify = app.add_subcommand("verify", "run a lemma verifier");
    std::string lemma_id;
    cmd_verify->add_option("lemma", lemma_id, "lemma-S | overlap-bound | var-subadd | vartwo | qk-bound")
        ->required();
    cmd_verify->add_flag("--ci", ctx.ci, "assert frozen thresholds");
    cmd_verify->add_option("--frozen", ctx.frozen_path, "frozen thresholds JSON");

    // allow the shared options to appear after the subcommand
    for (CLI::App* sub : {cmd_sets, cmd_measure, cmd_overlap, cmd_expect, cmd_qia, cmd_coverage, cmd_dichotomy,
                          cmd_verify})
        sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cout << Json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump() << "\n";
        return 1;
    }

    try {
        if (seed_flag->count()) ctx.seed_override = seed_opt;
        if (bound_flag->count()) ctx.exact_bound_override = bound_opt;
        ctx.load();
        if (cmd_sets->parsed()) run_sets(ctx);
        else if (cmd_measure->parsed()) run_measure(ctx);
        else if (cmd_overlap->parsed()) run_overlap(ctx);
        else if (cmd_expect->parsed()) run_expect(ctx);
        else if (cmd_qia->parsed()) run_qia(ctx);
        else if (cmd_coverage->parsed()) run_coverage(ctx);
        else if (cmd_dichotomy->parsed()) run_dichotomy(ctx);
        else if (cmd_verify->parsed()) run_verify(ctx, lemma_id);
        return 0;
    } catch (const ConfigError& e) {
        std::cout << Json{{"error", {{"type", "config"}, {"message", e.what()}}}}.dump() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cout << Json{{"error", {{"type", "input"}, {"message", e.what()}}}}.dump() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        std::cout << Json{{"error", {{"type", "resource"}, {"message", e.what()}}}}.dump() << "\n";
        return 4;
    } catch (const VerifyFailure& e) {
        std::cout << Json{{"error", {{"type", "verify"}, {"message", e.what()}}}}.dump() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cout << Json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump() << "\n";
        return 1;
    }
}

}  // namespace randapprox
