#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>

#include "qvar/backtest.hpp"
#include "qvar/core.hpp"
#include "qvar/cqar.hpp"
#include "qvar/csv.hpp"
#include "qvar/diagnostics.hpp"
#include "qvar/ingest.hpp"
#include "qvar/qar.hpp"
#include "qvar/random.hpp"

namespace qvar::cli {
namespace {

using json = nlohmann::ordered_json;
using Rows = std::vector<std::vector<std::string>>;

std::string fmt(double x) { return csv::format(x); }
std::string fmt(std::size_t x) { return std::to_string(x); }

double to_double(const std::string& s, std::string_view what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("cannot parse " + std::string(what) + " value '" + s + "'");
    }
    return v;
}

Series load_series(OutputSet& out, const std::string& path) {
    return Series(csv::read_values(out.input(path)));
}

ingest::ColumnMap load_map(OutputSet& out, const std::string& path) {
    if (path.empty()) return {};
    return ingest::ColumnMap::from_json_file(out.input(path));
}

ingest::PreparedSeries load_prc(OutputSet& out, const std::string& input, const std::string& map_path,
                                std::uint64_t seed, ingest::PrcParse* parsed = nullptr) {
    const auto map = load_map(out, map_path);
    auto p = ingest::parse_prc(out.input(input), map);
    if (parsed != nullptr) *parsed = p;
    return ingest::prepare(std::move(p.events), seed);
}

double l1(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

Rows values_rows(std::span<const double> v) {
    Rows rows;
    rows.reserve(v.size());
    for (double x : v) rows.push_back({fmt(x)});
    return rows;
}

Rows correlogram_rows(const diagnostics::CorrelogramResult& r) {
    Rows rows;
    for (std::size_t i = 0; i < r.lags.size(); ++i) {
        rows.push_back({fmt(r.lags[i]), fmt(r.values[i]), fmt(r.confidence_band)});
    }
    return rows;
}

Rows bic_rows(const diagnostics::LagSelection& s) {
    Rows rows;
    for (std::size_t i = 0; i < s.candidate_lags.size(); ++i) {
        rows.push_back({fmt(s.candidate_lags[i]), fmt(s.bic_values[i])});
    }
    return rows;
}

Rows summary_rows(const std::vector<ingest::SummaryRow>& rs) {
    Rows rows;
    for (const auto& r : rs) {
        rows.push_back({r.label, fmt(r.min), fmt(r.median), fmt(r.mean), fmt(r.sd), fmt(r.max), fmt(r.count)});
    }
    return rows;
}

const std::vector<std::string> kSummaryHeader{"label", "min", "median", "mean", "sd", "max", "count"};

std::string summary_table(const std::string& title, const std::vector<ingest::SummaryRow>& rs) {
    std::string s = title + "\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %12s %12s %12s %12s %14s %6s\n", "", "min", "median", "mean",
                  "sd", "max", "count");
    s += line;
    for (const auto& r : rs) {
        std::snprintf(line, sizeof line, "%-6s %12.4g %12.4g %12.4g %12.4g %14.4g %6zu\n", r.label.c_str(),
                      r.min, r.median, r.mean, r.sd, r.max, r.count);
        s += line;
    }
    return s;
}

json backtest_json(const std::string& model, const backtest::BacktestReport& r) {
    json j;
    j["model"] = model;
    j["quantile"] = r.quantile;
    j["T"] = r.n_obs;
    j["exp"] = r.expected_violations;
    j["act"] = r.actual_violations;
    j["uc.LR"] = r.uc_stat;
    j["uc.LRp"] = r.uc_pvalue;
    j["cc.LR"] = r.cc_stat;
    j["cc.LRp"] = r.cc_pvalue;
    j["uc.D"] = std::string(backtest::to_string(r.uc_decision));
    j["cc.D"] = std::string(backtest::to_string(r.cc_decision));
    return j;
}

using LabelledReport = std::pair<std::string, backtest::BacktestReport>;

std::string backtest_table(const std::vector<LabelledReport>& rows) {
    std::string s;
    char line[256];
    std::snprintf(line, sizeof line, "%-10s %8s %5s %5s %8s %8s %5s %5s\n", "model", "quantile", "exp", "act",
                  "uc.LRp", "cc.LRp", "uc.D", "cc.D");
    s += line;
    for (const auto& [label, r] : rows) {
        std::snprintf(line, sizeof line, "%-10s %8.2f %5zu %5zu %8.4f %8.4f %5s %5s\n", label.c_str(),
                      r.quantile, r.expected_violations, r.actual_violations, r.uc_pvalue, r.cc_pvalue,
                      std::string(backtest::to_string(r.uc_decision)).c_str(),
                      std::string(backtest::to_string(r.cc_decision)).c_str());
        s += line;
    }
    return s;
}

// Where the online learner starts: the last `lag` values before `start` are context.
struct Window {
    std::span<const double> context;
    std::span<const double> scored;
    std::size_t offset = 0;
};

Window online_window(const Series& s, std::size_t n_train, std::size_t lag) {
    const std::size_t start = n_train == 0 ? lag : n_train;
    if (start < lag || start >= s.size()) {
        throw std::invalid_argument("series too short for an online run with lag " + std::to_string(lag));
    }
    return {s.values().subspan(start - lag, lag), s.values().subspan(start), start};
}

struct OnlineRun {
    std::vector<double> gamma;
    std::vector<double> acceptance;
    LossLedger ledger;
    double acceptance_ratio = 0.0;
};

OnlineRun run_online(const cqar::CqarConfig& cfg, const Window& w) {
    cqar::CqarState st(cfg, w.context);
    OnlineRun r;
    for (double y : w.scored) {
        r.gamma.push_back(st.predict());
        st.observe(y);
        r.acceptance.push_back(cqar::acceptance_ratio(st));
    }
    r.ledger = st.ledger();
    r.acceptance_ratio = cqar::acceptance_ratio(st);
    return r;
}

Rows online_rows(const OnlineRun& r, const Window& w) {
    Rows rows;
    double cum = 0.0;
    for (std::size_t i = 0; i < w.scored.size(); ++i) {
        cum += r.ledger.per_step[i];
        rows.push_back({fmt(w.offset + i), fmt(w.scored[i]), fmt(r.gamma[i]), fmt(r.ledger.per_step[i]),
                        fmt(cum), fmt(r.acceptance[i])});
    }
    return rows;
}

const std::vector<std::string> kOnlineHeader{"t", "y", "gamma", "loss", "cumulative_loss", "acceptance_ratio"};

Rows forecast_rows(const Series& s, std::size_t start, const std::vector<double>& path) {
    Rows rows;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const double y = s[start + i];
        rows.push_back({fmt(start + i), fmt(y), fmt(path[i]), y > path[i] ? "1" : "0"});
    }
    return rows;
}

const std::vector<std::string> kForecastHeader{"t", "y", "var_forecast", "violation"};

Rows tuning_rows(const std::vector<cqar::TuningRow>& rows) {
    Rows out;
    for (const auto& r : rows) {
        out.push_back({fmt(r.reg_a), fmt(r.proposal_sd), fmt(r.acceptance_ratio), fmt(r.pinball_loss)});
    }
    return out;
}

const std::vector<std::string> kTuningHeader{"a", "sigma", "acceptance_ratio", "pinball_loss"};

std::string rows_as_csv(const std::vector<std::string>& header, const Rows& rows) {
    std::ostringstream os;
    csv::write_row(os, header);
    for (const auto& r : rows) csv::write_row(os, r);
    return os.str();
}

// Average regret against a fixed QAR model and the bound evaluated at each step.
Rows regret_rows(const OnlineRun& learner, const qar::QarModel& comparator, const Series& s, const Window& w,
                 const cqar::CqarConfig& cfg, const std::string* alpha_label) {
    if (w.offset < comparator.lag) {
        throw std::invalid_argument("comparator lag exceeds the available context");
    }
    const auto comp_path = qar::forecast_path(comparator, s, w.offset, s.size());
    const LossLedger comp = cumulative_loss(w.scored, comp_path, cfg.alpha);
    const auto report = cqar::regret_curve(learner.ledger, comp);
    const auto bound = cqar::bound_curve(w.context, w.scored, cfg.reg_a, cfg.lag, l1(comparator.theta));
    Rows rows;
    for (std::size_t i = 0; i < report.average_regret.size(); ++i) {
        std::vector<std::string> r;
        if (alpha_label != nullptr) r.push_back(*alpha_label);
        r.push_back(fmt(i + 1));
        r.push_back(fmt(report.average_regret[i]));
        r.push_back(fmt(bound[i]));
        rows.push_back(std::move(r));
    }
    return rows;
}

qar::QarModel read_model(OutputSet& out, const std::string& path) {
    std::ifstream in(out.input(path));
    const json j = json::parse(in);
    qar::QarModel m;
    m.alpha = QuantileLevel(j.at("alpha").get<double>());
    m.lag = j.at("lag").get<std::size_t>();
    m.theta = j.at("theta").get<std::vector<double>>();
    if (m.theta.size() != m.lag + 1) throw std::invalid_argument("comparator theta has the wrong length");
    return m;
}

std::size_t choose_lag(std::size_t requested, const Series& train, double bic_alpha, std::size_t max_p) {
    if (requested > 0) return requested;
    return diagnostics::select_lag(train, QuantileLevel(bic_alpha), max_p).chosen_lag;
}

}  // namespace

void cmd_ingest(const Globals& g, const IngestOpts& o, OutputSet& out) {
    ingest::PrcParse parsed;
    const auto p = load_prc(out, o.input, o.column_map, g.seed, &parsed);
    out.write_csv(o.out_sizes, {"value"}, values_rows(p.log_sizes.values()));
    out.write_csv(o.out_times, {"value"}, values_rows(p.log_interarrivals.values()));
    std::cout << "events: " << p.ordered.size() << " (dropped incomplete " << parsed.dropped_incomplete
              << ", non-hacking " << parsed.non_hacking << ")\n"
              << "log sizes: " << p.log_sizes.size() << ", log inter-arrivals: " << p.log_interarrivals.size()
              << "\n";
}

void cmd_generate(const Globals& g, const GenerateOpts& o, OutputSet& out) {
    ingest::SyntheticSpec spec;
    if (o.process == "ar1") {
        spec.process = ingest::Process::GaussianAr1;
    } else if (o.process == "qar1") {
        spec.process = ingest::Process::Qar1;
    } else {
        throw std::invalid_argument("unknown process '" + o.process + "' (expected ar1 or qar1)");
    }
    spec.n = o.n;
    spec.intercept = o.intercept;
    spec.phi = o.phi;
    spec.noise_sd = o.noise_sd;
    spec.theta0_table = o.theta0;
    spec.theta1_table = o.theta1;
    spec.burn_in = o.burn_in;
    spec.seed = g.seed;
    const Series s = ingest::generate(spec);
    out.write_csv(o.output, {"value"}, values_rows(s.values()));
    std::cout << "wrote " << s.size() << " values\n";
}

void cmd_stats(const Globals& g, const StatsOpts& o, OutputSet& out) {
    const auto p = load_prc(out, o.input, o.column_map, g.seed);
    const auto b = ingest::org_breakdown(p);
    out.write_csv("stats_sizes.csv", kSummaryHeader, summary_rows(b.sizes));
    out.write_csv("stats_interarrivals.csv", kSummaryHeader, summary_rows(b.interarrivals));
    std::cout << summary_table("breach sizes", b.sizes) << "\n"
              << summary_table("inter-arrival times (days)", b.interarrivals);
}

void cmd_explore(const Globals&, const ExploreOpts& o, OutputSet& out) {
    const Series s = load_series(out, o.input);
    const auto a = diagnostics::acf(s, o.max_lag);
    const auto pc = diagnostics::pacf(s, o.max_lag);
    const auto sel = diagnostics::select_lag(s, QuantileLevel(o.alpha), o.max_p);
    out.write_csv("acf.csv", {"lag", "value", "band"}, correlogram_rows(a));
    out.write_csv("pacf.csv", {"lag", "value", "band"}, correlogram_rows(pc));
    out.write_csv("bic.csv", {"p", "bic"}, bic_rows(sel));
    json j;
    j["n"] = s.size();
    j["alpha"] = o.alpha;
    j["max_p"] = o.max_p;
    j["n_scored"] = sel.n_scored;
    j["chosen_lag"] = sel.chosen_lag;
    out.write_json("explore.json", j);
    std::cout << "chosen lag: " << sel.chosen_lag << "\n";
}

void cmd_fit_qar(const Globals&, const FitQarOpts& o, OutputSet& out) {
    const Series s = load_series(out, o.input);
    const auto [train, test] = ingest::split(s, o.train_frac);
    const std::size_t p = choose_lag(o.lag, train, o.bic_alpha, o.max_p);
    const auto m = qar::fit(train, p, QuantileLevel(o.alpha));
    const auto path = qar::forecast_path(m, s, train.size(), s.size());

    json j;
    j["alpha"] = m.alpha.value();
    j["lag"] = m.lag;
    j["theta"] = m.theta;
    j["train_loss"] = m.train_loss;
    j["n_train"] = train.size();
    j["n_test"] = test.size();
    j["n_scored"] = m.n_scored;
    out.write_json("model.json", j);
    out.write_csv("forecast.csv", kForecastHeader, forecast_rows(s, train.size(), path));
    std::cout << "train " << train.size() << ", test " << test.size() << ", lag " << p << "\n";
}

void cmd_run_cqar(const Globals& g, const RunCqarOpts& o, OutputSet& out) {
    if (o.alphas.empty()) throw std::invalid_argument("at least one --alpha is required");
    const Series s = load_series(out, o.input);
    std::size_t n_train = 0;
    Series train;
    if (o.train_frac > 0.0) {
        train = ingest::split(s, o.train_frac).first;
        n_train = train.size();
    } else if (o.tune) {
        throw std::invalid_argument("--tune needs a training split (--train-frac > 0)");
    }
    const std::size_t lag = choose_lag(o.lag, n_train > 0 ? train : s, o.bic_alpha, o.max_p);

    std::optional<qar::QarModel> comparator;
    if (!o.comparator.empty()) comparator = read_model(out, o.comparator);

    cqar::CqarConfig base;
    base.lag = lag;
    base.mcmc_iters = o.iters;
    base.burn_in = o.burn_in;
    base.proposal_sd = o.sigma;
    base.reg_a = o.reg_a;
    base.clamp_to_range = o.clamp;

    if (o.tune) {
        cqar::CqarConfig tcfg = base;
        tcfg.alpha = QuantileLevel(o.alphas.front());
        tcfg.seed = derive_seed(g.seed, 999);
        const auto rows = cqar::tune(tcfg, train, o.reg_grid, o.sigma_grid);
        const auto& best = cqar::best_row(rows);
        base.reg_a = best.reg_a;
        base.proposal_sd = best.proposal_sd;
        out.write_csv("tuning.csv", kTuningHeader, tuning_rows(rows));
        std::cout << rows_as_csv(kTuningHeader, tuning_rows(rows));
    }

    const Window w = online_window(s, n_train, lag);
    json summary = json::array();
    bool matched = !comparator.has_value();
    for (std::size_t i = 0; i < o.alphas.size(); ++i) {
        cqar::CqarConfig cfg = base;
        cfg.alpha = QuantileLevel(o.alphas[i]);
        cfg.seed = derive_seed(g.seed, 1000 + i);
        const OnlineRun r = run_online(cfg, w);
        const std::string tag = fmt(o.alphas[i]);
        out.write_csv("cqar_" + tag + ".csv", kOnlineHeader, online_rows(r, w));

        if (comparator && std::abs(comparator->alpha.value() - o.alphas[i]) < 1e-12) {
            matched = true;
            out.write_csv("regret_" + tag + ".csv", {"t", "avg_regret", "bound"},
                          regret_rows(r, *comparator, s, w, cfg, nullptr));
        }
        json j;
        j["alpha"] = o.alphas[i];
        j["lag"] = lag;
        j["reg_a"] = cfg.reg_a;
        j["sigma"] = cfg.proposal_sd;
        j["iters"] = cfg.mcmc_iters;
        j["burn_in"] = cfg.burn_in;
        j["n_context"] = w.offset;
        j["n_scored"] = w.scored.size();
        j["acceptance_ratio"] = r.acceptance_ratio;
        j["total_loss"] = r.ledger.cumulative;
        summary.push_back(j);
        std::cout << "alpha " << tag << ": loss " << fmt(r.ledger.cumulative) << ", acceptance "
                  << fmt(r.acceptance_ratio) << "\n";
    }
    if (!matched) {
        throw std::invalid_argument("comparator quantile level matches none of the --alpha values");
    }
    out.write_json("cqar_summary.json", summary);
}

void cmd_backtest(const Globals& g, const BacktestOpts& o, OutputSet& out) {
    const auto table = csv::read_file(out.input(o.input));
    const std::size_t cy = table.column("y");
    const std::size_t cf = table.column(table.has_column("var_forecast") ? "var_forecast" : "gamma");
    std::vector<double> y;
    std::vector<double> f;
    for (const auto& row : table.rows) {
        y.push_back(to_double(row.at(cy), "y"));
        f.push_back(to_double(row.at(cf), "forecast"));
    }
    std::size_t t0 = 0;
    if (table.has_column("t") && !table.rows.empty()) {
        t0 = static_cast<std::size_t>(to_double(table.rows.front().at(table.column("t")), "t"));
    }
    const auto recs = backtest::extract_violations(y, f, t0);
    const auto rep = backtest::run_backtest(recs, QuantileLevel(o.alpha), g.significance);
    json j = backtest_json(o.input, rep);
    j["significance"] = g.significance;
    const std::string text = backtest_table({{"forecast", rep}});
    out.write_json("backtest.json", j);
    out.write_text("backtest.txt", text);
    std::cout << text;
}

void cmd_reproduce(const Globals& g, const ReproduceOpts& o, OutputSet& out) {
    if (o.input.empty() || !std::filesystem::is_regular_file(o.input)) {
        throw MissingInput(
            "PRC export not found" + (o.input.empty() ? std::string() : " at '" + o.input + "'") +
            ". Download the 'Chronology of Data Breaches' CSV from privacyrights.org and pass it with --input.");
    }
    ingest::PrcParse parsed;
    const auto prepared = load_prc(out, o.input, o.column_map, g.seed, &parsed);
    out.write_csv("sizes.csv", {"value"}, values_rows(prepared.log_sizes.values()));
    out.write_csv("interarrivals.csv", {"value"}, values_rows(prepared.log_interarrivals.values()));
    const auto b = ingest::org_breakdown(prepared);
    out.write_csv("table1.csv", kSummaryHeader, summary_rows(b.sizes));
    out.write_csv("table2.csv", kSummaryHeader, summary_rows(b.interarrivals));

    struct Study {
        std::string name;
        const Series* series = nullptr;
        std::size_t lag_override = 0;
        std::string table;
        std::size_t lag = 0;
        std::size_t n_train = 0;
        std::vector<qar::QarModel> models;
    };
    std::vector<Study> studies(2);
    studies[0].name = "sizes";
    studies[0].series = &prepared.log_sizes;
    studies[0].lag_override = o.sizes_lag;
    studies[0].table = "table3.json";
    studies[1].name = "interarrivals";
    studies[1].series = &prepared.log_interarrivals;
    studies[1].lag_override = o.times_lag;
    studies[1].table = "table4.json";

    json summary;
    summary["events"] = prepared.ordered.size();
    summary["dropped_incomplete"] = parsed.dropped_incomplete;
    summary["non_hacking"] = parsed.non_hacking;

    for (auto& st : studies) {
        const Series& s = *st.series;
        const auto [train, test] = ingest::split(s, o.train_frac);
        st.n_train = train.size();
        const auto sel = diagnostics::select_lag(train, QuantileLevel(o.bic_alpha), o.max_p);
        st.lag = st.lag_override > 0 ? st.lag_override : sel.chosen_lag;
        const std::size_t max_lag = std::min(o.max_lag, s.size() - 2);
        out.write_csv("bic_" + st.name + ".csv", {"p", "bic"}, bic_rows(sel));
        out.write_csv("acf_" + st.name + ".csv", {"lag", "value", "band"}, correlogram_rows(diagnostics::acf(s, max_lag)));
        out.write_csv("pacf_" + st.name + ".csv", {"lag", "value", "band"},
                      correlogram_rows(diagnostics::pacf(s, max_lag)));

        const std::string label = "QAR(" + std::to_string(st.lag) + ")";
        std::vector<LabelledReport> reports;
        json rows = json::array();
        for (double a : o.alphas) {
            const auto m = qar::fit(train, st.lag, QuantileLevel(a));
            const auto path = qar::forecast_path(m, s, train.size(), s.size());
            out.write_csv("qar_" + st.name + "_" + fmt(a) + ".csv", kForecastHeader,
                          forecast_rows(s, train.size(), path));
            const auto rep = backtest::run_backtest(
                backtest::extract_violations(test.values(), path, train.size()), QuantileLevel(a), g.significance);
            rows.push_back(backtest_json(label, rep));
            reports.emplace_back(label, rep);
            st.models.push_back(m);
        }
        json t;
        t["series"] = st.name;
        t["lag"] = st.lag;
        t["bic_lag"] = sel.chosen_lag;
        t["n_train"] = train.size();
        t["n_test"] = test.size();
        t["significance"] = g.significance;
        t["rows"] = rows;
        out.write_json(st.table, t);
        std::cout << st.name << " (n=" << s.size() << ", train " << train.size() << ", test " << test.size()
                  << ")\n"
                  << backtest_table(reports) << "\n";
        summary["lag_" + st.name] = st.lag;
        summary["bic_lag_" + st.name] = sel.chosen_lag;
        summary["n_train_" + st.name] = train.size();
        summary["n_test_" + st.name] = test.size();
    }

    // Online learner on inter-arrival times, tuned on the training split.
    const Study& times = studies[1];
    const Series& s = *times.series;
    const Series train = s.slice(0, times.n_train);
    cqar::CqarConfig base;
    base.lag = times.lag;
    base.mcmc_iters = o.iters;
    base.burn_in = o.burn_in;
    base.alpha = QuantileLevel(o.alphas.front());
    base.seed = derive_seed(g.seed, 999);
    const auto grid = cqar::tune(base, train, o.reg_grid, o.sigma_grid);
    const auto& best = cqar::best_row(grid);
    out.write_csv("table5.csv", kTuningHeader, tuning_rows(grid));
    base.reg_a = best.reg_a;
    base.proposal_sd = best.proposal_sd;

    const Window w = online_window(s, times.n_train, times.lag);
    const std::string label = "CQAR(" + std::to_string(times.lag) + ")";
    std::vector<LabelledReport> reports;
    json rows = json::array();
    Rows regret;
    for (std::size_t i = 0; i < o.alphas.size(); ++i) {
        cqar::CqarConfig cfg = base;
        cfg.alpha = QuantileLevel(o.alphas[i]);
        cfg.seed = derive_seed(g.seed, 1000 + i);
        const OnlineRun r = run_online(cfg, w);
        const std::string tag = fmt(o.alphas[i]);
        out.write_csv("cqar_interarrivals_" + tag + ".csv", kOnlineHeader, online_rows(r, w));
        const auto rep = backtest::run_backtest(backtest::extract_violations(w.scored, r.gamma, w.offset),
                                                cfg.alpha, g.significance);
        json row = backtest_json(label, rep);
        row["acceptance_ratio"] = r.acceptance_ratio;
        row["total_loss"] = r.ledger.cumulative;
        rows.push_back(row);
        reports.emplace_back(label, rep);
        for (auto& rr : regret_rows(r, times.models[i], s, w, cfg, &tag)) regret.push_back(std::move(rr));
    }
    json t6;
    t6["series"] = "interarrivals";
    t6["lag"] = times.lag;
    t6["reg_a"] = base.reg_a;
    t6["sigma"] = base.proposal_sd;
    t6["iters"] = base.mcmc_iters;
    t6["burn_in"] = base.burn_in;
    t6["significance"] = g.significance;
    t6["rows"] = rows;
    out.write_json("table6.json", t6);
    out.write_csv("regret.csv", {"alpha", "t", "avg_regret", "bound"}, regret);

    summary["cqar_reg_a"] = base.reg_a;
    summary["cqar_sigma"] = base.proposal_sd;
    out.write_json("summary.json", summary);
    std::cout << "interarrivals online (a=" << fmt(base.reg_a) << ", sigma=" << fmt(base.proposal_sd) << ")\n"
              << backtest_table(reports);
}

}  // namespace qvar::cli
