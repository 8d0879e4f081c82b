#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <system_error>

#include "commands.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

json option_value(const CLI::Option* opt) {
    if (opt->get_expected_max() == 0) return opt->count() > 0;
    const bool multi = opt->get_expected_max() > 1;
    std::vector<std::string> vals = opt->count() > 0 ? opt->results() : std::vector<std::string>{};
    if (opt->count() == 0) {
        const std::string def = opt->get_default_str();
        if (def.empty()) return multi ? json::array() : json(nullptr);
        if (!multi) return def;
        // CLI11 renders vector defaults as "[a,b,c]".
        std::string body = def.front() == '[' ? def.substr(1, def.size() - 2) : def;
        json arr = json::array();
        std::size_t start = 0;
        while (start <= body.size()) {
            const auto comma = body.find(',', start);
            arr.push_back(body.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return arr;
    }
    if (multi) return vals;
    return vals.back();
}

json collect_flags(const CLI::App& app) {
    json flags;
    for (const CLI::Option* opt : app.get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "version" || name.empty()) continue;
        flags[name] = option_value(opt);
    }
    return flags;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace qvar::cli;

    CLI::App app{"Quantile autoregression Value-at-Risk toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--significance", g.significance, "Significance level for coverage decisions")
        ->check(CLI::Range(0.0, 1.0));

    std::function<void(OutputSet&)> action;

    IngestOpts ingest;
    auto* c_ingest = app.add_subcommand("ingest", "Parse a PRC export into log-size and log-inter-arrival series");
    c_ingest->add_option("--input", ingest.input, "PRC export CSV")->required();
    c_ingest->add_option("--column-map", ingest.column_map, "JSON column mapping");
    c_ingest->add_option("--out-sizes", ingest.out_sizes, "Output CSV for log breach sizes");
    c_ingest->add_option("--out-times", ingest.out_times, "Output CSV for log inter-arrival times");
    c_ingest->callback([&] { action = [&](OutputSet& o) { cmd_ingest(g, ingest, o); }; });

    GenerateOpts gen;
    auto* c_gen = app.add_subcommand("generate", "Simulate a synthetic series");
    c_gen->add_option("--process", gen.process, "ar1 or qar1");
    c_gen->add_option("--n", gen.n, "Number of observations");
    c_gen->add_option("--intercept", gen.intercept, "AR(1) intercept");
    c_gen->add_option("--phi", gen.phi, "AR(1) coefficient");
    c_gen->add_option("--noise-sd", gen.noise_sd, "AR(1) noise standard deviation");
    c_gen->add_option("--theta0", gen.theta0, "QAR(1) intercept quantile table")->delimiter(',');
    c_gen->add_option("--theta1", gen.theta1, "QAR(1) slope quantile table")->delimiter(',');
    c_gen->add_option("--burn-in", gen.burn_in, "Discarded warm-up draws");
    c_gen->add_option("--output", gen.output, "Output CSV name");
    c_gen->callback([&] { action = [&](OutputSet& o) { cmd_generate(g, gen, o); }; });

    StatsOpts stats;
    auto* c_stats = app.add_subcommand("stats", "Summary statistics per organisation type");
    c_stats->add_option("--input", stats.input, "PRC export CSV")->required();
    c_stats->add_option("--column-map", stats.column_map, "JSON column mapping");
    c_stats->callback([&] { action = [&](OutputSet& o) { cmd_stats(g, stats, o); }; });

    ExploreOpts ex;
    auto* c_ex = app.add_subcommand("explore", "Correlograms and BIC lag selection");
    c_ex->add_option("--input", ex.input, "Series CSV")->required();
    c_ex->add_option("--max-lag", ex.max_lag, "Largest correlogram lag");
    c_ex->add_option("--max-p", ex.max_p, "Largest candidate QAR order");
    c_ex->add_option("--alpha", ex.alpha, "Quantile level for BIC");
    c_ex->callback([&] { action = [&](OutputSet& o) { cmd_explore(g, ex, o); }; });

    FitQarOpts fq;
    auto* c_fq = app.add_subcommand("fit-qar", "Fit QAR(p) on a training split and forecast the rest");
    c_fq->add_option("--input", fq.input, "Series CSV")->required();
    c_fq->add_option("--alpha", fq.alpha, "Quantile level");
    c_fq->add_option("--lag", fq.lag, "QAR order (0 selects by BIC)");
    c_fq->add_option("--max-p", fq.max_p, "Largest order considered by BIC");
    c_fq->add_option("--bic-alpha", fq.bic_alpha, "Quantile level used for BIC");
    c_fq->add_option("--train-frac", fq.train_frac, "Training fraction");
    c_fq->callback([&] { action = [&](OutputSet& o) { cmd_fit_qar(g, fq, o); }; });

    RunCqarOpts rc;
    auto* c_rc = app.add_subcommand("run-cqar", "Run the online competitive QAR learner");
    c_rc->add_option("--input", rc.input, "Series CSV")->required();
    c_rc->add_option("--alpha", rc.alphas, "Quantile level (repeatable)")->take_all();
    c_rc->add_option("--lag", rc.lag, "QAR order (0 selects by BIC)");
    c_rc->add_option("--max-p", rc.max_p, "Largest order considered by BIC");
    c_rc->add_option("--bic-alpha", rc.bic_alpha, "Quantile level used for BIC");
    c_rc->add_option("--iters", rc.iters, "MCMC iterations per step (M)");
    c_rc->add_option("--burn-in", rc.burn_in, "Burn-in iterations (M0)");
    c_rc->add_option("--sigma", rc.sigma, "Proposal standard deviation");
    c_rc->add_option("--reg-a", rc.reg_a, "Prior regularisation a");
    c_rc->add_option("--train-frac", rc.train_frac, "Training fraction (0 runs over the whole series)");
    c_rc->add_flag("--tune", rc.tune, "Tune a and sigma on the training split");
    c_rc->add_option("--reg-grid", rc.reg_grid, "Tuning grid for a")->delimiter(',');
    c_rc->add_option("--sigma-grid", rc.sigma_grid, "Tuning grid for sigma")->delimiter(',');
    c_rc->add_option("--comparator", rc.comparator, "QAR model JSON for regret");
    c_rc->add_flag("--clamp", rc.clamp, "Clamp predictions to the observed range");
    c_rc->callback([&] { action = [&](OutputSet& o) { cmd_run_cqar(g, rc, o); }; });

    BacktestOpts bt;
    auto* c_bt = app.add_subcommand("backtest", "Coverage tests on a forecast CSV");
    c_bt->add_option("--input", bt.input, "Forecast CSV from fit-qar or run-cqar")->required();
    c_bt->add_option("--alpha", bt.alpha, "Quantile level of the forecasts")->required();
    c_bt->callback([&] { action = [&](OutputSet& o) { cmd_backtest(g, bt, o); }; });

    ReproduceOpts rp;
    auto* c_rp = app.add_subcommand("reproduce", "Full breach-data study");
    c_rp->add_option("--input", rp.input, "PRC export CSV");
    c_rp->add_option("--column-map", rp.column_map, "JSON column mapping");
    c_rp->add_option("--alpha", rp.alphas, "Quantile levels")->take_all();
    c_rp->add_option("--train-frac", rp.train_frac, "Training fraction");
    c_rp->add_option("--max-lag", rp.max_lag, "Largest correlogram lag");
    c_rp->add_option("--max-p", rp.max_p, "Largest candidate QAR order");
    c_rp->add_option("--bic-alpha", rp.bic_alpha, "Quantile level used for BIC");
    c_rp->add_option("--sizes-lag", rp.sizes_lag, "Override the size-series order");
    c_rp->add_option("--times-lag", rp.times_lag, "Override the inter-arrival order");
    c_rp->add_option("--iters", rp.iters, "MCMC iterations per step (M)");
    c_rp->add_option("--burn-in", rp.burn_in, "Burn-in iterations (M0)");
    c_rp->add_option("--reg-grid", rp.reg_grid, "Tuning grid for a")->delimiter(',');
    c_rp->add_option("--sigma-grid", rp.sigma_grid, "Tuning grid for sigma")->delimiter(',');
    c_rp->callback([&] { action = [&](OutputSet& o) { cmd_reproduce(g, rp, o); }; });

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const CLI::App* chosen = app.get_subcommands().front();
    try {
        OutputSet out(g.out);
        action(out);
        json flags = collect_flags(app);
        const json sub_flags = collect_flags(*chosen);
        for (const auto& [k, v] : sub_flags.items()) flags[k] = v;
        out.write_manifest(kVersion, chosen->get_name(), flags, g.seed);
    } catch (const MissingInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::system_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == std::errc::no_such_file_or_directory ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
