#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "output.hpp"

namespace qvar::cli {

struct Globals {
    std::uint64_t seed = 0;
    std::string out = ".";
    double significance = 0.05;
};

struct IngestOpts {
    std::string input;
    std::string column_map;
    std::string out_sizes = "sizes.csv";
    std::string out_times = "interarrivals.csv";
};

struct GenerateOpts {
    std::string process = "ar1";
    std::size_t n = 1000;
    double intercept = 0.0;
    double phi = 0.5;
    double noise_sd = 1.0;
    std::vector<double> theta0;
    std::vector<double> theta1;
    std::size_t burn_in = 200;
    std::string output = "series.csv";
};

struct StatsOpts {
    std::string input;
    std::string column_map;
};

struct ExploreOpts {
    std::string input;
    std::size_t max_lag = 20;
    std::size_t max_p = 10;
    double alpha = 0.5;
};

struct FitQarOpts {
    std::string input;
    double alpha = 0.9;
    std::size_t lag = 0;  // 0 selects by BIC on the training split
    std::size_t max_p = 10;
    double bic_alpha = 0.5;
    double train_frac = 0.6;
};

struct RunCqarOpts {
    std::string input;
    std::vector<double> alphas{0.9};
    std::size_t lag = 0;
    std::size_t max_p = 10;
    double bic_alpha = 0.5;
    std::size_t iters = 1000;
    std::size_t burn_in = 200;
    double sigma = 0.5;
    double reg_a = 1.0;
    double train_frac = 0.6;
    bool tune = false;
    std::vector<double> reg_grid{0.1, 0.5, 1.0};
    std::vector<double> sigma_grid{0.5, 0.7, 1.0};
    std::string comparator;
    bool clamp = false;
};

struct BacktestOpts {
    std::string input;
    double alpha = 0.9;
};

struct ReproduceOpts {
    std::string input;
    std::string column_map;
    std::vector<double> alphas{0.90, 0.92, 0.95};
    double train_frac = 0.6;
    std::size_t max_lag = 20;
    std::size_t max_p = 10;
    double bic_alpha = 0.5;
    std::size_t sizes_lag = 0;
    std::size_t times_lag = 0;
    std::size_t iters = 1000;
    std::size_t burn_in = 200;
    std::vector<double> reg_grid{0.1, 0.5, 1.0};
    std::vector<double> sigma_grid{0.5, 0.7, 1.0};
};

void cmd_ingest(const Globals& g, const IngestOpts& o, OutputSet& out);
void cmd_generate(const Globals& g, const GenerateOpts& o, OutputSet& out);
void cmd_stats(const Globals& g, const StatsOpts& o, OutputSet& out);
void cmd_explore(const Globals& g, const ExploreOpts& o, OutputSet& out);
void cmd_fit_qar(const Globals& g, const FitQarOpts& o, OutputSet& out);
void cmd_run_cqar(const Globals& g, const RunCqarOpts& o, OutputSet& out);
void cmd_backtest(const Globals& g, const BacktestOpts& o, OutputSet& out);
void cmd_reproduce(const Globals& g, const ReproduceOpts& o, OutputSet& out);

}  // namespace qvar::cli
