#pragma once

// Config-driven experiment harness: convergence-rate studies against the
// shrinking oscillation period, assumption audits with certificate tables,
// and deterministic CSV emission (identical config => identical bytes).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hj1d/assumptions.hpp"
#include "hj1d/config.hpp"
#include "hj1d/oracle.hpp"
#include "hj1d/problem.hpp"
#include "hj1d/values.hpp"

namespace hj1d {

struct ExperimentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Evaluator { action, fd, both };

struct ExperimentConfig {
    Problem problem;
    std::vector<double> probes_x{0.0};
    std::vector<double> probes_t{1.0};
    std::vector<double> eps_ladder;
    double dx_over_eps = 1.0 / 40.0;
    double fd_pad = -1.0;  // negative = automatic
    Evaluator evaluator = Evaluator::action;
    std::string out_dir = ".";
    bool force = false;
    std::uint64_t config_hash = 0;

    static ExperimentConfig from_config(const Config& cfg);
    std::vector<Query> probes(double eps) const;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // max absolute fit deviation in log space
    bool complete = false;  // at least 4 rows with positive error
    int used = 0;
};

// Ordinary least squares of log(error) against log(eps); rows with
// non-positive error are excluded.
SlopeFit fit_slope(std::span<const double> eps, std::span<const double> err);

struct RateRow {
    double eps = 0.0;
    double sup_error = 0.0;
    double slope_running = 0.0;       // NaN until two rows are available
    double certificate_bound = 0.0;   // rate constant * eps; NaN when uncertified
    double cross_oracle_gap = 0.0;    // NaN unless evaluator = both
    bool ok = true;
    std::string note;
};

struct ConvergenceReport {
    std::vector<RateRow> rows;
    SlopeFit fit;
    bool all_pass = true;
    bool complete = true;
    std::uint64_t config_hash = 0;
    CertifiedConstants constants;
    std::string csv() const;  // columns: epsilon, sup_error, slope_running,
                              // certificate_bound, cross_oracle_gap, config_hash
};

ConvergenceReport run_rate_study(const ExperimentConfig& cfg);

struct CheckRow {
    std::string id;
    bool pass = true;
    double statistic = 0.0;
    std::string detail;
};

struct CheckReport {
    AssumptionReport audit;
    CertifiedConstants constants;
    std::vector<CheckRow> rows;
    bool all_pass = true;
    std::uint64_t config_hash = 0;
    std::string table() const;
};

// audit + certificates + averaging battery + trajectory spot checks
CheckReport run_checks(const ExperimentConfig& cfg);

}  // namespace hj1d
