#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vvg/trades.hpp"

namespace vvg {

// mean / (sample standard deviation / sqrt(n)); absent when n < 2 or the
// standard deviation is zero.
std::optional<double> t_statistic(std::span<const double> values);

struct OlsFit {
    int n = 0;
    double beta = 0.0;
    double intercept = 0.0;
    double t_beta = 0.0;
    double p_value = 1.0;  // two-sided, t-distribution with n-2 df
    double r2 = 0.0;
};

// Simple least squares of y on x. Requires n >= 3 and non-constant x
// (std::invalid_argument otherwise). A constant y yields beta 0 and r2 0.
OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

// P(|T| >= |t|) for Student's t with df degrees of freedom, via the
// regularized incomplete beta function (absolute accuracy ~1e-12).
double student_t_two_sided_p(double t, int df);

struct PermutationResult {
    double observed_mean = 0.0;
    double p_value = 1.0;  // (1 + #{resample mean >= observed}) / (n_resamples + 1)
    int n_resamples = 0;
    uint64_t seed = 0;
};

// Sign-flip permutation test of "mean net > 0" against a symmetric null.
// Each resample flips every value's sign independently; resample r uses its
// own deterministic substream so results do not depend on scheduling.
PermutationResult permutation_test(std::span<const double> nets, int n_resamples = 10'000,
                                   uint64_t seed = 0);

struct YearConsistencyConfig {
    int min_trades_per_year = 5;
    int min_years = 2;
};

struct YearNet {
    int year = 0;
    int n = 0;
    double total_net = 0.0;
    bool qualifies = false;
};

struct YearConsistency {
    bool consistent = false;
    std::vector<YearNet> years;  // ascending by year
};

// Consistent iff at least min_years qualifying years (>= min_trades_per_year
// trades) exist and every qualifying year has strictly positive total net.
YearConsistency year_consistency(const TradeSet& trades, const YearConsistencyConfig& config = {});

struct GateConfig {
    double min_tstat = 2.0;
    int min_trades = 30;
    double max_p = 0.05;
};

struct GateResult {
    bool c1_tstat = false;             // t >= min_tstat
    bool c2_min_trades = false;        // n >= min_trades
    bool c3_net_positive = false;      // total net > 0 after friction
    bool c4_year_consistency = false;
    bool c5_permutation = false;       // p < max_p
    bool pass = false;                 // conjunction of the five

    // Measured values for reporting; absent when not evaluable.
    std::optional<double> tstat;
    int n = 0;
    std::optional<double> total_net;
    std::optional<double> p_value;
};

// Five-criterion verdict. A missing permutation result (e.g. zero trades)
// leaves c5 false with the measured p absent.
GateResult gate(const StrategySummary& summary, const std::optional<PermutationResult>& perm,
                bool year_ok, const GateConfig& config = {});

}  // namespace vvg
