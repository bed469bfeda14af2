#pragma once

#include <map>
#include <span>
#include <vector>

#include "vvg/behavior.hpp"
#include "vvg/features.hpp"
#include "vvg/market_data.hpp"

namespace vvg::test {

// Deliberately naive relabeling: recomputes every feature and re-sorts every
// threshold history from scratch for each day. Kept independent of the
// engine's incremental path so the two can be compared exactly.
Classification classify_naive(const Dataset& dataset, const ClassifierConfig& config = {});

struct NaiveReversal {
    int n_reversed = 0;
    int n_not_reversed = 0;
    double reversal_rate = 0.0;
    double mean_giveback_all = 0.0;
    std::map<TimeOfDay, int> bins;
};

// Brute-force per-day recomputation of the peak/reversal statistics.
NaiveReversal peak_reversal_naive(const Dataset& dataset, const std::vector<Date>& days);

struct NaiveLine {
    double beta = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Closed-form normal-equations fit.
NaiveLine ols_naive(std::span<const double> x, std::span<const double> y);

}  // namespace vvg::test
