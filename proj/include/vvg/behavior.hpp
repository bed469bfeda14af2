#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "vvg/features.hpp"
#include "vvg/market_data.hpp"

namespace vvg {

// Explicit set of trading days a statistic runs over. Order and duplicates
// are irrelevant; operations normalize internally.
using DaySet = std::vector<Date>;

// The 30-minute checkpoint grid 10:30 .. 16:00.
inline constexpr int num_checkpoints = 12;
std::array<TimeOfDay, num_checkpoints> checkpoint_grid();

// Price at the checkpoint minus the 09:30 open, in points. The checkpoint
// value at time t is the close of the bar ending at t; 16:00 therefore
// equals close minus open. Valid times are 10:00 .. 16:00 on the
// 30-minute grid.
double checkpoint_value(const Session& session, TimeOfDay time);

struct PathCheckpoint {
    TimeOfDay time;
    int n = 0;
    double mean = 0.0;
    std::optional<double> stdev;  // absent for n = 1
    std::optional<double> tstat;  // mean / (stdev / sqrt(n)); absent when stdev is absent or zero
    double median = 0.0;
    double p25 = 0.0;
    double p75 = 0.0;
    double pct_positive = 0.0;  // exact count ratio of strictly positive values
};

// Per-checkpoint statistics over the given days. Throws EmptyResultError on
// an empty day set; unknown dates raise std::invalid_argument.
std::vector<PathCheckpoint> intraday_path(const Dataset& dataset, const DaySet& days);

struct ReversalStats {
    int n_reversed = 0;
    int n_not_reversed = 0;
    double reversal_rate = 0.0;
    double mean_giveback_all = 0.0;              // over every day, in points
    std::optional<double> mean_giveback_reversed;  // over reversed days only
};

struct PeakTimingHistogram {
    std::map<TimeOfDay, int> bins;  // all twelve checkpoint bins, zeros included
    int total = 0;
};

enum class PeakTiePolicy { earliest, latest };

struct ReversalResult {
    ReversalStats stats;
    PeakTimingHistogram histogram;
};

// Peak = maximum checkpoint value on the grid (ties per policy, default
// earliest). A day reverses when the peak bin is before 16:00 and the
// 16:00 value sits below the peak; giveback = peak - 16:00 value.
ReversalResult peak_reversal(const Dataset& dataset, const DaySet& days,
                             PeakTiePolicy tie_policy = PeakTiePolicy::earliest);

struct NextDaySpread {
    int n_positive = 0;  // days contributing a next-day return
    int n_negative = 0;
    std::optional<double> mean_next_positive;  // fractional open-to-close return
    std::optional<double> mean_next_negative;
    std::optional<double> spread;  // mean_next_positive - mean_next_negative
};

// Mean next-session open-to-close return of classifier-positive days vs all
// other days. Labels must align 1:1 with the dataset sessions.
NextDaySpread next_day_spread(const Dataset& dataset, std::span<const DayLabel> labels);

struct YearlyPath {
    int year = 0;
    std::vector<PathCheckpoint> checkpoints;
};

// intraday_path per calendar year of the day set; years without days are
// omitted. Sorted ascending by year.
std::vector<YearlyPath> yearly_paths(const Dataset& dataset, const DaySet& days);

}  // namespace vvg
