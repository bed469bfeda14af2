#include "vvg/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vvg {

namespace {

constexpr TimeOfDay first_checkpoint = TimeOfDay::hm(10, 30);
constexpr TimeOfDay first_valid_time = TimeOfDay::hm(10, 0);
constexpr int checkpoint_step = 30;

// Sorted unique dates resolved to session indices.
std::vector<std::size_t> resolve_days(const Dataset& dataset, const DaySet& days) {
    if (days.empty()) throw EmptyResultError("empty day set");
    DaySet sorted = days;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::size_t> indices;
    indices.reserve(sorted.size());
    for (const Date& date : sorted) {
        const auto idx = dataset.find(date);
        if (!idx) throw std::invalid_argument("date " + date.to_string() + " not in dataset");
        indices.push_back(*idx);
    }
    return indices;
}

PathCheckpoint summarize_checkpoint(TimeOfDay time, std::vector<double> values) {
    PathCheckpoint cp;
    cp.time = time;
    cp.n = static_cast<int>(values.size());
    double sum = 0.0;
    int positive = 0;
    for (const double v : values) {
        sum += v;
        if (v > 0.0) ++positive;
    }
    cp.mean = sum / cp.n;
    cp.pct_positive = static_cast<double>(positive) / cp.n;
    if (cp.n >= 2) {
        double ss = 0.0;
        for (const double v : values) {
            const double d = v - cp.mean;
            ss += d * d;
        }
        cp.stdev = std::sqrt(ss / (cp.n - 1));
        if (*cp.stdev > 0.0) cp.tstat = cp.mean / (*cp.stdev / std::sqrt(static_cast<double>(cp.n)));
    }
    std::sort(values.begin(), values.end());
    cp.median = percentile_sorted(values, 0.50);
    cp.p25 = percentile_sorted(values, 0.25);
    cp.p75 = percentile_sorted(values, 0.75);
    return cp;
}

}  // namespace

std::array<TimeOfDay, num_checkpoints> checkpoint_grid() {
    std::array<TimeOfDay, num_checkpoints> grid;
    for (int i = 0; i < num_checkpoints; ++i) {
        grid[i] = TimeOfDay{first_checkpoint.minutes + i * checkpoint_step};
    }
    return grid;
}

double checkpoint_value(const Session& session, TimeOfDay time) {
    if (time < first_valid_time || time > rth::session_close || time.minutes % checkpoint_step != 0) {
        throw std::invalid_argument("checkpoint time " + time.to_string() +
                                    " outside the 10:00-16:00 30-minute grid");
    }
    const Bar* bar = session.bar_starting(TimeOfDay{time.minutes - rth::bar_minutes});
    if (bar == nullptr) {
        throw DataError("no bar ending at " + time.to_string() + " in session " +
                        session.date().to_string());
    }
    return bar->close - session.open_price();
}

std::vector<PathCheckpoint> intraday_path(const Dataset& dataset, const DaySet& days) {
    const auto indices = resolve_days(dataset, days);
    const auto grid = checkpoint_grid();
    std::vector<PathCheckpoint> out;
    out.reserve(grid.size());
    for (const TimeOfDay time : grid) {
        std::vector<double> values;
        values.reserve(indices.size());
        for (const std::size_t idx : indices) values.push_back(checkpoint_value(dataset[idx], time));
        out.push_back(summarize_checkpoint(time, std::move(values)));
    }
    return out;
}

ReversalResult peak_reversal(const Dataset& dataset, const DaySet& days, PeakTiePolicy tie_policy) {
    const auto indices = resolve_days(dataset, days);
    const auto grid = checkpoint_grid();

    ReversalResult result;
    for (const TimeOfDay time : grid) result.histogram.bins[time] = 0;

    double giveback_sum = 0.0;
    double giveback_reversed_sum = 0.0;
    for (const std::size_t idx : indices) {
        const Session& session = dataset[idx];
        int peak_bin = 0;
        double peak = checkpoint_value(session, grid[0]);
        for (int i = 1; i < num_checkpoints; ++i) {
            const double v = checkpoint_value(session, grid[i]);
            const bool better = tie_policy == PeakTiePolicy::earliest ? v > peak : v >= peak;
            if (better) {
                peak = v;
                peak_bin = i;
            }
        }
        const double close_value = checkpoint_value(session, grid[num_checkpoints - 1]);
        const bool reversed = peak_bin != num_checkpoints - 1 && close_value < peak;
        const double giveback = peak - close_value;
        ++result.histogram.bins[grid[peak_bin]];
        giveback_sum += giveback;
        if (reversed) {
            ++result.stats.n_reversed;
            giveback_reversed_sum += giveback;
        } else {
            ++result.stats.n_not_reversed;
        }
    }

    const int n = static_cast<int>(indices.size());
    result.histogram.total = n;
    result.stats.reversal_rate = static_cast<double>(result.stats.n_reversed) / n;
    result.stats.mean_giveback_all = giveback_sum / n;
    if (result.stats.n_reversed > 0) {
        result.stats.mean_giveback_reversed = giveback_reversed_sum / result.stats.n_reversed;
    }
    return result;
}

NextDaySpread next_day_spread(const Dataset& dataset, std::span<const DayLabel> labels) {
    if (dataset.size() < 2) throw std::invalid_argument("need at least two sessions");
    if (labels.size() != dataset.size()) {
        throw std::invalid_argument("labels do not align with dataset");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].date != dataset[i].date()) {
            throw std::invalid_argument("label dates do not align with dataset");
        }
    }

    NextDaySpread out;
    double sum_positive = 0.0;
    double sum_negative = 0.0;
    for (std::size_t i = 0; i + 1 < dataset.size(); ++i) {
        const Session& next = dataset[i + 1];
        const double next_return = (next.close_price() - next.open_price()) / next.open_price().points();
        if (labels[i].positive) {
            ++out.n_positive;
            sum_positive += next_return;
        } else {
            ++out.n_negative;
            sum_negative += next_return;
        }
    }
    if (out.n_positive > 0) out.mean_next_positive = sum_positive / out.n_positive;
    if (out.n_negative > 0) out.mean_next_negative = sum_negative / out.n_negative;
    if (out.mean_next_positive && out.mean_next_negative) {
        out.spread = *out.mean_next_positive - *out.mean_next_negative;
    }
    return out;
}

std::vector<YearlyPath> yearly_paths(const Dataset& dataset, const DaySet& days) {
    const auto indices = resolve_days(dataset, days);
    std::map<int, DaySet> by_year;
    for (const std::size_t idx : indices) {
        const Date date = dataset[idx].date();
        by_year[date.year].push_back(date);
    }
    std::vector<YearlyPath> out;
    out.reserve(by_year.size());
    for (const auto& [year, year_days] : by_year) {
        out.push_back({year, intraday_path(dataset, year_days)});
    }
    return out;
}

}  // namespace vvg
