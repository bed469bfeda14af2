#include "vvg/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "vvg/format.hpp"

namespace vvg {

namespace {

constexpr TimeOfDay morning_entry = TimeOfDay::hm(10, 0);
constexpr TimeOfDay midday_entry = TimeOfDay::hm(12, 0);
constexpr TimeOfDay late_entry = TimeOfDay::hm(15, 30);

std::vector<std::size_t> resolve_days(const Dataset& dataset, const DaySet& days) {
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

// Entry at the open of the bar starting at `entry_bar`, exit at the session
// close. Days missing either bar produce no trade.
std::optional<Trade> session_trade(const Session& session, int direction, TimeOfDay entry_bar,
                                   const ExecutionModel& exec) {
    const Bar* entry = session.bar_starting(entry_bar);
    const Bar* last = session.bar_starting(rth::last_bar_start);
    if (entry == nullptr || last == nullptr) return std::nullopt;
    Trade trade;
    trade.date = session.date();
    trade.direction = direction;
    trade.entry_time = entry_bar;
    trade.exit_time = rth::session_close;
    trade.entry_price = entry->open;
    trade.exit_price = last->close;
    trade.gross_points = direction * (trade.exit_price - trade.entry_price);
    trade.net_points = trade.gross_points - exec.friction_round_trip;
    return trade;
}

int opening_direction_or_zero(const Session& session) {
    const Bar* first = session.bar_starting(rth::session_open);
    const Bar* sixth = session.bar_starting(TimeOfDay{rth::session_open.minutes + 5 * rth::bar_minutes});
    if (first == nullptr || sixth == nullptr) return 0;
    if (sixth->close > first->open) return 1;
    if (sixth->close < first->open) return -1;
    return 0;
}

TradeSet run_open_directional(const Dataset& dataset, const DaySet& days,
                              const ExecutionModel& exec, int direction_sign, TimeOfDay entry_bar) {
    TradeSet trades;
    for (const std::size_t idx : resolve_days(dataset, days)) {
        const Session& session = dataset[idx];
        const int opening = opening_direction_or_zero(session);
        if (opening == 0) continue;
        if (auto trade = session_trade(session, direction_sign * opening, entry_bar, exec)) {
            trades.push_back(*trade);
        }
    }
    return trades;
}

}  // namespace

AtrSeries compute_atr(const Dataset& dataset, int window) {
    if (window < 1) throw std::invalid_argument("ATR window must be >= 1");
    const std::size_t n = dataset.size();
    AtrSeries series;
    series.true_range.resize(n, 0.0);
    series.atr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Session& session = dataset[i];
        const double hi = session.high().points();
        const double lo = session.low().points();
        double tr = hi - lo;
        if (i > 0) {
            const double pc = dataset[i - 1].close_price().points();
            tr = std::max({hi - lo, std::abs(hi - pc), std::abs(lo - pc)});
        }
        series.true_range[i] = tr;
        if (i >= static_cast<std::size_t>(window)) {
            double sum = 0.0;
            for (std::size_t j = i - window; j < i; ++j) sum += series.true_range[j];
            const double mean = sum / window;
            if (mean > 0.0) series.atr[i] = mean;
        }
    }
    return series;
}

int opening_direction(const Session& session) {
    const Bar* first = session.bar_starting(rth::session_open);
    const Bar* sixth = session.bar_starting(TimeOfDay{rth::session_open.minutes + 5 * rth::bar_minutes});
    if (first == nullptr || sixth == nullptr) {
        throw DataError("missing opening bars in session " + session.date().to_string());
    }
    if (sixth->close > first->open) return 1;
    if (sixth->close < first->open) return -1;
    return 0;
}

TradeSet run_reversal(const Dataset& dataset, const DaySet& days, const ExecutionModel& exec) {
    return run_open_directional(dataset, days, exec, -1, morning_entry);
}

TradeSet run_continuation(const Dataset& dataset, const DaySet& days, const ExecutionModel& exec) {
    return run_open_directional(dataset, days, exec, +1, morning_entry);
}

std::optional<OlsFit> regression_filter(std::span<const double> opening_returns,
                                        std::span<const double> late_returns,
                                        const RegressionFilterConfig& config) {
    if (static_cast<int>(opening_returns.size()) < config.min_history) return std::nullopt;
    OlsFit fit;
    try {
        fit = ols_fit(opening_returns, late_returns);
    } catch (const std::invalid_argument&) {
        return std::nullopt;  // constant predictor: no usable evidence
    }
    if (fit.beta < 0.0 && fit.t_beta <= config.max_slope_tstat) return fit;
    return std::nullopt;
}

TradeSet run_intersection_reversal(const Dataset& dataset, std::span<const DayLabel> labels,
                                   const ExecutionModel& exec, const RegressionFilterConfig& config,
                                   std::vector<IntersectionFitRecord>* diagnostics) {
    if (labels.size() != dataset.size()) {
        throw std::invalid_argument("labels do not align with dataset");
    }

    constexpr TimeOfDay late_signal_start = TimeOfDay::hm(15, 25);
    TradeSet trades;
    std::vector<double> opening_history;
    std::vector<double> late_history;

    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (!labels[i].positive) continue;
        const Session& session = dataset[i];
        const Bar* open_bar = session.bar_starting(rth::session_open);
        const Bar* sixth_bar =
            session.bar_starting(TimeOfDay{rth::session_open.minutes + 5 * rth::bar_minutes});
        const Bar* late_bar = session.bar_starting(late_signal_start);
        const Bar* last_bar = session.bar_starting(rth::last_bar_start);
        if (open_bar == nullptr || sixth_bar == nullptr || late_bar == nullptr ||
            last_bar == nullptr || open_bar->open.units() <= 0) {
            continue;
        }

        IntersectionFitRecord record{session.date(), std::nullopt, false};
        if (static_cast<int>(opening_history.size()) >= config.min_history) {
            // Record the fit whenever enough history exists; trade only when
            // it clears the confidence filter.
            try {
                record.fit = ols_fit(opening_history, late_history);
            } catch (const std::invalid_argument&) {
                record.fit = std::nullopt;
            }
            const bool passes = record.fit && record.fit->beta < 0.0 &&
                                record.fit->t_beta <= config.max_slope_tstat;
            if (passes) {
                const int opening = opening_direction_or_zero(session);
                if (opening != 0) {
                    if (auto trade = session_trade(session, -opening, morning_entry, exec)) {
                        trades.push_back(*trade);
                        record.traded = true;
                    }
                }
            }
        }
        if (diagnostics != nullptr) diagnostics->push_back(record);

        // Day i's own outcome becomes history only after its decision.
        opening_history.push_back((sixth_bar->close - open_bar->open) / open_bar->open.points());
        late_history.push_back(last_bar->close - late_bar->close);
    }
    return trades;
}

TradeSet run_close_fade(const Dataset& dataset, const DaySet& days, const ExecutionModel& exec,
                        const AtrSeries& atr, std::optional<double> atr_multiple) {
    if (atr.atr.size() != dataset.size()) {
        throw std::invalid_argument("ATR series does not align with dataset");
    }
    TradeSet trades;
    for (const std::size_t idx : resolve_days(dataset, days)) {
        const Session& session = dataset[idx];
        const Bar* signal_bar = session.bar_starting(TimeOfDay::hm(15, 25));
        if (signal_bar == nullptr) continue;
        const double cumulative = signal_bar->close - session.open_price();
        if (cumulative == 0.0) continue;
        if (atr_multiple) {
            if (!atr.atr[idx]) continue;
            if (std::abs(cumulative) <= *atr_multiple * *atr.atr[idx]) continue;
        }
        const int direction = cumulative > 0.0 ? -1 : 1;
        if (auto trade = session_trade(session, direction, late_entry, exec)) {
            trades.push_back(*trade);
        }
    }
    return trades;
}

TradeSet run_midday_continuation(const Dataset& dataset, const DaySet& days,
                                 const ExecutionModel& exec) {
    return run_open_directional(dataset, days, exec, +1, midday_entry);
}

TradeSet run_vol_regime_split(const Dataset& dataset, const DaySet& days, const AtrSeries& atr,
                              const StrategyFn& base, double ratio_cutoff) {
    if (atr.atr.size() != dataset.size()) {
        throw std::invalid_argument("ATR series does not align with dataset");
    }
    DaySet filtered;
    for (const std::size_t idx : resolve_days(dataset, days)) {
        if (idx == 0 || !atr.atr[idx]) continue;
        const double ratio = atr.true_range[idx - 1] / *atr.atr[idx];
        if (ratio > ratio_cutoff) filtered.push_back(dataset[idx].date());
    }
    return base(dataset, filtered);
}

StrategySummary summarize(const TradeSet& trades) {
    StrategySummary summary;
    summary.n = static_cast<int>(trades.size());
    if (summary.n == 0) return summary;

    std::vector<double> nets;
    nets.reserve(trades.size());
    int wins = 0;
    std::map<int, std::vector<double>> year_nets;
    std::map<int, std::vector<double>> direction_nets;
    for (const Trade& trade : trades) {
        nets.push_back(trade.net_points);
        summary.total_net += trade.net_points;
        if (trade.net_points > 0.0) ++wins;
        year_nets[trade.date.year].push_back(trade.net_points);
        direction_nets[trade.direction].push_back(trade.net_points);
    }

    summary.mean_net = summary.total_net / summary.n;
    summary.tstat = t_statistic(nets);
    summary.win_rate = static_cast<double>(wins) / summary.n;

    for (const auto& [year, values] : year_nets) {
        YearStats stats;
        stats.n = static_cast<int>(values.size());
        for (const double v : values) stats.total_net += v;
        stats.tstat = t_statistic(values);
        summary.per_year[year] = stats;
    }
    for (const auto& [direction, values] : direction_nets) {
        DirectionStats stats;
        stats.n = static_cast<int>(values.size());
        double total = 0.0;
        int dir_wins = 0;
        for (const double v : values) {
            total += v;
            if (v > 0.0) ++dir_wins;
        }
        stats.mean_net = total / stats.n;
        stats.win_rate = static_cast<double>(dir_wins) / stats.n;
        summary.per_direction[direction] = stats;
    }
    return summary;
}

TradeSet run_strategy(std::string_view name, const Dataset& dataset,
                      const Classification& classification, const DaySet& days,
                      const StrategyConfig& config,
                      std::vector<IntersectionFitRecord>* diagnostics) {
    if (name == "reversal") return run_reversal(dataset, days, config.exec);
    if (name == "continuation") return run_continuation(dataset, days, config.exec);
    if (name == "intersection-reversal") {
        return run_intersection_reversal(dataset, classification.labels, config.exec,
                                         config.regression, diagnostics);
    }
    if (name == "close-fade") {
        return run_close_fade(dataset, days, config.exec, compute_atr(dataset, config.atr_window));
    }
    if (name == "close-fade-atr-1.0") {
        return run_close_fade(dataset, days, config.exec, compute_atr(dataset, config.atr_window),
                              1.0);
    }
    if (name == "close-fade-atr-1.5") {
        return run_close_fade(dataset, days, config.exec, compute_atr(dataset, config.atr_window),
                              1.5);
    }
    if (name == "midday-continuation") return run_midday_continuation(dataset, days, config.exec);
    if (name == "vol-regime-split") {
        if (config.vol_split_base == "vol-regime-split" ||
            config.vol_split_base == "intersection-reversal") {
            throw std::invalid_argument("unsupported vol-regime-split base strategy '" +
                                        std::string(config.vol_split_base) + "'");
        }
        StrategyConfig base_config = config;
        const std::string base_name(config.vol_split_base);
        const StrategyFn base = [&](const Dataset& ds, const DaySet& filtered) {
            return run_strategy(base_name, ds, classification, filtered, base_config);
        };
        return run_vol_regime_split(dataset, days, compute_atr(dataset, config.atr_window), base,
                                    config.vol_split_cutoff);
    }
    std::string known;
    for (const auto& n : strategy_names) {
        if (!known.empty()) known += ", ";
        known += n;
    }
    throw std::invalid_argument("unknown strategy '" + std::string(name) + "' (expected one of: " +
                                known + ", all)");
}

void write_trades_csv(std::span<const Trade> trades, std::string_view strategy_name,
                      std::ostream& out, bool header) {
    if (header) {
        out << "date,strategy,direction,entry_time,entry_price,exit_time,exit_price,"
               "gross_points,net_points\n";
    }
    for (const Trade& trade : trades) {
        out << trade.date.to_string() << ',' << strategy_name << ',' << trade.direction << ','
            << trade.entry_time.to_string() << ',' << trade.entry_price.to_string() << ','
            << trade.exit_time.to_string() << ',' << trade.exit_price.to_string() << ','
            << fmt_shortest(trade.gross_points) << ',' << fmt_shortest(trade.net_points) << '\n';
    }
}

}  // namespace vvg
