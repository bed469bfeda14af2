#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vvg/behavior.hpp"
#include "vvg/features.hpp"
#include "vvg/market_data.hpp"
#include "vvg/trades.hpp"
#include "vvg/validation.hpp"

namespace vvg {

// Daily true range and its trailing average, aligned with the dataset
// sessions. ATR(D) averages the `window` most recent true ranges strictly
// before D and is absent during the warm-up (or when it would be zero).
struct AtrSeries {
    std::vector<double> true_range;
    std::vector<std::optional<double>> atr;
};

AtrSeries compute_atr(const Dataset& dataset, int window = 14);

// Sign of the first-30-minute move: +1, -1, or 0 on an exactly flat open.
int opening_direction(const Session& session);

// Strategy 1: fade the opening direction. Entry at the 10:00 bar open,
// exit at session close; flat openings produce no trade.
TradeSet run_reversal(const Dataset& dataset, const DaySet& days, const ExecutionModel& exec);

// Strategy 2: trade with the opening direction (mirror of run_reversal).
TradeSet run_continuation(const Dataset& dataset, const DaySet& days, const ExecutionModel& exec);

struct RegressionFilterConfig {
    int min_history = 20;          // prior classifier-positive observations required
    double max_slope_tstat = -2.0; // fitted slope must be negative at least this confidently
};

// Expanding regression evidence recorded per classifier-positive day.
struct IntersectionFitRecord {
    Date date;
    std::optional<OlsFit> fit;  // present once enough history exists
    bool traded = false;
};

// Decision core of Strategy 3, exposed for direct testing: fit the
// last-30-minute response on the signed opening return and pass only a
// sufficiently confident negative slope.
std::optional<OlsFit> regression_filter(std::span<const double> opening_returns,
                                        std::span<const double> late_returns,
                                        const RegressionFilterConfig& config = {});

// Strategy 3: on classifier-positive days, fade the opening direction only
// when the expanding regression over prior classifier-positive days
// predicts the reversal. Lookahead-free: day D's own outcome enters the
// history after D's trade decision.
TradeSet run_intersection_reversal(const Dataset& dataset, std::span<const DayLabel> labels,
                                   const ExecutionModel& exec,
                                   const RegressionFilterConfig& config = {},
                                   std::vector<IntersectionFitRecord>* diagnostics = nullptr);

// Strategies 4-6: fade the session's cumulative move at 15:30 (signal at the
// 15:25 bar close). With an ATR multiple, only overextended days
// (|cumulative| > multiple * ATR) trade; days without an ATR are skipped.
TradeSet run_close_fade(const Dataset& dataset, const DaySet& days, const ExecutionModel& exec,
                        const AtrSeries& atr, std::optional<double> atr_multiple = std::nullopt);

// Strategy 7: enter in the opening direction at the 12:00 bar open.
TradeSet run_midday_continuation(const Dataset& dataset, const DaySet& days,
                                 const ExecutionModel& exec);

using StrategyFn = std::function<TradeSet(const Dataset&, const DaySet&)>;

// Strategy 8: keep only days whose prior-day true range exceeds
// ratio_cutoff * ATR, then hand the surviving days to the base strategy.
TradeSet run_vol_regime_split(const Dataset& dataset, const DaySet& days, const AtrSeries& atr,
                              const StrategyFn& base, double ratio_cutoff = 1.0);

// Aggregate statistics; win counts strictly positive nets, a zero net is a
// loss. Degenerate inputs leave the affected statistics absent.
StrategySummary summarize(const TradeSet& trades);

// Named dispatch used by the CLI and the python module.
inline constexpr std::array<std::string_view, 8> strategy_names = {
    "reversal",           "continuation",       "intersection-reversal", "close-fade",
    "close-fade-atr-1.0", "close-fade-atr-1.5", "midday-continuation",   "vol-regime-split",
};

struct StrategyConfig {
    ExecutionModel exec{};
    int atr_window = 14;
    RegressionFilterConfig regression{};
    double vol_split_cutoff = 1.0;
    std::string_view vol_split_base = "reversal";
};

// Runs one strategy by name over the given population (Strategy 3 uses the
// classification labels instead of the day set). Throws
// std::invalid_argument on an unknown name.
TradeSet run_strategy(std::string_view name, const Dataset& dataset,
                      const Classification& classification, const DaySet& days,
                      const StrategyConfig& config = {},
                      std::vector<IntersectionFitRecord>* diagnostics = nullptr);

// CSV export: date,strategy,direction,entry_time,entry_price,exit_time,
// exit_price,gross_points,net_points.
void write_trades_csv(std::span<const Trade> trades, std::string_view strategy_name,
                      std::ostream& out, bool header = true);

}  // namespace vvg
