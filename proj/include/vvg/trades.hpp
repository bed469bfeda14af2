#pragma once

#include <map>
#include <optional>
#include <vector>

#include "vvg/price.hpp"
#include "vvg/time.hpp"

namespace vvg {

// Execution convention shared by every strategy: the signal is evaluated
// at a bar's close, the entry fills at the next bar's open, and a flat
// round-trip friction is charged per trade.
struct ExecutionModel {
    double friction_round_trip = 2.0;  // points
};

// One intraday round trip. direction is +1 (long) or -1 (short);
// gross = direction * (exit - entry) and net = gross - friction.
struct Trade {
    Date date;
    int direction = 0;
    TimeOfDay entry_time;
    TimeOfDay exit_time;
    Price entry_price;
    Price exit_price;
    double gross_points = 0.0;
    double net_points = 0.0;
};

using TradeSet = std::vector<Trade>;

struct YearStats {
    int n = 0;
    double total_net = 0.0;
    std::optional<double> tstat;
};

struct DirectionStats {
    int n = 0;
    double mean_net = 0.0;
    double win_rate = 0.0;
};

struct StrategySummary {
    int n = 0;
    std::optional<double> mean_net;
    std::optional<double> tstat;
    std::optional<double> win_rate;  // net > 0 counts as a win; net = 0 is a loss
    double total_net = 0.0;
    std::map<int, YearStats> per_year;
    std::map<int, DirectionStats> per_direction;  // keyed +1 / -1
};

}  // namespace vvg
