#pragma once

#include <array>
#include <span>
#include <vector>

#include "vvg/behavior.hpp"
#include "vvg/market_data.hpp"

namespace vvg::test {

inline Date d(int year, int month, int day) { return Date{year, month, day}; }

// 78 bars where each bar opens at the previous close; highs/lows hug the
// open/close body so OHLC invariants hold by construction.
inline std::vector<Bar> bars_from_closes(Date date, double open, std::span<const double> closes,
                                         int64_t volume = 1000) {
    std::vector<Bar> bars;
    bars.reserve(closes.size());
    Price prev = Price::from_points(open);
    for (std::size_t i = 0; i < closes.size(); ++i) {
        Bar bar;
        bar.ts = {date, TimeOfDay{rth::session_open.minutes + static_cast<int>(i) * rth::bar_minutes}};
        bar.open = prev;
        bar.close = Price::from_points(closes[i]);
        bar.high = std::max(bar.open, bar.close);
        bar.low = std::min(bar.open, bar.close);
        bar.volume = volume;
        bars.push_back(bar);
        prev = bar.close;
    }
    return bars;
}

inline std::vector<Bar> flat_day(Date date, double price, int64_t volume = 1000) {
    std::vector<double> closes(rth::bars_per_session, price);
    return bars_from_closes(date, price, closes, volume);
}

// Day whose 12 checkpoint values (close at the checkpoint minus the session
// open) are prescribed; the opening move reaches r1_pts at the 09:55 bar
// close and the first five bars stay flat at the open.
inline std::vector<Bar> path_day(Date date, double open, double r1_pts,
                                 const std::array<double, num_checkpoints>& checkpoints,
                                 int64_t volume = 1000) {
    std::vector<double> closes(rth::bars_per_session, open);
    for (int b = 0; b < rth::bars_per_session; ++b) {
        const int end_minutes = rth::session_open.minutes + (b + 1) * rth::bar_minutes;
        if (b < 5) {
            closes[b] = open;
        } else if (end_minutes <= TimeOfDay::hm(10, 0).minutes) {
            closes[b] = open + r1_pts;  // the 09:55 bar sets the opening move
        } else {
            int k = (end_minutes - TimeOfDay::hm(10, 30).minutes + 29) / 30;
            if (k < 0) k = 0;
            closes[b] = open + checkpoints[static_cast<std::size_t>(k)];
        }
    }
    return bars_from_closes(date, open, closes, volume);
}

inline Dataset dataset_from(std::vector<std::vector<Bar>> days,
                            CompletenessPolicy policy = CompletenessPolicy::strict()) {
    std::vector<Bar> all;
    for (auto& day : days) all.insert(all.end(), day.begin(), day.end());
    return build_sessions(std::move(all), policy).dataset;
}

// Consecutive weekdays starting at `start`.
inline std::vector<Date> weekday_sequence(Date start, int count) {
    std::vector<Date> dates;
    int dn = start.day_number();
    while (static_cast<int>(dates.size()) < count) {
        const Date date = Date::from_day_number(dn++);
        if (!date.is_weekend()) dates.push_back(date);
    }
    return dates;
}

inline bool bars_equal(const Bar& a, const Bar& b) {
    return a.ts == b.ts && a.open == b.open && a.high == b.high && a.low == b.low &&
           a.close == b.close && a.volume == b.volume;
}

}  // namespace vvg::test
