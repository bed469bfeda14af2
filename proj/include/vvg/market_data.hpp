#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vvg/errors.hpp"
#include "vvg/price.hpp"
#include "vvg/time.hpp"

namespace vvg {

// Regular trading hours on a 5-minute grid. Bar timestamps are bar starts,
// so the last bar of a full session starts at 15:55 and covers 15:55-16:00.
namespace rth {
inline constexpr TimeOfDay session_open = TimeOfDay::hm(9, 30);
inline constexpr TimeOfDay last_bar_start = TimeOfDay::hm(15, 55);
inline constexpr TimeOfDay session_close = TimeOfDay::hm(16, 0);
inline constexpr int bar_minutes = 5;
inline constexpr int bars_per_session = 78;

inline bool in_session(TimeOfDay t) { return session_open <= t && t <= last_bar_start; }
}  // namespace rth

// One five-minute OHLCV bar, timestamped at its start in Eastern Time.
struct Bar {
    Timestamp ts;
    Price open;
    Price high;
    Price low;
    Price close;
    int64_t volume = 0;
};

// Throws DataError when the OHLC/volume/grid invariants do not hold.
void validate_bar(const Bar& bar);

// The ordered RTH bars of one trading day.
class Session {
public:
    // Bars must be same-date, inside RTH, on the 5-minute grid, strictly
    // increasing and non-empty; throws DataError otherwise.
    Session(Date date, std::vector<Bar> bars);

    const Date& date() const { return date_; }
    std::span<const Bar> bars() const { return bars_; }
    int bar_count() const { return static_cast<int>(bars_.size()); }
    bool complete() const { return bar_count() == rth::bars_per_session; }

    Price open_price() const { return bars_.front().open; }
    Price close_price() const { return bars_.back().close; }
    Price high() const;
    Price low() const;

    // Bar whose interval starts at `t`, or nullptr when absent.
    const Bar* bar_starting(TimeOfDay t) const;

private:
    Date date_;
    std::vector<Bar> bars_;
};

// Retention rule for sessions; the strict default keeps only full
// 78-bar days, a lower minimum admits degraded data.
struct CompletenessPolicy {
    int min_bars = rth::bars_per_session;

    static CompletenessPolicy strict() { return {}; }
    static CompletenessPolicy at_least(int bars) { return {bars}; }
};

// Immutable ordered collection of retained sessions. Safe to read from
// any number of threads once constructed.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<Session> sessions);  // throws on unordered dates

    std::size_t size() const { return sessions_.size(); }
    bool empty() const { return sessions_.empty(); }
    const Session& operator[](std::size_t i) const { return sessions_[i]; }
    std::span<const Session> sessions() const { return sessions_; }

    std::optional<std::size_t> find(Date date) const;

    // First n sessions as a new dataset (for expanding-window checks).
    Dataset prefix(std::size_t n) const;

private:
    std::vector<Session> sessions_;
};

inline constexpr std::string_view bar_file_header = "timestamp,open,high,low,close,volume";

// Parses the CSV bar format (header line required). Rows outside RTH are
// kept; session filtering happens in build_sessions. Throws ParseError with
// the offending line number on malformed input.
std::vector<Bar> parse_bar_file(std::istream& source);

struct DroppedSession {
    Date date;
    int bar_count = 0;
    std::string reason;
};

struct BuildReport {
    Dataset dataset;
    std::vector<DroppedSession> dropped;
};

// Discards non-RTH bars, groups by date, applies the completeness policy
// and returns the ordered dataset plus the drop log. Throws DataError on
// duplicate timestamps within a day or when nothing survives.
BuildReport build_sessions(std::vector<Bar> bars, CompletenessPolicy policy = {});

// Close of the nearest retained session before `date`; absent for the
// first session. Throws std::invalid_argument when `date` is not present.
std::optional<Price> prior_close(const Dataset& dataset, Date date);

// Canonical bar-file serialization; re-parsing yields an identical dataset.
void write_bars(const Dataset& dataset, std::ostream& out);

}  // namespace vvg
