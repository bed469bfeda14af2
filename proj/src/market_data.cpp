#include "vvg/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace vvg {

void validate_bar(const Bar& bar) {
    const Price body_low = std::min(bar.open, bar.close);
    const Price body_high = std::max(bar.open, bar.close);
    if (bar.low > body_low || body_high > bar.high) {
        throw DataError("OHLC invariant violated at " + bar.ts.to_string());
    }
    if (bar.volume < 0) {
        throw DataError("negative volume at " + bar.ts.to_string());
    }
    if (bar.ts.time.minutes % rth::bar_minutes != 0) {
        throw DataError("timestamp off the 5-minute grid at " + bar.ts.to_string());
    }
}

Session::Session(Date date, std::vector<Bar> bars) : date_(date), bars_(std::move(bars)) {
    if (bars_.empty()) throw DataError("empty session " + date.to_string());
    for (std::size_t i = 0; i < bars_.size(); ++i) {
        const Bar& b = bars_[i];
        validate_bar(b);
        if (b.ts.date != date_) {
            throw DataError("bar date mismatch in session " + date_.to_string());
        }
        if (!rth::in_session(b.ts.time)) {
            throw DataError("bar outside RTH in session " + date_.to_string());
        }
        if (i > 0 && bars_[i - 1].ts.time >= b.ts.time) {
            throw DataError("bars out of order in session " + date_.to_string());
        }
    }
}

Price Session::high() const {
    Price h = bars_.front().high;
    for (const Bar& b : bars_) h = std::max(h, b.high);
    return h;
}

Price Session::low() const {
    Price l = bars_.front().low;
    for (const Bar& b : bars_) l = std::min(l, b.low);
    return l;
}

const Bar* Session::bar_starting(TimeOfDay t) const {
    auto it = std::lower_bound(bars_.begin(), bars_.end(), t,
                               [](const Bar& b, TimeOfDay v) { return b.ts.time < v; });
    if (it == bars_.end() || it->ts.time != t) return nullptr;
    return &*it;
}

Dataset::Dataset(std::vector<Session> sessions) : sessions_(std::move(sessions)) {
    for (std::size_t i = 1; i < sessions_.size(); ++i) {
        if (!(sessions_[i - 1].date() < sessions_[i].date())) {
            throw DataError("sessions not strictly ordered by date");
        }
    }
}

std::optional<std::size_t> Dataset::find(Date date) const {
    auto it = std::lower_bound(sessions_.begin(), sessions_.end(), date,
                               [](const Session& s, Date d) { return s.date() < d; });
    if (it == sessions_.end() || it->date() != date) return std::nullopt;
    return static_cast<std::size_t>(it - sessions_.begin());
}

Dataset Dataset::prefix(std::size_t n) const {
    n = std::min(n, sessions_.size());
    return Dataset(std::vector<Session>(sessions_.begin(), sessions_.begin() + n));
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Splits into exactly `n` comma-separated fields; returns false otherwise.
bool split_fields(std::string_view line, std::span<std::string_view> out) {
    std::size_t field = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (field >= out.size()) return false;
            out[field++] = trim(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return field == out.size();
}

Price parse_price_field(std::string_view text, int line_no, const char* name) {
    const auto p = Price::parse(text);
    if (!p) {
        throw ParseError(line_no, std::string("unparseable ") + name + " '" + std::string(text) + "'");
    }
    return *p;
}

}  // namespace

std::vector<Bar> parse_bar_file(std::istream& source) {
    std::string line;
    if (!std::getline(source, line)) throw ParseError(1, "empty file");
    if (trim(line) != bar_file_header) {
        throw ParseError(1, "expected header '" + std::string(bar_file_header) + "'");
    }

    std::vector<Bar> bars;
    int line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty()) continue;

        std::string_view fields[6];
        if (!split_fields(row, fields)) {
            throw ParseError(line_no, "expected 6 comma-separated fields");
        }

        Bar bar;
        const auto ts = Timestamp::parse(fields[0]);
        if (!ts) throw ParseError(line_no, "unparseable timestamp '" + std::string(fields[0]) + "'");
        bar.ts = *ts;
        if (bar.ts.time.minutes % rth::bar_minutes != 0) {
            throw ParseError(line_no, "timestamp off the 5-minute grid");
        }
        bar.open = parse_price_field(fields[1], line_no, "open");
        bar.high = parse_price_field(fields[2], line_no, "high");
        bar.low = parse_price_field(fields[3], line_no, "low");
        bar.close = parse_price_field(fields[4], line_no, "close");

        int64_t volume = 0;
        {
            const std::string_view v = fields[5];
            const char* first = v.data();
            const char* last = first + v.size();
            auto [ptr, ec] = std::from_chars(first, last, volume);
            if (v.empty() || ec != std::errc() || ptr != last) {
                throw ParseError(line_no, "unparseable volume '" + std::string(v) + "'");
            }
        }
        if (volume < 0) throw ParseError(line_no, "volume must be non-negative");
        bar.volume = volume;

        const Price body_low = std::min(bar.open, bar.close);
        const Price body_high = std::max(bar.open, bar.close);
        if (bar.low > body_low || body_high > bar.high) {
            throw ParseError(line_no, "OHLC invariant violated (low <= open,close <= high)");
        }
        bars.push_back(bar);
    }
    if (bars.empty()) throw ParseError(line_no, "no data rows");
    return bars;
}

BuildReport build_sessions(std::vector<Bar> bars, CompletenessPolicy policy) {
    std::map<Date, std::vector<Bar>> by_date;
    for (Bar& bar : bars) {
        if (!rth::in_session(bar.ts.time)) continue;
        by_date[bar.ts.date].push_back(bar);
    }

    BuildReport report;
    std::vector<Session> sessions;
    for (auto& [date, day_bars] : by_date) {
        std::sort(day_bars.begin(), day_bars.end(),
                  [](const Bar& a, const Bar& b) { return a.ts.time < b.ts.time; });
        for (std::size_t i = 1; i < day_bars.size(); ++i) {
            if (day_bars[i - 1].ts.time == day_bars[i].ts.time) {
                throw DataError("duplicate bar timestamp " + day_bars[i].ts.to_string());
            }
        }
        if (static_cast<int>(day_bars.size()) < policy.min_bars) {
            report.dropped.push_back(
                {date, static_cast<int>(day_bars.size()),
                 "incomplete session (" + std::to_string(day_bars.size()) + "/" +
                     std::to_string(rth::bars_per_session) + " bars)"});
            continue;
        }
        sessions.emplace_back(date, std::move(day_bars));
    }
    if (sessions.empty()) throw DataError("no sessions survive the completeness policy");
    report.dataset = Dataset(std::move(sessions));
    return report;
}

std::optional<Price> prior_close(const Dataset& dataset, Date date) {
    const auto idx = dataset.find(date);
    if (!idx) throw std::invalid_argument("date " + date.to_string() + " not in dataset");
    if (*idx == 0) return std::nullopt;
    return dataset[*idx - 1].close_price();
}

void write_bars(const Dataset& dataset, std::ostream& out) {
    out << bar_file_header << '\n';
    for (const Session& session : dataset.sessions()) {
        for (const Bar& bar : session.bars()) {
            out << bar.ts.to_string() << ',' << bar.open.to_string() << ','
                << bar.high.to_string() << ',' << bar.low.to_string() << ','
                << bar.close.to_string() << ',' << bar.volume << '\n';
        }
    }
}

}  // namespace vvg
