#include "vvg/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "vvg/format.hpp"

namespace vvg {

namespace {

// The six bars starting 09:30 .. 09:55.
const Bar* opening_bar(const Session& session, int index) {
    return session.bar_starting(TimeOfDay{rth::session_open.minutes + index * rth::bar_minutes});
}

bool has_opening_window(const Session& session) {
    for (int i = 0; i < 6; ++i) {
        if (opening_bar(session, i) == nullptr) return false;
    }
    return session.open_price().units() > 0;
}

}  // namespace

std::vector<Date> Classification::positive_dates() const {
    std::vector<Date> out;
    for (const DayLabel& label : labels) {
        if (label.positive) out.push_back(label.date);
    }
    return out;
}

std::vector<Date> Classification::eligible_dates() const {
    std::vector<Date> out;
    for (const DayLabel& label : labels) {
        if (label.eligible) out.push_back(label.date);
    }
    return out;
}

double signed_opening_return(const Session& session) {
    const Bar* first = opening_bar(session, 0);
    const Bar* sixth = opening_bar(session, 5);
    if (first == nullptr || sixth == nullptr) {
        throw DataError("missing opening bars in session " + session.date().to_string());
    }
    if (first->open.units() == 0) {
        throw DataError("zero open price in session " + session.date().to_string());
    }
    return (sixth->close - first->open) / first->open.points();
}

double compute_r1(const Session& session) {
    return std::abs(signed_opening_return(session));
}

double compute_gap(const Session& session, Price prior_close) {
    if (prior_close.units() <= 0) {
        throw DataError("non-positive prior close before " + session.date().to_string());
    }
    return std::abs((session.open_price() - prior_close) / prior_close.points());
}

std::optional<double> compute_vol_dev(const Session& session,
                                      std::span<const int64_t> prior_first_bar_volumes,
                                      int window) {
    if (window < 2 || static_cast<int>(prior_first_bar_volumes.size()) < window) {
        return std::nullopt;
    }
    const auto recent = prior_first_bar_volumes.last(static_cast<std::size_t>(window));
    double mean = 0.0;
    for (const int64_t v : recent) mean += static_cast<double>(v);
    mean /= window;
    double ss = 0.0;
    for (const int64_t v : recent) {
        const double d = static_cast<double>(v) - mean;
        ss += d * d;
    }
    const double stdev = std::sqrt(ss / (window - 1));
    if (stdev <= 0.0) return std::nullopt;
    return (static_cast<double>(session.bars().front().volume) - mean) / stdev;
}

double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("percentile of empty history");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile outside [0, 1]");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double expanding_percentile(std::span<const double> history, double q) {
    std::vector<double> sorted(history.begin(), history.end());
    std::sort(sorted.begin(), sorted.end());
    return percentile_sorted(sorted, q);
}

namespace {

// History kept sorted so the expanding percentile is an O(log n) insert
// plus an O(1) read per day.
class SortedHistory {
public:
    void insert(double v) {
        values_.insert(std::upper_bound(values_.begin(), values_.end(), v), v);
    }
    bool empty() const { return values_.empty(); }
    double percentile(double q) const { return percentile_sorted(values_, q); }

private:
    std::vector<double> values_;
};

}  // namespace

Classification label_rows(std::vector<FeatureRow> rows, const ClassifierConfig& config) {
    Classification out;
    out.features = std::move(rows);
    out.thresholds.reserve(out.features.size());
    out.labels.reserve(out.features.size());

    SortedHistory r1_hist, gap_hist, vol_hist;
    for (std::size_t i = 0; i < out.features.size(); ++i) {
        const FeatureRow& row = out.features[i];

        ThresholdRow thr{row.date, {}, {}, {}};
        if (!r1_hist.empty()) thr.r1_thr = r1_hist.percentile(config.quantile);
        if (!gap_hist.empty()) thr.gap_thr = gap_hist.percentile(config.quantile);
        if (!vol_hist.empty()) thr.vol_thr = vol_hist.percentile(config.quantile);

        DayLabel label{row.date, false, false};
        const bool inputs_present = row.r1 && row.gap && row.vol_dev;
        const bool thresholds_present = thr.r1_thr && thr.gap_thr && thr.vol_thr;
        label.eligible = static_cast<int>(i) >= config.warmup && inputs_present && thresholds_present;
        label.positive = label.eligible && *row.r1 > *thr.r1_thr && *row.gap > *thr.gap_thr &&
                         *row.vol_dev > *thr.vol_thr;

        out.thresholds.push_back(thr);
        out.labels.push_back(label);

        if (row.r1) r1_hist.insert(*row.r1);
        if (row.gap) gap_hist.insert(*row.gap);
        if (row.vol_dev) vol_hist.insert(*row.vol_dev);
    }
    return out;
}

std::vector<FeatureRow> compute_features(const Dataset& dataset, const ClassifierConfig& config) {
    std::vector<FeatureRow> rows;
    rows.reserve(dataset.size());
    std::vector<int64_t> first_bar_volumes;
    first_bar_volumes.reserve(dataset.size());

    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const Session& session = dataset[i];
        FeatureRow row{session.date(), {}, {}, {}};
        if (has_opening_window(session)) row.r1 = compute_r1(session);
        if (i > 0 && dataset[i - 1].close_price().units() > 0) {
            row.gap = compute_gap(session, dataset[i - 1].close_price());
        }
        row.vol_dev = compute_vol_dev(session, first_bar_volumes, config.vol_window);
        rows.push_back(row);
        first_bar_volumes.push_back(session.bars().front().volume);
    }
    return rows;
}

Classification classify(const Dataset& dataset, const ClassifierConfig& config) {
    if (dataset.empty()) throw std::invalid_argument("classify over an empty dataset");
    return label_rows(compute_features(dataset, config), config);
}

void write_labels_csv(const Classification& classification, std::ostream& out) {
    out << "date,r1,gap,vol_dev,r1_thr,gap_thr,vol_thr,eligible,positive\n";
    for (std::size_t i = 0; i < classification.labels.size(); ++i) {
        const FeatureRow& f = classification.features[i];
        const ThresholdRow& t = classification.thresholds[i];
        const DayLabel& l = classification.labels[i];
        out << l.date.to_string() << ',' << fmt_opt(f.r1) << ',' << fmt_opt(f.gap) << ','
            << fmt_opt(f.vol_dev) << ',' << fmt_opt(t.r1_thr) << ',' << fmt_opt(t.gap_thr) << ','
            << fmt_opt(t.vol_thr) << ',' << (l.eligible ? '1' : '0') << ','
            << (l.positive ? '1' : '0') << '\n';
    }
}

std::vector<Date> select_population(const Dataset& dataset, const Classification& classification,
                                    std::string_view selector) {
    if (selector == "classifier-positive") return classification.positive_dates();
    if (selector == "all-eligible") return classification.eligible_dates();
    if (selector == "all") {
        std::vector<Date> out;
        out.reserve(dataset.size());
        for (const Session& s : dataset.sessions()) out.push_back(s.date());
        return out;
    }
    throw std::invalid_argument("unknown population selector '" + std::string(selector) +
                                "' (expected classifier-positive, all-eligible or all)");
}

}  // namespace vvg
