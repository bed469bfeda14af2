#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vvg/market_data.hpp"

namespace vvg {

// The three per-day inputs of the day classifier. A missing value means
// the day cannot be classified (no prior close, short volume history,
// degenerate volume window, missing opening bars).
struct FeatureRow {
    Date date;
    std::optional<double> r1;       // |first-30-minute return|, fraction
    std::optional<double> gap;      // |overnight gap|, fraction
    std::optional<double> vol_dev;  // first-bar volume z-score
};

// Expanding-window tercile boundaries in effect on `date`, computed from
// strictly earlier days only.
struct ThresholdRow {
    Date date;
    std::optional<double> r1_thr;
    std::optional<double> gap_thr;
    std::optional<double> vol_thr;
};

struct DayLabel {
    Date date;
    bool eligible = false;  // false during warm-up or when any input is absent
    bool positive = false;  // implies eligible
};

struct ClassifierConfig {
    int warmup = 60;             // days before the first possible label
    double quantile = 2.0 / 3.0; // top-tercile boundary
    int vol_window = 20;         // volume baseline length
};

struct Classification {
    std::vector<FeatureRow> features;
    std::vector<ThresholdRow> thresholds;
    std::vector<DayLabel> labels;

    std::vector<Date> positive_dates() const;
    std::vector<Date> eligible_dates() const;
};

// |close(09:55 bar) - open(09:30 bar)| / open(09:30 bar).
// Throws DataError when any of the first six bars is missing or the open is zero.
double compute_r1(const Session& session);

// Signed variant used by the strategy layer.
double signed_opening_return(const Session& session);

// |session open - prior close| / prior close. Throws on non-positive prior close.
double compute_gap(const Session& session, Price prior_close);

// First-bar volume z-score against the trailing window of prior first-bar
// volumes (most recent last). Absent when fewer than `window` values exist
// or the window standard deviation is zero.
std::optional<double> compute_vol_dev(const Session& session,
                                      std::span<const int64_t> prior_first_bar_volumes,
                                      int window = 20);

// Linear-interpolation percentile over an already sorted ascending range.
double percentile_sorted(std::span<const double> sorted, double q);

// Same, for an unsorted history (copies and sorts). Throws on empty history
// or q outside [0, 1].
double expanding_percentile(std::span<const double> history, double q = 2.0 / 3.0);

// Labeling core: thresholds for each row come from strictly earlier rows,
// and a day is positive only when all three inputs strictly exceed their
// thresholds. Exposed separately so the rule can be driven with synthetic
// feature rows.
Classification label_rows(std::vector<FeatureRow> rows, const ClassifierConfig& config = {});

// Per-day feature extraction over a dataset.
std::vector<FeatureRow> compute_features(const Dataset& dataset, const ClassifierConfig& config = {});

// compute_features + label_rows.
Classification classify(const Dataset& dataset, const ClassifierConfig& config = {});

// CSV export: date,r1,gap,vol_dev,r1_thr,gap_thr,vol_thr,eligible,positive
// with absent values as empty fields.
void write_labels_csv(const Classification& classification, std::ostream& out);

// Resolves a population selector ("classifier-positive", "all-eligible",
// "all") to the matching dates. Throws std::invalid_argument on unknown names.
std::vector<Date> select_population(const Dataset& dataset, const Classification& classification,
                                    std::string_view selector);

}  // namespace vvg
