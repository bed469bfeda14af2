#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vvg/behavior.hpp"
#include "vvg/features.hpp"
#include "vvg/strategies.hpp"
#include "vvg/validation.hpp"

namespace vvg::report {

enum class OutputFormat { table, csv, json };

OutputFormat parse_format(const std::string& name);  // throws on unknown name

// Activation statistics in the shape consumed by cmd_classify.
struct ActivationSummary {
    int sessions = 0;
    int eligible = 0;
    int positive = 0;
    std::optional<double> rate_all;       // positive / sessions
    std::optional<double> rate_eligible;  // positive / eligible
    struct YearRow {
        int year = 0;
        int sessions = 0;
        int eligible = 0;
        int positive = 0;
    };
    std::vector<YearRow> years;
    std::vector<std::string> caveats;
};

ActivationSummary activation_summary(const Dataset& dataset, const Classification& classification);

void render_activation(const ActivationSummary& summary, OutputFormat format, std::ostream& out);
void write_activation_csv(const ActivationSummary& summary, std::ostream& out);

// JSON builders shared by the renderers and the combined stdout documents.
nlohmann::json spread_json(const NextDaySpread& spread);
nlohmann::json path_json(const std::vector<PathCheckpoint>& path);
nlohmann::json reversal_json(const ReversalResult& result);
nlohmann::json yearly_json(const std::vector<YearlyPath>& years);
nlohmann::json summary_json(const std::string& strategy, const StrategySummary& summary);

// Behavior tables.
void render_spread(const NextDaySpread& spread, OutputFormat format, std::ostream& out);
void write_spread_csv(const NextDaySpread& spread, std::ostream& out);

void render_path(const std::vector<PathCheckpoint>& path, const std::string& title,
                 OutputFormat format, std::ostream& out);
void write_path_csv(const std::vector<PathCheckpoint>& path, std::ostream& out);

void render_reversal(const ReversalResult& result, OutputFormat format, std::ostream& out);
void write_reversal_csv(const ReversalStats& stats, std::ostream& out);
void write_peak_timing_csv(const PeakTimingHistogram& histogram, std::ostream& out);

void render_yearly(const std::vector<YearlyPath>& years, OutputFormat format, std::ostream& out);
void write_yearly_csv(const std::vector<YearlyPath>& years, std::ostream& out);

// Figure data as label,x,y rows.
void write_mean_paths_figure_csv(const std::vector<std::pair<std::string, std::vector<PathCheckpoint>>>& series,
                                 std::ostream& out);
void write_peak_timing_figure_csv(const PeakTimingHistogram& histogram, std::ostream& out);
void write_yearly_figure_csv(const std::vector<YearlyPath>& years, std::ostream& out);
void write_tstat_figure_csv(const std::vector<std::pair<std::string, std::optional<double>>>& tstats,
                            std::ostream& out);

// Strategy summary.
void render_summary(const std::string& strategy, const StrategySummary& summary,
                    OutputFormat format, std::ostream& out);
void write_summary_csv(const StrategySummary& summary, std::ostream& out);

// Gate verdict.
nlohmann::json gate_json(const std::string& strategy, const GateResult& result,
                         const YearConsistency& years, const GateConfig& config);
void render_gate(const std::string& strategy, const GateResult& result,
                 const YearConsistency& years, const GateConfig& config, OutputFormat format,
                 std::ostream& out);

// Writes `content` to dir/name (dir created on demand).
void write_file(const std::filesystem::path& dir, const std::string& name,
                const std::string& content);

}  // namespace vvg::report
