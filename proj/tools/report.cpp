#include "report.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "vvg/format.hpp"

namespace vvg::report {

namespace {

using nlohmann::json;

json json_opt(const std::optional<double>& value) {
    if (!value) return nullptr;
    return *value;
}

// Table precision: points 2, fractions 4, t-statistics 2, p-values 4.
std::string pts(const std::optional<double>& v) { return v ? fmt_fixed(*v, 2) : "n/a"; }
std::string frac(const std::optional<double>& v) { return v ? fmt_fixed(*v, 4) : "n/a"; }
std::string tstat(const std::optional<double>& v) { return v ? fmt_fixed(*v, 2) : "n/a"; }
std::string pval(const std::optional<double>& v) { return v ? fmt_fixed(*v, 4) : "n/a"; }

}  // namespace

json path_json(const std::vector<PathCheckpoint>& path) {
    json rows = json::array();
    for (const PathCheckpoint& cp : path) {
        rows.push_back({{"time", cp.time.to_string()},
                        {"n", cp.n},
                        {"mean", cp.mean},
                        {"std", json_opt(cp.stdev)},
                        {"tstat", json_opt(cp.tstat)},
                        {"median", cp.median},
                        {"p25", cp.p25},
                        {"p75", cp.p75},
                        {"pct_positive", cp.pct_positive}});
    }
    return rows;
}

json spread_json(const NextDaySpread& spread) {
    return json{{"n_positive", spread.n_positive},
                {"n_negative", spread.n_negative},
                {"mean_next_positive", json_opt(spread.mean_next_positive)},
                {"mean_next_negative", json_opt(spread.mean_next_negative)},
                {"spread", json_opt(spread.spread)}};
}

json reversal_json(const ReversalResult& result) {
    json bins = json::array();
    for (const auto& [time, count] : result.histogram.bins) {
        bins.push_back({{"time", time.to_string()}, {"count", count}});
    }
    return json{{"n_reversed", result.stats.n_reversed},
                {"n_not_reversed", result.stats.n_not_reversed},
                {"reversal_rate", result.stats.reversal_rate},
                {"mean_giveback_all", result.stats.mean_giveback_all},
                {"mean_giveback_reversed", json_opt(result.stats.mean_giveback_reversed)},
                {"peak_timing", bins},
                {"total", result.histogram.total}};
}

json yearly_json(const std::vector<YearlyPath>& years) {
    json out = json::array();
    for (const YearlyPath& year : years) {
        out.push_back({{"year", year.year}, {"checkpoints", path_json(year.checkpoints)}});
    }
    return out;
}

json summary_json(const std::string& strategy, const StrategySummary& summary) {
    json j{{"strategy", strategy},
           {"n", summary.n},
           {"mean_net", json_opt(summary.mean_net)},
           {"tstat", json_opt(summary.tstat)},
           {"win_rate", json_opt(summary.win_rate)},
           {"total_net", summary.total_net}};
    json years = json::object();
    for (const auto& [year, stats] : summary.per_year) {
        years[std::to_string(year)] = {{"n", stats.n},
                                       {"total_net", stats.total_net},
                                       {"tstat", json_opt(stats.tstat)}};
    }
    json directions = json::object();
    for (const auto& [direction, stats] : summary.per_direction) {
        directions[direction > 0 ? "long" : "short"] = {{"n", stats.n},
                                                        {"mean_net", stats.mean_net},
                                                        {"win_rate", stats.win_rate}};
    }
    j["per_year"] = years;
    j["per_direction"] = directions;
    return j;
}

OutputFormat parse_format(const std::string& name) {
    if (name == "table") return OutputFormat::table;
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown format '" + name + "' (expected table, csv or json)");
}

ActivationSummary activation_summary(const Dataset& dataset, const Classification& classification) {
    ActivationSummary summary;
    summary.sessions = static_cast<int>(dataset.size());

    std::map<int, ActivationSummary::YearRow> years;
    for (const DayLabel& label : classification.labels) {
        auto& row = years[label.date.year];
        row.year = label.date.year;
        ++row.sessions;
        if (label.eligible) {
            ++row.eligible;
            ++summary.eligible;
        }
        if (label.positive) {
            ++row.positive;
            ++summary.positive;
        }
    }
    for (const auto& [year, row] : years) summary.years.push_back(row);

    if (summary.sessions > 0) {
        summary.rate_all = static_cast<double>(summary.positive) / summary.sessions;
    }
    if (summary.eligible > 0) {
        summary.rate_eligible = static_cast<double>(summary.positive) / summary.eligible;
    }

    // Degenerate histories make the strict '>' rule unsatisfiable; surface
    // that instead of silently reporting zero positives.
    const auto flag_flat = [&](const char* name, auto getter) {
        std::optional<double> lo, hi;
        int count = 0;
        for (const FeatureRow& row : classification.features) {
            const auto v = getter(row);
            if (!v) continue;
            ++count;
            lo = lo ? std::min(*lo, *v) : *v;
            hi = hi ? std::max(*hi, *v) : *v;
        }
        if (count > 1 && lo == hi) {
            summary.caveats.push_back(std::string("feature '") + name +
                                      "' has a zero-variance history; the strict '>' rule can "
                                      "never mark a day positive");
        }
    };
    flag_flat("r1", [](const FeatureRow& r) { return r.r1; });
    flag_flat("gap", [](const FeatureRow& r) { return r.gap; });
    flag_flat("vol_dev", [](const FeatureRow& r) { return r.vol_dev; });
    return summary;
}

void write_activation_csv(const ActivationSummary& summary, std::ostream& out) {
    const auto rate = [](int positive, int denominator) -> std::string {
        if (denominator == 0) return "";
        return fmt_shortest(static_cast<double>(positive) / denominator);
    };
    out << "year,sessions,eligible,positive,rate_all,rate_eligible\n";
    for (const auto& row : summary.years) {
        out << row.year << ',' << row.sessions << ',' << row.eligible << ',' << row.positive << ','
            << rate(row.positive, row.sessions) << ',' << rate(row.positive, row.eligible) << '\n';
    }
    out << "all," << summary.sessions << ',' << summary.eligible << ',' << summary.positive << ','
        << rate(summary.positive, summary.sessions) << ','
        << rate(summary.positive, summary.eligible) << '\n';
}

void render_activation(const ActivationSummary& summary, OutputFormat format, std::ostream& out) {
    switch (format) {
        case OutputFormat::csv:
            write_activation_csv(summary, out);
            return;
        case OutputFormat::json: {
            json j{{"sessions", summary.sessions},
                   {"eligible_days", summary.eligible},
                   {"positive_days", summary.positive},
                   {"activation_rate_all", json_opt(summary.rate_all)},
                   {"activation_rate_eligible", json_opt(summary.rate_eligible)},
                   {"caveats", summary.caveats}};
            json years = json::array();
            for (const auto& row : summary.years) {
                years.push_back({{"year", row.year},
                                 {"sessions", row.sessions},
                                 {"eligible", row.eligible},
                                 {"positive", row.positive}});
            }
            j["years"] = years;
            out << j.dump(2) << '\n';
            return;
        }
        case OutputFormat::table:
            out << "sessions:        " << summary.sessions << '\n'
                << "eligible days:   " << summary.eligible << '\n'
                << "positive days:   " << summary.positive << '\n'
                << "rate (all):      " << frac(summary.rate_all) << '\n'
                << "rate (eligible): " << frac(summary.rate_eligible) << '\n'
                << "year  sessions  eligible  positive\n";
            for (const auto& row : summary.years) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%-4d  %8d  %8d  %8d", row.year, row.sessions,
                              row.eligible, row.positive);
                out << buf << '\n';
            }
            return;
    }
}

void write_spread_csv(const NextDaySpread& spread, std::ostream& out) {
    out << "group,n,mean_next_return\n";
    out << "positive," << spread.n_positive << ',' << fmt_opt(spread.mean_next_positive) << '\n';
    out << "others," << spread.n_negative << ',' << fmt_opt(spread.mean_next_negative) << '\n';
    out << "spread,," << fmt_opt(spread.spread) << '\n';
}

void render_spread(const NextDaySpread& spread, OutputFormat format, std::ostream& out) {
    switch (format) {
        case OutputFormat::csv:
            write_spread_csv(spread, out);
            return;
        case OutputFormat::json:
            out << spread_json(spread).dump(2) << '\n';
            return;
        case OutputFormat::table:
            out << "next-day open-to-close return\n"
                << "  positive days (n=" << spread.n_positive
                << "): " << frac(spread.mean_next_positive) << '\n'
                << "  other days    (n=" << spread.n_negative
                << "): " << frac(spread.mean_next_negative) << '\n'
                << "  spread: " << frac(spread.spread) << '\n';
            return;
    }
}

void write_path_csv(const std::vector<PathCheckpoint>& path, std::ostream& out) {
    out << "time,n,mean,std,tstat,median,p25,p75,pct_positive\n";
    for (const PathCheckpoint& cp : path) {
        out << cp.time.to_string() << ',' << cp.n << ',' << fmt_shortest(cp.mean) << ','
            << fmt_opt(cp.stdev) << ',' << fmt_opt(cp.tstat) << ',' << fmt_shortest(cp.median)
            << ',' << fmt_shortest(cp.p25) << ',' << fmt_shortest(cp.p75) << ','
            << fmt_shortest(cp.pct_positive) << '\n';
    }
}

void render_path(const std::vector<PathCheckpoint>& path, const std::string& title,
                 OutputFormat format, std::ostream& out) {
    switch (format) {
        case OutputFormat::csv:
            write_path_csv(path, out);
            return;
        case OutputFormat::json:
            out << json{{"title", title}, {"checkpoints", path_json(path)}}.dump(2) << '\n';
            return;
        case OutputFormat::table: {
            out << title << '\n';
            out << "time    n     mean      std    tstat   median      p25      p75  %pos\n";
            for (const PathCheckpoint& cp : path) {
                char buf[160];
                std::snprintf(buf, sizeof(buf), "%s  %4d %8s %8s %8s %8s %8s %8s %5.1f",
                              cp.time.to_string().c_str(), cp.n, fmt_fixed(cp.mean, 2).c_str(),
                              pts(cp.stdev).c_str(), tstat(cp.tstat).c_str(),
                              fmt_fixed(cp.median, 2).c_str(), fmt_fixed(cp.p25, 2).c_str(),
                              fmt_fixed(cp.p75, 2).c_str(), 100.0 * cp.pct_positive);
                out << buf << '\n';
            }
            return;
        }
    }
}

void write_reversal_csv(const ReversalStats& stats, std::ostream& out) {
    out << "metric,value\n";
    out << "n_reversed," << stats.n_reversed << '\n';
    out << "n_not_reversed," << stats.n_not_reversed << '\n';
    out << "reversal_rate," << fmt_shortest(stats.reversal_rate) << '\n';
    out << "mean_giveback_all," << fmt_shortest(stats.mean_giveback_all) << '\n';
    out << "mean_giveback_reversed," << fmt_opt(stats.mean_giveback_reversed) << '\n';
}

void write_peak_timing_csv(const PeakTimingHistogram& histogram, std::ostream& out) {
    out << "time,count,share\n";
    for (const auto& [time, count] : histogram.bins) {
        const double share =
            histogram.total > 0 ? static_cast<double>(count) / histogram.total : 0.0;
        out << time.to_string() << ',' << count << ',' << fmt_shortest(share) << '\n';
    }
}

void render_reversal(const ReversalResult& result, OutputFormat format, std::ostream& out) {
    switch (format) {
        case OutputFormat::csv:
            write_reversal_csv(result.stats, out);
            write_peak_timing_csv(result.histogram, out);
            return;
        case OutputFormat::json:
            out << reversal_json(result).dump(2) << '\n';
            return;
        case OutputFormat::table:
            out << "peak reversal\n"
                << "  reversed:     " << result.stats.n_reversed << '\n'
                << "  not reversed: " << result.stats.n_not_reversed << '\n'
                << "  rate:         " << frac(result.stats.reversal_rate) << '\n'
                << "  mean giveback (all days):      " << fmt_fixed(result.stats.mean_giveback_all, 2)
                << " pts\n"
                << "  mean giveback (reversed only): " << pts(result.stats.mean_giveback_reversed)
                << " pts\n"
                << "peak timing\n";
            for (const auto& [time, count] : result.histogram.bins) {
                out << "  " << time.to_string() << "  " << count << '\n';
            }
            return;
    }
}

void write_yearly_csv(const std::vector<YearlyPath>& years, std::ostream& out) {
    out << "year,time,n,mean\n";
    for (const YearlyPath& year : years) {
        for (const PathCheckpoint& cp : year.checkpoints) {
            out << year.year << ',' << cp.time.to_string() << ',' << cp.n << ','
                << fmt_shortest(cp.mean) << '\n';
        }
    }
}

void render_yearly(const std::vector<YearlyPath>& years, OutputFormat format, std::ostream& out) {
    switch (format) {
        case OutputFormat::csv:
            write_yearly_csv(years, out);
            return;
        case OutputFormat::json:
            out << yearly_json(years).dump(2) << '\n';
            return;
        case OutputFormat::table:
            out << "mean path by calendar year (points from open)\n";
            out << "time   ";
            for (const YearlyPath& year : years) {
                char buf[16];
                std::snprintf(buf, sizeof(buf), " %8d", year.year);
                out << buf;
            }
            out << '\n';
            if (!years.empty()) {
                for (std::size_t i = 0; i < years.front().checkpoints.size(); ++i) {
                    out << years.front().checkpoints[i].time.to_string() << "  ";
                    for (const YearlyPath& year : years) {
                        char buf[16];
                        std::snprintf(buf, sizeof(buf), " %8.2f", year.checkpoints[i].mean);
                        out << buf;
                    }
                    out << '\n';
                }
            }
            return;
    }
}

void write_mean_paths_figure_csv(
    const std::vector<std::pair<std::string, std::vector<PathCheckpoint>>>& series,
    std::ostream& out) {
    out << "label,x,y\n";
    for (const auto& [label, path] : series) {
        for (const PathCheckpoint& cp : path) {
            out << label << ',' << cp.time.to_string() << ',' << fmt_shortest(cp.mean) << '\n';
        }
    }
}

void write_peak_timing_figure_csv(const PeakTimingHistogram& histogram, std::ostream& out) {
    out << "label,x,y\n";
    for (const auto& [time, count] : histogram.bins) {
        out << "peak_count," << time.to_string() << ',' << count << '\n';
    }
}

void write_yearly_figure_csv(const std::vector<YearlyPath>& years, std::ostream& out) {
    out << "label,x,y\n";
    for (const YearlyPath& year : years) {
        for (const PathCheckpoint& cp : year.checkpoints) {
            out << year.year << ',' << cp.time.to_string() << ',' << fmt_shortest(cp.mean) << '\n';
        }
    }
}

void write_tstat_figure_csv(
    const std::vector<std::pair<std::string, std::optional<double>>>& tstats, std::ostream& out) {
    out << "strategy,tstat\n";
    for (const auto& [name, value] : tstats) {
        out << name << ',' << fmt_opt(value) << '\n';
    }
}

void write_summary_csv(const StrategySummary& summary, std::ostream& out) {
    out << "metric,value\n";
    out << "n," << summary.n << '\n';
    out << "mean_net," << fmt_opt(summary.mean_net) << '\n';
    out << "tstat," << fmt_opt(summary.tstat) << '\n';
    out << "win_rate," << fmt_opt(summary.win_rate) << '\n';
    out << "total_net," << fmt_shortest(summary.total_net) << '\n';
    for (const auto& [year, stats] : summary.per_year) {
        out << "year_" << year << "_n," << stats.n << '\n';
        out << "year_" << year << "_total_net," << fmt_shortest(stats.total_net) << '\n';
        out << "year_" << year << "_tstat," << fmt_opt(stats.tstat) << '\n';
    }
    for (const auto& [direction, stats] : summary.per_direction) {
        const char* label = direction > 0 ? "long" : "short";
        out << label << "_n," << stats.n << '\n';
        out << label << "_mean_net," << fmt_shortest(stats.mean_net) << '\n';
        out << label << "_win_rate," << fmt_shortest(stats.win_rate) << '\n';
    }
}

void render_summary(const std::string& strategy, const StrategySummary& summary,
                    OutputFormat format, std::ostream& out) {
    switch (format) {
        case OutputFormat::csv:
            write_summary_csv(summary, out);
            return;
        case OutputFormat::json:
            out << summary_json(strategy, summary).dump(2) << '\n';
            return;
        case OutputFormat::table:
            out << "strategy: " << strategy << '\n'
                << "  trades:    " << summary.n << '\n'
                << "  mean net:  " << pts(summary.mean_net) << " pts\n"
                << "  t-stat:    " << tstat(summary.tstat) << '\n'
                << "  win rate:  " << frac(summary.win_rate) << '\n'
                << "  total net: " << fmt_fixed(summary.total_net, 2) << " pts\n";
            for (const auto& [year, stats] : summary.per_year) {
                out << "  " << year << ": n=" << stats.n << " total=" << fmt_fixed(stats.total_net, 2)
                    << " t=" << tstat(stats.tstat) << '\n';
            }
            for (const auto& [direction, stats] : summary.per_direction) {
                out << "  " << (direction > 0 ? "long " : "short") << ": n=" << stats.n
                    << " mean=" << fmt_fixed(stats.mean_net, 2)
                    << " win=" << fmt_fixed(stats.win_rate, 4) << '\n';
            }
            return;
    }
}

nlohmann::json gate_json(const std::string& strategy, const GateResult& result,
                         const YearConsistency& years, const GateConfig& config) {
    json year_rows = json::array();
    for (const YearNet& y : years.years) {
        year_rows.push_back({{"year", y.year},
                             {"n", y.n},
                             {"total_net", y.total_net},
                             {"qualifies", y.qualifies}});
    }
    return json{
        {"strategy", strategy},
        {"criteria",
         {{"c1_tstat",
           {{"pass", result.c1_tstat}, {"measured", json_opt(result.tstat)},
            {"threshold", config.min_tstat}}},
          {"c2_min_trades",
           {{"pass", result.c2_min_trades}, {"measured", result.n},
            {"threshold", config.min_trades}}},
          {"c3_net_positive",
           {{"pass", result.c3_net_positive}, {"measured", json_opt(result.total_net)},
            {"threshold", 0.0}}},
          {"c4_year_consistency",
           {{"pass", result.c4_year_consistency}, {"years", year_rows}}},
          {"c5_permutation",
           {{"pass", result.c5_permutation}, {"measured", json_opt(result.p_value)},
            {"threshold", config.max_p}}}}},
        {"verdict", result.pass ? "PASS" : "FAIL"}};
}

void render_gate(const std::string& strategy, const GateResult& result,
                 const YearConsistency& years, const GateConfig& config, OutputFormat format,
                 std::ostream& out) {
    if (format == OutputFormat::json) {
        out << gate_json(strategy, result, years, config).dump(2) << '\n';
        return;
    }
    const auto line = [&](const char* name, bool pass, const std::string& measured,
                          const std::string& threshold) {
        out << "  " << name << ": " << (pass ? "pass" : "FAIL") << " (measured " << measured
            << ", requires " << threshold << ")\n";
    };
    out << "gate: " << strategy << '\n';
    line("c1 t-statistic     ", result.c1_tstat, tstat(result.tstat),
         ">= " + fmt_fixed(config.min_tstat, 2));
    line("c2 trade count     ", result.c2_min_trades, std::to_string(result.n),
         ">= " + std::to_string(config.min_trades));
    line("c3 net after costs ", result.c3_net_positive, pts(result.total_net), "> 0");
    std::string year_desc;
    for (const YearNet& y : years.years) {
        if (!y.qualifies) continue;
        if (!year_desc.empty()) year_desc += ", ";
        year_desc += std::to_string(y.year) + ": " + fmt_fixed(y.total_net, 2);
    }
    if (year_desc.empty()) year_desc = "no qualifying years";
    line("c4 year consistency", result.c4_year_consistency, year_desc,
         "every qualifying year > 0");
    line("c5 permutation p   ", result.c5_permutation, pval(result.p_value),
         "< " + fmt_fixed(config.max_p, 4));
    out << "  verdict: " << (result.pass ? "PASS" : "FAIL") << '\n';
}

void write_file(const std::filesystem::path& dir, const std::string& name,
                const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
}

}  // namespace vvg::report
