#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report.hpp"
#include "vvg/behavior.hpp"
#include "vvg/features.hpp"
#include "vvg/market_data.hpp"
#include "vvg/strategies.hpp"
#include "vvg/synth.hpp"
#include "vvg/validation.hpp"

namespace {

using namespace vvg;
namespace fs = std::filesystem;

// Exit codes: 0 success, 1 usage error, 2 data error, 3 empty result.
constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_empty = 3;

struct CommonOptions {
    std::string data_path;
    double friction = 2.0;
    int warmup = 60;
    double quantile = 2.0 / 3.0;
    int atr_window = 14;
    uint64_t seed = 42;
    int resamples = 10'000;
    int min_bars = rth::bars_per_session;
    int min_history = 20;
    double slope_tstat = -2.0;
    std::string vol_split_base = "reversal";
    double vol_split_cutoff = 1.0;
    std::string population = "classifier-positive";
    std::string format = "table";
    std::string out_dir;
};

void add_common_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--data", opt.data_path, "Bar CSV file")->required();
    cmd->add_option("--friction", opt.friction, "Round-trip friction in points")
        ->capture_default_str();
    cmd->add_option("--warmup", opt.warmup, "Ineligible warm-up days")->capture_default_str();
    cmd->add_option("--quantile", opt.quantile, "Threshold quantile")->capture_default_str();
    cmd->add_option("--atr-window", opt.atr_window, "ATR window in days")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "Seed for the permutation test")->capture_default_str();
    cmd->add_option("--resamples", opt.resamples, "Permutation resamples")->capture_default_str();
    cmd->add_option("--min-bars", opt.min_bars,
                    "Session completeness policy: minimum bars per day")
        ->capture_default_str();
    cmd->add_option("--min-history", opt.min_history,
                    "Prior classifier days required by intersection-reversal")
        ->capture_default_str();
    cmd->add_option("--slope-tstat", opt.slope_tstat,
                    "Regression-filter confidence threshold (slope t must be <= this)")
        ->capture_default_str();
    cmd->add_option("--vol-split-base", opt.vol_split_base,
                    "Base strategy for vol-regime-split")
        ->capture_default_str();
    cmd->add_option("--vol-split-cutoff", opt.vol_split_cutoff,
                    "Prior-range/ATR ratio cutoff for vol-regime-split")
        ->capture_default_str();
    cmd->add_option("--population", opt.population,
                    "classifier-positive | all-eligible | all | @<date file>")
        ->capture_default_str();
    cmd->add_option("--format", opt.format, "Stdout format: table | csv | json")
        ->capture_default_str();
    cmd->add_option("--out", opt.out_dir, "Directory for CSV/JSON artifacts");
}

ClassifierConfig classifier_config(const CommonOptions& opt) {
    ClassifierConfig config;
    config.warmup = opt.warmup;
    config.quantile = opt.quantile;
    return config;
}

StrategyConfig strategy_config(const CommonOptions& opt) {
    StrategyConfig config;
    config.exec.friction_round_trip = opt.friction;
    config.atr_window = opt.atr_window;
    config.regression.min_history = opt.min_history;
    config.regression.max_slope_tstat = opt.slope_tstat;
    config.vol_split_base = opt.vol_split_base;
    config.vol_split_cutoff = opt.vol_split_cutoff;
    return config;
}

BuildReport load_data(const CommonOptions& opt) {
    std::ifstream in(opt.data_path);
    if (!in) throw DataError("cannot open '" + opt.data_path + "'");
    auto report = build_sessions(parse_bar_file(in), CompletenessPolicy::at_least(opt.min_bars));
    for (const DroppedSession& dropped : report.dropped) {
        std::cerr << "DROPPED " << dropped.date.to_string() << ' ' << dropped.reason << '\n';
    }
    return report;
}

DaySet resolve_population(const Dataset& dataset, const Classification& classification,
                          const std::string& selector) {
    if (!selector.empty() && selector.front() == '@') {
        const std::string path = selector.substr(1);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open population file '" + path + "'");
        DaySet days;
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (line.empty()) continue;
            const auto date = Date::parse(line);
            if (!date) throw std::invalid_argument("bad date '" + line + "' in " + path);
            if (!dataset.find(*date)) {
                throw std::invalid_argument("population date " + date->to_string() +
                                            " not in dataset");
            }
            days.push_back(*date);
        }
        return days;
    }
    return select_population(dataset, classification, selector);
}

std::vector<std::string> resolve_strategies(const std::string& selector) {
    if (selector == "all") {
        return std::vector<std::string>(strategy_names.begin(), strategy_names.end());
    }
    for (const auto& name : strategy_names) {
        if (selector == name) return {selector};
    }
    std::string known = "all";
    for (const auto& name : strategy_names) {
        known += ", ";
        known += name;
    }
    throw std::invalid_argument("unknown strategy '" + selector + "' (valid: " + known + ")");
}

template <typename Fn>
std::string capture(Fn&& fn) {
    std::ostringstream out;
    fn(out);
    return out.str();
}

void cmd_validate_data(const CommonOptions& opt) {
    const BuildReport report = load_data(opt);
    const Dataset& dataset = report.dataset;
    std::size_t bars = 0;
    for (const Session& session : dataset.sessions()) bars += session.bars().size();
    std::cout << "sessions: " << dataset.size() << '\n'
              << "dropped: " << report.dropped.size() << '\n'
              << "bars: " << bars << '\n'
              << "span: " << dataset[0].date().to_string() << " .. "
              << dataset[dataset.size() - 1].date().to_string() << '\n';
}

void cmd_classify(const CommonOptions& opt) {
    const Dataset dataset = load_data(opt).dataset;
    const Classification classification = classify(dataset, classifier_config(opt));
    const auto summary = report::activation_summary(dataset, classification);

    if (summary.eligible == 0) {
        std::cerr << "warning: no eligible days (dataset shorter than the warm-up of "
                  << opt.warmup << " days?)\n";
    }
    for (const std::string& caveat : summary.caveats) std::cerr << "note: " << caveat << '\n';

    report::render_activation(summary, report::parse_format(opt.format), std::cout);
    if (!opt.out_dir.empty()) {
        report::write_file(opt.out_dir, "labels.csv",
                           capture([&](std::ostream& o) { write_labels_csv(classification, o); }));
        report::write_file(
            opt.out_dir, "activation_summary.csv",
            capture([&](std::ostream& o) { report::write_activation_csv(summary, o); }));
    }
}

void cmd_behavior(const CommonOptions& opt) {
    const Dataset dataset = load_data(opt).dataset;
    const Classification classification = classify(dataset, classifier_config(opt));
    const DaySet selected = resolve_population(dataset, classification, opt.population);
    if (selected.empty()) {
        throw EmptyResultError("population '" + opt.population + "' selected no days");
    }

    DaySet others;
    {
        std::set<Date> chosen(selected.begin(), selected.end());
        for (const Session& session : dataset.sessions()) {
            if (!chosen.contains(session.date())) others.push_back(session.date());
        }
    }

    const auto format = report::parse_format(opt.format);
    const NextDaySpread spread = next_day_spread(dataset, classification.labels);
    const auto path_selected = intraday_path(dataset, selected);
    const auto path_others =
        others.empty() ? std::vector<PathCheckpoint>{} : intraday_path(dataset, others);
    const ReversalResult reversal = peak_reversal(dataset, selected);
    const auto yearly = yearly_paths(dataset, selected);

    if (format == report::OutputFormat::json) {
        // One combined document instead of concatenated sections.
        nlohmann::json doc{{"next_day_spread", report::spread_json(spread)},
                           {"intraday_path_selected", report::path_json(path_selected)},
                           {"peak_reversal", report::reversal_json(reversal)},
                           {"yearly_paths", report::yearly_json(yearly)}};
        if (!path_others.empty()) doc["intraday_path_others"] = report::path_json(path_others);
        std::cout << doc.dump(2) << '\n';
    } else {
        report::render_spread(spread, format, std::cout);
        report::render_path(path_selected,
                            "selected population (n=" + std::to_string(selected.size()) + ")",
                            format, std::cout);
        if (!path_others.empty()) {
            report::render_path(path_others, "other days (n=" + std::to_string(others.size()) + ")",
                                format, std::cout);
        }
        report::render_reversal(reversal, format, std::cout);
        report::render_yearly(yearly, format, std::cout);
    }

    if (!opt.out_dir.empty()) {
        using report::write_file;
        write_file(opt.out_dir, "next_day_spread.csv",
                   capture([&](std::ostream& o) { report::write_spread_csv(spread, o); }));
        write_file(opt.out_dir, "intraday_path_selected.csv",
                   capture([&](std::ostream& o) { report::write_path_csv(path_selected, o); }));
        if (!path_others.empty()) {
            write_file(opt.out_dir, "intraday_path_others.csv",
                       capture([&](std::ostream& o) { report::write_path_csv(path_others, o); }));
        }
        write_file(opt.out_dir, "peak_reversal.csv",
                   capture([&](std::ostream& o) { report::write_reversal_csv(reversal.stats, o); }));
        write_file(opt.out_dir, "peak_timing.csv", capture([&](std::ostream& o) {
                       report::write_peak_timing_csv(reversal.histogram, o);
                   }));
        write_file(opt.out_dir, "yearly_paths.csv",
                   capture([&](std::ostream& o) { report::write_yearly_csv(yearly, o); }));

        std::vector<std::pair<std::string, std::vector<PathCheckpoint>>> series;
        series.emplace_back("selected", path_selected);
        if (!path_others.empty()) series.emplace_back("others", path_others);
        write_file(opt.out_dir, "fig1_mean_paths.csv", capture([&](std::ostream& o) {
                       report::write_mean_paths_figure_csv(series, o);
                   }));
        write_file(opt.out_dir, "fig2_peak_timing.csv", capture([&](std::ostream& o) {
                       report::write_peak_timing_figure_csv(reversal.histogram, o);
                   }));
        write_file(opt.out_dir, "fig3_yearly_paths.csv", capture([&](std::ostream& o) {
                       report::write_yearly_figure_csv(yearly, o);
                   }));
    }
}

void cmd_backtest(const CommonOptions& opt, const std::string& selector) {
    const auto strategies = resolve_strategies(selector);
    const Dataset dataset = load_data(opt).dataset;
    const Classification classification = classify(dataset, classifier_config(opt));
    const DaySet days = resolve_population(dataset, classification, opt.population);
    const auto config = strategy_config(opt);
    const auto format = report::parse_format(opt.format);

    std::vector<std::pair<std::string, std::optional<double>>> tstats;
    nlohmann::json combined = nlohmann::json::object();
    for (const std::string& name : strategies) {
        const TradeSet trades = run_strategy(name, dataset, classification, days, config);
        const StrategySummary summary = summarize(trades);
        tstats.emplace_back(name, summary.tstat);
        if (format == report::OutputFormat::json) {
            combined[name] = report::summary_json(name, summary);
        } else {
            report::render_summary(name, summary, format, std::cout);
        }
        if (name == "intersection-reversal" && trades.empty()) {
            std::cerr << "note: intersection-reversal needs " << config.regression.min_history
                      << " prior classifier-positive days before its first trade\n";
        }
        if (!opt.out_dir.empty()) {
            report::write_file(opt.out_dir, "trades_" + name + ".csv",
                               capture([&](std::ostream& o) { write_trades_csv(trades, name, o); }));
            report::write_file(
                opt.out_dir, "summary_" + name + ".csv",
                capture([&](std::ostream& o) { report::write_summary_csv(summary, o); }));
        }
    }
    if (format == report::OutputFormat::json) {
        std::cout << (strategies.size() == 1 ? combined[strategies.front()] : combined).dump(2)
                  << '\n';
    }
    if (selector == "all" && !opt.out_dir.empty()) {
        report::write_file(opt.out_dir, "fig4_tstats.csv", capture([&](std::ostream& o) {
                               report::write_tstat_figure_csv(tstats, o);
                           }));
    }
}

void cmd_gate(const CommonOptions& opt, const std::string& selector) {
    const auto strategies = resolve_strategies(selector);
    const Dataset dataset = load_data(opt).dataset;
    const Classification classification = classify(dataset, classifier_config(opt));
    const DaySet days = resolve_population(dataset, classification, opt.population);
    const auto config = strategy_config(opt);
    const auto format = report::parse_format(opt.format);
    const GateConfig gate_config;

    nlohmann::json combined = nlohmann::json::object();
    for (const std::string& name : strategies) {
        const TradeSet trades = run_strategy(name, dataset, classification, days, config);
        const StrategySummary summary = summarize(trades);
        std::optional<PermutationResult> perm;
        if (!trades.empty()) {
            std::vector<double> nets;
            nets.reserve(trades.size());
            for (const Trade& trade : trades) nets.push_back(trade.net_points);
            perm = permutation_test(nets, opt.resamples, opt.seed);
        }
        const YearConsistency years = year_consistency(trades);
        const GateResult result = gate(summary, perm, years.consistent, gate_config);

        if (format == report::OutputFormat::json) {
            combined[name] = report::gate_json(name, result, years, gate_config);
        } else {
            report::render_gate(name, result, years, gate_config, format, std::cout);
        }
        if (!opt.out_dir.empty()) {
            report::write_file(opt.out_dir, "gate_" + name + ".json",
                               report::gate_json(name, result, years, gate_config).dump(2) + "\n");
        }
    }
    if (format == report::OutputFormat::json) {
        std::cout << (strategies.size() == 1 ? combined[strategies.front()] : combined).dump(2)
                  << '\n';
    }
}

struct SynthOptions {
    SynthConfig config;
    std::vector<std::string> shock_specs;
    std::string start_date;
    std::string config_file;
    std::string output = "-";
};

ShockSpec parse_shock(const std::string& text) {
    ShockSpec shock;
    char extra = 0;
    const int got = std::sscanf(text.c_str(), "%d:%lf:%lf:%lf%c", &shock.day_index,
                                &shock.gap_mult, &shock.volume_mult, &shock.opening_move_mult,
                                &extra);
    if (got != 4) {
        throw std::invalid_argument("bad shock '" + text + "' (expected day:gap:volume:move)");
    }
    return shock;
}

void apply_synth_config_file(const std::string& path, SynthConfig& config) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "n_days") config.n_days = std::stoi(value);
        else if (key == "seed") config.seed = std::stoull(value);
        else if (key == "base_price") config.base_price = std::stod(value);
        else if (key == "per_bar_volatility") config.per_bar_volatility = std::stod(value);
        else if (key == "gap_volatility") config.gap_volatility = std::stod(value);
        else if (key == "volume_mean") config.volume_mean = std::stod(value);
        else if (key == "volume_dispersion") config.volume_dispersion = std::stod(value);
        else if (key == "drift") config.drift = std::stod(value);
        else if (key == "start_date") {
            const auto date = Date::parse(value);
            if (!date) throw std::invalid_argument("bad start_date '" + value + "'");
            config.start_date = *date;
        } else if (key == "shock") {
            config.shocks.push_back(parse_shock(value));
        } else {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": unknown key '" +
                                        key + "'");
        }
    }
}

void cmd_synth(const CLI::App* cmd, SynthOptions& opt) {
    SynthConfig config;
    if (!opt.config_file.empty()) apply_synth_config_file(opt.config_file, config);
    // Explicit flags take precedence over the config file.
    if (cmd->count("--n-days")) config.n_days = opt.config.n_days;
    if (cmd->count("--seed")) config.seed = opt.config.seed;
    if (cmd->count("--base-price")) config.base_price = opt.config.base_price;
    if (cmd->count("--bar-volatility")) config.per_bar_volatility = opt.config.per_bar_volatility;
    if (cmd->count("--gap-volatility")) config.gap_volatility = opt.config.gap_volatility;
    if (cmd->count("--volume-mean")) config.volume_mean = opt.config.volume_mean;
    if (cmd->count("--volume-dispersion")) config.volume_dispersion = opt.config.volume_dispersion;
    if (cmd->count("--drift")) config.drift = opt.config.drift;
    if (!opt.start_date.empty()) {
        const auto date = Date::parse(opt.start_date);
        if (!date) throw std::invalid_argument("bad --start-date '" + opt.start_date + "'");
        config.start_date = *date;
    }
    for (const std::string& spec : opt.shock_specs) config.shocks.push_back(parse_shock(spec));

    const std::string content = generate(config);
    if (opt.output == "-") {
        std::cout << content;
    } else {
        const fs::path path(opt.output);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + opt.output + "'");
        out << content;
        std::cout << "wrote " << config.n_days << " days to " << opt.output << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Day classification, behavioral statistics and strategy evaluation "
                 "for 5-minute OHLCV bars"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string backtest_selector;
    std::string gate_selector;
    SynthOptions synth_opt;

    CLI::App* validate = app.add_subcommand("validate-data", "Parse and session-check a bar file");
    add_common_options(validate, opt);
    validate->callback([&] { cmd_validate_data(opt); });

    CLI::App* classify_cmd = app.add_subcommand("classify", "Label days and report activation");
    add_common_options(classify_cmd, opt);
    classify_cmd->callback([&] { cmd_classify(opt); });

    CLI::App* behavior = app.add_subcommand("behavior", "Intraday behavior statistics");
    add_common_options(behavior, opt);
    behavior->callback([&] { cmd_behavior(opt); });

    CLI::App* backtest = app.add_subcommand("backtest", "Run strategy backtests");
    backtest->add_option("strategy", backtest_selector, "Strategy name or 'all'")->required();
    add_common_options(backtest, opt);
    backtest->callback([&] { cmd_backtest(opt, backtest_selector); });

    CLI::App* gate_cmd = app.add_subcommand("gate", "Five-criterion validation verdict");
    gate_cmd->add_option("strategy", gate_selector, "Strategy name or 'all'")->required();
    add_common_options(gate_cmd, opt);
    gate_cmd->callback([&] { cmd_gate(opt, gate_selector); });

    CLI::App* synth = app.add_subcommand("synth", "Generate a deterministic synthetic bar file");
    synth->add_option("--n-days", synth_opt.config.n_days, "Trading days")->capture_default_str();
    synth->add_option("--seed", synth_opt.config.seed, "Generator seed")->capture_default_str();
    synth->add_option("--base-price", synth_opt.config.base_price, "Starting price in points")
        ->capture_default_str();
    synth->add_option("--bar-volatility", synth_opt.config.per_bar_volatility,
                      "Per-bar close-to-close volatility in points")
        ->capture_default_str();
    synth->add_option("--gap-volatility", synth_opt.config.gap_volatility,
                      "Overnight gap volatility as a fraction")
        ->capture_default_str();
    synth->add_option("--volume-mean", synth_opt.config.volume_mean, "Mean bar volume")
        ->capture_default_str();
    synth->add_option("--volume-dispersion", synth_opt.config.volume_dispersion,
                      "Lognormal volume sigma")
        ->capture_default_str();
    synth->add_option("--drift", synth_opt.config.drift, "Price drift in points per day")
        ->capture_default_str();
    synth->add_option("--start-date", synth_opt.start_date, "First session date (YYYY-MM-DD)");
    synth->add_option("--shock", synth_opt.shock_specs,
                      "Shock day as day:gap:volume:move multipliers (repeatable)");
    synth->add_option("--config", synth_opt.config_file, "key=value config file");
    synth->add_option("-o,--output", synth_opt.output, "Output file ('-' for stdout)")
        ->capture_default_str();
    synth->callback([&] { cmd_synth(synth, synth_opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    } catch (const vvg::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const vvg::EmptyResultError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_empty;
    } catch (const vvg::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    }
    return 0;
}
