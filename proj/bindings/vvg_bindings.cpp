#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "vvg/behavior.hpp"
#include "vvg/features.hpp"
#include "vvg/market_data.hpp"
#include "vvg/strategies.hpp"
#include "vvg/synth.hpp"
#include "vvg/validation.hpp"

namespace py = pybind11;

namespace {

using namespace vvg;

Date parse_date_str(const std::string& text) {
    const auto date = Date::parse(text);
    if (!date) throw py::value_error("bad date '" + text + "' (expected YYYY-MM-DD)");
    return *date;
}

DaySet to_day_set(const Dataset& dataset, const Classification& classification,
                  const py::object& population) {
    if (py::isinstance<py::str>(population)) {
        return select_population(dataset, classification, population.cast<std::string>());
    }
    DaySet days;
    for (const auto& item : population) days.push_back(parse_date_str(py::cast<std::string>(item)));
    return days;
}

py::object opt_float(const std::optional<double>& value) {
    if (!value) return py::none();
    return py::float_(*value);
}

Dataset dataset_from_stream(std::istream& in, int min_bars) {
    return build_sessions(parse_bar_file(in), CompletenessPolicy::at_least(min_bars)).dataset;
}

py::dict summary_dict(const StrategySummary& summary) {
    py::dict out;
    out["n"] = summary.n;
    out["mean_net"] = opt_float(summary.mean_net);
    out["tstat"] = opt_float(summary.tstat);
    out["win_rate"] = opt_float(summary.win_rate);
    out["total_net"] = summary.total_net;
    py::dict per_year;
    for (const auto& [year, stats] : summary.per_year) {
        py::dict row;
        row["n"] = stats.n;
        row["total_net"] = stats.total_net;
        row["tstat"] = opt_float(stats.tstat);
        per_year[py::int_(year)] = row;
    }
    out["per_year"] = per_year;
    py::dict per_direction;
    for (const auto& [direction, stats] : summary.per_direction) {
        py::dict row;
        row["n"] = stats.n;
        row["mean_net"] = stats.mean_net;
        row["win_rate"] = stats.win_rate;
        per_direction[py::str(direction > 0 ? "long" : "short")] = row;
    }
    out["per_direction"] = per_direction;
    return out;
}

py::list trades_list(const TradeSet& trades) {
    py::list out;
    for (const Trade& trade : trades) {
        py::dict row;
        row["date"] = trade.date.to_string();
        row["direction"] = trade.direction;
        row["entry_time"] = trade.entry_time.to_string();
        row["exit_time"] = trade.exit_time.to_string();
        row["entry_price"] = trade.entry_price.points();
        row["exit_price"] = trade.exit_price.points();
        row["gross_points"] = trade.gross_points;
        row["net_points"] = trade.net_points;
        out.append(row);
    }
    return out;
}

py::list path_list(const std::vector<PathCheckpoint>& path) {
    py::list out;
    for (const PathCheckpoint& cp : path) {
        py::dict row;
        row["time"] = cp.time.to_string();
        row["n"] = cp.n;
        row["mean"] = cp.mean;
        row["std"] = opt_float(cp.stdev);
        row["tstat"] = opt_float(cp.tstat);
        row["median"] = cp.median;
        row["p25"] = cp.p25;
        row["p75"] = cp.p75;
        row["pct_positive"] = cp.pct_positive;
        out.append(row);
    }
    return out;
}

py::dict fit_dict(const OlsFit& fit) {
    py::dict out;
    out["n"] = fit.n;
    out["beta"] = fit.beta;
    out["intercept"] = fit.intercept;
    out["t_beta"] = fit.t_beta;
    out["p_value"] = fit.p_value;
    out["r2"] = fit.r2;
    return out;
}

ClassifierConfig make_classifier_config(int warmup, double quantile, int vol_window) {
    ClassifierConfig config;
    config.warmup = warmup;
    config.quantile = quantile;
    config.vol_window = vol_window;
    return config;
}

StrategyConfig make_strategy_config(double friction, int atr_window, int min_history,
                                    double slope_tstat, const std::string& vol_split_base,
                                    double vol_split_cutoff) {
    StrategyConfig config;
    config.exec.friction_round_trip = friction;
    config.atr_window = atr_window;
    config.regression.min_history = min_history;
    config.regression.max_slope_tstat = slope_tstat;
    config.vol_split_base = vol_split_base;
    config.vol_split_cutoff = vol_split_cutoff;
    return config;
}

SynthConfig make_synth_config(int n_days, uint64_t seed, double base_price,
                              double per_bar_volatility, double gap_volatility,
                              double volume_mean, double volume_dispersion, double drift,
                              const std::string& start_date,
                              const std::vector<std::tuple<int, double, double, double>>& shocks) {
    SynthConfig config;
    config.n_days = n_days;
    config.seed = seed;
    config.base_price = base_price;
    config.per_bar_volatility = per_bar_volatility;
    config.gap_volatility = gap_volatility;
    config.volume_mean = volume_mean;
    config.volume_dispersion = volume_dispersion;
    config.drift = drift;
    config.start_date = parse_date_str(start_date);
    for (const auto& [day, gap, volume, move] : shocks) {
        config.shocks.push_back({day, gap, volume, move});
    }
    return config;
}

}  // namespace

PYBIND11_MODULE(vvg_engine, m) {
    m.doc() = "Day classification, behavioral statistics and strategy evaluation for "
              "5-minute OHLCV bars";
    m.attr("__version__") = "0.1.0";

    py::register_exception<DataError>(m, "DataError");
    py::register_exception<EmptyResultError>(m, "EmptyResultError");

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("n_sessions", &Dataset::size)
        .def("dates",
             [](const Dataset& ds) {
                 std::vector<std::string> out;
                 out.reserve(ds.size());
                 for (const Session& s : ds.sessions()) out.push_back(s.date().to_string());
                 return out;
             })
        .def("session_open",
             [](const Dataset& ds, const std::string& date) {
                 const auto idx = ds.find(parse_date_str(date));
                 if (!idx) throw py::value_error("date not in dataset");
                 return ds[*idx].open_price().points();
             })
        .def("session_close",
             [](const Dataset& ds, const std::string& date) {
                 const auto idx = ds.find(parse_date_str(date));
                 if (!idx) throw py::value_error("date not in dataset");
                 return ds[*idx].close_price().points();
             })
        .def("to_csv", [](const Dataset& ds) {
            std::ostringstream out;
            write_bars(ds, out);
            return out.str();
        });

    py::class_<Classification>(m, "Classification")
        .def("positive_dates",
             [](const Classification& c) {
                 std::vector<std::string> out;
                 for (const Date& d : c.positive_dates()) out.push_back(d.to_string());
                 return out;
             })
        .def("eligible_dates",
             [](const Classification& c) {
                 std::vector<std::string> out;
                 for (const Date& d : c.eligible_dates()) out.push_back(d.to_string());
                 return out;
             })
        .def("labels",
             [](const Classification& c) {
                 py::list out;
                 for (const DayLabel& label : c.labels) {
                     py::dict row;
                     row["date"] = label.date.to_string();
                     row["eligible"] = label.eligible;
                     row["positive"] = label.positive;
                     out.append(row);
                 }
                 return out;
             })
        .def("rows", [](const Classification& c) {
            py::list out;
            for (std::size_t i = 0; i < c.labels.size(); ++i) {
                py::dict row;
                row["date"] = c.labels[i].date.to_string();
                row["r1"] = opt_float(c.features[i].r1);
                row["gap"] = opt_float(c.features[i].gap);
                row["vol_dev"] = opt_float(c.features[i].vol_dev);
                row["r1_thr"] = opt_float(c.thresholds[i].r1_thr);
                row["gap_thr"] = opt_float(c.thresholds[i].gap_thr);
                row["vol_thr"] = opt_float(c.thresholds[i].vol_thr);
                row["eligible"] = c.labels[i].eligible;
                row["positive"] = c.labels[i].positive;
                out.append(row);
            }
            return out;
        });

    m.def(
        "load_dataset",
        [](const std::string& path, int min_bars) {
            std::ifstream in(path);
            if (!in) throw DataError("cannot open '" + path + "'");
            return dataset_from_stream(in, min_bars);
        },
        py::arg("path"), py::arg("min_bars") = rth::bars_per_session,
        "Parse a bar CSV file and build the retained sessions.");

    m.def(
        "load_dataset_from_string",
        [](const std::string& text, int min_bars) {
            std::istringstream in(text);
            return dataset_from_stream(in, min_bars);
        },
        py::arg("text"), py::arg("min_bars") = rth::bars_per_session);

    m.def(
        "validate_data",
        [](const std::string& path, int min_bars) {
            std::ifstream in(path);
            if (!in) throw DataError("cannot open '" + path + "'");
            const auto report =
                build_sessions(parse_bar_file(in), CompletenessPolicy::at_least(min_bars));
            py::dict out;
            out["sessions"] = report.dataset.size();
            out["first_date"] = report.dataset[0].date().to_string();
            out["last_date"] = report.dataset[report.dataset.size() - 1].date().to_string();
            py::list dropped;
            for (const DroppedSession& d : report.dropped) {
                py::dict row;
                row["date"] = d.date.to_string();
                row["bars"] = d.bar_count;
                row["reason"] = d.reason;
                dropped.append(row);
            }
            out["dropped"] = dropped;
            return out;
        },
        py::arg("path"), py::arg("min_bars") = rth::bars_per_session);

    m.def(
        "classify",
        [](const Dataset& dataset, int warmup, double quantile, int vol_window) {
            return classify(dataset, make_classifier_config(warmup, quantile, vol_window));
        },
        py::arg("dataset"), py::arg("warmup") = 60, py::arg("quantile") = 2.0 / 3.0,
        py::arg("vol_window") = 20,
        "Expanding-window day labels: positive when all three features exceed "
        "their prior-tercile thresholds.");

    m.def(
        "next_day_spread",
        [](const Dataset& dataset, const Classification& classification) {
            const NextDaySpread spread = next_day_spread(dataset, classification.labels);
            py::dict out;
            out["n_positive"] = spread.n_positive;
            out["n_negative"] = spread.n_negative;
            out["mean_next_positive"] = opt_float(spread.mean_next_positive);
            out["mean_next_negative"] = opt_float(spread.mean_next_negative);
            out["spread"] = opt_float(spread.spread);
            return out;
        },
        py::arg("dataset"), py::arg("classification"));

    m.def(
        "intraday_path",
        [](const Dataset& dataset, const std::vector<std::string>& dates) {
            DaySet days;
            for (const std::string& d : dates) days.push_back(parse_date_str(d));
            return path_list(intraday_path(dataset, days));
        },
        py::arg("dataset"), py::arg("dates"));

    m.def(
        "peak_reversal",
        [](const Dataset& dataset, const std::vector<std::string>& dates) {
            DaySet days;
            for (const std::string& d : dates) days.push_back(parse_date_str(d));
            const ReversalResult result = peak_reversal(dataset, days);
            py::dict out;
            out["n_reversed"] = result.stats.n_reversed;
            out["n_not_reversed"] = result.stats.n_not_reversed;
            out["reversal_rate"] = result.stats.reversal_rate;
            out["mean_giveback_all"] = result.stats.mean_giveback_all;
            out["mean_giveback_reversed"] = opt_float(result.stats.mean_giveback_reversed);
            py::dict bins;
            for (const auto& [time, count] : result.histogram.bins) {
                bins[py::str(time.to_string())] = count;
            }
            out["peak_timing"] = bins;
            out["total"] = result.histogram.total;
            return out;
        },
        py::arg("dataset"), py::arg("dates"));

    m.def(
        "yearly_paths",
        [](const Dataset& dataset, const std::vector<std::string>& dates) {
            DaySet days;
            for (const std::string& d : dates) days.push_back(parse_date_str(d));
            py::list out;
            for (const YearlyPath& year : yearly_paths(dataset, days)) {
                py::dict row;
                row["year"] = year.year;
                row["checkpoints"] = path_list(year.checkpoints);
                out.append(row);
            }
            return out;
        },
        py::arg("dataset"), py::arg("dates"));

    m.def(
        "compute_atr",
        [](const Dataset& dataset, int window) {
            const AtrSeries series = compute_atr(dataset, window);
            py::dict out;
            py::list atr;
            py::list true_range;
            for (std::size_t i = 0; i < series.atr.size(); ++i) {
                atr.append(opt_float(series.atr[i]));
                true_range.append(series.true_range[i]);
            }
            out["atr"] = atr;
            out["true_range"] = true_range;
            return out;
        },
        py::arg("dataset"), py::arg("window") = 14);

    m.def("strategy_names", [] {
        return std::vector<std::string>(strategy_names.begin(), strategy_names.end());
    });

    m.def(
        "backtest",
        [](const Dataset& dataset, const Classification& classification,
           const std::string& strategy, const py::object& population, double friction,
           int atr_window, int min_history, double slope_tstat, const std::string& vol_split_base,
           double vol_split_cutoff) {
            const DaySet days = to_day_set(dataset, classification, population);
            const auto config = make_strategy_config(friction, atr_window, min_history,
                                                     slope_tstat, vol_split_base, vol_split_cutoff);
            const TradeSet trades = run_strategy(strategy, dataset, classification, days, config);
            py::dict out;
            out["strategy"] = strategy;
            out["trades"] = trades_list(trades);
            out["summary"] = summary_dict(summarize(trades));
            return out;
        },
        py::arg("dataset"), py::arg("classification"), py::arg("strategy"),
        py::arg("population") = "classifier-positive", py::arg("friction") = 2.0,
        py::arg("atr_window") = 14, py::arg("min_history") = 20, py::arg("slope_tstat") = -2.0,
        py::arg("vol_split_base") = "reversal", py::arg("vol_split_cutoff") = 1.0,
        "Run one strategy (signal at bar close, entry at next bar open, flat "
        "round-trip friction) and summarize the trades.");

    m.def(
        "evaluate_gate",
        [](const Dataset& dataset, const Classification& classification,
           const std::string& strategy, const py::object& population, double friction,
           int atr_window, int resamples, uint64_t seed) {
            const DaySet days = to_day_set(dataset, classification, population);
            auto config = make_strategy_config(friction, atr_window, 20, -2.0, "reversal", 1.0);
            const TradeSet trades = run_strategy(strategy, dataset, classification, days, config);
            const StrategySummary summary = summarize(trades);
            std::optional<PermutationResult> perm;
            if (!trades.empty()) {
                std::vector<double> nets;
                nets.reserve(trades.size());
                for (const Trade& trade : trades) nets.push_back(trade.net_points);
                perm = permutation_test(nets, resamples, seed);
            }
            const YearConsistency years = year_consistency(trades);
            const GateResult result = gate(summary, perm, years.consistent);
            py::dict out;
            out["strategy"] = strategy;
            out["c1_tstat"] = result.c1_tstat;
            out["c2_min_trades"] = result.c2_min_trades;
            out["c3_net_positive"] = result.c3_net_positive;
            out["c4_year_consistency"] = result.c4_year_consistency;
            out["c5_permutation"] = result.c5_permutation;
            out["verdict"] = result.pass ? "PASS" : "FAIL";
            out["tstat"] = opt_float(result.tstat);
            out["n"] = result.n;
            out["total_net"] = opt_float(result.total_net);
            out["p_value"] = opt_float(result.p_value);
            py::list year_rows;
            for (const YearNet& y : years.years) {
                py::dict row;
                row["year"] = y.year;
                row["n"] = y.n;
                row["total_net"] = y.total_net;
                row["qualifies"] = y.qualifies;
                year_rows.append(row);
            }
            out["years"] = year_rows;
            return out;
        },
        py::arg("dataset"), py::arg("classification"), py::arg("strategy"),
        py::arg("population") = "classifier-positive", py::arg("friction") = 2.0,
        py::arg("atr_window") = 14, py::arg("resamples") = 10'000, py::arg("seed") = 42,
        "Five-criterion verdict: t-stat, trade count, net after friction, "
        "year consistency and the sign-flip permutation test.");

    m.def(
        "t_statistic",
        [](const std::vector<double>& values) { return opt_float(t_statistic(values)); },
        py::arg("values"));

    m.def(
        "ols_fit",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return fit_dict(ols_fit(x, y));
        },
        py::arg("x"), py::arg("y"));

    m.def("student_t_two_sided_p", &student_t_two_sided_p, py::arg("t"), py::arg("df"));

    m.def(
        "expanding_percentile",
        [](const std::vector<double>& history, double q) {
            return expanding_percentile(history, q);
        },
        py::arg("history"), py::arg("q") = 2.0 / 3.0);

    m.def(
        "permutation_test",
        [](const std::vector<double>& nets, int resamples, uint64_t seed) {
            const PermutationResult result = permutation_test(nets, resamples, seed);
            py::dict out;
            out["observed_mean"] = result.observed_mean;
            out["p_value"] = result.p_value;
            out["n_resamples"] = result.n_resamples;
            out["seed"] = result.seed;
            return out;
        },
        py::arg("nets"), py::arg("resamples") = 10'000, py::arg("seed") = 0);

    m.def(
        "generate_bars",
        [](int n_days, uint64_t seed, double base_price, double per_bar_volatility,
           double gap_volatility, double volume_mean, double volume_dispersion, double drift,
           const std::string& start_date,
           const std::vector<std::tuple<int, double, double, double>>& shocks) {
            return generate(make_synth_config(n_days, seed, base_price, per_bar_volatility,
                                              gap_volatility, volume_mean, volume_dispersion,
                                              drift, start_date, shocks));
        },
        py::arg("n_days") = 250, py::arg("seed") = 42, py::arg("base_price") = 16000.0,
        py::arg("per_bar_volatility") = 6.0, py::arg("gap_volatility") = 0.002,
        py::arg("volume_mean") = 1200.0, py::arg("volume_dispersion") = 0.35,
        py::arg("drift") = 0.0, py::arg("start_date") = "2021-01-04",
        py::arg("shocks") = std::vector<std::tuple<int, double, double, double>>{},
        "Deterministic synthetic bar-file content; shocks are "
        "(day_index, gap_mult, volume_mult, opening_move_mult) tuples.");
}
