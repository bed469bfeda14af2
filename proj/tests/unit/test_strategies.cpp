#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "vvg/strategies.hpp"
#include "vvg/synth.hpp"

using namespace vvg;
using namespace vvg::test;

namespace {

const ExecutionModel kExec{};  // 2.0 points round trip

DaySet all_dates(const Dataset& ds) {
    DaySet days;
    for (const Session& s : ds.sessions()) days.push_back(s.date());
    return days;
}

// open0=99, 09:55 close=100 (up open), session close=90; the 10:00 bar
// opens at 100.
std::vector<Bar> up_open_down_close(Date date) {
    std::vector<double> closes(rth::bars_per_session, 90.0);
    for (int i = 0; i < 5; ++i) closes[i] = 99.0;
    closes[5] = 100.0;
    return bars_from_closes(date, 99.0, closes);
}

}  // namespace

TEST_CASE("compute_atr") {
    // Days with range 10 and no overnight gap: true range 10 every day.
    std::vector<std::vector<Bar>> days;
    auto dates = weekday_sequence(d(2024, 1, 1), 16);
    for (const Date& date : dates) {
        std::vector<double> closes(rth::bars_per_session, 100.0);
        closes[10] = 110.0;  // intraday excursion
        closes[11] = 100.0;
        days.push_back(bars_from_closes(date, 100.0, closes));
    }
    const Dataset ds = dataset_from(std::move(days));
    const AtrSeries series = compute_atr(ds, 14);
    REQUIRE(series.atr.size() == 16);
    for (int i = 0; i < 14; ++i) CHECK_FALSE(series.atr[i].has_value());
    REQUIRE(series.atr[14].has_value());
    CHECK(*series.atr[14] == 10.0);
    CHECK(series.true_range[0] == 10.0);
}

TEST_CASE("compute_atr matches a by-hand rolling mean") {
    SynthConfig config;
    config.n_days = 40;
    config.seed = 4242;
    const Dataset ds = generate_dataset(config);
    const AtrSeries series = compute_atr(ds, 14);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        double tr = ds[i].high().points() - ds[i].low().points();
        if (i > 0) {
            const double pc = ds[i - 1].close_price().points();
            tr = std::max({tr, std::abs(ds[i].high().points() - pc),
                           std::abs(ds[i].low().points() - pc)});
        }
        CHECK(series.true_range[i] == tr);
        if (i >= 14) {
            double sum = 0.0;
            for (std::size_t j = i - 14; j < i; ++j) sum += series.true_range[j];
            REQUIRE(series.atr[i].has_value());
            CHECK(*series.atr[i] == doctest::Approx(sum / 14.0).epsilon(1e-12));
            CHECK(*series.atr[i] > 0.0);
        }
    }
}

TEST_CASE("opening_direction") {
    const Session up(d(2024, 1, 3), up_open_down_close(d(2024, 1, 3)));
    CHECK(opening_direction(up) == 1);
    const Session flat(d(2024, 1, 3), flat_day(d(2024, 1, 3), 100.0));
    CHECK(opening_direction(flat) == 0);
    std::vector<double> down(rth::bars_per_session, 99.75);
    const Session dn(d(2024, 1, 3), bars_from_closes(d(2024, 1, 3), 100.0, down));
    CHECK(opening_direction(dn) == -1);
}

TEST_CASE("reversal fades an up open") {
    const Dataset ds = dataset_from({up_open_down_close(d(2024, 1, 3))});
    const TradeSet trades = run_reversal(ds, all_dates(ds), kExec);
    REQUIRE(trades.size() == 1);
    const Trade& trade = trades[0];
    CHECK(trade.direction == -1);
    CHECK(trade.entry_time == TimeOfDay::hm(10, 0));
    CHECK(trade.exit_time == rth::session_close);
    CHECK(trade.entry_price == Price::from_points(100.0));
    CHECK(trade.exit_price == Price::from_points(90.0));
    CHECK(trade.gross_points == 10.0);
    CHECK(trade.net_points == 8.0);
}

TEST_CASE("flat openings are skipped") {
    const Dataset ds = dataset_from({flat_day(d(2024, 1, 3), 100.0)});
    CHECK(run_reversal(ds, all_dates(ds), kExec).empty());
    CHECK(run_continuation(ds, all_dates(ds), kExec).empty());
    CHECK(run_midday_continuation(ds, all_dates(ds), kExec).empty());
}

TEST_CASE("continuation mirrors reversal gross per day") {
    SynthConfig config;
    config.n_days = 60;
    config.seed = 606;
    const Dataset ds = generate_dataset(config);
    const DaySet days = all_dates(ds);
    const TradeSet rev = run_reversal(ds, days, kExec);
    const TradeSet cont = run_continuation(ds, days, kExec);
    REQUIRE(rev.size() == cont.size());
    for (std::size_t i = 0; i < rev.size(); ++i) {
        CHECK(rev[i].date == cont[i].date);
        CHECK(rev[i].gross_points == -cont[i].gross_points);
        CHECK(rev[i].direction == -cont[i].direction);
        CHECK(rev[i].entry_price == cont[i].entry_price);
    }
}

TEST_CASE("fading noise pays the friction") {
    SynthConfig config;
    config.n_days = 200;
    config.seed = 777;
    const Dataset ds = generate_dataset(config);
    const TradeSet trades = run_reversal(ds, all_dates(ds), kExec);
    REQUIRE(trades.size() > 100);
    std::vector<double> nets;
    for (const Trade& t : trades) nets.push_back(t.net_points);
    double mean = 0.0;
    for (const double v : nets) mean += v;
    mean /= static_cast<double>(nets.size());
    double ss = 0.0;
    for (const double v : nets) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / (nets.size() - 1)) / std::sqrt(static_cast<double>(nets.size()));
    CHECK(std::abs(mean - (-kExec.friction_round_trip)) < 3.0 * se);
}

TEST_CASE("close fade obeys the overextension filter") {
    std::array<double, num_checkpoints> stretched{};
    for (int i = 0; i < num_checkpoints; ++i) stretched[i] = 40.0;  // +40 by 15:30
    stretched[11] = 35.0;
    const Dataset ds = dataset_from({path_day(d(2024, 1, 31), 100.0, 2.0, stretched)});
    const DaySet days = all_dates(ds);

    AtrSeries atr;
    atr.true_range = {40.0};
    atr.atr = {30.0};

    const TradeSet unfiltered = run_close_fade(ds, days, kExec, atr);
    REQUIRE(unfiltered.size() == 1);
    CHECK(unfiltered[0].direction == -1);
    CHECK(unfiltered[0].entry_time == TimeOfDay::hm(15, 30));
    // Entry at the 15:30 bar open = the 15:25 bar close = open + 40.
    CHECK(unfiltered[0].entry_price == Price::from_points(140.0));
    CHECK(unfiltered[0].exit_price == Price::from_points(135.0));
    CHECK(unfiltered[0].gross_points == 5.0);
    CHECK(unfiltered[0].net_points == 3.0);

    CHECK(run_close_fade(ds, days, kExec, atr, 1.0).size() == 1);   // 40 > 30
    CHECK(run_close_fade(ds, days, kExec, atr, 1.5).empty());       // 40 < 45

    // Absent ATR skips filtered entries.
    AtrSeries no_atr;
    no_atr.true_range = {40.0};
    no_atr.atr = {std::nullopt};
    CHECK(run_close_fade(ds, days, kExec, no_atr, 1.0).empty());
    CHECK(run_close_fade(ds, days, kExec, no_atr).size() == 1);

    // A flat cumulative move never trades.
    const Dataset flat = dataset_from({flat_day(d(2024, 1, 31), 100.0)});
    AtrSeries flat_atr;
    flat_atr.true_range = {0.0};
    flat_atr.atr = {30.0};
    CHECK(run_close_fade(flat, all_dates(flat), kExec, flat_atr).empty());
}

TEST_CASE("midday continuation enters at the 12:00 bar open") {
    std::array<double, num_checkpoints> drift{};
    for (int i = 0; i < num_checkpoints; ++i) drift[i] = 2.0 * (i + 1);
    const Dataset ds = dataset_from({path_day(d(2024, 1, 3), 100.0, 1.0, drift)});
    const DaySet days = all_dates(ds);

    const TradeSet midday = run_midday_continuation(ds, days, kExec);
    const TradeSet open_entry = run_continuation(ds, days, kExec);
    REQUIRE(midday.size() == 1);
    REQUIRE(open_entry.size() == 1);
    CHECK(midday[0].direction == open_entry[0].direction);
    CHECK(midday[0].entry_time == TimeOfDay::hm(12, 0));
    // 12:00 bar opens at the 11:55 close (the 12:00 checkpoint value).
    CHECK(midday[0].entry_price == Price::from_points(100.0 + drift[3]));
    CHECK(open_entry[0].entry_price == Price::from_points(101.0));
    CHECK(midday[0].entry_price != open_entry[0].entry_price);
}

TEST_CASE("regression filter") {
    RegressionFilterConfig config;

    std::vector<double> x, y;
    for (int i = 0; i < 25; ++i) {
        const double xi = -0.012 + 0.001 * i;
        x.push_back(xi);
        y.push_back(-0.05 * xi + 1e-7 * ((i % 2 == 0) ? 1.0 : -1.0));
    }
    const auto fit = regression_filter(x, y, config);
    REQUIRE(fit.has_value());
    CHECK(fit->beta < 0.0);
    CHECK(fit->t_beta <= -2.0);
    const NaiveLine line = ols_naive(x, y);
    CHECK(fit->beta == doctest::Approx(line.beta).epsilon(1e-9));
    CHECK(fit->intercept == doctest::Approx(line.intercept).epsilon(1e-9));

    // Positive slope blocks.
    std::vector<double> y_up;
    for (const double xi : x) y_up.push_back(0.05 * xi);
    CHECK_FALSE(regression_filter(x, y_up, config).has_value());

    // Too little history blocks.
    const std::vector<double> x_short(x.begin(), x.begin() + 19);
    const std::vector<double> y_short(y.begin(), y.begin() + 19);
    CHECK_FALSE(regression_filter(x_short, y_short, config).has_value());

    // A weak (insignificant) negative slope blocks.
    std::vector<double> y_noisy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y_noisy.push_back(-0.001 * x[i] + 0.05 * ((i % 2 == 0) ? 1.0 : -1.0));
    }
    CHECK_FALSE(regression_filter(x, y_noisy, config).has_value());
}

TEST_CASE("intersection reversal gates on history") {
    // Build days whose late move strongly opposes the opening move, so the
    // expanding fit passes once the history requirement is met.
    std::vector<std::vector<Bar>> days;
    std::vector<DayLabel> labels;
    const auto dates = weekday_sequence(d(2023, 1, 2), 30);
    for (int i = 0; i < 30; ++i) {
        const double r1_pts = (i % 2 == 0) ? 8.0 : -8.0;
        std::array<double, num_checkpoints> checkpoints{};
        for (int k = 0; k < num_checkpoints - 2; ++k) checkpoints[k] = r1_pts;
        checkpoints[10] = r1_pts;                    // 15:30 level
        checkpoints[11] = r1_pts - 2.5 * r1_pts;     // strong late reversal
        days.push_back(path_day(dates[i], 100.0, r1_pts, checkpoints));
        labels.push_back({dates[i], true, true});
    }
    const Dataset ds = dataset_from(std::move(days));

    std::vector<IntersectionFitRecord> diag;
    const TradeSet trades = run_intersection_reversal(ds, labels, kExec, {}, &diag);
    REQUIRE(diag.size() == 30);
    // No fit before 20 prior classifier days.
    for (int i = 0; i < 20; ++i) {
        CHECK_FALSE(diag[i].fit.has_value());
        CHECK_FALSE(diag[i].traded);
    }
    REQUIRE(diag[20].fit.has_value());
    CHECK(diag[20].fit->beta < 0.0);
    REQUIRE(trades.size() == 10);  // days 21..30 all trade
    for (const Trade& trade : trades) {
        CHECK(trade.entry_time == TimeOfDay::hm(10, 0));
        // Fades the opening direction.
        const auto idx = ds.find(trade.date);
        REQUIRE(idx.has_value());
        CHECK(trade.direction == -opening_direction(ds[*idx]));
    }

    // Fewer than min_history positive days: no trades at all.
    std::vector<DayLabel> few = labels;
    for (std::size_t i = 10; i < few.size(); ++i) few[i].positive = false;
    CHECK(run_intersection_reversal(ds, few, kExec).empty());
}

TEST_CASE("volatility regime split filters by prior-day range") {
    SynthConfig config;
    config.n_days = 10;
    config.seed = 12;
    const Dataset ds = generate_dataset(config);

    AtrSeries atr;
    atr.true_range.resize(10, 30.0);
    atr.atr.resize(10);
    for (int i = 0; i < 10; ++i) atr.atr[i] = 30.0;
    atr.true_range[4] = 45.0;  // day 5 sees a 1.5 ratio
    atr.true_range[6] = 15.0;  // day 7 sees a 0.5 ratio
    atr.atr[2] = std::nullopt;

    DaySet seen;
    const StrategyFn spy = [&](const Dataset&, const DaySet& filtered) {
        seen = filtered;
        return TradeSet{};
    };

    run_vol_regime_split(ds, all_dates(ds), atr, spy, 1.0);
    // Only the day after the 45-point range clears ratio > 1.
    REQUIRE(seen.size() == 1);
    CHECK(seen[0] == ds[5].date());

    run_vol_regime_split(ds, all_dates(ds), atr, spy, 0.0);
    // Cutoff 0 keeps every day with an ATR and a positive prior range,
    // except day 0 (no prior day) and the day with the missing ATR.
    CHECK(seen.size() == 8);

    run_vol_regime_split(ds, all_dates(ds), atr, spy, 10.0);
    CHECK(seen.empty());
}

TEST_CASE("summarize") {
    const auto trade = [](int year, double net, int direction = 1) {
        Trade t;
        t.date = {year, 3, 1};
        t.direction = direction;
        t.net_points = net;
        t.gross_points = net + kExec.friction_round_trip;
        return t;
    };

    SUBCASE("basic aggregates") {
        const TradeSet trades{trade(2024, 8.0), trade(2024, -4.0, -1)};
        const StrategySummary s = summarize(trades);
        CHECK(s.n == 2);
        CHECK(*s.mean_net == 2.0);
        CHECK(*s.win_rate == 0.5);
        CHECK(s.total_net == 4.0);
        CHECK(s.per_year.at(2024).n == 2);
        CHECK(s.per_direction.at(1).n == 1);
        CHECK(s.per_direction.at(-1).n == 1);
    }
    SUBCASE("empty set has absent statistics") {
        const StrategySummary s = summarize({});
        CHECK(s.n == 0);
        CHECK_FALSE(s.mean_net.has_value());
        CHECK_FALSE(s.tstat.has_value());
        CHECK_FALSE(s.win_rate.has_value());
        CHECK(s.total_net == 0.0);
    }
    SUBCASE("single trade has no t-statistic") {
        const StrategySummary s = summarize({trade(2024, 5.0)});
        CHECK(s.n == 1);
        CHECK_FALSE(s.tstat.has_value());
    }
    SUBCASE("closed-form t-statistic") {
        const TradeSet trades{trade(2022, 2.0), trade(2022, -1.0), trade(2023, 2.0),
                              trade(2023, -1.0)};
        const StrategySummary s = summarize(trades);
        REQUIRE(s.tstat.has_value());
        CHECK(*s.tstat == doctest::Approx(0.5773502691896258).epsilon(1e-9));
        CHECK(*s.win_rate == 0.5);
        CHECK(*s.mean_net == 0.5);
    }
    SUBCASE("zero net counts as a loss") {
        const StrategySummary s = summarize({trade(2024, 0.0), trade(2024, 1.0)});
        CHECK(*s.win_rate == 0.5);
    }
}

TEST_CASE("every strategy respects friction and intraday containment") {
    SynthConfig config;
    config.n_days = 120;
    config.seed = 9090;
    config.shocks = {{70, 6.0, 8.0, 5.0}, {90, 6.0, 8.0, 5.0}};
    const Dataset ds = generate_dataset(config);
    const Classification cl = classify(ds);
    const DaySet days = all_dates(ds);

    for (const auto name : strategy_names) {
        const TradeSet trades = run_strategy(name, ds, cl, days, {});
        for (const Trade& trade : trades) {
            CHECK(trade.net_points == trade.gross_points - kExec.friction_round_trip);
            CHECK(trade.entry_time < trade.exit_time);
            CHECK(trade.exit_time <= rth::session_close);
            CHECK((trade.direction == 1 || trade.direction == -1));
            CHECK(trade.gross_points ==
                  trade.direction * (trade.exit_price - trade.entry_price));
        }
    }
}

TEST_CASE("run_strategy rejects unknown names") {
    SynthConfig config;
    config.n_days = 5;
    config.seed = 1;
    const Dataset ds = generate_dataset(config);
    const Classification cl = classify(ds);
    CHECK_THROWS_WITH_AS(run_strategy("sideways", ds, cl, all_dates(ds), {}),
                         doctest::Contains("reversal"), std::invalid_argument);
}

TEST_CASE("trade log export") {
    const Dataset ds = dataset_from({up_open_down_close(d(2024, 1, 3))});
    const TradeSet trades = run_reversal(ds, all_dates(ds), kExec);
    std::ostringstream out;
    write_trades_csv(trades, "reversal", out);
    CHECK(out.str() ==
          "date,strategy,direction,entry_time,entry_price,exit_time,exit_price,"
          "gross_points,net_points\n"
          "2024-01-03,reversal,-1,10:00,100,16:00,90,10,8\n");
}
