#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "vvg/rng.hpp"
#include "vvg/validation.hpp"

using namespace vvg;
using namespace vvg::test;

TEST_CASE("t_statistic") {
    const std::vector<double> mixed{2, -1, 2, -1};
    REQUIRE(t_statistic(mixed).has_value());
    CHECK(*t_statistic(mixed) == doctest::Approx(0.5 / (std::sqrt(3.0) / 2.0)).epsilon(1e-12));
    CHECK_FALSE(t_statistic(std::vector<double>{5, 5, 5}).has_value());
    CHECK_FALSE(t_statistic(std::vector<double>{3.7}).has_value());
    CHECK_FALSE(t_statistic({}).has_value());
}

TEST_CASE("t_statistic scales with the sign of a multiplier") {
    Rng rng(19);
    std::vector<double> values;
    for (int i = 0; i < 40; ++i) values.push_back(rng.gaussian(0.5, 2.0));
    const double base = *t_statistic(values);
    for (const double a : {2.5, -1.0, -0.3}) {
        std::vector<double> scaled;
        for (const double v : values) scaled.push_back(a * v);
        const double expected = (a > 0 ? 1.0 : -1.0) * base;
        CHECK(*t_statistic(scaled) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("ols_fit on exact fixtures") {
    const std::vector<double> x{1, 2, 3};
    const std::vector<double> y{2, 4, 6};
    const OlsFit fit = ols_fit(x, y);
    CHECK(fit.beta == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> y_const{3, 3, 3};
    const OlsFit flat = ols_fit(x, y_const);
    CHECK(flat.beta == 0.0);
    CHECK(flat.r2 == 0.0);
    CHECK(flat.t_beta == 0.0);
    CHECK(flat.p_value == 1.0);

    CHECK_THROWS_AS(ols_fit(std::vector<double>{1, 1, 1}, y), std::invalid_argument);
    CHECK_THROWS_AS(ols_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ols_fit(x, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("ols_fit matches the normal-equations oracle") {
    Rng rng(40);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 10 + static_cast<int>(rng.next_u64() % 100);
        std::vector<double> x, y;
        const double beta = rng.gaussian();
        const double intercept = rng.gaussian();
        for (int i = 0; i < n; ++i) {
            const double xi = rng.gaussian();
            x.push_back(xi);
            y.push_back(intercept + beta * xi + 0.5 * rng.gaussian());
        }
        const OlsFit fit = ols_fit(x, y);
        const NaiveLine line = ols_naive(x, y);
        CHECK(std::abs(fit.beta - line.beta) < 1e-9);
        CHECK(std::abs(fit.intercept - line.intercept) < 1e-9);
        CHECK(std::abs(fit.r2 - line.r2) < 1e-9);
        CHECK(fit.p_value >= 0.0);
        CHECK(fit.p_value <= 1.0);
        CHECK(fit.r2 >= 0.0);
        CHECK(fit.r2 <= 1.0);
    }
}

TEST_CASE("ols scale equivariance") {
    Rng rng(41);
    std::vector<double> x, y;
    for (int i = 0; i < 60; ++i) {
        const double xi = rng.gaussian();
        x.push_back(xi);
        y.push_back(0.3 - 0.7 * xi + rng.gaussian());
    }
    const OlsFit base = ols_fit(x, y);
    const double c = 3.7;
    std::vector<double> xs;
    for (const double xi : x) xs.push_back(c * xi);
    const OlsFit scaled = ols_fit(xs, y);
    CHECK(std::abs(scaled.beta - base.beta / c) < 1e-9);
    CHECK(std::abs(scaled.r2 - base.r2) < 1e-9);
    CHECK(std::abs(scaled.t_beta - base.t_beta) < 1e-9);
    CHECK(std::abs(scaled.p_value - base.p_value) < 1e-9);
}

TEST_CASE("student t tail probabilities") {
    CHECK(student_t_two_sided_p(-2.45, 125) == doctest::Approx(0.0157).epsilon(0.03));
    CHECK(std::abs(student_t_two_sided_p(-2.45, 125) - 0.0157) < 0.0005);
    CHECK(student_t_two_sided_p(0.0, 10) == 1.0);
    CHECK(student_t_two_sided_p(1e9, 5) < 1e-12);
    // Converges to the normal tail for large df.
    CHECK(std::abs(student_t_two_sided_p(1.959964, 100000) - 0.05) < 0.001);
    // Symmetric in t.
    CHECK(student_t_two_sided_p(2.1, 30) == student_t_two_sided_p(-2.1, 30));
    CHECK_THROWS_AS(student_t_two_sided_p(1.0, 0), std::invalid_argument);
}

TEST_CASE("permutation test extremes and determinism") {
    std::vector<double> strong(20, 0.0);
    for (std::size_t i = 0; i < strong.size(); ++i) strong[i] = 5.0 + 0.1 * i;
    const PermutationResult extreme = permutation_test(strong, 5000, 9);
    CHECK(extreme.p_value <= 2.0 / 5001.0);
    CHECK(extreme.observed_mean > 0.0);

    // Antisymmetric nets sit at the null's center.
    std::vector<double> balanced;
    for (int i = 1; i <= 10; ++i) {
        balanced.push_back(static_cast<double>(i));
        balanced.push_back(static_cast<double>(-i));
    }
    const PermutationResult central = permutation_test(balanced, 8000, 10);
    CHECK(std::abs(central.p_value - 0.5) < 0.03);

    const PermutationResult again = permutation_test(balanced, 8000, 10);
    CHECK(again.p_value == central.p_value);
    CHECK(again.observed_mean == central.observed_mean);

    CHECK_THROWS_AS(permutation_test({}, 100, 1), std::invalid_argument);
}

TEST_CASE("permutation p falls as the observed mean rises") {
    // Same magnitudes, different signs: the resample distribution is
    // identical, so a larger observed mean cannot raise the p-value.
    std::vector<double> low, high;
    for (int i = 1; i <= 15; ++i) {
        const double magnitude = 1.0 + 0.3 * i;
        low.push_back(i % 3 == 0 ? -magnitude : magnitude);
        high.push_back(magnitude);
    }
    const uint64_t seed = 77;
    CHECK(permutation_test(high, 4000, seed).p_value <=
          permutation_test(low, 4000, seed).p_value);
}

namespace {

Trade year_trade(int year, double net, int month = 3) {
    Trade t;
    t.date = {year, month, 10};
    t.direction = 1;
    t.net_points = net;
    t.gross_points = net + 2.0;
    return t;
}

TradeSet trades_with_year_totals(const std::map<int, std::pair<int, double>>& spec) {
    TradeSet trades;
    for (const auto& [year, n_and_total] : spec) {
        const auto [n, total] = n_and_total;
        for (int i = 0; i < n; ++i) trades.push_back(year_trade(year, total / n));
    }
    return trades;
}

}  // namespace

TEST_CASE("year consistency") {
    SUBCASE("a losing qualifying year fails") {
        const TradeSet trades = trades_with_year_totals(
            {{2022, {8, 242.25}}, {2023, {8, 297.50}}, {2024, {8, -26.75}}, {2025, {8, 477.25}}});
        const YearConsistency out = year_consistency(trades);
        CHECK_FALSE(out.consistent);
        REQUIRE(out.years.size() == 4);
        CHECK(out.years[2].year == 2024);
        CHECK(out.years[2].total_net < 0.0);
        CHECK(out.years[2].qualifies);
    }
    SUBCASE("two positive qualifying years pass") {
        const TradeSet trades = trades_with_year_totals({{2022, {5, 50.0}}, {2023, {6, 10.0}}});
        CHECK(year_consistency(trades).consistent);
    }
    SUBCASE("a single qualifying year is not multi-year") {
        const TradeSet trades = trades_with_year_totals({{2022, {9, 50.0}}});
        CHECK_FALSE(year_consistency(trades).consistent);
    }
    SUBCASE("thin years do not qualify") {
        const TradeSet trades =
            trades_with_year_totals({{2022, {5, 50.0}}, {2023, {5, 10.0}}, {2024, {4, -5.0}}});
        const YearConsistency out = year_consistency(trades);
        CHECK(out.consistent);  // 2024 has fewer than 5 trades
        CHECK_FALSE(out.years[2].qualifies);
    }
    SUBCASE("no trades at all") {
        CHECK_FALSE(year_consistency({}).consistent);
    }
}

namespace {

StrategySummary summary_fixture(std::optional<double> tstat, int n, double total_net) {
    StrategySummary s;
    s.n = n;
    s.tstat = tstat;
    s.total_net = total_net;
    if (n > 0) s.mean_net = total_net / n;
    return s;
}

PermutationResult perm_fixture(double p) {
    PermutationResult perm;
    perm.p_value = p;
    perm.n_resamples = 10'000;
    return perm;
}

}  // namespace

TEST_CASE("gate verdicts") {
    SUBCASE("borderline-strong strategy fails on t and year stability") {
        const GateResult result =
            gate(summary_fixture(1.46, 127, 990.25), perm_fixture(0.04), false);
        CHECK_FALSE(result.pass);
        CHECK_FALSE(result.c1_tstat);
        CHECK(result.c2_min_trades);
        CHECK(result.c3_net_positive);
        CHECK_FALSE(result.c4_year_consistency);
        CHECK(result.c5_permutation);
    }
    SUBCASE("all five pass") {
        const GateResult result = gate(summary_fixture(2.5, 100, 500.0), perm_fixture(0.01), true);
        CHECK(result.pass);
    }
    SUBCASE("too few trades") {
        const GateResult result = gate(summary_fixture(2.5, 8, 500.0), perm_fixture(0.01), true);
        CHECK_FALSE(result.pass);
        CHECK_FALSE(result.c2_min_trades);
        CHECK(result.c1_tstat);
    }
    SUBCASE("zero trades leaves measured values absent") {
        const GateResult result = gate(summary_fixture(std::nullopt, 0, 0.0), std::nullopt, false);
        CHECK_FALSE(result.pass);
        CHECK_FALSE(result.c2_min_trades);
        CHECK_FALSE(result.c1_tstat);
        CHECK_FALSE(result.c5_permutation);
        CHECK_FALSE(result.total_net.has_value());
        CHECK_FALSE(result.p_value.has_value());
    }
    SUBCASE("boundary semantics") {
        // t >= 2.0 and n >= 30 are inclusive; p < 0.05 and net > 0 are strict.
        CHECK(gate(summary_fixture(2.0, 30, 0.01), perm_fixture(0.0499), true).pass);
        CHECK_FALSE(gate(summary_fixture(2.0, 30, 0.01), perm_fixture(0.05), true).pass);
        CHECK_FALSE(gate(summary_fixture(2.0, 30, 0.0), perm_fixture(0.01), true).pass);
        CHECK_FALSE(gate(summary_fixture(1.999, 30, 0.01), perm_fixture(0.01), true).pass);
        CHECK_FALSE(gate(summary_fixture(2.0, 29, 0.01), perm_fixture(0.01), true).pass);
    }
    SUBCASE("flipping any single criterion flips the verdict") {
        const auto pass_summary = summary_fixture(2.5, 100, 500.0);
        CHECK(gate(pass_summary, perm_fixture(0.01), true).pass);
        CHECK_FALSE(gate(summary_fixture(1.0, 100, 500.0), perm_fixture(0.01), true).pass);
        CHECK_FALSE(gate(summary_fixture(2.5, 10, 500.0), perm_fixture(0.01), true).pass);
        CHECK_FALSE(gate(summary_fixture(2.5, 100, -1.0), perm_fixture(0.01), true).pass);
        CHECK_FALSE(gate(pass_summary, perm_fixture(0.2), true).pass);
        CHECK_FALSE(gate(pass_summary, perm_fixture(0.01), false).pass);
    }
}
