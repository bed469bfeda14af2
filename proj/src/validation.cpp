#include "vvg/validation.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "vvg/rng.hpp"

namespace vvg {

std::optional<double> t_statistic(std::span<const double> values) {
    const int n = static_cast<int>(values.size());
    if (n < 2) return std::nullopt;
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (const double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    const double stdev = std::sqrt(ss / (n - 1));
    if (stdev <= 0.0) return std::nullopt;
    return mean / (stdev / std::sqrt(static_cast<double>(n)));
}

namespace {

// Continued-fraction helper for the regularized incomplete beta function
// (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iterations = 400;
    constexpr double eps = 3e-16;
    constexpr double tiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_two_sided_p(double t, int df) {
    if (df < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
    if (std::isnan(t)) throw std::invalid_argument("t statistic is NaN");
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
    const int n = static_cast<int>(x.size());
    if (n != static_cast<int>(y.size())) throw std::invalid_argument("x and y lengths differ");
    if (n < 3) throw std::invalid_argument("OLS requires at least 3 points");

    double x_mean = 0.0;
    double y_mean = 0.0;
    for (int i = 0; i < n; ++i) {
        x_mean += x[i];
        y_mean += y[i];
    }
    x_mean /= n;
    y_mean /= n;

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = x[i] - x_mean;
        const double dy = y[i] - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw std::invalid_argument("constant predictor");

    OlsFit fit;
    fit.n = n;
    fit.beta = sxy / sxx;
    fit.intercept = y_mean - fit.beta * x_mean;
    double sse = syy - fit.beta * sxy;
    if (sse < 0.0) sse = 0.0;  // guard rounding on exact fits
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 0.0;

    const double sigma2 = sse / (n - 2);
    const double se_beta = std::sqrt(sigma2 / sxx);
    if (se_beta > 0.0) {
        fit.t_beta = fit.beta / se_beta;
    } else {
        fit.t_beta = fit.beta == 0.0 ? 0.0
                                     : std::copysign(std::numeric_limits<double>::infinity(), fit.beta);
    }
    fit.p_value = student_t_two_sided_p(fit.t_beta, n - 2);
    return fit;
}

PermutationResult permutation_test(std::span<const double> nets, int n_resamples, uint64_t seed) {
    if (nets.empty()) throw std::invalid_argument("permutation test over empty trade set");
    if (n_resamples < 1) throw std::invalid_argument("need at least one resample");

    const int n = static_cast<int>(nets.size());
    double observed = 0.0;
    for (const double v : nets) observed += v;
    observed /= n;

    int at_least = 0;
    for (int r = 0; r < n_resamples; ++r) {
        // One independent substream per resample index.
        std::mt19937_64 engine(splitmix64(seed + 1 + static_cast<uint64_t>(r)));
        double sum = 0.0;
        uint64_t word = 0;
        for (int i = 0; i < n; ++i) {
            if (i % 64 == 0) word = engine();
            const bool keep = word & 1;
            word >>= 1;
            sum += keep ? nets[i] : -nets[i];
        }
        if (sum / n >= observed) ++at_least;
    }

    PermutationResult result;
    result.observed_mean = observed;
    result.n_resamples = n_resamples;
    result.seed = seed;
    result.p_value = static_cast<double>(1 + at_least) / (n_resamples + 1);
    return result;
}

YearConsistency year_consistency(const TradeSet& trades, const YearConsistencyConfig& config) {
    std::map<int, YearNet> by_year;
    for (const Trade& trade : trades) {
        YearNet& y = by_year[trade.date.year];
        y.year = trade.date.year;
        ++y.n;
        y.total_net += trade.net_points;
    }

    YearConsistency out;
    int qualifying = 0;
    bool all_positive = true;
    for (auto& [year, stats] : by_year) {
        stats.qualifies = stats.n >= config.min_trades_per_year;
        if (stats.qualifies) {
            ++qualifying;
            if (stats.total_net <= 0.0) all_positive = false;
        }
        out.years.push_back(stats);
    }
    out.consistent = qualifying >= config.min_years && all_positive;
    return out;
}

GateResult gate(const StrategySummary& summary, const std::optional<PermutationResult>& perm,
                bool year_ok, const GateConfig& config) {
    GateResult result;
    result.n = summary.n;
    result.tstat = summary.tstat;
    if (summary.n > 0) result.total_net = summary.total_net;
    if (perm) result.p_value = perm->p_value;

    result.c1_tstat = summary.tstat.has_value() && *summary.tstat >= config.min_tstat;
    result.c2_min_trades = summary.n >= config.min_trades;
    result.c3_net_positive = summary.n > 0 && summary.total_net > 0.0;
    result.c4_year_consistency = year_ok;
    result.c5_permutation = perm.has_value() && perm->p_value < config.max_p;
    result.pass = result.c1_tstat && result.c2_min_trades && result.c3_net_positive &&
                  result.c4_year_consistency && result.c5_permutation;
    return result;
}

}  // namespace vvg
