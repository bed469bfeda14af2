#include "vvg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "vvg/rng.hpp"

namespace vvg {

namespace {

// Snap to the 0.25 tick grid, floored at one tick above zero.
double snap_to_tick(double points) {
    const double snapped = std::round(points * 4.0) / 4.0;
    return std::max(snapped, 0.25);
}

void validate(const SynthConfig& config) {
    if (config.n_days < 1) throw std::invalid_argument("n_days must be >= 1");
    if (config.base_price <= 0.0) throw std::invalid_argument("base_price must be positive");
    if (config.per_bar_volatility < 0.0 || config.gap_volatility < 0.0) {
        throw std::invalid_argument("volatilities must be non-negative");
    }
    if (config.volume_mean <= 0.0) throw std::invalid_argument("volume_mean must be positive");
    if (config.volume_dispersion < 0.0) {
        throw std::invalid_argument("volume_dispersion must be non-negative");
    }
    if (!config.start_date.valid()) throw std::invalid_argument("invalid start date");
    for (const ShockSpec& shock : config.shocks) {
        if (shock.day_index < 0 || shock.day_index >= config.n_days) {
            throw std::invalid_argument("shock day index out of range");
        }
    }
}

Date next_weekday(Date date) {
    int dn = date.day_number() + 1;
    Date next = Date::from_day_number(dn);
    while (next.is_weekend()) next = Date::from_day_number(++dn);
    return next;
}

}  // namespace

std::string generate(const SynthConfig& config) {
    validate(config);

    std::map<int, ShockSpec> shocks;
    for (const ShockSpec& shock : config.shocks) shocks[shock.day_index] = shock;

    Rng rng(config.seed);
    // Four sub-steps carry a close-to-close move of per_bar_volatility.
    const double step_sigma = config.per_bar_volatility / 2.0;
    const double drift_per_step = config.drift / (rth::bars_per_session * 4.0);
    // Lognormal location chosen so the mean volume equals volume_mean.
    const double vol_mu =
        std::log(config.volume_mean) - 0.5 * config.volume_dispersion * config.volume_dispersion;

    std::ostringstream out;
    out << bar_file_header << '\n';

    Date date = config.start_date;
    while (date.is_weekend()) date = next_weekday(date);

    double prev_close = config.base_price;
    for (int day = 0; day < config.n_days; ++day) {
        const ShockSpec* shock = nullptr;
        if (const auto it = shocks.find(day); it != shocks.end()) shock = &it->second;

        double level;
        if (day == 0) {
            level = snap_to_tick(config.base_price);
        } else {
            const double gap_mult = shock ? shock->gap_mult : 1.0;
            const double gap = rng.gaussian() * config.gap_volatility * gap_mult;
            level = snap_to_tick(prev_close * (1.0 + gap));
        }

        for (int bar = 0; bar < rth::bars_per_session; ++bar) {
            const double move_mult = shock && bar < 6 ? shock->opening_move_mult : 1.0;
            const double open = level;
            double high = open;
            double low = open;
            for (int step = 0; step < 4; ++step) {
                level = snap_to_tick(level + rng.gaussian() * step_sigma * move_mult +
                                     drift_per_step);
                high = std::max(high, level);
                low = std::min(low, level);
            }
            const double close = level;

            double volume = std::exp(vol_mu + rng.gaussian() * config.volume_dispersion);
            if (shock && bar == 0) volume *= shock->volume_mult;
            const int64_t contracts = std::max<int64_t>(1, std::llround(volume));

            const TimeOfDay start{rth::session_open.minutes + bar * rth::bar_minutes};
            out << date.to_string() << 'T' << start.to_string() << ','
                << Price::from_points(open).to_string() << ','
                << Price::from_points(high).to_string() << ','
                << Price::from_points(low).to_string() << ','
                << Price::from_points(close).to_string() << ',' << contracts << '\n';
        }

        prev_close = level;
        date = next_weekday(date);
    }
    return out.str();
}

Dataset generate_dataset(const SynthConfig& config) {
    std::istringstream in(generate(config));
    return build_sessions(parse_bar_file(in), CompletenessPolicy::strict()).dataset;
}

}  // namespace vvg
