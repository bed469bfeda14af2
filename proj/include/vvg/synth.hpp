#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vvg/market_data.hpp"

namespace vvg {

// Marks one day whose overnight gap, first-bar volume and first-30-minute
// move are scaled up, so downstream classification can be exercised with
// days that are extreme by construction.
struct ShockSpec {
    int day_index = 0;
    double gap_mult = 1.0;
    double volume_mult = 1.0;
    double opening_move_mult = 1.0;
};

struct SynthConfig {
    int n_days = 250;
    uint64_t seed = 42;
    double base_price = 16000.0;       // points
    double per_bar_volatility = 6.0;   // points, close-to-close per bar
    double gap_volatility = 0.002;     // fraction, overnight
    double volume_mean = 1200.0;       // contracts, lognormal mean
    double volume_dispersion = 0.35;   // lognormal sigma
    double drift = 0.0;                // points per day
    Date start_date{2021, 1, 4};
    std::vector<ShockSpec> shocks;
};

// Deterministic bar-file content: n_days complete 78-bar RTH sessions on
// consecutive weekdays, prices snapped to the 0.25 tick. Identical configs
// produce identical bytes. Throws std::invalid_argument on a bad config.
std::string generate(const SynthConfig& config);

// generate + parse + strict session build; by construction nothing drops.
Dataset generate_dataset(const SynthConfig& config);

}  // namespace vvg
