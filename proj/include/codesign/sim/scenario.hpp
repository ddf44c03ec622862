#ifndef CODESIGN_SIM_SCENARIO_HPP
#define CODESIGN_SIM_SCENARIO_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "codesign/sim/signal_field.hpp"

namespace codesign::sim {

/// Rectangular search area: x in [-width/2, width/2], y in [0, height] (km).
struct Arena {
    double width = 30.0;
    double height = 15.0;

    bool contains(Vec2 p, double slack = 1e-9) const {
        return p.x >= -0.5 * width - slack && p.x <= 0.5 * width + slack && p.y >= -slack && p.y <= height + slack;
    }
    Vec2 clamp(Vec2 p) const;
    bool operator==(const Arena&) const = default;
};

/// One stochastic search environment.
struct Scenario {
    SignalField field;
    std::size_t swarm_size = 6;
    Arena arena;
    Vec2 base_location;
    double observation_noise_std = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const Scenario&) const = default;
};

/// Stochastic environment settings. Defaults: 100 samples, swarm 6..15,
/// 5 source families, source x in [-14, 14] km, y in [0, 14] km, strength
/// in [15, 100], 30x15 or 30x30 km arenas.
struct ScenarioSetConfig {
    std::size_t count = 100;
    double source_x_min = -14.0, source_x_max = 14.0;
    double source_y_min = 0.0, source_y_max = 14.0;
    double strength_min = 15.0, strength_max = 100.0;
    std::size_t swarm_min = 6, swarm_max = 15;
    int family_count = kFieldFamilyCount;
    std::vector<Arena> arenas{{30.0, 15.0}, {30.0, 30.0}};
    /// Observation noise std as a fraction of the peak strength.
    double noise_fraction = 0.02;
    /// Gaussian spread (km) at the weakest and strongest source.
    double spread_at_min_strength = 2.0;
    double spread_at_max_strength = 4.5;

    void validate() const;
};

/// Latin-hypercube scenario set: source x, source y, strength, swarm size
/// and family are stratified jointly; arena and family shape parameters come
/// from each scenario's own seeded stream. Deterministic given `seed`.
std::vector<Scenario> generate_scenarios(std::size_t count, std::uint64_t seed, const ScenarioSetConfig& config = {});

} // namespace codesign::sim

#endif
