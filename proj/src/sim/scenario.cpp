#include "codesign/sim/scenario.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "codesign/common/error.hpp"
#include "codesign/common/lhs.hpp"
#include "codesign/common/random.hpp"

namespace codesign::sim {

Vec2 Arena::clamp(Vec2 p) const {
    return {std::clamp(p.x, -0.5 * width, 0.5 * width), std::clamp(p.y, 0.0, height)};
}

void Scenario::validate() const {
    field.validate();
    if (swarm_size < 1) {
        throw InvalidArgument("scenario: swarm_size must be at least 1");
    }
    if (!(arena.width > 0.0 && arena.height > 0.0)) {
        throw InvalidArgument("scenario: arena must have positive extent");
    }
    if (!arena.contains(base_location)) {
        throw InvalidArgument("scenario: base location outside arena");
    }
    if (!(observation_noise_std >= 0.0)) {
        throw InvalidArgument("scenario: observation noise must be nonnegative");
    }
}

void ScenarioSetConfig::validate() const {
    if (!(source_x_min <= source_x_max && source_y_min <= source_y_max && strength_min <= strength_max)) {
        throw ConfigError("scenarios", "scenario ranges must be ordered");
    }
    if (swarm_min < 1 || swarm_min > swarm_max) {
        throw ConfigError("scenarios.swarm_min", "swarm size range must satisfy 1 <= min <= max");
    }
    if (family_count < 1 || family_count > kFieldFamilyCount) {
        throw ConfigError("scenarios.family_count", "family_count must be in [1, 5]");
    }
    if (arenas.empty()) {
        throw ConfigError("scenarios.arenas", "at least one arena required");
    }
    for (const auto& a : arenas) {
        if (source_x_min < -0.5 * a.width || source_x_max > 0.5 * a.width || source_y_min < 0.0 || source_y_max > a.height) {
            throw ConfigError("scenarios.arenas", "source range does not fit inside every arena");
        }
    }
    if (!(noise_fraction >= 0.0)) {
        throw ConfigError("scenarios.noise_fraction", "noise_fraction must be nonnegative");
    }
    if (!(spread_at_min_strength > 0.0 && spread_at_max_strength > 0.0)) {
        throw ConfigError("scenarios.spread", "spreads must be positive");
    }
}

namespace {

std::vector<double> shape_for(int family, double sigma, const Arena& arena, Vec2 source, Rng& rng) {
    using std::numbers::pi;
    switch (static_cast<FieldFamily>(family)) {
    case FieldFamily::Isotropic:
        return {sigma};
    case FieldFamily::Anisotropic: {
        const double ratio = uniform(rng, 0.35, 0.7);
        return {sigma * 1.3, sigma * 1.3 * ratio, uniform(rng, 0.0, pi)};
    }
    case FieldFamily::TwoPeak: {
        // decoy 4-9 km away, kept inside the arena
        Vec2 offset;
        for (int attempt = 0; attempt < 32; ++attempt) {
            const double r = uniform(rng, 4.0, 9.0);
            const double th = uniform(rng, 0.0, 2.0 * pi);
            offset = {r * std::cos(th), r * std::sin(th)};
            if (arena.contains(source + offset)) break;
        }
        const Vec2 decoy = arena.clamp(source + offset);
        return {sigma, decoy.x - source.x, decoy.y - source.y, uniform(rng, 0.4, 0.7), sigma * uniform(rng, 0.6, 1.0)};
    }
    case FieldFamily::RampBackground:
        return {sigma, uniform(rng, 0.15, 0.35), uniform(rng, 0.0, pi), uniform(rng, 15.0, 30.0)};
    case FieldFamily::Plateau:
        return {sigma * 0.8, uniform(rng, 1.5, 3.0)};
    }
    return {sigma};
}

} // namespace

std::vector<Scenario> generate_scenarios(std::size_t count, std::uint64_t seed, const ScenarioSetConfig& config) {
    if (count < 1) {
        throw InvalidArgument("generate_scenarios: count must be at least 1");
    }
    config.validate();
    Rng design_rng = make_rng(seed, {0x5CE7A210});
    const auto u = latin_hypercube(count, 5, design_rng);

    const std::size_t swarm_levels = config.swarm_max - config.swarm_min + 1;
    std::vector<Scenario> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Scenario s;
        s.seed = derive_seed(seed, {0x5CE7A210, i + 1});
        Rng rng(s.seed);

        const double strength = config.strength_min + u[i][2] * (config.strength_max - config.strength_min);
        const auto swarm_step = std::min(swarm_levels - 1, static_cast<std::size_t>(u[i][3] * static_cast<double>(swarm_levels)));
        const int family = 1 + std::min(config.family_count - 1, static_cast<int>(u[i][4] * config.family_count));

        s.arena = config.arenas[uniform_index(rng, config.arenas.size())];
        s.base_location = {0.0, 0.0};
        s.swarm_size = config.swarm_min + swarm_step;
        s.field.family_id = family;
        s.field.source_location = {config.source_x_min + u[i][0] * (config.source_x_max - config.source_x_min),
                                   config.source_y_min + u[i][1] * (config.source_y_max - config.source_y_min)};
        s.field.peak_strength = strength;

        const double strength_share = config.strength_max > config.strength_min
                                          ? (strength - config.strength_min) / (config.strength_max - config.strength_min)
                                          : 1.0;
        const double sigma = (config.spread_at_min_strength +
                              strength_share * (config.spread_at_max_strength - config.spread_at_min_strength)) *
                             uniform(rng, 0.85, 1.15);
        s.field.shape_params = shape_for(family, sigma, s.arena, s.field.source_location, rng);
        s.observation_noise_std = config.noise_fraction * strength;
        s.validate();
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace codesign::sim
