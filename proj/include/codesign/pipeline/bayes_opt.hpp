#ifndef CODESIGN_PIPELINE_BAYES_OPT_HPP
#define CODESIGN_PIPELINE_BAYES_OPT_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace codesign::pipeline {

/// Bayesian optimization settings. Defaults: Matern-5/2 response model,
/// 25 seed points, 150 iterations after seeding, 50-point active set.
struct BoConfig {
    std::size_t seed_points = 25;
    std::size_t max_iterations = 150;
    std::size_t active_set = 50;
    std::uint64_t seed = 1;
    std::size_t acquisition_candidates = 2000;
    /// Noise inflation restarts when max EI < ei_stall_threshold * std(y).
    double ei_stall_threshold = 1e-4;
    std::size_t max_noise_inflations = 3;
    double noise_inflation_factor = 10.0;

    void validate() const;
};

struct BoTraceEntry {
    std::size_t evaluation = 0;
    std::vector<double> point; // unit-cube coordinates
    double value = 0.0;
    double incumbent = 0.0;
    bool seed = false;
    double expected_improvement = 0.0;
    std::size_t noise_inflations = 0;
};

struct BoResult {
    std::vector<double> best_point; // unit-cube coordinates
    double best_value = 0.0;
    std::vector<BoTraceEntry> trace;
};

/// Minimizes `objective` over the unit cube [0, 1]^dimension with expected
/// improvement on a GP response model. When the EI maximum stalls, the
/// response model's noise variance is inflated and EI re-maximized (at most
/// max_noise_inflations times).
BoResult bayes_optimize(const std::function<double(const std::vector<double>&)>& objective, std::size_t dimension,
                        const BoConfig& config);

/// Closed-form expected improvement for minimization.
double expected_improvement(double mean, double sd, double incumbent);

} // namespace codesign::pipeline

#endif
