#ifndef CODESIGN_MOO_NSGA2_HPP
#define CODESIGN_MOO_NSGA2_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "codesign/moo/pareto.hpp"

namespace codesign::moo {

/// Box-constrained problem, maximizing every objective. Minimization
/// objectives are negated by the caller.
struct MooProblem {
    std::vector<double> lower_bounds;
    std::vector<double> upper_bounds;
    std::size_t objective_count = 1;
    std::function<std::vector<double>(std::span<const double>)> objective;

    std::size_t dimension() const { return lower_bounds.size(); }
    void validate() const;
};

struct NsgaConfig {
    std::size_t population_size = 200;
    std::size_t max_iterations = 75;
    double crossover_rate = 0.9;
    double mutation_rate = 0.4;      // per gene
    double mutation_strength = 0.075; // std-dev as a fraction of the variable range
    std::size_t repeat_runs = 5;
    std::uint64_t seed = 1;
    double crossover_eta = 15.0;     // SBX distribution index
    std::size_t workers = 1;

    void validate() const;
};

/// Snapshot handed to the per-generation observer.
struct GenerationView {
    std::size_t run;
    std::size_t generation; // 0 = initial population
    const std::vector<std::vector<double>>& decisions;
    const std::vector<std::vector<double>>& objectives;
};

using GenerationObserver = std::function<void(const GenerationView&)>;

/// Real-coded NSGA-II. Runs `repeat_runs` independently seeded runs and
/// returns the deduplicated non-dominated union of their final populations.
/// Evaluations inside a generation are spread over `config.workers` threads;
/// the result does not depend on the worker count.
ParetoArchive evolve(const MooProblem& problem, const NsgaConfig& config, const GenerationObserver& observer = {});

/// One run; `run_index` selects the seed substream.
ParetoArchive evolve_single_run(const MooProblem& problem, const NsgaConfig& config, std::size_t run_index,
                                const GenerationObserver& observer = {});

} // namespace codesign::moo

#endif
