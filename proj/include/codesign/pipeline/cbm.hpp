#ifndef CODESIGN_PIPELINE_CBM_HPP
#define CODESIGN_PIPELINE_CBM_HPP

#include <cstddef>
#include <vector>

#include "codesign/morphology/model.hpp"
#include "codesign/pipeline/bayes_opt.hpp"
#include "codesign/pipeline/frontier.hpp"
#include "codesign/sim/behavior.hpp"
#include "codesign/sim/scenario.hpp"
#include "codesign/sim/swarm.hpp"

namespace codesign::pipeline {

/// Decision variables of the behavior optimization: talents plus the
/// behavior schedule parameters.
struct CbmDesignPoint {
    morphology::TalentVector talents;
    sim::BehaviorHyperparams params;

    bool operator==(const CbmDesignPoint&) const = default;
};

/// Maps the unit cube onto (range, speed, detection, a, b) boxes.
struct CbmBox {
    morphology::TalentBounds talents;

    static constexpr std::size_t dimension = 5;
    CbmDesignPoint from_unit(const std::vector<double>& u) const;
    std::vector<double> to_unit(const CbmDesignPoint& p) const;
    bool contains(const CbmDesignPoint& p) const;
};

struct CbmConfig {
    /// Time charged to a failed search (s).
    double failure_time = 5e4;
    /// Weight of the quadratic g1 penalty (s / km^2).
    double penalty_weight = 1e6;
    /// g1 tolerance as a fraction of the frontier scale.
    double feasibility_tolerance = 1e-6;
    sim::SimConfig sim;
    std::size_t workers = 1;

    void validate() const;
};

struct CbmEvaluation {
    double objective = 0.0;
    double time_sum = 0.0;
    double penalty = 0.0;
    double g1 = 0.0;
    bool feasible = true;
    bool simulated = true;
    std::size_t successes = 0;
    std::vector<sim::SearchOutcome> outcomes; // scenario order; empty when not simulated
};

/// Penalized total search time:
///   sum_i t_i + penalty_weight * max(0, g1)^2,
/// t_i = search time on success, failure_time on failure. Talents that sit
/// beyond the frontier (g1 above tolerance) cannot be realized by any
/// morphology, so their searches are not simulated and every t_i is charged
/// as a failure. Scenario simulations run on `config.workers` threads and
/// are summed in scenario order.
CbmEvaluation cbm_objective(const CbmDesignPoint& point, const std::vector<sim::Scenario>& scenarios,
                            const FrontierSurrogate& surrogate, const CbmConfig& config);

struct ConfigurationScore {
    double success_rate = 0.0;
    double avg_search_time_success = 0.0; // 0 when nothing succeeded
    std::vector<sim::SearchOutcome> outcomes;
};

/// Success rate and mean search time over successes.
ConfigurationScore evaluate_configuration(const morphology::TalentVector& talents, const sim::BehaviorHyperparams& params,
                                          const std::vector<sim::Scenario>& scenarios, const sim::SimConfig& sim_config,
                                          std::size_t workers = 1);

struct CbmTraceEntry {
    std::size_t evaluation = 0;
    CbmDesignPoint point;
    double objective = 0.0;
    double incumbent = 0.0;
    double g1 = 0.0;
    std::size_t successes = 0;
    bool seed = false;
    double expected_improvement = 0.0;
    std::size_t noise_inflations = 0;
};

struct CbmResult {
    CbmDesignPoint optimum;
    double objective = 0.0;
    double g1 = 0.0;
    std::vector<CbmTraceEntry> trace;
    /// Whole simulated-constraint summary over every evaluation.
    bool steps_within_bound = true;
    bool paths_within_range = true;
    std::size_t simulated_searches = 0;
};

/// Bayesian optimization of cbm_objective over the 5-D box. Never touches
/// the morphology model.
CbmResult optimize_cbm(const std::vector<sim::Scenario>& scenarios, const FrontierSurrogate& surrogate,
                       const BoConfig& bo_config, const CbmConfig& config, const CbmBox& box = {});

} // namespace codesign::pipeline

#endif
