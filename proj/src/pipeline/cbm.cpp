#include "codesign/pipeline/cbm.hpp"

#include <algorithm>
#include <cmath>

#include "codesign/common/error.hpp"
#include "codesign/common/parallel.hpp"

namespace codesign::pipeline {

CbmDesignPoint CbmBox::from_unit(const std::vector<double>& u) const {
    if (u.size() != dimension) throw InvalidArgument("CbmBox: expected a 5-vector");
    auto lerp = [](const morphology::Interval& i, double v) { return i.lower + std::clamp(v, 0.0, 1.0) * i.width(); };
    using BH = sim::BehaviorHyperparams;
    CbmDesignPoint p;
    p.talents = {lerp(talents.flight_range, u[0]), lerp(talents.cruise_speed, u[1]), lerp(talents.detection_distance, u[2])};
    p.params = {BH::kMinA + std::clamp(u[3], 0.0, 1.0) * (BH::kMaxA - BH::kMinA),
                BH::kMinB + std::clamp(u[4], 0.0, 1.0) * (BH::kMaxB - BH::kMinB)};
    return p;
}

std::vector<double> CbmBox::to_unit(const CbmDesignPoint& p) const {
    using BH = sim::BehaviorHyperparams;
    auto inv = [](const morphology::Interval& i, double v) { return (v - i.lower) / i.width(); };
    return {inv(talents.flight_range, p.talents.flight_range), inv(talents.cruise_speed, p.talents.cruise_speed),
            inv(talents.detection_distance, p.talents.detection_distance), (p.params.a - BH::kMinA) / (BH::kMaxA - BH::kMinA),
            (p.params.b - BH::kMinB) / (BH::kMaxB - BH::kMinB)};
}

bool CbmBox::contains(const CbmDesignPoint& p) const {
    using BH = sim::BehaviorHyperparams;
    return talents.contains(p.talents) && p.params.a >= BH::kMinA && p.params.a <= BH::kMaxA && p.params.b >= BH::kMinB &&
           p.params.b <= BH::kMaxB;
}

void CbmConfig::validate() const {
    if (!(failure_time > 0.0)) throw ConfigError("cbm.failure_time", "failure_time must be positive");
    if (!(penalty_weight >= 0.0)) throw ConfigError("cbm.penalty_weight", "penalty_weight must be nonnegative");
    if (!(feasibility_tolerance >= 0.0)) throw ConfigError("cbm.feasibility_tolerance", "must be nonnegative");
    sim.validate();
}

namespace {

std::vector<sim::SearchOutcome> simulate_all(const morphology::TalentVector& talents, const sim::BehaviorHyperparams& params,
                                             const std::vector<sim::Scenario>& scenarios, const sim::SimConfig& sim_config,
                                             std::size_t workers) {
    std::vector<sim::SearchOutcome> outcomes(scenarios.size());
    parallel_for(scenarios.size(), workers,
                 [&](std::size_t i) { outcomes[i] = sim::run_search(scenarios[i], talents, params, sim_config); });
    return outcomes;
}

} // namespace

CbmEvaluation cbm_objective(const CbmDesignPoint& point, const std::vector<sim::Scenario>& scenarios,
                            const FrontierSurrogate& surrogate, const CbmConfig& config) {
    if (scenarios.empty()) {
        throw InvalidArgument("cbm_objective: empty scenario list");
    }
    point.params.check_bounds();

    CbmEvaluation eval;
    eval.g1 = g1_feasibility(point.talents, surrogate);
    const double violation = std::max(0.0, eval.g1);
    eval.penalty = config.penalty_weight * violation * violation;
    eval.feasible = eval.g1 <= config.feasibility_tolerance * surrogate.frontier_scale();

    if (!eval.feasible) {
        eval.simulated = false;
        eval.time_sum = static_cast<double>(scenarios.size()) * config.failure_time;
    } else {
        eval.outcomes = simulate_all(point.talents, point.params, scenarios, config.sim, config.workers);
        for (const auto& o : eval.outcomes) {
            if (o.success) {
                ++eval.successes;
                eval.time_sum += o.search_time;
            } else {
                eval.time_sum += config.failure_time;
            }
        }
    }
    eval.objective = eval.time_sum + eval.penalty;
    return eval;
}

ConfigurationScore evaluate_configuration(const morphology::TalentVector& talents, const sim::BehaviorHyperparams& params,
                                          const std::vector<sim::Scenario>& scenarios, const sim::SimConfig& sim_config,
                                          std::size_t workers) {
    if (scenarios.empty()) {
        throw InvalidArgument("evaluate_configuration: empty scenario list");
    }
    ConfigurationScore score;
    score.outcomes = simulate_all(talents, params, scenarios, sim_config, workers);
    std::size_t successes = 0;
    double time = 0.0;
    for (const auto& o : score.outcomes) {
        if (o.success) {
            ++successes;
            time += o.search_time;
        }
    }
    score.success_rate = static_cast<double>(successes) / static_cast<double>(scenarios.size());
    score.avg_search_time_success = successes > 0 ? time / static_cast<double>(successes) : 0.0;
    return score;
}

CbmResult optimize_cbm(const std::vector<sim::Scenario>& scenarios, const FrontierSurrogate& surrogate,
                       const BoConfig& bo_config, const CbmConfig& config, const CbmBox& box) {
    config.validate();
    if (scenarios.empty()) {
        throw InvalidArgument("optimize_cbm: empty scenario list");
    }
    CbmResult result;
    std::vector<CbmEvaluation> evaluations;
    auto objective = [&](const std::vector<double>& u) {
        const CbmDesignPoint p = box.from_unit(u);
        CbmEvaluation e = cbm_objective(p, scenarios, surrogate, config);
        for (const auto& o : e.outcomes) {
            result.steps_within_bound = result.steps_within_bound && o.diagnostics.steps_within_bound();
            result.paths_within_range = result.paths_within_range && o.diagnostics.path_within_range();
            ++result.simulated_searches;
        }
        e.outcomes.clear();
        evaluations.push_back(std::move(e));
        return evaluations.back().objective;
    };

    const BoResult bo = bayes_optimize(objective, CbmBox::dimension, bo_config);
    for (std::size_t i = 0; i < bo.trace.size(); ++i) {
        const auto& t = bo.trace[i];
        result.trace.push_back({t.evaluation, box.from_unit(t.point), t.value, t.incumbent, evaluations[i].g1,
                                evaluations[i].successes, t.seed, t.expected_improvement, t.noise_inflations});
    }
    result.optimum = box.from_unit(bo.best_point);
    result.objective = bo.best_value;
    result.g1 = g1_feasibility(result.optimum.talents, surrogate);
    return result;
}

} // namespace codesign::pipeline
