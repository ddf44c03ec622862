#ifndef CODESIGN_IO_REPORT_HPP
#define CODESIGN_IO_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codesign/morphology/model.hpp"
#include "codesign/pipeline/frontier.hpp"
#include "codesign/sim/behavior.hpp"
#include "codesign/sim/swarm.hpp"

namespace codesign::io {

struct ScenarioResult {
    bool success = false;
    double search_time = 0.0;
    sim::FailureReason failure_reason = sim::FailureReason::None;
};

/// One (talents, behavior) configuration evaluated on the held-out set.
struct ConfigurationResult {
    std::string label;
    morphology::TalentVector talents;
    sim::BehaviorHyperparams params;
    double success_rate = 0.0;
    double avg_search_time_success = 0.0;
    bool steps_within_bound = true;
    bool paths_within_range = true;
    std::vector<ScenarioResult> outcomes;
};

struct Evaluation {
    std::vector<ConfigurationResult> configurations;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
    /// Evaluations of the stage's expensive function (morphology model or
    /// CBM objective); 0 when not applicable.
    std::uint64_t evaluations = 0;
};

/// Cost of a nested co-design where an outer NSGA run over morphology and
/// behavior evaluates the CBM objective for every individual:
/// population * (generations + 1) * (t_morphology + t_cbm).
struct NestedCostEstimate {
    double morphology_eval_seconds = 0.0;
    double cbm_eval_seconds = 0.0;
    std::uint64_t nested_evaluations = 0;
    double nested_seconds = 0.0;
    double sequential_seconds = 0.0;
    double speedup = 0.0;
};

struct CbmSummary {
    double objective = 0.0;
    std::size_t evaluations = 0;
    morphology::TalentVector talents;
    sim::BehaviorHyperparams params;
    double g1 = 0.0;
    double g1_tolerance = 0.0;
    bool feasible = false;
    bool steps_within_bound = true;
    bool paths_within_range = true;
    std::size_t simulated_searches = 0;
};

struct FinalSummary {
    morphology::MorphologyDesign design;
    morphology::TalentVector talents;
    double residual = 0.0;
    std::size_t candidates = 0;
};

/// Deterministic run summary plus the wall-clock section, which is stored
/// separately (timings.json) so reports stay byte-identical across reruns.
struct RunReport {
    std::uint64_t seed = 0;
    std::vector<std::string> completed_stages;
    std::optional<std::size_t> archive_size;
    std::optional<pipeline::FrontierDiagnostics> surrogate;
    std::optional<CbmSummary> cbm;
    std::optional<FinalSummary> final_design;
    std::vector<ConfigurationResult> comparison;

    std::vector<StageTiming> timings;
    std::optional<NestedCostEstimate> nested_cost;
};

} // namespace codesign::io

#endif
