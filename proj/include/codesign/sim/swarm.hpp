#ifndef CODESIGN_SIM_SWARM_HPP
#define CODESIGN_SIM_SWARM_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "codesign/common/random.hpp"
#include "codesign/gp/gaussian_process.hpp"
#include "codesign/morphology/model.hpp"
#include "codesign/sim/behavior.hpp"
#include "codesign/sim/scenario.hpp"

namespace codesign::sim {

/// Simulator constants.
struct SimConfig {
    double decision_horizon_s = 120.0;
    double observation_spacing_km = 0.1;
    std::size_t candidate_count = 64;
    /// Local penalization radius; <= 0 means V * decision horizon.
    double penalization_radius_km = 0.0;
    double stagnation_epsilon_km = 0.001;
    std::size_t stagnation_decisions = 5;
    double belief_length_scale_km = 2.0;
    double belief_signal_variance = 1.0;
    double belief_noise_variance = 0.01;
    std::size_t active_set_cap = 50;
    std::size_t active_set_recent = 20;
    /// Highest-valued observations always kept in the belief's active set.
    std::size_t active_set_best = 10;
    /// Fixed exploration scaling; <= 0 selects the adaptive rule.
    double beta_override = 0.0;
    bool record_trajectories = false;

    void validate() const;
};

struct Observation {
    Vec2 location;
    double value = 0.0;
};

/// Decision state of one robot.
struct RobotState {
    std::size_t id = 0;
    Vec2 position;
    Vec2 current_waypoint;
    double path_length_used = 0.0; // km
    std::vector<Observation> observations;
    std::optional<gp::GpModel> belief;
    bool active = true;
};

/// A peer's committed leg, from its current position to its waypoint.
struct PeerPlan {
    Vec2 position;
    Vec2 waypoint;
};

/// Product over peers of min(1, d_j / radius), d_j = distance from the
/// candidate to peer j's planned segment.
double local_penalization(Vec2 candidate, std::span<const PeerPlan> peers, double radius);

/// Robot belief: SE-kernel GP over the observation active set.
gp::GpModel fit_belief(std::span<const Observation> observations, const SimConfig& config);

struct WaypointChoice {
    Vec2 waypoint;
    /// True when no feasible candidate existed; waypoint is then the
    /// current position.
    bool stagnated = false;
    double alpha = 0.0;
    double beta = 0.0;
    double score = 0.0;
    std::size_t candidates = 0;
};

/// Draws candidates uniformly in the reachable disk (radius V * T_dec,
/// shortened to the remaining range) clipped to the arena, scores each by
/// (alpha * mean + (1 - alpha) * beta * std) * penalization and returns the
/// first maximizer. `beta` nullopt selects the adaptive scaling
/// (max observed signal / max candidate std, floored at 1e-6).
WaypointChoice choose_waypoint(const RobotState& robot, std::span<const PeerPlan> peers, double t,
                               const Scenario& scenario, const morphology::TalentVector& talents,
                               const BehaviorHyperparams& params, std::optional<double> beta, const SimConfig& config,
                               Rng& rng);

enum class FailureReason { None, TimeLimit, Stagnation };

const char* to_string(FailureReason reason);

struct TrajectoryRecord {
    double time = 0.0;
    std::size_t robot = 0;
    double x = 0.0;
    double y = 0.0;
    double signal = 0.0;
};

/// Constraint bookkeeping gathered during a run.
struct SearchDiagnostics {
    std::size_t decisions = 0;
    std::size_t legs = 0;
    double step_bound_km = 0.0;
    double max_step_km = 0.0;
    double max_path_km = 0.0;
    double range_km = 0.0;
    /// Largest |sum of leg lengths - path_length_used| over robots.
    double path_accounting_error_km = 0.0;
    bool robots_inside_arena = true;

    bool steps_within_bound() const { return max_step_km <= step_bound_km + 1e-9; }
    bool path_within_range() const { return max_path_km <= range_km + 1e-9; }
};

struct SearchOutcome {
    bool success = false;
    double search_time = 0.0; // s
    FailureReason failure_reason = FailureReason::None;
    std::vector<TrajectoryRecord> trajectory_log;
    SearchDiagnostics diagnostics;
};

/// Mission time limit: flight_range / cruise_speed (s).
double mission_time_limit(const morphology::TalentVector& talents);

/// Event-driven asynchronous swarm search. Deterministic given the scenario
/// seed.
SearchOutcome run_search(const Scenario& scenario, const morphology::TalentVector& talents,
                         const BehaviorHyperparams& params, const SimConfig& config = {});

} // namespace codesign::sim

#endif
