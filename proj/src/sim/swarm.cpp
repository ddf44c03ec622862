#include "codesign/sim/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "codesign/common/error.hpp"

namespace codesign::sim {

void SimConfig::validate() const {
    auto fail = [](const char* field, const char* msg) { throw ConfigError(std::string("sim.") + field, msg); };
    if (!(decision_horizon_s > 0.0)) fail("decision_horizon_s", "decision horizon must be positive");
    if (!(observation_spacing_km > 0.0)) fail("observation_spacing_km", "observation spacing must be positive");
    if (candidate_count < 1) fail("candidate_count", "need at least one candidate");
    if (!(stagnation_epsilon_km >= 0.0)) fail("stagnation_epsilon_km", "must be nonnegative");
    if (stagnation_decisions < 1) fail("stagnation_decisions", "must be at least 1");
    if (!(belief_length_scale_km > 0.0)) fail("belief_length_scale_km", "must be positive");
    if (!(belief_signal_variance > 0.0)) fail("belief_signal_variance", "must be positive");
    if (!(belief_noise_variance >= 0.0)) fail("belief_noise_variance", "must be nonnegative");
    if (active_set_cap < 1) fail("active_set_cap", "must be at least 1");
}

const char* to_string(FailureReason reason) {
    switch (reason) {
    case FailureReason::None: return "none";
    case FailureReason::TimeLimit: return "time-limit";
    case FailureReason::Stagnation: return "stagnation";
    }
    return "unknown";
}

double local_penalization(Vec2 candidate, std::span<const PeerPlan> peers, double radius) {
    double penalty = 1.0;
    for (const auto& peer : peers) {
        const double d = distance_to_segment(candidate, peer.position, peer.waypoint);
        penalty *= std::min(1.0, d / radius);
    }
    return penalty;
}

gp::GpModel fit_belief(std::span<const Observation> observations, const SimConfig& config) {
    if (observations.empty()) {
        throw InvalidArgument("fit_belief: no observations");
    }
    const auto n = static_cast<Eigen::Index>(observations.size());
    Eigen::MatrixXd locations(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        locations(i, 0) = observations[static_cast<std::size_t>(i)].location.x;
        locations(i, 1) = observations[static_cast<std::size_t>(i)].location.y;
    }

    std::vector<std::size_t> best;
    if (observations.size() > config.active_set_cap && config.active_set_best > 0) {
        best.resize(observations.size());
        for (std::size_t i = 0; i < best.size(); ++i) best[i] = i;
        const std::size_t k = std::min(config.active_set_best, best.size());
        std::partial_sort(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(k), best.end(),
                          [&](std::size_t a, std::size_t b) {
                              return observations[a].value > observations[b].value ||
                                     (observations[a].value == observations[b].value && a < b);
                          });
        best.resize(k);
    }
    const auto idx = gp::select_active_set(locations, config.active_set_cap, config.active_set_recent, best);

    Eigen::MatrixXd x(static_cast<Eigen::Index>(idx.size()), 2);
    Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        x.row(static_cast<Eigen::Index>(k)) = locations.row(static_cast<Eigen::Index>(idx[k]));
        y[static_cast<Eigen::Index>(k)] = observations[idx[k]].value;
    }
    gp::KernelSpec kernel;
    kernel.family = gp::KernelFamily::SquaredExponential;
    kernel.length_scales = Eigen::VectorXd::Constant(2, config.belief_length_scale_km);
    kernel.signal_variance = config.belief_signal_variance;
    kernel.noise_variance = config.belief_noise_variance;
    return gp::fit(x, y, kernel);
}

double mission_time_limit(const morphology::TalentVector& talents) {
    return talents.flight_range * 1000.0 / talents.cruise_speed;
}

WaypointChoice choose_waypoint(const RobotState& robot, std::span<const PeerPlan> peers, double t,
                               const Scenario& scenario, const morphology::TalentVector& talents,
                               const BehaviorHyperparams& params, std::optional<double> beta, const SimConfig& config,
                               Rng& rng) {
    if (!robot.active) {
        throw InvalidArgument("choose_waypoint: robot is inactive");
    }
    if (!robot.belief) {
        throw InvalidArgument("choose_waypoint: robot belief not fitted");
    }
    const double step_bound = talents.cruise_speed / 1000.0 * config.decision_horizon_s;
    const double reach = std::min(step_bound, std::max(0.0, talents.flight_range - robot.path_length_used));
    const double radius = config.penalization_radius_km > 0.0 ? config.penalization_radius_km : step_bound;

    WaypointChoice choice;
    choice.waypoint = robot.position;
    choice.alpha = alpha(t, mission_time_limit(talents), params);

    std::vector<Vec2> candidates;
    candidates.reserve(config.candidate_count);
    const std::size_t max_draws = 20 * config.candidate_count;
    for (std::size_t draw = 0; draw < max_draws && candidates.size() < config.candidate_count; ++draw) {
        const double r = reach * std::sqrt(uniform01(rng));
        const double th = 2.0 * std::numbers::pi * uniform01(rng);
        const Vec2 c = robot.position + Vec2{r * std::cos(th), r * std::sin(th)};
        if (scenario.arena.contains(c, 0.0) && distance(c, robot.position) <= reach) {
            candidates.push_back(c);
        }
    }
    choice.candidates = candidates.size();
    if (candidates.empty()) {
        choice.stagnated = true;
        return choice;
    }

    Eigen::MatrixXd q(static_cast<Eigen::Index>(candidates.size()), 2);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        q(static_cast<Eigen::Index>(i), 0) = candidates[i].x;
        q(static_cast<Eigen::Index>(i), 1) = candidates[i].y;
    }
    Eigen::VectorXd mean, var;
    robot.belief->predict_batch(q, mean, var);
    const Eigen::VectorXd sd = var.array().sqrt();

    if (beta) {
        choice.beta = *beta;
    } else {
        double max_obs = 0.0;
        for (const auto& o : robot.observations) max_obs = std::max(max_obs, o.value);
        const double max_sd = sd.maxCoeff();
        choice.beta = max_sd > 0.0 ? std::max(1e-6, max_obs / max_sd) : 1e-6;
    }

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double acquisition = choice.alpha * mean[ii] + (1.0 - choice.alpha) * choice.beta * sd[ii];
        const double score = acquisition * local_penalization(candidates[i], peers, radius);
        if (score > best) {
            best = score;
            choice.waypoint = candidates[i];
        }
    }
    choice.score = best;
    return choice;
}

namespace {

constexpr double kRangeEps = 1e-9;

enum class EventKind { Detection = 0, Arrival = 1 };

struct Event {
    double time;
    EventKind kind;
    std::size_t robot;
    std::size_t leg; // stale detection events are skipped by leg id
};

struct LaterFirst {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        if (a.kind != b.kind) return a.kind > b.kind;
        return a.robot > b.robot;
    }
};

struct Leg {
    Vec2 start;
    Vec2 end;
    double start_time = 0.0;
    double end_time = 0.0;
    std::size_t id = 0;
};

/// Largest s in [0, max_len] with origin + s * dir inside the arena.
double ray_reach(const Arena& arena, Vec2 origin, Vec2 dir, double max_len) {
    double s = max_len;
    auto limit = [&](double o, double d, double lo, double hi) {
        if (d > 0.0) s = std::min(s, (hi - o) / d);
        if (d < 0.0) s = std::min(s, (lo - o) / d);
    };
    limit(origin.x, dir.x, -0.5 * arena.width, 0.5 * arena.width);
    limit(origin.y, dir.y, 0.0, arena.height);
    return std::max(0.0, s);
}

/// Arc length along a -> b at which the robot first comes within `reach`
/// of `target`, if it does.
std::optional<double> first_contact(Vec2 a, Vec2 b, Vec2 target, double reach) {
    const Vec2 rel = a - target;
    const double c = rel.x * rel.x + rel.y * rel.y - reach * reach;
    if (c <= 0.0) return 0.0;
    const double len = distance(a, b);
    if (len <= 0.0) return std::nullopt;
    const Vec2 u = (b - a) * (1.0 / len);
    const double half_b = u.x * rel.x + u.y * rel.y;
    const double disc = half_b * half_b - c;
    if (disc < 0.0) return std::nullopt;
    const double s = -half_b - std::sqrt(disc);
    if (s < 0.0 || s > len) return std::nullopt;
    return s;
}

class Simulation {
public:
    Simulation(const Scenario& scenario, const morphology::TalentVector& talents, const BehaviorHyperparams& params,
               const SimConfig& config)
        : scenario_(scenario), talents_(talents), params_(params), config_(config) {
        speed_ = talents.cruise_speed / 1000.0;
        t_max_ = mission_time_limit(talents);
        detect_ = talents.detection_distance / 1000.0;
        step_bound_ = speed_ * config.decision_horizon_s;
        outcome_.diagnostics.step_bound_km = step_bound_;
        outcome_.diagnostics.range_km = talents.flight_range;
    }

    SearchOutcome run() {
        const std::size_t n = scenario_.swarm_size;
        robots_.resize(n);
        legs_.resize(n);
        leg_sum_.assign(n, 0.0);
        stagnant_.assign(n, 0);
        leg_count_.assign(n, 0);

        const Vec2 base = scenario_.arena.clamp(scenario_.base_location);
        if (distance(base, scenario_.field.source_location) <= detect_) {
            outcome_.success = true;
            outcome_.search_time = 0.0;
            return finish();
        }

        for (std::size_t r = 0; r < n; ++r) {
            auto& robot = robots_[r];
            robot.id = r;
            robot.position = base;
            robot.current_waypoint = base;
        }
        // every robot measures at the base before launch; shared immediately
        std::vector<Observation> initial;
        for (std::size_t r = 0; r < n; ++r) {
            Rng rng = make_rng(scenario_.seed, {r, 0, 1});
            initial.push_back(observe(base, rng));
            log(0.0, r, initial.back());
        }
        for (auto& robot : robots_) robot.observations = initial;

        for (std::size_t r = 0; r < n; ++r) {
            const double heading = std::numbers::pi * (static_cast<double>(r) + 0.5) / static_cast<double>(n);
            const Vec2 dir{std::cos(heading), std::sin(heading)};
            const double len = ray_reach(scenario_.arena, base, dir, std::min(step_bound_, talents_.flight_range));
            start_leg(r, 0.0, base + dir * len);
        }

        while (!queue_.empty()) {
            const Event ev = queue_.top();
            queue_.pop();
            if (ev.time > t_max_) {
                outcome_.failure_reason = FailureReason::TimeLimit;
                outcome_.search_time = t_max_;
                return finish();
            }
            if (ev.kind == EventKind::Detection) {
                if (ev.leg != legs_[ev.robot].id) continue;
                outcome_.success = true;
                outcome_.search_time = ev.time;
                return finish();
            }
            if (auto reason = arrive(ev.robot, ev.time)) {
                outcome_.failure_reason = *reason;
                outcome_.search_time = std::min(ev.time, t_max_);
                return finish();
            }
        }
        outcome_.failure_reason = FailureReason::TimeLimit;
        outcome_.search_time = t_max_;
        return finish();
    }

private:
    Observation observe(Vec2 p, Rng& rng) const {
        const double v = scenario_.field.value(p) + scenario_.observation_noise_std * standard_normal(rng);
        return {p, v};
    }

    void log(double t, std::size_t robot, const Observation& o) {
        if (config_.record_trajectories) {
            outcome_.trajectory_log.push_back({t, robot, o.location.x, o.location.y, o.value});
        }
    }

    void integrity(double v, const char* what) const {
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "simulation integrity: non-finite " << what << " (scenario seed " << scenario_.seed << ")";
            throw SimulationError(msg.str());
        }
    }

    void start_leg(std::size_t r, double t, Vec2 waypoint) {
        auto& robot = robots_[r];
        auto& leg = legs_[r];
        const double len = distance(robot.position, waypoint);
        integrity(waypoint.x, "waypoint");
        integrity(waypoint.y, "waypoint");
        leg.start = robot.position;
        leg.end = waypoint;
        leg.start_time = t;
        leg.id = ++leg_serial_;
        // legs shorter than the stagnation threshold are loiters lasting one horizon
        const double duration = len > config_.stagnation_epsilon_km ? len / speed_ : config_.decision_horizon_s;
        leg.end_time = t + duration;
        robot.current_waypoint = waypoint;
        ++outcome_.diagnostics.legs;
        outcome_.diagnostics.max_step_km = std::max(outcome_.diagnostics.max_step_km, len);

        if (auto s = first_contact(leg.start, leg.end, scenario_.field.source_location, detect_)) {
            queue_.push({t + *s / speed_, EventKind::Detection, r, leg.id});
        }
        queue_.push({leg.end_time, EventKind::Arrival, r, leg.id});
    }

    Vec2 position_at(std::size_t r, double t) const {
        const auto& leg = legs_[r];
        const double len = distance(leg.start, leg.end);
        if (len <= config_.stagnation_epsilon_km || t >= leg.end_time) {
            return t >= leg.end_time ? leg.end : leg.start;
        }
        const double s = std::clamp((t - leg.start_time) * speed_, 0.0, len);
        return leg.start + (leg.end - leg.start) * (s / len);
    }

    std::optional<FailureReason> arrive(std::size_t r, double t) {
        auto& robot = robots_[r];
        const auto& leg = legs_[r];
        const double len = distance(leg.start, leg.end);
        const std::size_t leg_index = ++leg_count_[r];

        // sample along the leg every spacing, plus the arrival point
        Rng noise = make_rng(scenario_.seed, {r, leg_index, 1});
        std::vector<Observation> fresh;
        if (len > config_.stagnation_epsilon_km) {
            const Vec2 dir = (leg.end - leg.start) * (1.0 / len);
            for (double s = config_.observation_spacing_km; s < len - 1e-12; s += config_.observation_spacing_km) {
                fresh.push_back(observe(leg.start + dir * s, noise));
                log(leg.start_time + s / speed_, r, fresh.back());
            }
        }
        fresh.push_back(observe(leg.end, noise));
        log(t, r, fresh.back());
        for (const auto& o : fresh) integrity(o.value, "observation");

        robot.position = leg.end;
        robot.path_length_used += len;
        leg_sum_[r] += len;
        outcome_.diagnostics.max_path_km = std::max(outcome_.diagnostics.max_path_km, robot.path_length_used);
        outcome_.diagnostics.path_accounting_error_km =
            std::max(outcome_.diagnostics.path_accounting_error_km, std::abs(leg_sum_[r] - robot.path_length_used));
        if (!scenario_.arena.contains(robot.position)) {
            outcome_.diagnostics.robots_inside_arena = false;
        }

        // broadcast to every peer on arrival
        for (auto& peer : robots_) {
            peer.observations.insert(peer.observations.end(), fresh.begin(), fresh.end());
        }

        if (talents_.flight_range - robot.path_length_used <= kRangeEps) {
            robot.active = false;
            robot.belief.reset();
            if (std::none_of(robots_.begin(), robots_.end(), [](const RobotState& s) { return s.active; })) {
                return FailureReason::TimeLimit;
            }
            return std::nullopt;
        }

        robot.belief = fit_belief(robot.observations, config_);
        std::vector<PeerPlan> peers;
        peers.reserve(robots_.size());
        for (std::size_t j = 0; j < robots_.size(); ++j) {
            if (j != r && robots_[j].active) {
                peers.push_back({position_at(j, t), robots_[j].current_waypoint});
            }
        }
        Rng rng = make_rng(scenario_.seed, {r, leg_index, 2});
        const std::optional<double> beta =
            config_.beta_override > 0.0 ? std::optional<double>(config_.beta_override) : std::nullopt;
        const auto choice = choose_waypoint(robot, peers, t, scenario_, talents_, params_, beta, config_, rng);
        ++outcome_.diagnostics.decisions;
        robot.belief.reset(); // beliefs are rebuilt at every decision

        const double displacement = distance(choice.waypoint, robot.position);
        stagnant_[r] = (choice.stagnated || displacement < config_.stagnation_epsilon_km) ? stagnant_[r] + 1 : 0;
        bool all_stagnant = true;
        for (std::size_t j = 0; j < robots_.size(); ++j) {
            if (robots_[j].active && stagnant_[j] < config_.stagnation_decisions) {
                all_stagnant = false;
                break;
            }
        }
        if (all_stagnant) {
            return FailureReason::Stagnation;
        }
        start_leg(r, t, choice.waypoint);
        return std::nullopt;
    }

    SearchOutcome finish() { return std::move(outcome_); }

    const Scenario& scenario_;
    const morphology::TalentVector& talents_;
    const BehaviorHyperparams& params_;
    const SimConfig& config_;

    double speed_ = 0.0;
    double t_max_ = 0.0;
    double detect_ = 0.0;
    double step_bound_ = 0.0;
    std::size_t leg_serial_ = 0;

    std::vector<RobotState> robots_;
    std::vector<Leg> legs_;
    std::vector<double> leg_sum_;
    std::vector<std::size_t> stagnant_;
    std::vector<std::size_t> leg_count_;
    std::priority_queue<Event, std::vector<Event>, LaterFirst> queue_;
    SearchOutcome outcome_;
};

} // namespace

SearchOutcome run_search(const Scenario& scenario, const morphology::TalentVector& talents,
                         const BehaviorHyperparams& params, const SimConfig& config) {
    scenario.validate();
    config.validate();
    if (!(talents.cruise_speed > 0.0 && talents.flight_range > 0.0 && talents.detection_distance >= 0.0)) {
        throw InvalidArgument("run_search: talents must be positive");
    }
    return Simulation(scenario, talents, params, config).run();
}

} // namespace codesign::sim
