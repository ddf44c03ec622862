#include "codesign/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "codesign/common/error.hpp"

namespace codesign::io {

namespace {

std::string bracket(double lo, double hi) { return "[" + format_number(lo) + ", " + format_number(hi) + "]"; }

void check_range(const std::string& field, double value, double lo, double hi) {
    if (!(value >= lo && value <= hi)) {
        throw ConfigError(field, field + " = " + format_number(value) + " is outside " + bracket(lo, hi));
    }
}

void check_interval(const std::string& field, double lo, double hi, double min, double max) {
    if (!(lo <= hi)) throw ConfigError(field, field + " must be an ordered [min, max] pair");
    check_range(field, lo, min, max);
    check_range(field, hi, min, max);
}

/// One JSON object being consumed; unread keys are reported as unknown.
class Section {
public:
    Section(const Json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
        if (!j_.is_object()) throw ConfigError(name(), name() + " must be a JSON object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    std::string field(const char* key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    void number(const char* key, double& out) {
        if (const Json* v = take(key)) {
            if (!v->is_number()) throw ConfigError(field(key), field(key) + " must be a number");
            out = v->get<double>();
            if (!std::isfinite(out)) throw ConfigError(field(key), field(key) + " must be finite");
        }
    }

    template <typename Int>
    void count(const char* key, Int& out) {
        if (const Json* v = take(key)) {
            if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
                throw ConfigError(field(key), field(key) + " must be a nonnegative integer");
            }
            out = static_cast<Int>(v->get<std::uint64_t>());
        }
    }

    void flag(const char* key, bool& out) {
        if (const Json* v = take(key)) {
            if (!v->is_boolean()) throw ConfigError(field(key), field(key) + " must be true or false");
            out = v->get<bool>();
        }
    }

    void text(const char* key, std::string& out) {
        if (const Json* v = take(key)) {
            if (!v->is_string()) throw ConfigError(field(key), field(key) + " must be a string");
            out = v->get<std::string>();
        }
    }

    void pair(const char* key, double& lo, double& hi) {
        if (const Json* v = take(key)) {
            if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
                throw ConfigError(field(key), field(key) + " must be a [min, max] pair of numbers");
            }
            lo = (*v)[0].get<double>();
            hi = (*v)[1].get<double>();
        }
    }

    void numbers(const char* key, std::vector<double>& out) {
        if (const Json* v = take(key)) {
            if (!v->is_array() || !std::all_of(v->begin(), v->end(), [](const Json& e) { return e.is_number(); })) {
                throw ConfigError(field(key), field(key) + " must be an array of numbers");
            }
            out = v->get<std::vector<double>>();
        }
    }

    std::optional<Section> child(const char* key) {
        if (const Json* v = take(key)) return Section(*v, field(key));
        return std::nullopt;
    }

    const Json* raw(const char* key) { return take(key); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                const std::string f = prefix_.empty() ? it.key() : prefix_ + "." + it.key();
                throw ConfigError(f, "unknown field " + f);
            }
        }
    }

private:
    std::string name() const { return prefix_.empty() ? "config" : prefix_; }

    const Json* take(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_[key] : nullptr;
    }

    const Json& j_;
    std::string prefix_;
    std::set<std::string> seen_;
};

void read_nsga(Section s, moo::NsgaConfig& c) {
    s.count("population_size", c.population_size);
    s.count("max_iterations", c.max_iterations);
    s.number("crossover_rate", c.crossover_rate);
    s.number("mutation_rate", c.mutation_rate);
    s.number("mutation_strength", c.mutation_strength);
    s.count("repeat_runs", c.repeat_runs);
    s.number("crossover_eta", c.crossover_eta);
    s.finish();
}

void check_nsga(const std::string& p, const moo::NsgaConfig& c) {
    check_range(p + ".population_size", static_cast<double>(c.population_size), 2, 1e6);
    check_range(p + ".max_iterations", static_cast<double>(c.max_iterations), 1, 1e6);
    check_range(p + ".crossover_rate", c.crossover_rate, 0.0, 1.0);
    check_range(p + ".mutation_rate", c.mutation_rate, 0.0, 1.0);
    check_range(p + ".mutation_strength", c.mutation_strength, 0.0, 1.0);
    check_range(p + ".repeat_runs", static_cast<double>(c.repeat_runs), 1, 1e3);
    check_range(p + ".crossover_eta", c.crossover_eta, 0.0, 1e3);
}

void read_scenarios(Section s, RunConfig& rc) {
    auto& c = rc.scenarios;
    s.count("train_count", rc.train_scenarios);
    s.count("eval_count", rc.eval_scenarios);
    s.pair("source_x", c.source_x_min, c.source_x_max);
    s.pair("source_y", c.source_y_min, c.source_y_max);
    s.pair("strength", c.strength_min, c.strength_max);
    double swarm_lo = static_cast<double>(c.swarm_min), swarm_hi = static_cast<double>(c.swarm_max);
    s.pair("swarm_size", swarm_lo, swarm_hi);
    if (swarm_lo != std::floor(swarm_lo) || swarm_hi != std::floor(swarm_hi)) {
        throw ConfigError(s.field("swarm_size"), s.field("swarm_size") + " must hold integers");
    }
    check_interval(s.field("swarm_size"), swarm_lo, swarm_hi, 6, 15);
    c.swarm_min = static_cast<std::size_t>(swarm_lo);
    c.swarm_max = static_cast<std::size_t>(swarm_hi);
    s.count("families", c.family_count);
    if (const Json* arenas = s.raw("arenas")) {
        const std::string f = s.field("arenas");
        if (!arenas->is_array() || arenas->empty()) throw ConfigError(f, f + " must be a nonempty array of [width, height]");
        c.arenas.clear();
        for (const auto& a : *arenas) {
            if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
                throw ConfigError(f, f + " entries must be [width, height]");
            }
            const sim::Arena arena{a[0].get<double>(), a[1].get<double>()};
            if (!(arena == sim::Arena{30.0, 15.0} || arena == sim::Arena{30.0, 30.0})) {
                throw ConfigError(f, f + " entries must be [30, 15] or [30, 30] km");
            }
            c.arenas.push_back(arena);
        }
    }
    s.number("noise_fraction", c.noise_fraction);
    s.pair("spread", c.spread_at_min_strength, c.spread_at_max_strength);
    s.finish();
}

void read_sim(Section s, sim::SimConfig& c) {
    s.number("decision_horizon_s", c.decision_horizon_s);
    s.number("observation_spacing_km", c.observation_spacing_km);
    s.count("candidate_count", c.candidate_count);
    s.number("penalization_radius_km", c.penalization_radius_km);
    s.number("stagnation_epsilon_km", c.stagnation_epsilon_km);
    s.count("stagnation_decisions", c.stagnation_decisions);
    s.number("belief_length_scale_km", c.belief_length_scale_km);
    s.number("belief_signal_variance", c.belief_signal_variance);
    s.number("belief_noise_variance", c.belief_noise_variance);
    s.count("active_set_cap", c.active_set_cap);
    s.count("active_set_recent", c.active_set_recent);
    s.count("active_set_best", c.active_set_best);
    s.number("beta_override", c.beta_override);
    s.finish();
}

} // namespace

void RunConfig::validate() const {
    check_range("workers", static_cast<double>(workers), 1, 1024);
    check_nsga("explore", explore);
    check_nsga("finalize", finalize);
    check_range("frontier.min_archive_size", static_cast<double>(frontier.min_archive_size), 3, 1e9);

    check_range("bo.seed_points", static_cast<double>(bo.seed_points), 3, 1e6);
    check_range("bo.max_iterations", static_cast<double>(bo.max_iterations), 0, 1e6);
    check_range("bo.active_set", static_cast<double>(bo.active_set), 3, 1e6);
    check_range("bo.acquisition_candidates", static_cast<double>(bo.acquisition_candidates), 1, 1e8);
    check_range("bo.ei_stall_threshold", bo.ei_stall_threshold, 0.0, 1.0);
    check_range("bo.noise_inflation_factor", bo.noise_inflation_factor, 1.0 + 1e-12, 1e6);

    check_range("cbm.failure_time", cbm.failure_time, 1e-9, 1e12);
    check_range("cbm.penalty_weight", cbm.penalty_weight, 0.0, 1e15);
    check_range("cbm.feasibility_tolerance", cbm.feasibility_tolerance, 0.0, 1.0);
    cbm.sim.validate();

    // Stochastic environment box.
    check_range("scenarios.train_count", static_cast<double>(train_scenarios), 1, 1e7);
    check_range("scenarios.eval_count", static_cast<double>(eval_scenarios), 1, 1e7);
    check_interval("scenarios.source_x", scenarios.source_x_min, scenarios.source_x_max, -14.0, 14.0);
    check_interval("scenarios.source_y", scenarios.source_y_min, scenarios.source_y_max, 0.0, 14.0);
    check_interval("scenarios.strength", scenarios.strength_min, scenarios.strength_max, 15.0, 100.0);
    check_interval("scenarios.swarm_size", static_cast<double>(scenarios.swarm_min), static_cast<double>(scenarios.swarm_max), 6, 15);
    check_range("scenarios.families", scenarios.family_count, 1, sim::kFieldFamilyCount);
    check_range("scenarios.noise_fraction", scenarios.noise_fraction, 0.0, 1.0);
    check_interval("scenarios.spread", std::min(scenarios.spread_at_min_strength, scenarios.spread_at_max_strength),
                   std::max(scenarios.spread_at_min_strength, scenarios.spread_at_max_strength), 0.05, 30.0);
    scenarios.validate();

    // Talent and behavior boxes.
    const morphology::TalentBounds tb;
    check_range("baseline.flight_range", baseline_talents.flight_range, tb.flight_range.lower, tb.flight_range.upper);
    check_range("baseline.cruise_speed", baseline_talents.cruise_speed, tb.cruise_speed.lower, tb.cruise_speed.upper);
    check_range("baseline.detection_distance", baseline_talents.detection_distance, tb.detection_distance.lower,
                tb.detection_distance.upper);
    using BH = sim::BehaviorHyperparams;
    check_range("baseline.a", baseline_params.a, BH::kMinA, BH::kMaxA);
    check_range("baseline.b", baseline_params.b, BH::kMinB, BH::kMaxB);

    if (strength_bins.size() < 2 || !std::is_sorted(strength_bins.begin(), strength_bins.end()) ||
        std::adjacent_find(strength_bins.begin(), strength_bins.end()) != strength_bins.end()) {
        throw ConfigError("plots.strength_bins", "plots.strength_bins must hold at least two increasing edges");
    }
}

RunConfig parse_config(const std::string& text, const std::string& origin, std::optional<std::uint64_t> seed_override) {
    RunConfig rc;
    const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
    if (!blank) {
        const Json j = parse_json(text, origin);
        Section root(j, "");
        if (!root.has("seed") && !seed_override) {
            throw ConfigError("seed", "seed: required field missing");
        }
        root.count("seed", rc.seed);
        root.count("workers", rc.workers);
        root.text("constants", rc.constants_path);
        if (auto s = root.child("explore")) read_nsga(*s, rc.explore);
        rc.finalize = rc.explore;
        if (auto s = root.child("finalize")) read_nsga(*s, rc.finalize);
        if (auto s = root.child("frontier")) {
            std::string kernel = gp::to_string(rc.frontier.kernel);
            s->text("kernel", kernel);
            try {
                rc.frontier.kernel = gp::kernel_family_from_string(kernel);
            } catch (const Error&) {
                throw ConfigError(s->field("kernel"), s->field("kernel") + " must be squared-exponential or matern-5/2");
            }
            s->flag("optimize_hyperparams", rc.frontier.optimize_hyperparams);
            s->count("min_archive_size", rc.frontier.min_archive_size);
            s->finish();
        }
        if (auto s = root.child("bo")) {
            s->count("seed_points", rc.bo.seed_points);
            s->count("max_iterations", rc.bo.max_iterations);
            s->count("active_set", rc.bo.active_set);
            s->count("acquisition_candidates", rc.bo.acquisition_candidates);
            s->number("ei_stall_threshold", rc.bo.ei_stall_threshold);
            s->count("max_noise_inflations", rc.bo.max_noise_inflations);
            s->number("noise_inflation_factor", rc.bo.noise_inflation_factor);
            s->finish();
        }
        if (auto s = root.child("cbm")) {
            s->number("failure_time", rc.cbm.failure_time);
            s->number("penalty_weight", rc.cbm.penalty_weight);
            s->number("feasibility_tolerance", rc.cbm.feasibility_tolerance);
            s->finish();
        }
        if (auto s = root.child("scenarios")) read_scenarios(*s, rc);
        if (auto s = root.child("sim")) read_sim(*s, rc.cbm.sim);
        if (auto s = root.child("baseline")) {
            s->number("flight_range", rc.baseline_talents.flight_range);
            s->number("cruise_speed", rc.baseline_talents.cruise_speed);
            s->number("detection_distance", rc.baseline_talents.detection_distance);
            s->number("a", rc.baseline_params.a);
            s->number("b", rc.baseline_params.b);
            s->finish();
        }
        if (auto s = root.child("plots")) {
            s->numbers("strength_bins", rc.strength_bins);
            s->finish();
        }
        root.finish();
    }
    if (seed_override) rc.seed = *seed_override;
    rc.validate();
    return rc;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string(), seed_override);
}

Json config_to_json(const RunConfig& c) {
    auto nsga = [](const moo::NsgaConfig& n) {
        return Json{{"population_size", n.population_size}, {"max_iterations", n.max_iterations},
                    {"crossover_rate", n.crossover_rate},   {"mutation_rate", n.mutation_rate},
                    {"mutation_strength", n.mutation_strength}, {"repeat_runs", n.repeat_runs},
                    {"crossover_eta", n.crossover_eta}};
    };
    const auto& s = c.scenarios;
    const auto& m = c.cbm.sim;
    Json arenas = Json::array();
    for (const auto& a : s.arenas) arenas.push_back(Json::array({a.width, a.height}));
    Json j;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    if (!c.constants_path.empty()) j["constants"] = c.constants_path;
    j["explore"] = nsga(c.explore);
    j["finalize"] = nsga(c.finalize);
    j["frontier"] = {{"kernel", gp::to_string(c.frontier.kernel)},
                     {"optimize_hyperparams", c.frontier.optimize_hyperparams},
                     {"min_archive_size", c.frontier.min_archive_size}};
    j["bo"] = {{"seed_points", c.bo.seed_points},
               {"max_iterations", c.bo.max_iterations},
               {"active_set", c.bo.active_set},
               {"acquisition_candidates", c.bo.acquisition_candidates},
               {"ei_stall_threshold", c.bo.ei_stall_threshold},
               {"max_noise_inflations", c.bo.max_noise_inflations},
               {"noise_inflation_factor", c.bo.noise_inflation_factor}};
    j["cbm"] = {{"failure_time", c.cbm.failure_time},
                {"penalty_weight", c.cbm.penalty_weight},
                {"feasibility_tolerance", c.cbm.feasibility_tolerance}};
    j["scenarios"] = {{"train_count", c.train_scenarios},
                      {"eval_count", c.eval_scenarios},
                      {"source_x", {s.source_x_min, s.source_x_max}},
                      {"source_y", {s.source_y_min, s.source_y_max}},
                      {"strength", {s.strength_min, s.strength_max}},
                      {"swarm_size", {s.swarm_min, s.swarm_max}},
                      {"families", s.family_count},
                      {"arenas", arenas},
                      {"noise_fraction", s.noise_fraction},
                      {"spread", {s.spread_at_min_strength, s.spread_at_max_strength}}};
    j["sim"] = {{"decision_horizon_s", m.decision_horizon_s},
                {"observation_spacing_km", m.observation_spacing_km},
                {"candidate_count", m.candidate_count},
                {"penalization_radius_km", m.penalization_radius_km},
                {"stagnation_epsilon_km", m.stagnation_epsilon_km},
                {"stagnation_decisions", m.stagnation_decisions},
                {"belief_length_scale_km", m.belief_length_scale_km},
                {"belief_signal_variance", m.belief_signal_variance},
                {"belief_noise_variance", m.belief_noise_variance},
                {"active_set_cap", m.active_set_cap},
                {"active_set_recent", m.active_set_recent},
                {"active_set_best", m.active_set_best},
                {"beta_override", m.beta_override}};
    j["baseline"] = {{"flight_range", c.baseline_talents.flight_range},
                     {"cruise_speed", c.baseline_talents.cruise_speed},
                     {"detection_distance", c.baseline_talents.detection_distance},
                     {"a", c.baseline_params.a},
                     {"b", c.baseline_params.b}};
    j["plots"] = {{"strength_bins", c.strength_bins}};
    return j;
}

} // namespace codesign::io
