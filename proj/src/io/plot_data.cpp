#include "codesign/io/plot_data.hpp"

#include "codesign/common/error.hpp"
#include "codesign/io/stages.hpp"
#include "codesign/sim/behavior.hpp"
#include "codesign/sim/swarm.hpp"

namespace codesign::io {

namespace fs = std::filesystem;

const char* to_string(PlotKind kind) {
    switch (kind) {
    case PlotKind::Pareto3d: return "pareto3d";
    case PlotKind::Convergence: return "convergence";
    case PlotKind::AlphaSurface: return "alpha-surface";
    case PlotKind::SuccessByStrength: return "success-by-strength";
    case PlotKind::Trajectories: return "trajectories";
    }
    return "unknown";
}

PlotKind plot_kind_from_string(const std::string& name) {
    for (auto k : {PlotKind::Pareto3d, PlotKind::Convergence, PlotKind::AlphaSurface, PlotKind::SuccessByStrength,
                   PlotKind::Trajectories}) {
        if (name == to_string(k)) return k;
    }
    throw InvalidArgument("unknown plot kind '" + name +
                          "' (expected pareto3d, convergence, alpha-surface, success-by-strength or trajectories)");
}

namespace {

Json checkpoint(const fs::path& dir, const char* file, const char* stage) {
    const fs::path p = dir / file;
    if (!fs::exists(p)) {
        throw CheckpointError(stage, std::string("missing checkpoint ") + file + "; run the '" + stage + "' stage first");
    }
    return read_json(p);
}

std::string row(std::initializer_list<std::string> cells) {
    std::string out;
    for (const auto& c : cells) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out + '\n';
}

std::string n(double v) { return format_number(v); }

void pareto3d(const fs::path& dir, std::vector<fs::path>& written) {
    const auto archive = archive_from_json(checkpoint(dir, files::kArchive, "explore"));
    std::string out = row({"flight_range_km", "cruise_speed_m_s", "detection_distance_m"});
    for (const auto& e : archive.entries) {
        const auto t = pipeline::archive_talents(e);
        out += row({n(t.flight_range), n(t.cruise_speed), n(t.detection_distance)});
    }
    const fs::path p = dir / "pareto3d.csv";
    write_text(p, out);
    written.push_back(p);

    if (fs::exists(dir / files::kSurrogate)) {
        const auto s = surrogate_from_json(read_json(dir / files::kSurrogate));
        std::string grid = row({"cruise_speed_m_s", "detection_distance_m", "predicted_range_km"});
        constexpr int steps = 20;
        for (int i = 0; i <= steps; ++i) {
            const double v = s.bounds.cruise_speed.lower + s.bounds.cruise_speed.width() * i / steps;
            for (int k = 0; k <= steps; ++k) {
                const double d = s.bounds.detection_distance.lower + s.bounds.detection_distance.width() * k / steps;
                grid += row({n(v), n(d), n(s.predict_range(v, d))});
            }
        }
        const fs::path g = dir / "pareto_surface.csv";
        write_text(g, grid);
        written.push_back(g);
    }
}

void convergence(const fs::path& dir, std::vector<fs::path>& written) {
    const auto trace = bo_trace_from_json(checkpoint(dir, files::kBoTrace, "cbm"));
    std::string out = row({"evaluation", "objective", "incumbent", "seed"});
    for (const auto& t : trace) {
        out += row({std::to_string(t.evaluation), n(t.objective), n(t.incumbent), t.seed ? "1" : "0"});
    }
    const fs::path p = dir / "convergence.csv";
    write_text(p, out);
    written.push_back(p);
}

void alpha_surface(const RunConfig& config, const fs::path& dir, const PlotOptions& options,
                   std::vector<fs::path>& written) {
    sim::BehaviorHyperparams params = config.baseline_params;
    if (options.params) {
        params = *options.params;
    } else if (fs::exists(dir / files::kCbmResult)) {
        params = cbm_result_from_json(read_json(dir / files::kCbmResult)).optimum.params;
    }
    params.check_bounds();
    if (options.alpha_steps < 1) throw InvalidArgument("alpha_steps must be at least 1");
    using BH = sim::BehaviorHyperparams;
    const double steps = static_cast<double>(options.alpha_steps);
    std::string out = row({"sweep", "t_over_tmax", "a", "b", "alpha"});
    for (std::size_t i = 0; i <= options.alpha_steps; ++i) {
        const double tau = static_cast<double>(i) / steps;
        for (int k = 0; k <= 10; ++k) {
            const sim::BehaviorHyperparams p{BH::kMinA + (BH::kMaxA - BH::kMinA) * k / 10.0, params.b};
            out += row({"a", n(tau), n(p.a), n(p.b), n(sim::alpha(tau, 1.0, p))});
        }
    }
    for (std::size_t i = 0; i <= options.alpha_steps; ++i) {
        const double tau = static_cast<double>(i) / steps;
        for (int k = 0; k <= 8; ++k) {
            const sim::BehaviorHyperparams p{params.a, BH::kMinB + (BH::kMaxB - BH::kMinB) * k / 8.0};
            out += row({"b", n(tau), n(p.a), n(p.b), n(sim::alpha(tau, 1.0, p))});
        }
    }
    const fs::path p = dir / "alpha_surface.csv";
    write_text(p, out);
    written.push_back(p);
}

void success_by_strength(const RunConfig& config, const fs::path& dir, std::vector<fs::path>& written) {
    const auto evaluation = evaluation_from_json(checkpoint(dir, files::kEvaluation, "evaluate"));
    const auto scenarios = scenarios_from_json(checkpoint(dir, files::kEvalScenarios, "evaluate"));
    const auto& edges = config.strength_bins;
    std::string out = row({"configuration", "strength_min", "strength_max", "scenarios", "successes", "success_rate"});
    for (const auto& c : evaluation.configurations) {
        if (c.outcomes.size() != scenarios.size()) {
            throw InvalidArgument("evaluation and scenario checkpoints disagree on the scenario count");
        }
        for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
            const bool last = b + 2 == edges.size();
            std::size_t total = 0, hits = 0;
            for (std::size_t i = 0; i < scenarios.size(); ++i) {
                const double s = scenarios[i].field.peak_strength;
                if (s >= edges[b] && (s < edges[b + 1] || (last && s <= edges[b + 1]))) {
                    ++total;
                    if (c.outcomes[i].success) ++hits;
                }
            }
            const double rate = total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
            out += row({c.label, n(edges[b]), n(edges[b + 1]), std::to_string(total), std::to_string(hits), n(rate)});
        }
    }
    const fs::path p = dir / "success_by_strength.csv";
    write_text(p, out);
    written.push_back(p);
}

void trajectories(const RunConfig& config, const fs::path& dir, const PlotOptions& options,
                  std::vector<fs::path>& written) {
    const auto cbm = cbm_result_from_json(checkpoint(dir, files::kCbmResult, "cbm"));
    const auto scenarios = scenarios_from_json(checkpoint(dir, files::kEvalScenarios, "evaluate"));
    if (options.scenario_index >= scenarios.size()) {
        throw InvalidArgument("scenario index " + std::to_string(options.scenario_index) + " out of range (" +
                              std::to_string(scenarios.size()) + " held-out scenarios)");
    }
    const auto& scenario = scenarios[options.scenario_index];
    sim::SimConfig sim_config = config.cbm.sim;
    sim_config.record_trajectories = true;
    std::string out = row({"configuration", "time_s", "robot", "x_km", "y_km", "signal"});
    const std::pair<const char*, std::pair<morphology::TalentVector, sim::BehaviorHyperparams>> runs[] = {
        {"codesign", {cbm.optimum.talents, cbm.optimum.params}},
        {"baseline", {config.baseline_talents, config.baseline_params}}};
    for (const auto& [label, setting] : runs) {
        const auto outcome = sim::run_search(scenario, setting.first, setting.second, sim_config);
        for (const auto& r : outcome.trajectory_log) {
            out += row({label, n(r.time), std::to_string(r.robot), n(r.x), n(r.y), n(r.signal)});
        }
    }
    const fs::path p = dir / "trajectories.csv";
    write_text(p, out);
    written.push_back(p);
}

} // namespace

std::vector<fs::path> emit_plot_data(const RunConfig& config, const fs::path& dir, PlotKind kind, const PlotOptions& options) {
    std::vector<fs::path> written;
    fs::create_directories(dir);
    switch (kind) {
    case PlotKind::Pareto3d: pareto3d(dir, written); break;
    case PlotKind::Convergence: convergence(dir, written); break;
    case PlotKind::AlphaSurface: alpha_surface(config, dir, options, written); break;
    case PlotKind::SuccessByStrength: success_by_strength(config, dir, written); break;
    case PlotKind::Trajectories: trajectories(config, dir, options, written); break;
    }
    return written;
}

} // namespace codesign::io
