// codesign <stage> --config <file> --out <dir> [--seed N] [--workers K]
// codesign plot --kind <kind> --out <dir> [--config <file>] [--scenario I] [--a A --b B]
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error,
// 3 missing checkpoint. Failures print one JSON object on stderr.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "codesign/common/error.hpp"
#include "codesign/io/config.hpp"
#include "codesign/io/plot_data.hpp"
#include "codesign/io/stages.hpp"

using namespace codesign;

namespace {

int fail(const std::string& kind, const std::string& message, int code, nlohmann::ordered_json extra = {}) {
    nlohmann::ordered_json err;
    err["kind"] = kind;
    err["message"] = message;
    if (extra.is_object()) {
        for (auto it = extra.begin(); it != extra.end(); ++it) err[it.key()] = it.value();
    }
    nlohmann::ordered_json doc;
    doc["error"] = std::move(err);
    std::cerr << doc.dump() << std::endl;
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Talent-based morphology/behavior co-design pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;

    const char* stage_help[][2] = {
        {"explore", "multi-objective talent exploration over the design box"},
        {"surrogate", "fit the talent Pareto-frontier GP"},
        {"cbm", "Bayesian optimization of talents and behavior parameters"},
        {"finalize", "find a morphology matching the optimal talents"},
        {"evaluate", "compare co-designed and baseline configurations on held-out scenarios"},
        {"full", "all of the above in sequence"},
    };
    std::vector<CLI::App*> stage_commands;
    for (const auto& [name, help] : stage_help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
        stage_commands.push_back(sub);
    }

    std::string kind;
    std::size_t scenario = 0;
    std::optional<double> a, b;
    auto* plot = app.add_subcommand("plot", "write CSV plot data from checkpoints");
    plot->add_option("--kind", kind, "pareto3d | convergence | alpha-surface | success-by-strength | trajectories")
        ->required();
    plot->add_option("--out", out_dir, "checkpoint directory")->required();
    plot->add_option("--config", config_path, "JSON config file");
    plot->add_option("--scenario", scenario, "held-out scenario for trajectories");
    plot->add_option("--a", a, "alpha-surface steepness");
    plot->add_option("--b", b, "alpha-surface switch point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    }

    try {
        io::RunConfig config;
        if (!config_path.empty()) {
            config = io::load_config(config_path, seed);
        } else if (seed) {
            config.seed = *seed;
        }
        if (workers) config.workers = *workers;

        if (plot->parsed()) {
            io::PlotOptions options;
            options.scenario_index = scenario;
            if (a || b) {
                if (!(a && b)) return fail("usage", "--a and --b must be given together", 2);
                options.params = sim::BehaviorHyperparams{*a, *b};
            }
            for (const auto& p : io::emit_plot_data(config, out_dir, io::plot_kind_from_string(kind), options)) {
                std::cout << p.string() << '\n';
            }
            return 0;
        }

        for (auto* sub : stage_commands) {
            if (!sub->parsed()) continue;
            const auto report = io::run_stage(config, io::stage_from_string(sub->get_name()), out_dir);
            std::cout << "stage " << sub->get_name() << " complete; report in "
                      << (std::filesystem::path(out_dir) / io::files::kReport).string() << '\n';
            for (const auto& row : report.comparison) {
                std::cout << "  " << row.label << ": success rate " << row.success_rate << ", mean search time "
                          << row.avg_search_time_success << " s\n";
            }
            if (report.nested_cost) {
                std::cout << "  nested co-design estimate " << report.nested_cost->nested_seconds << " s, speedup "
                          << report.nested_cost->speedup << "x\n";
            }
        }
        return 0;
    } catch (const ConfigError& e) {
        return fail(e.kind(), e.what(), 2, {{"field", e.field()}});
    } catch (const BoundsError& e) {
        return fail(e.kind(), e.what(), 2, {{"field", e.field()}});
    } catch (const CheckpointError& e) {
        return fail(e.kind(), e.what(), 3, {{"prerequisite", e.prerequisite()}});
    } catch (const Error& e) {
        return fail(e.kind(), e.what(), e.kind() == "parse" ? 2 : 1);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
}
