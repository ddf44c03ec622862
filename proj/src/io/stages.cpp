#include "codesign/io/stages.hpp"

#include <algorithm>
#include <chrono>

#include "codesign/common/error.hpp"
#include "codesign/common/random.hpp"
#include "codesign/pipeline/cbm.hpp"
#include "codesign/pipeline/explore.hpp"
#include "codesign/pipeline/finalize.hpp"

namespace codesign::io {

namespace fs = std::filesystem;

const char* to_string(Stage stage) {
    switch (stage) {
    case Stage::Explore: return "explore";
    case Stage::Surrogate: return "surrogate";
    case Stage::Cbm: return "cbm";
    case Stage::Finalize: return "finalize";
    case Stage::Evaluate: return "evaluate";
    case Stage::Full: return "full";
    }
    return "unknown";
}

Stage stage_from_string(const std::string& name) {
    for (auto s : {Stage::Explore, Stage::Surrogate, Stage::Cbm, Stage::Finalize, Stage::Evaluate, Stage::Full}) {
        if (name == to_string(s)) return s;
    }
    throw InvalidArgument("unknown stage '" + name + "' (expected explore, surrogate, cbm, finalize, evaluate or full)");
}

StageSeeds stage_seeds(std::uint64_t seed) {
    return {derive_seed(seed, {1}), derive_seed(seed, {2, 1}), derive_seed(seed, {2, 2}), derive_seed(seed, {3}),
            derive_seed(seed, {4})};
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Json require(const fs::path& dir, const char* file, Stage producer) {
    const fs::path p = dir / file;
    if (!fs::exists(p)) {
        throw CheckpointError(to_string(producer), std::string("missing checkpoint ") + file + " in " + dir.string() +
                                                       "; run the '" + to_string(producer) + "' stage first");
    }
    return read_json(p);
}

morphology::MorphologyModel make_model(const RunConfig& config) {
    const std::string path = config.constants_path.empty() ? morphology::ModelConstants::default_path() : config.constants_path;
    return morphology::MorphologyModel(morphology::ModelConstants::load(path));
}

void record_timing(const fs::path& dir, const StageTiming& timing) {
    RunReport r;
    const fs::path p = dir / files::kTimings;
    if (fs::exists(p)) timings_from_json(read_json(p), r);
    auto it = std::find_if(r.timings.begin(), r.timings.end(), [&](const auto& t) { return t.stage == timing.stage; });
    if (it != r.timings.end()) {
        *it = timing;
    } else {
        r.timings.push_back(timing);
    }
    // Keep pipeline order regardless of the order stages were run in.
    const std::vector<std::string> order{"explore", "surrogate", "cbm", "finalize", "evaluate"};
    std::stable_sort(r.timings.begin(), r.timings.end(), [&](const auto& a, const auto& b) {
        return std::find(order.begin(), order.end(), a.stage) < std::find(order.begin(), order.end(), b.stage);
    });
    write_json(p, timings_to_json(r));
}

void run_explore(const RunConfig& config, const fs::path& dir) {
    const auto start = Clock::now();
    const auto model = make_model(config);
    moo::NsgaConfig nsga = config.explore;
    nsga.seed = stage_seeds(config.seed).explore;
    nsga.workers = config.workers;
    const auto before = morphology::evaluation_count();
    const auto archive = pipeline::explore_talents(nsga, model);
    const auto evaluations = morphology::evaluation_count() - before;
    write_json(dir / files::kArchive, archive_to_json(archive));
    record_timing(dir, {"explore", seconds_since(start), evaluations});
}

void run_surrogate(const RunConfig& config, const fs::path& dir) {
    const auto start = Clock::now();
    const auto archive = archive_from_json(require(dir, files::kArchive, Stage::Explore));
    const auto surrogate = pipeline::fit_talent_frontier(archive, config.frontier);
    write_json(dir / files::kSurrogate, surrogate_to_json(surrogate));
    record_timing(dir, {"surrogate", seconds_since(start), 0});
}

void run_cbm(const RunConfig& config, const fs::path& dir) {
    const auto start = Clock::now();
    const auto surrogate = surrogate_from_json(require(dir, files::kSurrogate, Stage::Surrogate));
    const auto seeds = stage_seeds(config.seed);
    const auto scenarios = sim::generate_scenarios(config.train_scenarios, seeds.train_scenarios, config.scenarios);
    write_json(dir / files::kTrainScenarios, scenarios_to_json(scenarios));

    pipeline::BoConfig bo = config.bo;
    bo.seed = seeds.bo;
    pipeline::CbmConfig cbm = config.cbm;
    cbm.workers = config.workers;
    const auto result = pipeline::optimize_cbm(scenarios, surrogate, bo, cbm);
    const double tolerance = cbm.feasibility_tolerance * surrogate.frontier_scale();
    write_json(dir / files::kCbmResult, cbm_result_to_json(result, tolerance));
    write_json(dir / files::kBoTrace, bo_trace_to_json(result.trace));
    write_text(dir / files::kBoTraceCsv, bo_trace_csv(result.trace));
    record_timing(dir, {"cbm", seconds_since(start), result.trace.size()});
}

void run_finalize(const RunConfig& config, const fs::path& dir) {
    const auto start = Clock::now();
    const auto cbm = cbm_result_from_json(require(dir, files::kCbmResult, Stage::Cbm));
    const auto model = make_model(config);
    moo::NsgaConfig nsga = config.finalize;
    nsga.seed = stage_seeds(config.seed).finalize;
    nsga.workers = config.workers;
    const auto before = morphology::evaluation_count();
    const auto result = pipeline::finalize_morphology(cbm.optimum.talents, nsga, model);
    const auto evaluations = morphology::evaluation_count() - before;
    write_json(dir / files::kFinalDesign, final_design_to_json(result));
    record_timing(dir, {"finalize", seconds_since(start), evaluations});
}

ConfigurationResult evaluate(const std::string& label, const morphology::TalentVector& talents,
                             const sim::BehaviorHyperparams& params, const std::vector<sim::Scenario>& scenarios,
                             const RunConfig& config) {
    const auto score = pipeline::evaluate_configuration(talents, params, scenarios, config.cbm.sim, config.workers);
    ConfigurationResult c;
    c.label = label;
    c.talents = talents;
    c.params = params;
    c.success_rate = score.success_rate;
    c.avg_search_time_success = score.avg_search_time_success;
    for (const auto& o : score.outcomes) {
        c.steps_within_bound = c.steps_within_bound && o.diagnostics.steps_within_bound();
        c.paths_within_range = c.paths_within_range && o.diagnostics.path_within_range();
        c.outcomes.push_back({o.success, o.search_time, o.failure_reason});
    }
    return c;
}

void run_evaluate(const RunConfig& config, const fs::path& dir) {
    const auto start = Clock::now();
    const auto cbm = cbm_result_from_json(require(dir, files::kCbmResult, Stage::Cbm));
    const auto scenarios =
        sim::generate_scenarios(config.eval_scenarios, stage_seeds(config.seed).eval_scenarios, config.scenarios);
    write_json(dir / files::kEvalScenarios, scenarios_to_json(scenarios));

    Evaluation evaluation;
    evaluation.configurations.push_back(evaluate("codesign", cbm.optimum.talents, cbm.optimum.params, scenarios, config));
    if (fs::exists(dir / files::kFinalDesign)) {
        const auto final = final_design_from_json(read_json(dir / files::kFinalDesign));
        evaluation.configurations.push_back(evaluate("finalized", final.talents, cbm.optimum.params, scenarios, config));
    }
    evaluation.configurations.push_back(
        evaluate("baseline", config.baseline_talents, config.baseline_params, scenarios, config));
    write_json(dir / files::kEvaluation, evaluation_to_json(evaluation));
    record_timing(dir, {"evaluate", seconds_since(start), scenarios.size() * evaluation.configurations.size()});
}

} // namespace

RunReport collect_report(const RunConfig& config, const fs::path& dir) {
    RunReport report;
    report.seed = config.seed;
    if (fs::exists(dir / files::kArchive)) {
        report.completed_stages.push_back("explore");
        report.archive_size = archive_from_json(read_json(dir / files::kArchive)).size();
    }
    if (fs::exists(dir / files::kSurrogate)) {
        report.completed_stages.push_back("surrogate");
        report.surrogate = surrogate_diagnostics_from_json(read_json(dir / files::kSurrogate));
    }
    if (fs::exists(dir / files::kCbmResult)) {
        report.completed_stages.push_back("cbm");
        const Json j = read_json(dir / files::kCbmResult);
        const auto r = cbm_result_from_json(j);
        const double tol = cbm_g1_tolerance_from_json(j);
        report.cbm = CbmSummary{r.objective, r.trace.size(), r.optimum.talents, r.optimum.params, r.g1, tol,
                                r.g1 <= tol, r.steps_within_bound, r.paths_within_range, r.simulated_searches};
    }
    if (fs::exists(dir / files::kFinalDesign)) {
        report.completed_stages.push_back("finalize");
        const auto f = final_design_from_json(read_json(dir / files::kFinalDesign));
        report.final_design = FinalSummary{f.design, f.talents, f.residual, f.candidates.size()};
    }
    if (fs::exists(dir / files::kEvaluation)) {
        report.completed_stages.push_back("evaluate");
        for (auto c : evaluation_from_json(read_json(dir / files::kEvaluation)).configurations) {
            c.outcomes.clear();
            report.comparison.push_back(std::move(c));
        }
    }

    if (fs::exists(dir / files::kTimings)) timings_from_json(read_json(dir / files::kTimings), report);
    const StageTiming* explore = nullptr;
    const StageTiming* cbm = nullptr;
    double sequential = 0.0;
    for (const auto& t : report.timings) {
        if (t.stage == "explore") explore = &t;
        if (t.stage == "cbm") cbm = &t;
        if (t.stage != "evaluate") sequential += t.seconds;
    }
    report.nested_cost.reset();
    if (explore && cbm && explore->evaluations > 0 && cbm->evaluations > 0 && sequential > 0.0) {
        NestedCostEstimate n;
        n.morphology_eval_seconds = explore->seconds / static_cast<double>(explore->evaluations);
        n.cbm_eval_seconds = cbm->seconds / static_cast<double>(cbm->evaluations);
        n.nested_evaluations = config.explore.population_size * (config.explore.max_iterations + 1);
        n.nested_seconds = static_cast<double>(n.nested_evaluations) * (n.morphology_eval_seconds + n.cbm_eval_seconds);
        n.sequential_seconds = sequential;
        n.speedup = n.nested_seconds / sequential;
        report.nested_cost = n;
    }
    return report;
}

RunReport run_stage(const RunConfig& config, Stage stage, const fs::path& out_dir) {
    config.validate();
    fs::create_directories(out_dir);
    switch (stage) {
    case Stage::Explore: run_explore(config, out_dir); break;
    case Stage::Surrogate: run_surrogate(config, out_dir); break;
    case Stage::Cbm: run_cbm(config, out_dir); break;
    case Stage::Finalize: run_finalize(config, out_dir); break;
    case Stage::Evaluate: run_evaluate(config, out_dir); break;
    case Stage::Full:
        // A full run starts from a clean slate so stale checkpoints never leak in.
        for (const char* f : {files::kArchive, files::kSurrogate, files::kTrainScenarios, files::kEvalScenarios,
                              files::kBoTrace, files::kBoTraceCsv, files::kCbmResult, files::kFinalDesign,
                              files::kEvaluation, files::kReport, files::kReportCsv, files::kTimings}) {
            fs::remove(out_dir / f);
        }
        run_explore(config, out_dir);
        run_surrogate(config, out_dir);
        run_cbm(config, out_dir);
        run_finalize(config, out_dir);
        run_evaluate(config, out_dir);
        break;
    }
    RunReport report = collect_report(config, out_dir);
    write_json(out_dir / files::kReport, report_to_json(report));
    write_text(out_dir / files::kReportCsv, report_csv(report));
    write_json(out_dir / files::kTimings, timings_to_json(report));
    return report;
}

} // namespace codesign::io
