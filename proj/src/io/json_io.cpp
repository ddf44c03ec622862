#include "codesign/io/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "codesign/common/error.hpp"

namespace codesign::io {

namespace {

constexpr int kVersion = 1;

Json header(const char* kind) {
    Json j;
    j["schema"] = std::string("codesign.") + kind;
    j["version"] = kVersion;
    return j;
}

void check_header(const Json& j, const char* kind) {
    const std::string expected = std::string("codesign.") + kind;
    if (!j.is_object() || !j.contains("schema") || j["schema"] != expected) {
        throw InvalidArgument("expected a " + expected + " document");
    }
    if (!j.contains("version") || j["version"] != kVersion) {
        throw InvalidArgument(expected + ": unsupported version");
    }
}

const Json& at(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw InvalidArgument(std::string("missing field '") + key + "'");
    }
    return j[key];
}

template <typename T>
T get(const Json& j, const char* key) {
    try {
        return at(j, key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidArgument(std::string("field '") + key + "' has the wrong type");
    }
}

Json vec2(sim::Vec2 p) { return Json::array({p.x, p.y}); }

sim::Vec2 vec2_from(const Json& j, const char* key) {
    const auto v = get<std::vector<double>>(j, key);
    if (v.size() != 2) throw InvalidArgument(std::string("field '") + key + "' must hold two numbers");
    return {v[0], v[1]};
}

Json talents_json(const morphology::TalentVector& t) {
    Json j;
    j["flight_range"] = t.flight_range;
    j["cruise_speed"] = t.cruise_speed;
    j["detection_distance"] = t.detection_distance;
    return j;
}

morphology::TalentVector talents_from(const Json& j) {
    return {get<double>(j, "flight_range"), get<double>(j, "cruise_speed"), get<double>(j, "detection_distance")};
}

Json params_json(const sim::BehaviorHyperparams& p) {
    Json j;
    j["a"] = p.a;
    j["b"] = p.b;
    return j;
}

sim::BehaviorHyperparams params_from(const Json& j) { return {get<double>(j, "a"), get<double>(j, "b")}; }

Json design_json(const morphology::MorphologyDesign& d) {
    Json j;
    const auto v = d.to_array();
    for (std::size_t i = 0; i < v.size(); ++i) j[morphology::kDesignFieldNames[i]] = v[i];
    return j;
}

morphology::MorphologyDesign design_from(const Json& j) {
    std::array<double, morphology::MorphologyDesign::size> v{};
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = get<double>(j, morphology::kDesignFieldNames[i]);
    return morphology::MorphologyDesign::from_array(v);
}

Json bounds_json(const morphology::TalentBounds& b) {
    Json j;
    const auto v = b.to_array();
    for (std::size_t i = 0; i < v.size(); ++i) {
        j[morphology::kTalentFieldNames[i]] = Json::array({v[i].lower, v[i].upper});
    }
    return j;
}

morphology::TalentBounds bounds_from(const Json& j) {
    auto interval = [&](const char* key) {
        const auto v = get<std::vector<double>>(j, key);
        if (v.size() != 2 || !(v[0] < v[1])) throw InvalidArgument(std::string("bad interval '") + key + "'");
        return morphology::Interval{v[0], v[1]};
    };
    morphology::TalentBounds b;
    b.flight_range = interval("flight_range");
    b.cruise_speed = interval("cruise_speed");
    b.detection_distance = interval("detection_distance");
    return b;
}

Json diagnostics_json(const pipeline::FrontierDiagnostics& d) {
    Json j;
    j["max_abs_residual"] = d.max_abs_residual;
    j["rms_residual"] = d.rms_residual;
    j["noise_band"] = d.noise_band;
    j["within_band_fraction"] = d.within_band_fraction;
    return j;
}

pipeline::FrontierDiagnostics diagnostics_from(const Json& j) {
    return {get<double>(j, "max_abs_residual"), get<double>(j, "rms_residual"), get<double>(j, "noise_band"),
            get<double>(j, "within_band_fraction")};
}

sim::FailureReason failure_reason_from(const std::string& s) {
    for (auto r : {sim::FailureReason::None, sim::FailureReason::TimeLimit, sim::FailureReason::Stagnation}) {
        if (s == sim::to_string(r)) return r;
    }
    throw InvalidArgument("unknown failure reason '" + s + "'");
}

Json configuration_json(const ConfigurationResult& c, bool with_outcomes) {
    Json j;
    j["label"] = c.label;
    j["talents"] = talents_json(c.talents);
    j["params"] = params_json(c.params);
    j["success_rate"] = c.success_rate;
    j["avg_search_time_success"] = c.avg_search_time_success;
    j["steps_within_bound"] = c.steps_within_bound;
    j["paths_within_range"] = c.paths_within_range;
    if (with_outcomes) {
        Json outcomes = Json::array();
        for (const auto& o : c.outcomes) {
            Json e;
            e["success"] = o.success;
            e["search_time"] = o.search_time;
            e["failure_reason"] = sim::to_string(o.failure_reason);
            outcomes.push_back(std::move(e));
        }
        j["outcomes"] = std::move(outcomes);
    }
    return j;
}

ConfigurationResult configuration_from(const Json& j) {
    ConfigurationResult c;
    c.label = get<std::string>(j, "label");
    c.talents = talents_from(at(j, "talents"));
    c.params = params_from(at(j, "params"));
    c.success_rate = get<double>(j, "success_rate");
    c.avg_search_time_success = get<double>(j, "avg_search_time_success");
    c.steps_within_bound = get<bool>(j, "steps_within_bound");
    c.paths_within_range = get<bool>(j, "paths_within_range");
    if (j.contains("outcomes")) {
        for (const auto& e : j["outcomes"]) {
            c.outcomes.push_back({get<bool>(e, "success"), get<double>(e, "search_time"),
                                  failure_reason_from(get<std::string>(e, "failure_reason"))});
        }
    }
    return c;
}

void append_csv_row(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
}

} // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, r.ptr);
}

Json archive_to_json(const pipeline::TalentArchive& archive) {
    Json j = header("archive");
    j["decision_fields"] = Json::array();
    for (const char* n : morphology::kDesignFieldNames) j["decision_fields"].push_back(n);
    j["objective_fields"] = Json::array();
    for (const char* n : morphology::kTalentFieldNames) j["objective_fields"].push_back(n);
    Json entries = Json::array();
    for (const auto& e : archive.entries) {
        Json row;
        row["decision"] = e.decision;
        row["objectives"] = e.objectives;
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    return j;
}

pipeline::TalentArchive archive_from_json(const Json& j) {
    check_header(j, "archive");
    pipeline::TalentArchive archive;
    for (const auto& row : at(j, "entries")) {
        archive.entries.push_back({get<std::vector<double>>(row, "decision"), get<std::vector<double>>(row, "objectives")});
    }
    return archive;
}

Json kernel_to_json(const gp::KernelSpec& kernel) {
    Json j;
    j["family"] = gp::to_string(kernel.family);
    j["length_scales"] = std::vector<double>(kernel.length_scales.data(), kernel.length_scales.data() + kernel.length_scales.size());
    j["signal_variance"] = kernel.signal_variance;
    j["noise_variance"] = kernel.noise_variance;
    return j;
}

gp::KernelSpec kernel_from_json(const Json& j) {
    gp::KernelSpec k;
    k.family = gp::kernel_family_from_string(get<std::string>(j, "family"));
    const auto ls = get<std::vector<double>>(j, "length_scales");
    k.length_scales = Eigen::Map<const Eigen::VectorXd>(ls.data(), static_cast<Eigen::Index>(ls.size()));
    k.signal_variance = get<double>(j, "signal_variance");
    k.noise_variance = get<double>(j, "noise_variance");
    return k;
}

Json surrogate_to_json(const pipeline::FrontierSurrogate& surrogate) {
    Json j = header("surrogate");
    j["inputs"] = Json::array({"cruise_speed", "detection_distance"});
    j["output"] = "flight_range";
    j["input_scaling"] = "talent-box";
    j["kernel"] = kernel_to_json(surrogate.model.kernel());
    j["bounds"] = bounds_json(surrogate.bounds);
    j["diagnostics"] = diagnostics_json(surrogate.diagnostics);
    j["training_set"] = archive_to_json(surrogate.training_set);
    return j;
}

pipeline::FrontierSurrogate surrogate_from_json(const Json& j) {
    check_header(j, "surrogate");
    auto s = pipeline::rebuild_frontier(archive_from_json(at(j, "training_set")), kernel_from_json(at(j, "kernel")),
                                        bounds_from(at(j, "bounds")));
    s.diagnostics = diagnostics_from(at(j, "diagnostics"));
    return s;
}

pipeline::FrontierDiagnostics surrogate_diagnostics_from_json(const Json& j) {
    check_header(j, "surrogate");
    return diagnostics_from(at(j, "diagnostics"));
}

Json scenarios_to_json(const std::vector<sim::Scenario>& scenarios) {
    Json j = header("scenarios");
    Json list = Json::array();
    for (const auto& s : scenarios) {
        Json e;
        e["seed"] = s.seed;
        e["family_id"] = s.field.family_id;
        e["source"] = vec2(s.field.source_location);
        e["peak_strength"] = s.field.peak_strength;
        e["shape_params"] = s.field.shape_params;
        e["swarm_size"] = s.swarm_size;
        e["arena"] = Json::array({s.arena.width, s.arena.height});
        e["base"] = vec2(s.base_location);
        e["observation_noise_std"] = s.observation_noise_std;
        list.push_back(std::move(e));
    }
    j["scenarios"] = std::move(list);
    return j;
}

std::vector<sim::Scenario> scenarios_from_json(const Json& j) {
    check_header(j, "scenarios");
    std::vector<sim::Scenario> out;
    for (const auto& e : at(j, "scenarios")) {
        sim::Scenario s;
        s.seed = get<std::uint64_t>(e, "seed");
        s.field.family_id = get<int>(e, "family_id");
        s.field.source_location = vec2_from(e, "source");
        s.field.peak_strength = get<double>(e, "peak_strength");
        s.field.shape_params = get<std::vector<double>>(e, "shape_params");
        s.swarm_size = get<std::size_t>(e, "swarm_size");
        const auto arena = vec2_from(e, "arena");
        s.arena = {arena.x, arena.y};
        s.base_location = vec2_from(e, "base");
        s.observation_noise_std = get<double>(e, "observation_noise_std");
        s.validate();
        out.push_back(std::move(s));
    }
    return out;
}

Json cbm_result_to_json(const pipeline::CbmResult& result, double g1_tolerance) {
    Json j = header("cbm_result");
    j["optimum"] = {{"talents", talents_json(result.optimum.talents)}, {"params", params_json(result.optimum.params)}};
    j["objective"] = result.objective;
    j["g1"] = result.g1;
    j["g1_tolerance"] = g1_tolerance;
    j["feasible"] = result.g1 <= g1_tolerance;
    j["evaluations"] = result.trace.size();
    j["steps_within_bound"] = result.steps_within_bound;
    j["paths_within_range"] = result.paths_within_range;
    j["simulated_searches"] = result.simulated_searches;
    return j;
}

pipeline::CbmResult cbm_result_from_json(const Json& j) {
    check_header(j, "cbm_result");
    pipeline::CbmResult r;
    const Json& opt = at(j, "optimum");
    r.optimum = {talents_from(at(opt, "talents")), params_from(at(opt, "params"))};
    r.objective = get<double>(j, "objective");
    r.g1 = get<double>(j, "g1");
    r.steps_within_bound = get<bool>(j, "steps_within_bound");
    r.paths_within_range = get<bool>(j, "paths_within_range");
    r.simulated_searches = get<std::size_t>(j, "simulated_searches");
    // The trace is stored separately; keep the evaluation count visible.
    r.trace.resize(get<std::size_t>(j, "evaluations"));
    return r;
}

double cbm_g1_tolerance_from_json(const Json& j) {
    check_header(j, "cbm_result");
    return get<double>(j, "g1_tolerance");
}

namespace {

const std::vector<std::string> kTraceColumns{"evaluation", "flight_range", "cruise_speed", "detection_distance", "a", "b",
                                             "objective",  "incumbent",    "g1",           "successes",          "seed",
                                             "expected_improvement",       "noise_inflations"};

} // namespace

Json bo_trace_to_json(const std::vector<pipeline::CbmTraceEntry>& trace) {
    Json j = header("bo_trace");
    Json list = Json::array();
    for (const auto& t : trace) {
        Json e;
        e["evaluation"] = t.evaluation;
        e["flight_range"] = t.point.talents.flight_range;
        e["cruise_speed"] = t.point.talents.cruise_speed;
        e["detection_distance"] = t.point.talents.detection_distance;
        e["a"] = t.point.params.a;
        e["b"] = t.point.params.b;
        e["objective"] = t.objective;
        e["incumbent"] = t.incumbent;
        e["g1"] = t.g1;
        e["successes"] = t.successes;
        e["seed"] = t.seed;
        e["expected_improvement"] = t.expected_improvement;
        e["noise_inflations"] = t.noise_inflations;
        list.push_back(std::move(e));
    }
    j["entries"] = std::move(list);
    return j;
}

std::vector<pipeline::CbmTraceEntry> bo_trace_from_json(const Json& j) {
    check_header(j, "bo_trace");
    std::vector<pipeline::CbmTraceEntry> trace;
    for (const auto& e : at(j, "entries")) {
        pipeline::CbmTraceEntry t;
        t.evaluation = get<std::size_t>(e, "evaluation");
        t.point.talents = talents_from(e);
        t.point.params = params_from(e);
        t.objective = get<double>(e, "objective");
        t.incumbent = get<double>(e, "incumbent");
        t.g1 = get<double>(e, "g1");
        t.successes = get<std::size_t>(e, "successes");
        t.seed = get<bool>(e, "seed");
        t.expected_improvement = get<double>(e, "expected_improvement");
        t.noise_inflations = get<std::size_t>(e, "noise_inflations");
        trace.push_back(t);
    }
    return trace;
}

std::string bo_trace_csv(const std::vector<pipeline::CbmTraceEntry>& trace) {
    std::string out;
    append_csv_row(out, kTraceColumns);
    for (const auto& t : trace) {
        append_csv_row(out, {std::to_string(t.evaluation), format_number(t.point.talents.flight_range),
                             format_number(t.point.talents.cruise_speed), format_number(t.point.talents.detection_distance),
                             format_number(t.point.params.a), format_number(t.point.params.b), format_number(t.objective),
                             format_number(t.incumbent), format_number(t.g1), std::to_string(t.successes),
                             t.seed ? "1" : "0", format_number(t.expected_improvement), std::to_string(t.noise_inflations)});
    }
    return out;
}

Json final_design_to_json(const pipeline::FinalizeResult& result) {
    Json j = header("final_design");
    j["target"] = talents_json(result.target);
    j["design"] = design_json(result.design);
    j["talents"] = talents_json(result.talents);
    j["residual"] = result.residual;
    Json list = Json::array();
    for (const auto& c : result.candidates) {
        list.push_back({{"design", design_json(c.design)}, {"talents", talents_json(c.talents)}, {"residual", c.residual}});
    }
    j["candidates"] = std::move(list);
    return j;
}

pipeline::FinalizeResult final_design_from_json(const Json& j) {
    check_header(j, "final_design");
    pipeline::FinalizeResult r;
    r.target = talents_from(at(j, "target"));
    r.design = design_from(at(j, "design"));
    r.talents = talents_from(at(j, "talents"));
    r.residual = get<double>(j, "residual");
    for (const auto& c : at(j, "candidates")) {
        r.candidates.push_back({design_from(at(c, "design")), talents_from(at(c, "talents")), get<double>(c, "residual")});
    }
    return r;
}

Json evaluation_to_json(const Evaluation& evaluation) {
    Json j = header("evaluation");
    Json list = Json::array();
    for (const auto& c : evaluation.configurations) list.push_back(configuration_json(c, true));
    j["configurations"] = std::move(list);
    return j;
}

Evaluation evaluation_from_json(const Json& j) {
    check_header(j, "evaluation");
    Evaluation e;
    for (const auto& c : at(j, "configurations")) e.configurations.push_back(configuration_from(c));
    return e;
}

Json report_to_json(const RunReport& report) {
    Json j = header("report");
    j["seed"] = report.seed;
    j["completed_stages"] = report.completed_stages;
    if (report.archive_size) j["archive_size"] = *report.archive_size;
    if (report.surrogate) j["surrogate"] = diagnostics_json(*report.surrogate);
    if (report.cbm) {
        const auto& c = *report.cbm;
        j["cbm"] = {{"objective", c.objective},
                    {"evaluations", c.evaluations},
                    {"talents", talents_json(c.talents)},
                    {"params", params_json(c.params)},
                    {"g1", c.g1},
                    {"g1_tolerance", c.g1_tolerance},
                    {"feasible", c.feasible},
                    {"steps_within_bound", c.steps_within_bound},
                    {"paths_within_range", c.paths_within_range},
                    {"simulated_searches", c.simulated_searches}};
    }
    if (report.final_design) {
        const auto& f = *report.final_design;
        j["final_design"] = {{"design", design_json(f.design)},
                             {"talents", talents_json(f.talents)},
                             {"residual", f.residual},
                             {"candidates", f.candidates}};
    }
    Json rows = Json::array();
    for (const auto& c : report.comparison) rows.push_back(configuration_json(c, false));
    j["comparison"] = std::move(rows);
    return j;
}

RunReport report_from_json(const Json& j) {
    check_header(j, "report");
    RunReport r;
    r.seed = get<std::uint64_t>(j, "seed");
    r.completed_stages = get<std::vector<std::string>>(j, "completed_stages");
    if (j.contains("archive_size")) r.archive_size = get<std::size_t>(j, "archive_size");
    if (j.contains("surrogate")) r.surrogate = diagnostics_from(j["surrogate"]);
    if (j.contains("cbm")) {
        const Json& c = j["cbm"];
        r.cbm = CbmSummary{get<double>(c, "objective"),
                           get<std::size_t>(c, "evaluations"),
                           talents_from(at(c, "talents")),
                           params_from(at(c, "params")),
                           get<double>(c, "g1"),
                           get<double>(c, "g1_tolerance"),
                           get<bool>(c, "feasible"),
                           get<bool>(c, "steps_within_bound"),
                           get<bool>(c, "paths_within_range"),
                           get<std::size_t>(c, "simulated_searches")};
    }
    if (j.contains("final_design")) {
        const Json& f = j["final_design"];
        r.final_design = FinalSummary{design_from(at(f, "design")), talents_from(at(f, "talents")),
                                      get<double>(f, "residual"), get<std::size_t>(f, "candidates")};
    }
    for (const auto& c : at(j, "comparison")) r.comparison.push_back(configuration_from(c));
    return r;
}

std::string report_csv(const RunReport& report) {
    std::string out;
    append_csv_row(out, {"configuration", "flight_range_km", "cruise_speed_m_s", "detection_distance_m", "a", "b",
                         "success_rate", "avg_search_time_success_s"});
    for (const auto& c : report.comparison) {
        append_csv_row(out, {c.label, format_number(c.talents.flight_range), format_number(c.talents.cruise_speed),
                             format_number(c.talents.detection_distance), format_number(c.params.a),
                             format_number(c.params.b), format_number(c.success_rate),
                             format_number(c.avg_search_time_success)});
    }
    return out;
}

Json timings_to_json(const RunReport& report) {
    Json j = header("timings");
    Json stages = Json::array();
    for (const auto& t : report.timings) {
        stages.push_back({{"stage", t.stage}, {"seconds", t.seconds}, {"evaluations", t.evaluations}});
    }
    j["stages"] = std::move(stages);
    if (report.nested_cost) {
        const auto& n = *report.nested_cost;
        j["nested_cost"] = {{"morphology_eval_seconds", n.morphology_eval_seconds},
                            {"cbm_eval_seconds", n.cbm_eval_seconds},
                            {"nested_evaluations", n.nested_evaluations},
                            {"nested_seconds", n.nested_seconds},
                            {"sequential_seconds", n.sequential_seconds},
                            {"speedup", n.speedup}};
    }
    return j;
}

void timings_from_json(const Json& j, RunReport& report) {
    check_header(j, "timings");
    report.timings.clear();
    for (const auto& t : at(j, "stages")) {
        report.timings.push_back({get<std::string>(t, "stage"), get<double>(t, "seconds"), get<std::uint64_t>(t, "evaluations")});
    }
    report.nested_cost.reset();
    if (j.contains("nested_cost")) {
        const Json& n = j["nested_cost"];
        report.nested_cost = NestedCostEstimate{get<double>(n, "morphology_eval_seconds"), get<double>(n, "cbm_eval_seconds"),
                                                get<std::uint64_t>(n, "nested_evaluations"), get<double>(n, "nested_seconds"),
                                                get<double>(n, "sequential_seconds"), get<double>(n, "speedup")};
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error("io", "failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, dump(j)); }

Json parse_json(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string detail = e.what();
        if (const auto pos = detail.find("syntax error"); pos != std::string::npos) detail = detail.substr(pos);
        throw Error("parse", origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + detail);
    }
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path.string());
}

} // namespace codesign::io
