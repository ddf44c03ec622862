#ifndef CODESIGN_IO_JSON_IO_HPP
#define CODESIGN_IO_JSON_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "codesign/io/report.hpp"
#include "codesign/pipeline/cbm.hpp"
#include "codesign/pipeline/finalize.hpp"
#include "codesign/pipeline/frontier.hpp"
#include "codesign/sim/scenario.hpp"

namespace codesign::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

// Every checkpoint carries {"schema": "codesign.<kind>", "version": 1}.
// Serialize -> parse -> serialize reproduces the same bytes.

Json archive_to_json(const pipeline::TalentArchive& archive);
pipeline::TalentArchive archive_from_json(const Json& j);

Json kernel_to_json(const gp::KernelSpec& kernel);
gp::KernelSpec kernel_from_json(const Json& j);

/// Stores kernel hyperparameters, talent box, training set and diagnostics.
/// Loading refits the GP with the stored hyperparameters.
Json surrogate_to_json(const pipeline::FrontierSurrogate& surrogate);
pipeline::FrontierSurrogate surrogate_from_json(const Json& j);
/// Stored diagnostics only, without refitting.
pipeline::FrontierDiagnostics surrogate_diagnostics_from_json(const Json& j);

Json scenarios_to_json(const std::vector<sim::Scenario>& scenarios);
std::vector<sim::Scenario> scenarios_from_json(const Json& j);

/// Optimum, objective and constraint bookkeeping. The trace lives in its own
/// file; cbm_result_from_json leaves it empty.
Json cbm_result_to_json(const pipeline::CbmResult& result, double g1_tolerance);
pipeline::CbmResult cbm_result_from_json(const Json& j);
double cbm_g1_tolerance_from_json(const Json& j);

Json bo_trace_to_json(const std::vector<pipeline::CbmTraceEntry>& trace);
std::vector<pipeline::CbmTraceEntry> bo_trace_from_json(const Json& j);
std::string bo_trace_csv(const std::vector<pipeline::CbmTraceEntry>& trace);

Json final_design_to_json(const pipeline::FinalizeResult& result);
pipeline::FinalizeResult final_design_from_json(const Json& j);

Json evaluation_to_json(const Evaluation& evaluation);
Evaluation evaluation_from_json(const Json& j);

/// Deterministic part of the report; timings are excluded.
Json report_to_json(const RunReport& report);
RunReport report_from_json(const Json& j);
/// Comparison table, one row per configuration.
std::string report_csv(const RunReport& report);

Json timings_to_json(const RunReport& report);
/// Fills report.timings and report.nested_cost.
void timings_from_json(const Json& j, RunReport& report);

std::string dump(const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);
/// Parse errors are reported with line and column.
Json read_json(const std::filesystem::path& path);
Json parse_json(const std::string& text, const std::string& origin);

} // namespace codesign::io

#endif
