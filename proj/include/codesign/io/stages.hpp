#ifndef CODESIGN_IO_STAGES_HPP
#define CODESIGN_IO_STAGES_HPP

#include <filesystem>
#include <string>

#include "codesign/io/config.hpp"
#include "codesign/io/report.hpp"

namespace codesign::io {

enum class Stage { Explore, Surrogate, Cbm, Finalize, Evaluate, Full };

const char* to_string(Stage stage);
/// Throws InvalidArgument for unknown names.
Stage stage_from_string(const std::string& name);

/// Checkpoint file names inside the output directory.
namespace files {
inline constexpr const char* kArchive = "archive.json";
inline constexpr const char* kSurrogate = "surrogate.json";
inline constexpr const char* kTrainScenarios = "scenarios_train.json";
inline constexpr const char* kEvalScenarios = "scenarios_eval.json";
inline constexpr const char* kBoTrace = "bo_trace.json";
inline constexpr const char* kBoTraceCsv = "bo_trace.csv";
inline constexpr const char* kCbmResult = "cbm_result.json";
inline constexpr const char* kFinalDesign = "final_design.json";
inline constexpr const char* kEvaluation = "evaluation.json";
inline constexpr const char* kReport = "report.json";
inline constexpr const char* kReportCsv = "report.csv";
inline constexpr const char* kTimings = "timings.json";
} // namespace files

/// Derived seeds of the pipeline's random streams.
struct StageSeeds {
    std::uint64_t explore, train_scenarios, eval_scenarios, bo, finalize;
};
StageSeeds stage_seeds(std::uint64_t seed);

/// Runs one stage (or all of them) against `out_dir`. Each stage reads its
/// inputs from the checkpoints of earlier stages, so stages can be resumed
/// individually; a missing input raises CheckpointError naming the stage to
/// run first. Afterwards report.json, report.csv and timings.json are
/// rebuilt from every checkpoint present.
RunReport run_stage(const RunConfig& config, Stage stage, const std::filesystem::path& out_dir);

/// Assembles the report from the checkpoints in `out_dir`.
RunReport collect_report(const RunConfig& config, const std::filesystem::path& out_dir);

} // namespace codesign::io

#endif
