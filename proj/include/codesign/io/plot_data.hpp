#ifndef CODESIGN_IO_PLOT_DATA_HPP
#define CODESIGN_IO_PLOT_DATA_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "codesign/io/config.hpp"

namespace codesign::io {

enum class PlotKind { Pareto3d, Convergence, AlphaSurface, SuccessByStrength, Trajectories };

const char* to_string(PlotKind kind);
/// Throws InvalidArgument for unknown kinds.
PlotKind plot_kind_from_string(const std::string& name);

struct PlotOptions {
    /// Behavior parameters for alpha-surface; default is the CBM optimum if
    /// present, else the baseline.
    std::optional<sim::BehaviorHyperparams> params;
    /// Held-out scenario replayed for trajectories.
    std::size_t scenario_index = 0;
    /// Grid resolution of alpha-surface along t / T_max.
    std::size_t alpha_steps = 20;
};

/// Writes CSV plot data for `kind` from the checkpoints in `dir` and returns
/// the written paths.
///  pareto3d            archive.json -> pareto3d.csv (+ pareto_surface.csv from surrogate.json)
///  convergence         bo_trace.json -> convergence.csv
///  alpha-surface       -> alpha_surface.csv, alpha over (t / T_max, a) and (t / T_max, b)
///  success-by-strength evaluation.json + scenarios_eval.json -> success_by_strength.csv
///  trajectories        replays one held-out scenario -> trajectories.csv
std::vector<std::filesystem::path> emit_plot_data(const RunConfig& config, const std::filesystem::path& dir, PlotKind kind,
                                                  const PlotOptions& options = {});

} // namespace codesign::io

#endif
