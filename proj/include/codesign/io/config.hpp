#ifndef CODESIGN_IO_CONFIG_HPP
#define CODESIGN_IO_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "codesign/io/json_io.hpp"
#include "codesign/morphology/model.hpp"
#include "codesign/moo/nsga2.hpp"
#include "codesign/pipeline/bayes_opt.hpp"
#include "codesign/pipeline/cbm.hpp"
#include "codesign/pipeline/frontier.hpp"
#include "codesign/sim/scenario.hpp"

namespace codesign::io {

/// Every setting of a pipeline run. Defaults reproduce the published
/// settings (100 LHS scenarios, NSGA 200 x 75 x 5 runs, BO 25 + 150 with a
/// 50-point active set, the Table IV baseline).
struct RunConfig {
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    /// Morphology constants file; empty selects the default.
    std::string constants_path;

    moo::NsgaConfig explore;
    moo::NsgaConfig finalize;
    pipeline::FrontierOptions frontier;
    pipeline::BoConfig bo;
    pipeline::CbmConfig cbm;
    sim::ScenarioSetConfig scenarios;
    std::size_t train_scenarios = 100;
    std::size_t eval_scenarios = 100;

    morphology::TalentVector baseline_talents = morphology::baseline_talents();
    sim::BehaviorHyperparams baseline_params{10.0, 0.5};

    /// Signal-strength bin edges for the success-by-strength plot data.
    std::vector<double> strength_bins{15.0, 50.0, 100.0};

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Parses and validates a JSON config. An empty (whitespace-only) file gives
/// the default configuration; a JSON object must set "seed" unless
/// `seed_override` is given. Unknown fields are rejected.
RunConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = std::nullopt);
RunConfig parse_config(const std::string& text, const std::string& origin,
                       std::optional<std::uint64_t> seed_override = std::nullopt);

Json config_to_json(const RunConfig& config);

} // namespace codesign::io

#endif
