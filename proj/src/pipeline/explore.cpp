#include "codesign/pipeline/explore.hpp"

#include "codesign/common/error.hpp"

namespace codesign::pipeline {

TalentArchive explore_talents(const moo::NsgaConfig& config, const morphology::MorphologyModel& model) {
    moo::MooProblem problem;
    for (const auto& interval : model.design_bounds().to_array()) {
        problem.lower_bounds.push_back(interval.lower);
        problem.upper_bounds.push_back(interval.upper);
    }
    problem.objective_count = morphology::TalentVector::size;
    problem.objective = [&model](std::span<const double> x) {
        std::array<double, morphology::MorphologyDesign::size> v{};
        std::copy(x.begin(), x.end(), v.begin());
        const auto t = model.evaluate_talents(morphology::MorphologyDesign::from_array(v)).to_array();
        return std::vector<double>(t.begin(), t.end());
    };
    return moo::evolve(problem, config);
}

std::size_t explore_evaluation_count(const moo::NsgaConfig& config) {
    return config.repeat_runs * config.population_size * (config.max_iterations + 1);
}

morphology::TalentVector archive_talents(const moo::ArchiveEntry& entry) {
    if (entry.objectives.size() != morphology::TalentVector::size) {
        throw InvalidArgument("archive entry does not hold three talents");
    }
    return {entry.objectives[0], entry.objectives[1], entry.objectives[2]};
}

morphology::MorphologyDesign archive_design(const moo::ArchiveEntry& entry) {
    if (entry.decision.size() != morphology::MorphologyDesign::size) {
        throw InvalidArgument("archive entry does not hold a six-variable design");
    }
    std::array<double, morphology::MorphologyDesign::size> v{};
    std::copy(entry.decision.begin(), entry.decision.end(), v.begin());
    return morphology::MorphologyDesign::from_array(v);
}

} // namespace codesign::pipeline
