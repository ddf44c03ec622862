#ifndef CODESIGN_PIPELINE_EXPLORE_HPP
#define CODESIGN_PIPELINE_EXPLORE_HPP

#include "codesign/morphology/model.hpp"
#include "codesign/moo/nsga2.hpp"

namespace codesign::pipeline {

/// Archive entries hold a MorphologyDesign as `decision` and its
/// TalentVector (range, speed, detection) as `objectives`.
using TalentArchive = moo::ParetoArchive;

/// Maximizes all three talents over the design box and merges the repeat
/// runs into one non-dominated archive.
TalentArchive explore_talents(const moo::NsgaConfig& config, const morphology::MorphologyModel& model);

/// Number of morphology evaluations one explore_talents call performs.
std::size_t explore_evaluation_count(const moo::NsgaConfig& config);

morphology::TalentVector archive_talents(const moo::ArchiveEntry& entry);
morphology::MorphologyDesign archive_design(const moo::ArchiveEntry& entry);

} // namespace codesign::pipeline

#endif
