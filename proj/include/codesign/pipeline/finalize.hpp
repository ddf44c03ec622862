#ifndef CODESIGN_PIPELINE_FINALIZE_HPP
#define CODESIGN_PIPELINE_FINALIZE_HPP

#include <vector>

#include "codesign/morphology/model.hpp"
#include "codesign/moo/nsga2.hpp"

namespace codesign::pipeline {

struct FinalizeCandidate {
    morphology::MorphologyDesign design;
    morphology::TalentVector talents;
    double residual = 0.0;
};

struct FinalizeResult {
    morphology::TalentVector target;
    morphology::MorphologyDesign design;
    morphology::TalentVector talents;
    double residual = 0.0;
    /// Distinct designs from the final populations within
    /// `candidate_margin` of the best residual, best first.
    std::vector<FinalizeCandidate> candidates;
};

struct FinalizeOptions {
    double candidate_margin = 0.01;
    std::size_t max_candidates = 10;
    /// Nelder-Mead evaluations spent polishing the best design.
    std::size_t polish_evaluations = 600;
};

/// Euclidean norm of the talent error, each component divided by the width
/// of its talent box.
double talent_residual(const morphology::TalentVector& talents, const morphology::TalentVector& target,
                       const morphology::TalentBounds& bounds);

/// Searches the design box for a morphology whose talents match `target`:
/// a single-objective NSGA run on the negated residual followed by a
/// Nelder-Mead polish of the best design. Unreachable targets give a
/// positive residual rather than an error.
FinalizeResult finalize_morphology(const morphology::TalentVector& target, const moo::NsgaConfig& config,
                                   const morphology::MorphologyModel& model, const FinalizeOptions& options = {});

} // namespace codesign::pipeline

#endif
