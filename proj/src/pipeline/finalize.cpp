#include "codesign/pipeline/finalize.hpp"

#include <algorithm>
#include <cmath>

#include "codesign/common/error.hpp"
#include "codesign/common/nelder_mead.hpp"
#include "codesign/moo/pareto.hpp"

namespace codesign::pipeline {

double talent_residual(const morphology::TalentVector& talents, const morphology::TalentVector& target,
                       const morphology::TalentBounds& bounds) {
    const auto t = talents.to_array();
    const auto y = target.to_array();
    const auto box = bounds.to_array();
    double sum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double e = (t[i] - y[i]) / box[i].width();
        sum += e * e;
    }
    return std::sqrt(sum);
}

namespace {

morphology::MorphologyDesign to_design(const std::vector<double>& x) {
    std::array<double, morphology::MorphologyDesign::size> v{};
    std::copy(x.begin(), x.end(), v.begin());
    return morphology::MorphologyDesign::from_array(v);
}

} // namespace

FinalizeResult finalize_morphology(const morphology::TalentVector& target, const moo::NsgaConfig& config,
                                   const morphology::MorphologyModel& model, const FinalizeOptions& options) {
    const auto& tb = model.talent_bounds();
    if (!tb.contains(target)) {
        throw BoundsError("target", "finalize target lies outside the talent box");
    }
    auto residual = [&](const std::vector<double>& x) {
        return talent_residual(model.evaluate_talents(to_design(x)), target, tb);
    };

    moo::MooProblem problem;
    for (const auto& interval : model.design_bounds().to_array()) {
        problem.lower_bounds.push_back(interval.lower);
        problem.upper_bounds.push_back(interval.upper);
    }
    problem.objective_count = 1;
    problem.objective = [&](std::span<const double> x) {
        return std::vector<double>{-residual(std::vector<double>(x.begin(), x.end()))};
    };

    // Final populations of every run feed the candidate list.
    std::vector<FinalizeCandidate> pool;
    const auto observer = [&](const moo::GenerationView& view) {
        if (view.generation != config.max_iterations) return;
        for (std::size_t i = 0; i < view.decisions.size(); ++i) {
            const auto d = to_design(view.decisions[i]);
            pool.push_back({d, model.evaluate_talents(d), -view.objectives[i][0]});
        }
    };
    const moo::ParetoArchive archive = moo::evolve(problem, config, observer);
    if (archive.entries.empty()) {
        throw SolverError("finalize_morphology: solver returned an empty archive");
    }
    const auto best_entry = std::max_element(archive.entries.begin(), archive.entries.end(),
                                             [](const auto& l, const auto& r) { return l.objectives[0] < r.objectives[0]; });

    NelderMeadOptions nm;
    nm.max_evaluations = options.polish_evaluations;
    nm.initial_step = 0.05;
    nm.tolerance = 1e-12;
    const auto polished = nelder_mead(residual, best_entry->decision, problem.lower_bounds, problem.upper_bounds, nm);

    FinalizeResult result;
    result.target = target;
    const bool improved = polished.value < -best_entry->objectives[0];
    const std::vector<double>& best_x = improved ? polished.x : best_entry->decision;
    result.design = to_design(best_x);
    result.talents = model.evaluate_talents(result.design);
    result.residual = talent_residual(result.talents, target, tb);

    pool.push_back({result.design, result.talents, result.residual});
    std::stable_sort(pool.begin(), pool.end(), [](const auto& l, const auto& r) { return l.residual < r.residual; });
    for (const auto& c : pool) {
        if (c.residual > result.residual + options.candidate_margin) break;
        if (result.candidates.size() >= options.max_candidates) break;
        const auto x = c.design.to_array();
        const bool duplicate = std::any_of(result.candidates.begin(), result.candidates.end(), [&](const auto& k) {
            const auto y = k.design.to_array();
            return moo::same_decision(x, y);
        });
        if (!duplicate) result.candidates.push_back(c);
    }
    return result;
}

} // namespace codesign::pipeline
