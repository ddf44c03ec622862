#ifndef CODESIGN_COMMON_NELDER_MEAD_HPP
#define CODESIGN_COMMON_NELDER_MEAD_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace codesign {

struct NelderMeadOptions {
    std::size_t max_evaluations = 400;
    double initial_step = 0.25;
    double tolerance = 1e-8;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
};

/// Box-constrained Nelder-Mead minimizer. Trial points are clamped into
/// [lower, upper]; the initial simplex steps are `initial_step` times the box
/// width per coordinate.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start,
                             const std::vector<double>& lower,
                             const std::vector<double>& upper,
                             const NelderMeadOptions& options = {});

} // namespace codesign

#endif
