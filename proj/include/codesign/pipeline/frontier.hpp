#ifndef CODESIGN_PIPELINE_FRONTIER_HPP
#define CODESIGN_PIPELINE_FRONTIER_HPP

#include "codesign/gp/gaussian_process.hpp"
#include "codesign/morphology/model.hpp"
#include "codesign/pipeline/explore.hpp"

namespace codesign::pipeline {

struct FrontierDiagnostics {
    double max_abs_residual = 0.0;  // km
    double rms_residual = 0.0;      // km
    double noise_band = 0.0;        // km, 3 x noise std
    double within_band_fraction = 0.0;
};

/// GP model of the talent Pareto frontier: flight range as a function of
/// (cruise speed, detection distance). Inputs are scaled to the unit square
/// by the talent box before fitting.
struct FrontierSurrogate {
    gp::GpModel model;
    TalentArchive training_set;
    morphology::TalentBounds bounds;
    FrontierDiagnostics diagnostics;

    /// Predicted frontier range (km) at (speed m/s, detection m).
    double predict_range(double cruise_speed, double detection_distance) const;
    /// Largest training range; the scale for feasibility tolerances.
    double frontier_scale() const;
};

struct FrontierOptions {
    std::size_t min_archive_size = 10;
    gp::KernelFamily kernel = gp::KernelFamily::Matern52;
    bool optimize_hyperparams = true;
};

/// Fits the frontier surrogate with hyperparameter optimization. Throws
/// InvalidArgument for archives smaller than min_archive_size or with all
/// inputs identical.
FrontierSurrogate fit_talent_frontier(const TalentArchive& archive, const FrontierOptions& options = {},
                                      const morphology::TalentBounds& bounds = {});

/// Rebuilds a surrogate from stored hyperparameters without re-optimizing.
FrontierSurrogate rebuild_frontier(const TalentArchive& archive, const gp::KernelSpec& kernel,
                                   const morphology::TalentBounds& bounds = {});

/// flight_range - f_SM(speed, detection); <= 0 is feasible.
double g1_feasibility(const morphology::TalentVector& talents, const FrontierSurrogate& surrogate);

} // namespace codesign::pipeline

#endif
