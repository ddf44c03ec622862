#include "codesign/pipeline/frontier.hpp"

#include <algorithm>
#include <cmath>

#include "codesign/common/error.hpp"

namespace codesign::pipeline {

namespace {

Eigen::Vector2d scaled_input(double speed, double detection, const morphology::TalentBounds& b) {
    return {(speed - b.cruise_speed.lower) / b.cruise_speed.width(),
            (detection - b.detection_distance.lower) / b.detection_distance.width()};
}

void training_data(const TalentArchive& archive, const morphology::TalentBounds& bounds, Eigen::MatrixXd& x,
                   Eigen::VectorXd& y) {
    const auto n = static_cast<Eigen::Index>(archive.size());
    x.resize(n, 2);
    y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto t = archive_talents(archive.entries[static_cast<std::size_t>(i)]);
        x.row(i) = scaled_input(t.cruise_speed, t.detection_distance, bounds).transpose();
        y[i] = t.flight_range;
    }
}

void compute_diagnostics(FrontierSurrogate& s) {
    const auto& m = s.model;
    const double noise_std = std::sqrt(m.kernel().noise_variance) * m.target_scale();
    s.diagnostics.noise_band = 3.0 * noise_std;
    double max_abs = 0.0, sq = 0.0;
    std::size_t within = 0;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const double r = m.predict(Eigen::VectorXd(m.inputs().row(i).transpose())).mean - m.targets()[i];
        max_abs = std::max(max_abs, std::abs(r));
        sq += r * r;
        // 1e-6 relative floor so noise-free fits count exact interpolation as inside
        if (std::abs(r) <= s.diagnostics.noise_band + 1e-6 * std::abs(m.targets()[i])) ++within;
    }
    s.diagnostics.max_abs_residual = max_abs;
    s.diagnostics.rms_residual = std::sqrt(sq / static_cast<double>(m.size()));
    s.diagnostics.within_band_fraction = static_cast<double>(within) / static_cast<double>(m.size());
}

void check_archive(const TalentArchive& archive, std::size_t min_size, const morphology::TalentBounds& bounds) {
    if (archive.size() < min_size) {
        throw InvalidArgument("fit_talent_frontier: archive has " + std::to_string(archive.size()) +
                              " entries, need at least " + std::to_string(min_size));
    }
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    training_data(archive, bounds, x, y);
    const Eigen::RowVectorXd spread = x.colwise().maxCoeff() - x.colwise().minCoeff();
    if (spread.maxCoeff() <= 0.0) {
        throw InvalidArgument("fit_talent_frontier: degenerate archive, all (speed, detection) inputs identical");
    }
}

} // namespace

double FrontierSurrogate::predict_range(double cruise_speed, double detection_distance) const {
    return model.predict(Eigen::VectorXd(scaled_input(cruise_speed, detection_distance, bounds))).mean;
}

double FrontierSurrogate::frontier_scale() const {
    return model.targets().size() > 0 ? model.targets().maxCoeff() : bounds.flight_range.upper;
}

FrontierSurrogate fit_talent_frontier(const TalentArchive& archive, const FrontierOptions& options,
                                      const morphology::TalentBounds& bounds) {
    check_archive(archive, options.min_archive_size, bounds);
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    training_data(archive, bounds, x, y);

    gp::KernelSpec kernel;
    kernel.family = options.kernel;
    kernel.length_scales = Eigen::VectorXd::Constant(2, 0.3);
    kernel.signal_variance = 1.0;
    kernel.noise_variance = 1e-4;
    gp::FitOptions fit_options;
    fit_options.optimize_hyperparams = options.optimize_hyperparams;
    fit_options.min_noise_variance = 1e-8;

    FrontierSurrogate s;
    s.bounds = bounds;
    s.training_set = archive;
    s.model = gp::fit(x, y, kernel, fit_options);
    compute_diagnostics(s);
    return s;
}

FrontierSurrogate rebuild_frontier(const TalentArchive& archive, const gp::KernelSpec& kernel,
                                   const morphology::TalentBounds& bounds) {
    check_archive(archive, 1, bounds);
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    training_data(archive, bounds, x, y);
    FrontierSurrogate s;
    s.bounds = bounds;
    s.training_set = archive;
    s.model = gp::fit(x, y, kernel);
    compute_diagnostics(s);
    return s;
}

double g1_feasibility(const morphology::TalentVector& talents, const FrontierSurrogate& surrogate) {
    return talents.flight_range - surrogate.predict_range(talents.cruise_speed, talents.detection_distance);
}

} // namespace codesign::pipeline
