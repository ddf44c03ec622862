#include "codesign/gp/gaussian_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "codesign/common/error.hpp"
#include "codesign/common/nelder_mead.hpp"

namespace codesign::gp {

const char* to_string(KernelFamily family) {
    switch (family) {
    case KernelFamily::SquaredExponential:
        return "squared-exponential";
    case KernelFamily::Matern52:
        return "matern-5/2";
    }
    return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "squared-exponential") return KernelFamily::SquaredExponential;
    if (name == "matern-5/2") return KernelFamily::Matern52;
    throw InvalidArgument("unknown kernel family: " + name);
}

void KernelSpec::validate(Eigen::Index dimension) const {
    if (length_scales.size() != dimension) {
        throw InvalidArgument("kernel: expected " + std::to_string(dimension) + " length scales, got " +
                              std::to_string(length_scales.size()));
    }
    for (Eigen::Index i = 0; i < length_scales.size(); ++i) {
        if (!(length_scales[i] > 0.0) || !std::isfinite(length_scales[i])) {
            throw InvalidArgument("kernel: length scales must be positive");
        }
    }
    if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
        throw InvalidArgument("kernel: signal variance must be positive");
    }
    if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
        throw InvalidArgument("kernel: noise variance must be nonnegative");
    }
}

namespace {

inline double kernel_from_r2(KernelFamily family, double signal_variance, double r2) {
    if (family == KernelFamily::SquaredExponential) {
        return signal_variance * std::exp(-0.5 * r2);
    }
    const double r = std::sqrt(r2);
    const double s5r = std::sqrt(5.0) * r;
    return signal_variance * (1.0 + s5r + 5.0 * r2 / 3.0) * std::exp(-s5r);
}

} // namespace

double KernelSpec::operator()(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) const {
    const double r2 = ((a - b).array() / length_scales.array()).square().sum();
    return kernel_from_r2(family, signal_variance, r2);
}

Eigen::MatrixXd KernelSpec::cross(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const {
    const Eigen::ArrayXd inv = length_scales.array().inverse();
    const Eigen::MatrixXd as = a * inv.matrix().asDiagonal();
    const Eigen::MatrixXd bs = b * inv.matrix().asDiagonal();
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const double r2 = (as.row(i) - bs.row(j)).squaredNorm();
            k(i, j) = kernel_from_r2(family, signal_variance, r2);
        }
    }
    return k;
}

namespace {

constexpr double kJitterLevels[] = {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6};

struct Factored {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
    bool ok = false;
};

Factored factorize(const Eigen::MatrixXd& inputs, const KernelSpec& kernel) {
    Eigen::MatrixXd k = kernel.cross(inputs, inputs);
    k.diagonal().array() += kernel.noise_variance;
    Factored f;
    for (double level : kJitterLevels) {
        Eigen::MatrixXd kj = k;
        const double jitter = level * kernel.signal_variance;
        kj.diagonal().array() += jitter;
        f.llt.compute(kj);
        if (f.llt.info() == Eigen::Success && f.llt.matrixLLT().diagonal().minCoeff() > 0.0) {
            f.jitter = jitter;
            f.ok = true;
            return f;
        }
    }
    return f;
}

double lml_from_factor(const Factored& f, const Eigen::VectorXd& y) {
    const Eigen::VectorXd alpha = f.llt.solve(y);
    const double log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
    return -0.5 * y.dot(alpha) - 0.5 * log_det - 0.5 * static_cast<double>(y.size()) * std::log(2.0 * std::numbers::pi);
}

void check_finite(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
    if (!inputs.allFinite() || !targets.allFinite()) {
        throw InvalidArgument("gp fit: non-finite training data");
    }
}

} // namespace

double log_marginal_likelihood(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const KernelSpec& kernel) {
    const Factored f = factorize(inputs, kernel);
    if (!f.ok) {
        return -std::numeric_limits<double>::infinity();
    }
    return lml_from_factor(f, targets);
}

std::vector<std::size_t> select_active_set(const Eigen::MatrixXd& inputs, std::size_t cap, std::size_t recent,
                                           const std::vector<std::size_t>& must_include) {
    const auto n = static_cast<std::size_t>(inputs.rows());
    std::vector<std::size_t> chosen;
    if (n <= cap) {
        chosen.resize(n);
        for (std::size_t i = 0; i < n; ++i) chosen[i] = i;
        return chosen;
    }
    if (cap == 0) {
        return chosen;
    }
    recent = std::min(recent, cap);
    std::vector<char> taken(n, 0);
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    auto take = [&](std::size_t idx) {
        taken[idx] = 1;
        chosen.push_back(idx);
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i]) {
                min_dist[i] = std::min(min_dist[i], (inputs.row(i) - inputs.row(idx)).squaredNorm());
            }
        }
    };
    for (auto idx : must_include) {
        if (chosen.size() < cap && idx < n && !taken[idx]) {
            take(idx);
        }
    }
    for (std::size_t k = 0; k < n && chosen.size() < cap && k < recent; ++k) {
        if (!taken[n - 1 - k]) {
            take(n - 1 - k);
        }
    }
    if (chosen.empty()) {
        take(n - 1);
    }
    while (chosen.size() < cap) {
        std::size_t best = n;
        double best_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i] && min_dist[i] > best_d) {
                best_d = min_dist[i];
                best = i;
            }
        }
        take(best);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

namespace {

KernelSpec optimize_kernel(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& y, const KernelSpec& start,
                           const FitOptions& options) {
    const Eigen::Index d = inputs.cols();

    Eigen::MatrixXd x = inputs;
    Eigen::VectorXd t = y;
    if (static_cast<std::size_t>(inputs.rows()) > options.hyperparam_subset) {
        const auto idx = select_active_set(inputs, options.hyperparam_subset, 0);
        x.resize(static_cast<Eigen::Index>(idx.size()), d);
        t.resize(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) {
            x.row(static_cast<Eigen::Index>(k)) = inputs.row(static_cast<Eigen::Index>(idx[k]));
            t[static_cast<Eigen::Index>(k)] = y[static_cast<Eigen::Index>(idx[k])];
        }
    }

    // parameters: log length scales (d), log signal variance, log noise variance
    const Eigen::ArrayXd span = (x.colwise().maxCoeff() - x.colwise().minCoeff()).transpose().array().max(1e-12);
    std::vector<double> lower(d + 2), upper(d + 2);
    for (Eigen::Index i = 0; i < d; ++i) {
        lower[i] = std::log(1e-3 * span[i]);
        upper[i] = std::log(1e2 * span[i]);
    }
    lower[d] = std::log(1e-2);
    upper[d] = std::log(1e2);
    lower[d + 1] = std::log(options.min_noise_variance);
    upper[d + 1] = std::log(options.max_noise_variance);

    auto unpack = [&](const std::vector<double>& p) {
        KernelSpec k = start;
        k.length_scales.resize(d);
        for (Eigen::Index i = 0; i < d; ++i) k.length_scales[i] = std::exp(p[i]);
        k.signal_variance = std::exp(p[d]);
        k.noise_variance = std::exp(p[d + 1]);
        return k;
    };
    auto objective = [&](const std::vector<double>& p) { return -log_marginal_likelihood(x, t, unpack(p)); };

    const double scale_factors[] = {0.2, 0.5, 1.5};
    const double noise_starts[] = {1e-4, 1e-2, 1e-3};
    NelderMeadOptions nm;
    nm.max_evaluations = options.max_evaluations_per_start;
    nm.initial_step = 0.1;

    NelderMeadResult best{{}, std::numeric_limits<double>::infinity(), 0};
    for (std::size_t s = 0; s < 3; ++s) {
        std::vector<double> p(d + 2);
        for (Eigen::Index i = 0; i < d; ++i) p[i] = std::log(scale_factors[s] * span[i]);
        p[d] = 0.0;
        p[d + 1] = std::log(std::max(noise_starts[s], options.min_noise_variance));
        auto r = nelder_mead(objective, p, lower, upper, nm);
        if (r.value < best.value) best = std::move(r);
    }
    if (!std::isfinite(best.value)) {
        throw FactorizationError("gp fit: hyperparameter search found no factorizable kernel");
    }
    return unpack(best.x);
}

} // namespace

GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const KernelSpec& kernel, const FitOptions& options) {
    if (inputs.rows() < 1) {
        throw InvalidArgument("gp fit: need at least one training point");
    }
    if (targets.size() != inputs.rows()) {
        throw InvalidArgument("gp fit: " + std::to_string(inputs.rows()) + " inputs but " + std::to_string(targets.size()) +
                              " targets");
    }
    if (options.optimize_hyperparams && inputs.rows() < 3) {
        throw InvalidArgument("gp fit: hyperparameter optimization needs at least 3 points");
    }
    check_finite(inputs, targets);

    GpModel model;
    model.inputs_ = inputs;
    model.targets_ = targets;
    model.standardized_ = options.standardize;

    Eigen::VectorXd y = targets;
    if (options.standardize) {
        model.target_mean_ = targets.mean();
        const double var = (targets.array() - model.target_mean_).square().sum() / static_cast<double>(targets.size());
        model.target_scale_ = var > 1e-300 ? std::sqrt(var) : 1.0;
        y = (targets.array() - model.target_mean_) / model.target_scale_;
    }

    KernelSpec k = kernel;
    if (k.length_scales.size() == 0) {
        k.length_scales = Eigen::VectorXd::Ones(inputs.cols());
    }
    if (options.optimize_hyperparams) {
        k = optimize_kernel(inputs, y, k, options);
    }
    k.validate(inputs.cols());
    model.kernel_ = k;

    Factored f = factorize(inputs, k);
    if (!f.ok) {
        throw FactorizationError("gp fit: kernel matrix not positive definite after jitter up to 1e-6 (n = " +
                                 std::to_string(inputs.rows()) + ")");
    }
    model.factor_ = std::move(f.llt);
    model.jitter_ = f.jitter;
    model.alpha_ = model.factor_.solve(y);
    if (f.jitter > 0.0) {
        // Iterated refinement against the unjittered system so that the mean
        // still reproduces the training targets.
        Eigen::MatrixXd k0 = k.cross(inputs, inputs);
        k0.diagonal().array() += k.noise_variance;
        Eigen::VectorXd r = y - k0 * model.alpha_;
        for (int it = 0; it < 20 && r.lpNorm<Eigen::Infinity>() > 1e-12; ++it) {
            const Eigen::VectorXd step = model.factor_.solve(r);
            const Eigen::VectorXd next = y - k0 * (model.alpha_ + step);
            if (!(next.lpNorm<Eigen::Infinity>() < r.lpNorm<Eigen::Infinity>())) break;
            model.alpha_ += step;
            r = next;
        }
    }
    const double log_det = 2.0 * model.factor_.matrixLLT().diagonal().array().log().sum();
    model.log_marginal_likelihood_ = -0.5 * y.dot(model.alpha_) - 0.5 * log_det -
                                     0.5 * static_cast<double>(y.size()) * std::log(2.0 * std::numbers::pi);
    return model;
}

Prediction GpModel::predict(const Eigen::Ref<const Eigen::VectorXd>& query) const {
    if (query.size() != inputs_.cols()) {
        throw InvalidArgument("gp predict: query has dimension " + std::to_string(query.size()) + ", model has " +
                              std::to_string(inputs_.cols()));
    }
    Eigen::VectorXd k(inputs_.rows());
    for (Eigen::Index i = 0; i < inputs_.rows(); ++i) {
        k[i] = kernel_(inputs_.row(i).transpose(), query);
    }
    const double mean = k.dot(alpha_);
    const Eigen::VectorXd v = factor_.matrixL().solve(k);
    const double var = std::max(0.0, kernel_.signal_variance - v.squaredNorm());
    return {target_mean_ + target_scale_ * mean, target_scale_ * target_scale_ * var};
}

Prediction GpModel::predict(const std::vector<double>& query) const {
    return predict(Eigen::Map<const Eigen::VectorXd>(query.data(), static_cast<Eigen::Index>(query.size())));
}

void GpModel::predict_batch(const Eigen::MatrixXd& queries, Eigen::VectorXd& mean, Eigen::VectorXd& variance) const {
    if (queries.cols() != inputs_.cols()) {
        throw InvalidArgument("gp predict: query has dimension " + std::to_string(queries.cols()) + ", model has " +
                              std::to_string(inputs_.cols()));
    }
    const Eigen::MatrixXd k = kernel_.cross(inputs_, queries); // n x q
    mean = (k.transpose() * alpha_).array() * target_scale_ + target_mean_;
    const Eigen::MatrixXd v = factor_.matrixL().solve(k);
    variance = (kernel_.signal_variance - v.colwise().squaredNorm().transpose().array()).max(0.0) * (target_scale_ * target_scale_);
}

} // namespace codesign::gp
