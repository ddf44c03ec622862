#ifndef CODESIGN_GP_GAUSSIAN_PROCESS_HPP
#define CODESIGN_GP_GAUSSIAN_PROCESS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace codesign::gp {

enum class KernelFamily { SquaredExponential, Matern52 };

const char* to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Stationary ARD kernel. Variances refer to standardized targets when the
/// model standardizes.
struct KernelSpec {
    KernelFamily family = KernelFamily::SquaredExponential;
    Eigen::VectorXd length_scales;
    double signal_variance = 1.0;
    double noise_variance = 0.0;

    void validate(Eigen::Index dimension) const;
    double operator()(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) const;
    /// Cross-covariance matrix k(A_i, B_j).
    Eigen::MatrixXd cross(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const;
};

struct FitOptions {
    /// Center and scale targets; the posterior is mapped back in predict.
    bool standardize = true;
    bool optimize_hyperparams = false;
    /// Hyperparameter search uses at most this many space-filling points.
    std::size_t hyperparam_subset = 256;
    std::size_t max_evaluations_per_start = 300;
    double min_noise_variance = 1e-8;
    double max_noise_variance = 1.0;
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// Immutable GP regressor. Built by fit(); predict is const and thread safe.
class GpModel {
public:
    GpModel() = default;

    Prediction predict(const Eigen::Ref<const Eigen::VectorXd>& query) const;
    Prediction predict(const std::vector<double>& query) const;
    /// Batched posterior for the rows of `queries`.
    void predict_batch(const Eigen::MatrixXd& queries, Eigen::VectorXd& mean, Eigen::VectorXd& variance) const;

    double log_marginal_likelihood() const { return log_marginal_likelihood_; }
    const KernelSpec& kernel() const { return kernel_; }
    const Eigen::MatrixXd& inputs() const { return inputs_; }
    const Eigen::VectorXd& targets() const { return targets_; }
    Eigen::Index dimension() const { return inputs_.cols(); }
    Eigen::Index size() const { return inputs_.rows(); }
    double target_mean() const { return target_mean_; }
    double target_scale() const { return target_scale_; }
    /// Diagonal jitter that was needed for the factorization (0 if none).
    double jitter() const { return jitter_; }
    bool standardized() const { return standardized_; }

private:
    friend GpModel fit(const Eigen::MatrixXd&, const Eigen::VectorXd&, const KernelSpec&, const FitOptions&);

    KernelSpec kernel_;
    Eigen::MatrixXd inputs_;
    Eigen::VectorXd targets_;
    Eigen::LLT<Eigen::MatrixXd> factor_;
    Eigen::VectorXd alpha_;
    double target_mean_ = 0.0;
    double target_scale_ = 1.0;
    double jitter_ = 0.0;
    double log_marginal_likelihood_ = 0.0;
    bool standardized_ = true;
};

/// Fits a GP to `inputs` (n x d) and `targets` (n). Cholesky failures are
/// retried with diagonal jitter 1e-10, 1e-9, ..., 1e-6 (relative to the
/// signal variance) before a FactorizationError is raised. With
/// optimize_hyperparams the log marginal likelihood is maximized over log
/// length scales, log signal variance and log noise variance by multi-start
/// Nelder-Mead; starts are deterministic.
GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const KernelSpec& kernel,
            const FitOptions& options = {});

/// Log marginal likelihood of standardized `targets` under `kernel`;
/// -inf when the kernel matrix cannot be factorized.
double log_marginal_likelihood(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const KernelSpec& kernel);

/// Indices of at most `cap` rows: `must_include` first, then the `recent`
/// last rows, then rows added greedily to maximize the minimum distance to
/// the rows already chosen. Returns all indices in ascending order when
/// rows <= cap; otherwise the chosen indices in ascending order.
std::vector<std::size_t> select_active_set(const Eigen::MatrixXd& inputs, std::size_t cap, std::size_t recent,
                                           const std::vector<std::size_t>& must_include = {});

} // namespace codesign::gp

#endif
