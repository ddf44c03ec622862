#include "codesign/pipeline/bayes_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "codesign/common/error.hpp"
#include "codesign/common/lhs.hpp"
#include "codesign/common/nelder_mead.hpp"
#include "codesign/common/random.hpp"
#include "codesign/gp/gaussian_process.hpp"

namespace codesign::pipeline {

void BoConfig::validate() const {
    if (seed_points < 3) throw ConfigError("bo.seed_points", "need at least 3 seed points");
    if (active_set < 3) throw ConfigError("bo.active_set", "active set must hold at least 3 points");
    if (acquisition_candidates < 1) throw ConfigError("bo.acquisition_candidates", "need at least one candidate");
    if (!(noise_inflation_factor > 1.0)) throw ConfigError("bo.noise_inflation_factor", "must exceed 1");
}

double expected_improvement(double mean, double sd, double incumbent) {
    const double improvement = incumbent - mean;
    if (sd <= 1e-12) {
        return std::max(0.0, improvement);
    }
    const double z = improvement / sd;
    const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return std::max(0.0, improvement * cdf + sd * pdf);
}

namespace {

struct Sample {
    std::vector<double> x;
    double y;
};

/// Best half by value, then the most recent points.
std::vector<std::size_t> response_active_set(const std::vector<Sample>& samples, std::size_t cap) {
    const std::size_t n = samples.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (n <= cap) return idx;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return samples[a].y < samples[b].y; });
    std::vector<char> take(n, 0);
    std::size_t count = 0;
    for (std::size_t k = 0; k < cap / 2; ++k, ++count) take[idx[k]] = 1;
    for (std::size_t i = n; i-- > 0 && count < cap;) {
        if (!take[i]) {
            take[i] = 1;
            ++count;
        }
    }
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < n; ++i)
        if (take[i]) chosen.push_back(i);
    return chosen;
}

gp::GpModel fit_response(const std::vector<Sample>& samples, const std::vector<std::size_t>& idx, std::size_t dim,
                         const gp::KernelSpec* fixed) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(dim));
    Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        for (std::size_t d = 0; d < dim; ++d) x(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d)) = samples[idx[k]].x[d];
        y[static_cast<Eigen::Index>(k)] = samples[idx[k]].y;
    }
    if (fixed != nullptr) {
        return gp::fit(x, y, *fixed);
    }
    gp::KernelSpec kernel;
    kernel.family = gp::KernelFamily::Matern52;
    kernel.length_scales = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), 0.3);
    gp::FitOptions options;
    options.optimize_hyperparams = true;
    options.min_noise_variance = 1e-6;
    options.max_evaluations_per_start = 200;
    return gp::fit(x, y, kernel, options);
}

struct Proposal {
    std::vector<double> x;
    double ei = 0.0;
};

Proposal maximize_ei(const gp::GpModel& model, double incumbent, const std::vector<Sample>& samples, std::size_t dim,
                     const BoConfig& config, Rng& rng) {
    const std::size_t m = config.acquisition_candidates;
    Eigen::MatrixXd q(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(dim));
    // half global, half local around the best samples
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return samples[a].y < samples[b].y; });
    const std::size_t elite = std::min<std::size_t>(5, samples.size());
    for (std::size_t i = 0; i < m; ++i) {
        const bool local = i >= m / 2;
        const auto& centre = samples[order[i % elite]].x;
        for (std::size_t d = 0; d < dim; ++d) {
            const double v = local ? centre[d] + 0.05 * standard_normal(rng) : uniform01(rng);
            q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = std::clamp(v, 0.0, 1.0);
        }
    }
    Eigen::VectorXd mean, var;
    model.predict_batch(q, mean, var);
    std::size_t best = 0;
    double best_ei = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double ei = expected_improvement(mean[ii], std::sqrt(var[ii]), incumbent);
        if (ei > best_ei) {
            best_ei = ei;
            best = i;
        }
    }
    std::vector<double> start(dim);
    for (std::size_t d = 0; d < dim; ++d) start[d] = q(static_cast<Eigen::Index>(best), static_cast<Eigen::Index>(d));

    const std::vector<double> lo(dim, 0.0), hi(dim, 1.0);
    NelderMeadOptions nm;
    nm.max_evaluations = 150;
    nm.initial_step = 0.02;
    auto neg_ei = [&](const std::vector<double>& x) {
        const auto p = model.predict(x);
        return -expected_improvement(p.mean, std::sqrt(p.variance), incumbent);
    };
    const auto polished = nelder_mead(neg_ei, start, lo, hi, nm);
    if (-polished.value > best_ei) {
        return {polished.x, -polished.value};
    }
    return {start, best_ei};
}

double sample_std(const std::vector<Sample>& samples, const std::vector<std::size_t>& idx) {
    double mean = 0.0;
    for (auto i : idx) mean += samples[i].y;
    mean /= static_cast<double>(idx.size());
    double ss = 0.0;
    for (auto i : idx) ss += (samples[i].y - mean) * (samples[i].y - mean);
    return std::sqrt(ss / static_cast<double>(idx.size()));
}

} // namespace

BoResult bayes_optimize(const std::function<double(const std::vector<double>&)>& objective, std::size_t dimension,
                        const BoConfig& config) {
    config.validate();
    if (dimension < 1) throw InvalidArgument("bayes_optimize: dimension must be at least 1");

    BoResult result;
    std::vector<Sample> samples;
    double incumbent = std::numeric_limits<double>::infinity();

    auto record = [&](std::vector<double> x, bool is_seed, double ei, std::size_t inflations) {
        const double y = objective(x);
        if (!std::isfinite(y)) {
            throw SolverError("bayes_optimize: objective returned a non-finite value at evaluation " +
                              std::to_string(samples.size()));
        }
        if (y < incumbent) {
            incumbent = y;
            result.best_point = x;
            result.best_value = y;
        }
        result.trace.push_back({samples.size(), x, y, incumbent, is_seed, ei, inflations});
        samples.push_back({std::move(x), y});
    };

    Rng seed_rng = make_rng(config.seed, {0xB0, 0});
    for (auto& x : latin_hypercube(config.seed_points, dimension, seed_rng)) {
        record(std::move(x), true, 0.0, 0);
    }

    for (std::size_t it = 0; it < config.max_iterations; ++it) {
        Rng rng = make_rng(config.seed, {0xB0, it + 1});
        const auto idx = response_active_set(samples, config.active_set);
        gp::GpModel model = fit_response(samples, idx, dimension, nullptr);
        Proposal proposal = maximize_ei(model, incumbent, samples, dimension, config, rng);

        const double stall = config.ei_stall_threshold * std::max(sample_std(samples, idx), 1e-12);
        std::size_t inflations = 0;
        gp::KernelSpec inflated = model.kernel();
        while (proposal.ei < stall && inflations < config.max_noise_inflations) {
            ++inflations;
            inflated.noise_variance = std::max(inflated.noise_variance, 1e-6) * config.noise_inflation_factor;
            const gp::GpModel noisy = fit_response(samples, idx, dimension, &inflated);
            proposal = maximize_ei(noisy, incumbent, samples, dimension, config, rng);
        }

        const bool repeat = std::any_of(samples.begin(), samples.end(), [&](const Sample& s) {
            double d2 = 0.0;
            for (std::size_t d = 0; d < dimension; ++d) d2 += (s.x[d] - proposal.x[d]) * (s.x[d] - proposal.x[d]);
            return d2 < 1e-12;
        });
        if (repeat) {
            for (auto& v : proposal.x) v = uniform01(rng);
        }
        record(std::move(proposal.x), false, proposal.ei, inflations);
    }
    return result;
}

} // namespace codesign::pipeline
