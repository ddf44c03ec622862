#include <doctest.h>

#include <cmath>

#include "codesign/common/error.hpp"
#include "codesign/common/random.hpp"
#include "codesign/gp/gaussian_process.hpp"

using namespace codesign;
using namespace codesign::gp;

namespace {

KernelSpec unit_kernel(KernelFamily family, Eigen::Index d, double noise = 0.0) {
    KernelSpec k;
    k.family = family;
    k.length_scales = Eigen::VectorXd::Ones(d);
    k.signal_variance = 1.0;
    k.noise_variance = noise;
    return k;
}

FitOptions raw() {
    FitOptions o;
    o.standardize = false;
    return o;
}

// Dense Gaussian elimination with partial pivoting; no Eigen decompositions.
std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        }
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

Prediction oracle(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KernelSpec& k, const Eigen::VectorXd& q) {
    const auto n = static_cast<std::size_t>(x.rows());
    std::vector<std::vector<double>> kk(n, std::vector<double>(n));
    std::vector<double> kq(n), yy(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            kk[i][j] = k(x.row(static_cast<Eigen::Index>(i)).transpose(), x.row(static_cast<Eigen::Index>(j)).transpose());
        }
        kk[i][i] += k.noise_variance;
        kq[i] = k(x.row(static_cast<Eigen::Index>(i)).transpose(), q);
        yy[i] = y[static_cast<Eigen::Index>(i)];
    }
    const auto alpha = gauss_solve(kk, yy);
    const auto v = gauss_solve(kk, kq);
    double mean = 0.0, red = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean += kq[i] * alpha[i];
        red += kq[i] * v[i];
    }
    return {mean, k.signal_variance - red};
}

} // namespace

TEST_SUITE("gp") {

TEST_CASE("kernel names round trip") {
    for (auto f : {KernelFamily::SquaredExponential, KernelFamily::Matern52}) {
        CHECK(kernel_family_from_string(to_string(f)) == f);
    }
    CHECK_THROWS_AS(kernel_family_from_string("rbf"), InvalidArgument);
}

TEST_CASE("single point interpolates its target") {
    Eigen::MatrixXd x(1, 2);
    x << 0.3, -0.4;
    Eigen::VectorXd y(1);
    y << 2.5;
    for (auto f : {KernelFamily::SquaredExponential, KernelFamily::Matern52}) {
        const auto m = fit(x, y, unit_kernel(f, 2));
        CHECK(m.predict(std::vector<double>{0.3, -0.4}).mean == doctest::Approx(2.5));
    }
}

// Frozen values from tests/oracles/oracles.py (numpy direct solve).
TEST_CASE("three-point fixture matches the direct-solve oracle") {
    Eigen::MatrixXd x(3, 2);
    x << 0.0, 0.0, 1.0, 0.5, 0.3, 1.2;
    Eigen::VectorXd y(3);
    y << 1.0, -0.5, 2.0;
    const auto m = fit(x, y, unit_kernel(KernelFamily::SquaredExponential, 2), raw());
    const auto p = m.predict(std::vector<double>{0.5, 0.5});
    CHECK(std::abs(p.mean - 0.6807359812208437) < 1e-10);
    CHECK(std::abs(p.variance - 0.04266567995605963) < 1e-10);
}

TEST_CASE("factorized predict agrees with Gaussian elimination on random fixtures") {
    Rng rng = make_rng(17, {});
    for (int trial = 0; trial < 30; ++trial) {
        const auto n = static_cast<Eigen::Index>(1 + uniform_index(rng, 64));
        const auto d = static_cast<Eigen::Index>(1 + uniform_index(rng, 3));
        Eigen::MatrixXd x(n, d);
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index k = 0; k < d; ++k) x(i, k) = uniform(rng, -3.0, 3.0);
            y[i] = standard_normal(rng);
        }
        auto k = unit_kernel(trial % 2 ? KernelFamily::Matern52 : KernelFamily::SquaredExponential, d, 1e-3);
        k.length_scales *= 0.7;
        const auto m = fit(x, y, k, raw());
        Eigen::VectorXd q(d);
        for (Eigen::Index c = 0; c < d; ++c) q[c] = uniform(rng, -3.0, 3.0);
        const auto got = m.predict(q);
        const auto want = oracle(x, y, m.kernel(), q);
        CHECK(std::abs(got.mean - want.mean) < 1e-8);
        CHECK(std::abs(got.variance - std::max(0.0, want.variance)) < 1e-8);
    }
}

TEST_CASE("noiseless training points are interpolated") {
    Rng rng = make_rng(3, {});
    Eigen::MatrixXd x(25, 2);
    Eigen::VectorXd y(25);
    for (Eigen::Index i = 0; i < 25; ++i) {
        x(i, 0) = uniform(rng, 0, 4);
        x(i, 1) = uniform(rng, 0, 4);
        y[i] = std::sin(x(i, 0)) * std::cos(x(i, 1));
    }
    const auto m = fit(x, y, unit_kernel(KernelFamily::SquaredExponential, 2));
    for (Eigen::Index i = 0; i < 25; ++i) {
        const auto p = m.predict(Eigen::VectorXd(x.row(i).transpose()));
        CHECK(std::abs(p.mean - y[i]) < 1e-6);
        CHECK(p.variance < 1e-8);
    }
}

TEST_CASE("sin on [0, 3] from 20 samples predicts held-out points") {
    Eigen::MatrixXd x(20, 1);
    Eigen::VectorXd y(20);
    for (Eigen::Index i = 0; i < 20; ++i) {
        x(i, 0) = 3.0 * static_cast<double>(i) / 19.0;
        y[i] = std::sin(x(i, 0));
    }
    const auto m = fit(x, y, unit_kernel(KernelFamily::SquaredExponential, 1));
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double q = 3.0 * (i + 0.5) / 50.0;
        worst = std::max(worst, std::abs(m.predict(std::vector<double>{q}).mean - std::sin(q)));
    }
    CHECK(worst < 1e-2);
}

TEST_CASE("far queries revert to the prior") {
    Eigen::MatrixXd x(3, 1);
    x << 0.0, 0.5, 1.0;
    Eigen::VectorXd y(3);
    y << 1.0, 2.0, 0.5;
    const auto m = fit(x, y, unit_kernel(KernelFamily::SquaredExponential, 1), raw());
    const auto p = m.predict(std::vector<double>{100.0});
    CHECK(std::abs(p.mean) < 1e-9);
    CHECK(p.variance == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("posterior variance is bounded and shrinks with more data") {
    Rng rng = make_rng(8, {});
    Eigen::MatrixXd x(12, 2);
    Eigen::VectorXd y(12);
    for (Eigen::Index i = 0; i < 12; ++i) {
        x(i, 0) = uniform(rng, 0, 3);
        x(i, 1) = uniform(rng, 0, 3);
        y[i] = standard_normal(rng);
    }
    const auto k = unit_kernel(KernelFamily::Matern52, 2);
    const auto small = fit(x.topRows(11), y.head(11), k, raw());
    const auto full = fit(x, y, k, raw());
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> q{uniform(rng, -1, 4), uniform(rng, -1, 4)};
        const double v_small = small.predict(q).variance;
        const double v_full = full.predict(q).variance;
        CHECK(v_small <= 1.0 + 1e-9);
        CHECK(v_full <= v_small + 1e-9);
    }
}

TEST_CASE("conflicting duplicates are resolved by jitter") {
    Eigen::MatrixXd x(2, 1);
    x << 0.5, 0.5;
    Eigen::VectorXd y(2);
    y << 1.0, 2.0;
    const auto m = fit(x, y, unit_kernel(KernelFamily::SquaredExponential, 1), raw());
    CHECK(m.jitter() > 0.0);
    CHECK(m.predict(std::vector<double>{0.5}).mean == doctest::Approx(1.5).epsilon(1e-3));
}

TEST_CASE("invalid input is rejected") {
    Eigen::MatrixXd x(2, 1);
    x << 0.0, std::nan("");
    Eigen::VectorXd y(2);
    y << 1.0, 2.0;
    CHECK_THROWS_AS(fit(x, y, unit_kernel(KernelFamily::SquaredExponential, 1)), InvalidArgument);
    x << 0.0, 1.0;
    const auto m = fit(x, y, unit_kernel(KernelFamily::SquaredExponential, 1));
    CHECK_THROWS_AS(m.predict(std::vector<double>{0.0, 1.0}), InvalidArgument);
}

TEST_CASE("hyperparameter search raises the marginal likelihood") {
    Rng rng = make_rng(2, {});
    Eigen::MatrixXd x(40, 1);
    Eigen::VectorXd y(40);
    for (Eigen::Index i = 0; i < 40; ++i) {
        x(i, 0) = uniform(rng, 0, 10);
        y[i] = std::sin(0.6 * x(i, 0)) + 0.05 * standard_normal(rng);
    }
    auto k = unit_kernel(KernelFamily::Matern52, 1, 1e-2);
    k.length_scales[0] = 0.05;
    const auto plain = fit(x, y, k);
    FitOptions o;
    o.optimize_hyperparams = true;
    const auto tuned = fit(x, y, k, o);
    CHECK(tuned.log_marginal_likelihood() > plain.log_marginal_likelihood());
    CHECK(tuned.kernel().length_scales[0] > 0.5);
}

TEST_CASE("active set keeps required and recent points and caps the size") {
    Eigen::MatrixXd x(100, 1);
    for (Eigen::Index i = 0; i < 100; ++i) x(i, 0) = static_cast<double>(i);
    const auto idx = select_active_set(x, 30, 10, {3});
    CHECK(idx.size() == 30);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::find(idx.begin(), idx.end(), 3) != idx.end());
    for (std::size_t r = 90; r < 100; ++r) CHECK(std::find(idx.begin(), idx.end(), r) != idx.end());
    CHECK(select_active_set(x.topRows(20), 30, 10).size() == 20);
}

}
