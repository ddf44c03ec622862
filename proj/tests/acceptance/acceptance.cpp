// acceptance --criterion N [--cli path]
// Prints one "criterion N: PASS|FAIL ..." line; exit status 0 on PASS.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/LU>

#include "codesign/common/random.hpp"
#include "codesign/gp/gaussian_process.hpp"
#include "codesign/io/config.hpp"
#include "codesign/io/json_io.hpp"
#include "codesign/io/stages.hpp"
#include "codesign/moo/pareto.hpp"
#include "codesign/pipeline/cbm.hpp"
#include "codesign/pipeline/explore.hpp"
#include "codesign/pipeline/frontier.hpp"
#include "codesign/sim/behavior.hpp"

using namespace codesign;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("codesign_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

io::RunConfig config_file(const std::string& name, std::optional<std::uint64_t> seed = std::nullopt) {
    return io::load_config(fs::path(CODESIGN_CONFIG_DIR) / name, seed);
}

Verdict alpha_exactness() {
    const auto start = Clock::now();
    Rng rng = make_rng(101, {});
    double worst = 0.0, worst_half = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const sim::BehaviorHyperparams p{uniform(rng, 5.0, 15.0), uniform(rng, 0.1, 0.9)};
        const double t_max = uniform(rng, 100.0, 20000.0);
        const double tau = uniform01(rng);
        const double direct = 1.0 / (1.0 + std::exp(-p.a * (tau * t_max / t_max - p.b)));
        worst = std::max(worst, std::abs(sim::alpha(tau * t_max, t_max, p) - direct));
        worst_half = std::max(worst_half, std::abs(sim::alpha(p.b * t_max, t_max, p) - 0.5));
    }
    const double secs = seconds_since(start);
    return {worst <= 1e-12 && worst_half <= 1e-12 && secs < 1.0,
            "max |alpha - direct| " + fmt(worst) + ", max |alpha(b T) - 0.5| " + fmt(worst_half) + ", " + fmt(secs) + " s"};
}

// Peels maximal elements one layer at a time by pairwise dominance checks.
std::vector<std::vector<std::size_t>> brute_force_fronts(const std::vector<std::vector<double>>& pts) {
    auto dominated = [](const std::vector<double>& a, const std::vector<double>& b) {
        bool strict = false;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k] < b[k]) return false;
            if (a[k] > b[k]) strict = true;
        }
        return strict;
    };
    std::vector<std::size_t> left(pts.size());
    for (std::size_t i = 0; i < left.size(); ++i) left[i] = i;
    std::vector<std::vector<std::size_t>> fronts;
    while (!left.empty()) {
        std::vector<std::size_t> front, rest;
        for (auto i : left) {
            bool beaten = false;
            for (auto j : left) {
                if (dominated(pts[j], pts[i])) {
                    beaten = true;
                    break;
                }
            }
            (beaten ? rest : front).push_back(i);
        }
        fronts.push_back(front);
        left = rest;
    }
    return fronts;
}

Verdict nsga_oracle() {
    const auto start = Clock::now();
    Rng rng = make_rng(202, {});
    std::size_t mismatches = 0, largest = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + uniform_index(rng, 500);
        const std::size_t m = 1 + uniform_index(rng, 4);
        const bool ties = trial % 3 == 0;
        std::vector<std::vector<double>> pts(n, std::vector<double>(m));
        for (auto& p : pts) {
            for (auto& v : p) v = ties ? static_cast<double>(uniform_index(rng, 6)) : uniform01(rng);
        }
        largest = std::max(largest, n);
        if (moo::fast_nondominated_sort(pts) != brute_force_fronts(pts)) ++mismatches;
    }
    const double secs = seconds_since(start);
    return {mismatches == 0 && secs < 30.0,
            std::to_string(mismatches) + " mismatching populations of 200 (largest n " + std::to_string(largest) + "), " +
                fmt(secs) + " s"};
}

// Kernel formulas written out independently of the library.
double kernel_value(gp::KernelFamily family, const Eigen::VectorXd& ls, double sf2, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b) {
    const double r = ((a - b).array() / ls.array()).matrix().norm();
    if (family == gp::KernelFamily::SquaredExponential) return sf2 * std::exp(-0.5 * r * r);
    const double s = std::sqrt(5.0) * r;
    return sf2 * (1.0 + s + s * s / 3.0) * std::exp(-s);
}

Verdict gp_correctness() {
    const auto start = Clock::now();
    Rng rng = make_rng(303, {});
    double interp = 0.0, mean_err = 0.0, var_err = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto n = static_cast<Eigen::Index>(2 + uniform_index(rng, 63));
        const auto d = static_cast<Eigen::Index>(1 + uniform_index(rng, 3));
        const auto family = trial % 2 ? gp::KernelFamily::Matern52 : gp::KernelFamily::SquaredExponential;
        Eigen::MatrixXd x(n, d);
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index k = 0; k < d; ++k) x(i, k) = uniform(rng, 0.0, 5.0);
            y[i] = 3.0 + std::sin(x.row(i).sum()) + 0.2 * x(i, 0);
        }
        gp::KernelSpec k;
        k.family = family;
        k.length_scales = Eigen::VectorXd::Constant(d, uniform(rng, 0.4, 1.2));
        k.signal_variance = uniform(rng, 0.5, 2.0);

        // noiseless: training targets reproduced
        k.noise_variance = 0.0;
        const auto exact = gp::fit(x, y, k);
        for (Eigen::Index i = 0; i < n; ++i) {
            interp = std::max(interp, std::abs(exact.predict(Eigen::VectorXd(x.row(i).transpose())).mean - y[i]));
        }

        // noisy: compare with an LU solve of the standardized system
        k.noise_variance = 1e-3;
        const auto model = gp::fit(x, y, k);
        const double mu = model.target_mean(), s = model.target_scale();
        Eigen::MatrixXd kk(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                kk(i, j) = kernel_value(family, k.length_scales, k.signal_variance, x.row(i).transpose(), x.row(j).transpose());
            }
            kk(i, i) += k.noise_variance + model.jitter();
        }
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(kk);
        const Eigen::VectorXd w = lu.solve(((y.array() - mu) / s).matrix());
        for (int q = 0; q < 5; ++q) {
            Eigen::VectorXd p(d);
            for (Eigen::Index c = 0; c < d; ++c) p[c] = uniform(rng, -0.5, 5.5);
            Eigen::VectorXd kq(n);
            for (Eigen::Index i = 0; i < n; ++i) kq[i] = kernel_value(family, k.length_scales, k.signal_variance, x.row(i).transpose(), p);
            const double want_mean = mu + s * kq.dot(w);
            const double want_var = std::max(0.0, s * s * (k.signal_variance - kq.dot(lu.solve(kq))));
            const auto got = model.predict(p);
            mean_err = std::max(mean_err, std::abs(got.mean - want_mean));
            var_err = std::max(var_err, std::abs(got.variance - want_var));
        }
    }
    const double secs = seconds_since(start);
    return {interp < 1e-6 && mean_err < 1e-8 && var_err < 1e-8 && secs < 10.0,
            "interpolation " + fmt(interp) + ", mean " + fmt(mean_err) + ", variance " + fmt(var_err) + ", " + fmt(secs) + " s"};
}

Verdict penalty_arithmetic() {
    const auto start = Clock::now();
    const morphology::MorphologyModel model(morphology::ModelConstants::load_default());
    moo::NsgaConfig nsga;
    nsga.population_size = 40;
    nsga.max_iterations = 30;
    nsga.repeat_runs = 2;
    const auto surrogate = pipeline::fit_talent_frontier(pipeline::explore_talents(nsga, model));

    // Sources in the far corner of the large arena, beyond a minimum-range robot.
    std::vector<sim::Scenario> scenarios;
    for (std::uint64_t i = 0; i < 20; ++i) {
        sim::Scenario s;
        s.field = {1 + static_cast<int>(i % 2), {14.0 - 0.1 * static_cast<double>(i), 14.0}, 60.0,
                   i % 2 ? std::vector<double>{3.0, 2.0, 0.5} : std::vector<double>{3.0}};
        s.arena = {30.0, 30.0};
        s.swarm_size = 6 + i % 10;
        s.observation_noise_std = 1.2;
        s.seed = derive_seed(404, {i});
        scenarios.push_back(s);
    }
    const pipeline::CbmDesignPoint point{{8.9, 4.5, 100.0}, {10.0, 0.5}};
    const auto e = pipeline::cbm_objective(point, scenarios, surrogate, {});
    const double secs = seconds_since(start);
    return {e.objective == 1e6 && e.feasible && e.simulated && e.successes == 0 && secs < 120.0,
            "objective " + fmt(e.objective) + ", g1 " + fmt(e.g1) + (e.feasible ? " (feasible)" : " (infeasible)") + ", " +
                std::to_string(e.successes) + " successes, " + fmt(secs) + " s"};
}

Verdict constraint_satisfaction() {
    const auto dir = scratch("c5");
    const auto config = config_file("desk.json");
    const auto report = io::run_stage(config, io::Stage::Full, dir);
    const auto eval = io::evaluation_from_json(io::read_json(dir / io::files::kEvaluation));
    bool steps = report.cbm->steps_within_bound, paths = report.cbm->paths_within_range;
    for (const auto& c : eval.configurations) {
        steps = steps && c.steps_within_bound;
        paths = paths && c.paths_within_range;
    }
    const auto& cbm = *report.cbm;
    return {steps && paths && cbm.g1 <= cbm.g1_tolerance,
            std::string("steps ") + (steps ? "ok" : "violated") + ", paths " + (paths ? "ok" : "violated") + " over " +
                std::to_string(cbm.simulated_searches) + " training searches, g1 " + fmt(cbm.g1) + " <= " + fmt(cbm.g1_tolerance)};
}

Verdict codesign_benefit() {
    int wins = 0;
    std::string detail;
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto dir = scratch("c6_" + std::to_string(seed));
        const auto report = io::run_stage(config_file("desk.json", seed), io::Stage::Full, dir);
        double codesign = -1.0, baseline = -1.0;
        for (const auto& c : report.comparison) {
            if (c.label == "codesign") codesign = c.success_rate;
            if (c.label == "baseline") baseline = c.success_rate;
        }
        if (codesign >= baseline) ++wins;
        detail += "seed " + std::to_string(seed) + ": " + fmt(codesign) + " vs " + fmt(baseline) + "; ";
    }
    return {wins >= 2, detail + std::to_string(wins) + "/3 seeds at or above the baseline"};
}

Verdict calibration_anchors() {
    const auto start = Clock::now();
    const morphology::MorphologyModel model(morphology::ModelConstants::load_default());
    double worst = 0.0;
    const std::pair<morphology::MorphologyDesign, morphology::TalentVector> anchors[] = {
        {morphology::baseline_design(), morphology::baseline_talents()},
        {morphology::reference_final_design(), morphology::reference_final_talents()}};
    for (const auto& [design, reported] : anchors) {
        const auto got = model.evaluate_talents(design).to_array();
        const auto want = reported.to_array();
        for (std::size_t k = 0; k < got.size(); ++k) worst = std::max(worst, std::abs(got[k] - want[k]) / want[k]);
    }
    const double secs = seconds_since(start);
    return {worst <= 0.15 && secs < 1.0, "largest relative error " + fmt(worst) + " over 6 talents, " + fmt(secs) + " s"};
}

std::map<std::string, std::string> directory_contents(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file() || e.path().filename() == io::files::kTimings) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        out[e.path().filename().string()] = s.str();
    }
    return out;
}

Verdict determinism(const std::string& cli) {
    if (cli.empty()) return {false, "--cli not given"};
    const std::string config = (fs::path(CODESIGN_CONFIG_DIR) / "tiny.json").string();
    std::vector<std::map<std::string, std::string>> runs;
    for (const auto& [name, workers] : std::vector<std::pair<std::string, int>>{{"w1", 1}, {"w4", 4}, {"w1_again", 1}}) {
        const auto dir = scratch("c8_" + name);
        const std::string cmd = "\"" + cli + "\" full --config \"" + config + "\" --out \"" + dir.string() +
                                "\" --workers " + std::to_string(workers) + " > /dev/null";
        if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
        runs.push_back(directory_contents(dir));
    }
    std::string diff;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        for (const auto& [file, text] : runs[0]) {
            auto it = runs[r].find(file);
            if (it == runs[r].end() || it->second != text) diff += " " + file;
        }
        if (runs[r].size() != runs[0].size()) diff += " (file sets differ)";
    }
    return {diff.empty() && runs[0].size() >= 11,
            diff.empty() ? std::to_string(runs[0].size()) + " files identical across workers 1, 4 and a rerun"
                         : "differing:" + diff};
}

Verdict archive_scale() {
    const auto start = Clock::now();
    const morphology::MorphologyModel model(morphology::ModelConstants::load_default());
    moo::NsgaConfig nsga; // 200 x 75 generations x 5 runs
    nsga.seed = io::stage_seeds(1).explore;
    const auto archive = pipeline::explore_talents(nsga, model);
    const double secs = seconds_since(start);
    return {archive.size() >= 300 && archive.size() <= 5000,
            "archive holds " + std::to_string(archive.size()) + " non-dominated designs, " + fmt(secs) + " s"};
}

Verdict nested_cost() {
    const auto dir = scratch("c10");
    const auto report = io::run_stage(config_file("desk.json"), io::Stage::Full, dir);
    if (!report.nested_cost) return {false, "no nested cost estimate in the report"};
    const auto& n = *report.nested_cost;
    return {n.speedup > 10.0, "nested " + fmt(n.nested_seconds) + " s vs sequential " + fmt(n.sequential_seconds) +
                                  " s, speedup " + fmt(n.speedup) + "x"};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    int criterion = 0;
    std::string cli;
    app.add_option("--criterion", criterion, "criterion number")->required()->check(CLI::Range(1, 10));
    app.add_option("--cli", cli, "path to the codesign executable");
    CLI11_PARSE(app, argc, argv);

    const std::map<int, std::function<Verdict()>> checks{
        {1, alpha_exactness},     {2, nsga_oracle},          {3, gp_correctness},
        {4, penalty_arithmetic},  {5, constraint_satisfaction}, {6, codesign_benefit},
        {7, calibration_anchors}, {8, [&] { return determinism(cli); }}, {9, archive_scale},
        {10, nested_cost}};
    Verdict v;
    try {
        v = checks.at(criterion)();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << criterion << ": " << (v.pass ? "PASS" : "FAIL") << " " << v.detail << std::endl;
    return v.pass ? 0 : 1;
}
