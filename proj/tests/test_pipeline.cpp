#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "codesign/common/error.hpp"
#include "codesign/common/lhs.hpp"
#include "codesign/common/random.hpp"
#include "codesign/moo/pareto.hpp"
#include "codesign/pipeline/bayes_opt.hpp"
#include "codesign/pipeline/cbm.hpp"
#include "codesign/pipeline/explore.hpp"
#include "codesign/pipeline/finalize.hpp"
#include "codesign/pipeline/frontier.hpp"

using namespace codesign;
using namespace codesign::pipeline;
using morphology::TalentVector;

namespace {

moo::NsgaConfig desk_nsga() {
    moo::NsgaConfig c;
    c.population_size = 40;
    c.max_iterations = 30;
    c.repeat_runs = 2;
    c.seed = 11;
    return c;
}

const morphology::MorphologyModel& model() {
    static const morphology::MorphologyModel m(morphology::ModelConstants::load_default());
    return m;
}

const TalentArchive& desk_archive() {
    static const TalentArchive a = explore_talents(desk_nsga(), model());
    return a;
}

double planar_range(double speed, double detection) { return 30.0 - speed - 0.01 * detection; }

// LHS over (speed, detection) with range on the plane 30 - Y2 - 0.01 Y3.
TalentArchive planar_archive(std::size_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed, {});
    const morphology::TalentBounds box;
    TalentArchive archive;
    for (const auto& u : latin_hypercube(n, 2, rng)) {
        const double s = box.cruise_speed.lower + u[0] * box.cruise_speed.width();
        const double d = box.detection_distance.lower + u[1] * box.detection_distance.width();
        archive.entries.push_back({{0, 0, 0, 0, 0, 0}, {planar_range(s, d), s, d}});
    }
    return archive;
}

const FrontierSurrogate& planar_surrogate() {
    static const FrontierSurrogate s = fit_talent_frontier(planar_archive(60, 2));
    return s;
}

sim::Scenario far_source(std::uint64_t seed) {
    sim::Scenario s;
    s.field = {1, {14.0, 14.0}, 40.0, {2.0}};
    s.arena = {30.0, 30.0};
    s.swarm_size = 2;
    s.observation_noise_std = 0.8;
    s.seed = seed;
    return s;
}

} // namespace

TEST_SUITE("pipeline") {

TEST_CASE("explore returns a non-dominated talent archive reaching the detection ceiling") {
    const auto before = morphology::evaluation_count();
    const auto& archive = desk_archive();
    (void)before;
    REQUIRE_FALSE(archive.empty());
    const morphology::TalentBounds box;
    double best_detection = 0.0;
    for (const auto& e : archive.entries) {
        CHECK(box.contains(archive_talents(e)));
        model().check_bounds(archive_design(e));
        best_detection = std::max(best_detection, e.objectives[2]);
        for (const auto& f : archive.entries) CHECK_FALSE(moo::dominates(f.objectives, e.objectives));
    }
    CHECK(best_detection >= 950.0);
}

TEST_CASE("explore evaluation count matches the population schedule") {
    moo::NsgaConfig c;
    c.population_size = 12;
    c.max_iterations = 3;
    c.repeat_runs = 2;
    const auto before = morphology::evaluation_count();
    explore_talents(c, model());
    CHECK(morphology::evaluation_count() - before == explore_evaluation_count(c));
    CHECK(explore_evaluation_count(c) == 2 * 12 * 4);
}

TEST_CASE("frontier surrogate reproduces the explored archive") {
    const auto s = fit_talent_frontier(desk_archive());
    CHECK(s.diagnostics.within_band_fraction >= 0.95);
    const auto& top = *std::max_element(desk_archive().entries.begin(), desk_archive().entries.end(),
                                        [](const auto& a, const auto& b) { return a.objectives[0] < b.objectives[0]; });
    CHECK(s.frontier_scale() == top.objectives[0]);
    CHECK(std::abs(s.predict_range(top.objectives[1], top.objectives[2]) - top.objectives[0]) / top.objectives[0] < 0.05);
}

TEST_CASE("frontier surrogate recovers a planar frontier") {
    const auto& s = planar_surrogate();
    Rng rng = make_rng(8, {});
    for (int i = 0; i < 200; ++i) {
        const double sp = uniform(rng, 4.5, 9.5);
        const double d = uniform(rng, 100.0, 1000.0);
        const double truth = planar_range(sp, d);
        CHECK(std::abs(s.predict_range(sp, d) - truth) / truth < 0.01);
    }
}

TEST_CASE("frontier fit rejects unusable archives") {
    CHECK_THROWS_AS(fit_talent_frontier(planar_archive(5, 1)), InvalidArgument);
    TalentArchive same;
    for (int i = 0; i < 20; ++i) same.entries.push_back({{0, 0, 0, 0, 0, 0}, {20.0, 6.0, 500.0}});
    CHECK_THROWS_AS(fit_talent_frontier(same), InvalidArgument);
}

TEST_CASE("g1 examples") {
    const auto& s = planar_surrogate();
    const double f = s.predict_range(6.0, 400.0);
    CHECK(g1_feasibility({f + 1.0, 6.0, 400.0}, s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g1_feasibility({f - 2.0, 6.0, 400.0}, s) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(g1_feasibility({f, 6.0, 400.0}, s) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("cbm objective charges failures and penalizes infeasible talents") {
    const auto& s = planar_surrogate();
    const std::vector<sim::Scenario> scenarios{far_source(1), far_source(2), far_source(3)};
    CbmConfig cfg;
    const double n = static_cast<double>(scenarios.size());

    const CbmDesignPoint weak{{8.9, 5.0, 100.0}, {10.0, 0.5}};
    const auto fail = cbm_objective(weak, scenarios, s, cfg);
    CHECK(fail.feasible);
    CHECK(fail.simulated);
    CHECK(fail.successes == 0);
    CHECK(fail.objective == n * cfg.failure_time);

    const auto again = cbm_objective(weak, scenarios, s, cfg);
    CHECK(again.objective == fail.objective);

    const double f = s.predict_range(6.0, 400.0);
    const auto over = cbm_objective({{f + 1.0, 6.0, 400.0}, {10.0, 0.5}}, scenarios, s, cfg);
    CHECK_FALSE(over.feasible);
    CHECK_FALSE(over.simulated);
    CHECK(over.g1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(over.objective == doctest::Approx(n * cfg.failure_time + cfg.penalty_weight).epsilon(1e-12));
    CHECK(over.objective > fail.objective);

    // any violation beyond tolerance ranks below every feasible point
    const double slightly = s.frontier_scale() * cfg.feasibility_tolerance * 10.0;
    const auto edge = cbm_objective({{f + slightly, 6.0, 400.0}, {10.0, 0.5}}, scenarios, s, cfg);
    CHECK_FALSE(edge.feasible);
    CHECK(edge.objective > n * cfg.failure_time);

    // workers do not change the sum
    CbmConfig par = cfg;
    par.workers = 3;
    const CbmDesignPoint good{{f - 1.0, 6.0, 400.0}, {8.0, 0.4}};
    CHECK(cbm_objective(good, scenarios, s, par).objective == cbm_objective(good, scenarios, s, cfg).objective);
}

TEST_CASE("cbm box maps the unit cube onto talents and behavior parameters") {
    const CbmBox box;
    const auto lo = box.from_unit({0, 0, 0, 0, 0});
    const auto hi = box.from_unit({1, 1, 1, 1, 1});
    CHECK(lo == CbmDesignPoint{{8.9, 4.5, 100.0}, {5.0, 0.1}});
    CHECK(hi.talents.flight_range == doctest::Approx(32.6));
    CHECK(hi.params.b == doctest::Approx(0.9));
    const std::vector<double> u{0.1, 0.7, 0.3, 0.9, 0.5};
    const auto back = box.to_unit(box.from_unit(u));
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-12));
}

TEST_CASE("expected improvement closed form") {
    CHECK(expected_improvement(1.0, 0.0, 2.0) == doctest::Approx(1.0));
    CHECK(expected_improvement(3.0, 0.0, 2.0) == 0.0);
    // mean at the incumbent: sd * phi(0)
    CHECK(expected_improvement(2.0, 1.5, 2.0) == doctest::Approx(1.5 * 0.3989422804014327));
}

TEST_CASE("bayesian optimization finds the minimum of a convex quadratic") {
    BoConfig cfg;
    cfg.seed_points = 10;
    cfg.max_iterations = 50;
    cfg.seed = 4;
    auto f = [](const std::vector<double>& x) {
        return 1.0 + 4.0 * (x[0] - 0.3) * (x[0] - 0.3) + 2.0 * (x[1] - 0.7) * (x[1] - 0.7);
    };
    const auto r = bayes_optimize(f, 2, cfg);
    REQUIRE(r.trace.size() == 60);
    CHECK(r.best_value <= 1.05);
    double running = r.trace.front().value;
    for (const auto& e : r.trace) {
        running = std::min(running, e.value);
        CHECK(e.incumbent == running);
    }
    CHECK(r.best_value == running);
    const auto again = bayes_optimize(f, 2, cfg);
    CHECK(again.best_point == r.best_point);
}

TEST_CASE("cbm optimization never evaluates the morphology model") {
    const auto& s = planar_surrogate();
    const auto scenarios = sim::generate_scenarios(3, 5);
    BoConfig bo;
    bo.seed_points = 4;
    bo.max_iterations = 2;
    bo.acquisition_candidates = 200;
    const auto before = morphology::evaluation_count();
    const auto r = optimize_cbm(scenarios, s, bo, {});
    CHECK(morphology::evaluation_count() == before);
    CHECK(r.trace.size() == 6);
    CHECK(CbmBox{}.contains(r.optimum));
    CHECK(r.steps_within_bound);
    CHECK(r.paths_within_range);
}

TEST_CASE("finalize recovers the design behind reachable talents") {
    moo::NsgaConfig c;
    const auto bounds = model().design_bounds().to_array();
    Rng rng = make_rng(21, {});
    for (int i = 0; i < 20; ++i) {
        std::array<double, morphology::MorphologyDesign::size> x{};
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = uniform(rng, bounds[k].lower, bounds[k].upper);
        const auto target = model().evaluate_talents(morphology::MorphologyDesign::from_array(x));
        c.seed = static_cast<std::uint64_t>(100 + i);
        const auto r = finalize_morphology(target, c, model());
        CHECK(r.residual < 0.01);
        CHECK(r.talents == model().evaluate_talents(r.design));
        REQUIRE_FALSE(r.candidates.empty());
        CHECK(r.candidates.front().residual == r.residual);
    }
}

TEST_CASE("finalize on the reference design talents and on unreachable targets") {
    moo::NsgaConfig c;
    c.population_size = 40;
    c.max_iterations = 40;
    c.repeat_runs = 1;
    const auto reference = finalize_morphology(model().evaluate_talents(morphology::reference_final_design()), c, model());
    CHECK(reference.residual < 0.01);

    // published final-design talents as target; residual frozen from this repo
    const auto published = finalize_morphology(morphology::reference_final_talents(), c, model());
    CHECK_NOTHROW(model().check_bounds(published.design));
    CHECK(published.residual >= 0.0);
    CHECK(published.residual < 1e-6);

    const auto corner = finalize_morphology({32.6, 9.5, 1000.0}, c, model());
    CHECK(corner.residual > 0.01);

    CHECK_THROWS_AS(finalize_morphology({40.0, 6.0, 500.0}, c, model()), BoundsError);
}

TEST_CASE("a source at the base is always found") {
    sim::Scenario s = far_source(3);
    s.field.source_location = {0.0, 0.0};
    const auto score = evaluate_configuration({16.0, 5.0, 400.0}, {10.0, 0.5}, {s, s, s}, {});
    CHECK(score.success_rate == 1.0);
    CHECK(score.avg_search_time_success == 0.0);
    const auto none = evaluate_configuration({8.9, 5.0, 100.0}, {10.0, 0.5}, {far_source(1)}, {});
    CHECK(none.success_rate == 0.0);
    CHECK(none.avg_search_time_success == 0.0);
}

}
