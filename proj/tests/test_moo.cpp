#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "codesign/common/error.hpp"
#include "codesign/common/random.hpp"
#include "codesign/moo/nsga2.hpp"
#include "codesign/moo/pareto.hpp"

using namespace codesign;
using namespace codesign::moo;

namespace {

using Matrix = std::vector<std::vector<double>>;

// Iterated O(n^2) filter: peel off the non-dominated set until empty.
std::vector<std::vector<std::size_t>> brute_force_fronts(const Matrix& pop) {
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<bool> removed(pop.size(), false);
    std::size_t left = pop.size();
    while (left > 0) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (removed[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pop.size() && !dominated; ++j) {
                if (removed[j] || i == j) continue;
                bool ge = true, gt = false;
                for (std::size_t k = 0; k < pop[i].size(); ++k) {
                    ge = ge && pop[j][k] >= pop[i][k];
                    gt = gt || pop[j][k] > pop[i][k];
                }
                dominated = ge && gt;
            }
            if (!dominated) front.push_back(i);
        }
        for (auto i : front) removed[i] = true;
        left -= front.size();
        fronts.push_back(front);
    }
    return fronts;
}

Matrix random_population(Rng& rng, std::size_t n, std::size_t m, bool discrete) {
    Matrix pop(n, std::vector<double>(m));
    for (auto& row : pop) {
        for (auto& v : row) v = discrete ? static_cast<double>(uniform_index(rng, 5)) : uniform01(rng);
    }
    return pop;
}

MooProblem segment_problem() {
    MooProblem p;
    p.lower_bounds = {0.0};
    p.upper_bounds = {1.0};
    p.objective_count = 2;
    p.objective = [](std::span<const double> x) { return std::vector<double>{x[0], 1.0 - x[0]}; };
    return p;
}

} // namespace

TEST_SUITE("moo") {

TEST_CASE("dominance examples") {
    using V = std::vector<double>;
    CHECK(dominates(V{2, 3}, V{1, 3}));
    CHECK_FALSE(dominates(V{2, 1}, V{1, 2}));
    CHECK_FALSE(dominates(V{1, 1}, V{1, 1}));
    CHECK_THROWS_AS(dominates(V{1, 2}, V{1, 2, 3}), InvalidArgument);
}

TEST_CASE("sorting small fixtures") {
    const auto same = fast_nondominated_sort({{1, 1}, {1, 1}, {1, 1}});
    REQUIRE(same.size() == 1);
    CHECK(same[0].size() == 3);
    const auto chain = fast_nondominated_sort({{1, 1}, {3, 3}, {2, 2}});
    REQUIRE(chain.size() == 3);
    CHECK(chain[0] == std::vector<std::size_t>{1});
    CHECK(chain[1] == std::vector<std::size_t>{2});
    CHECK(chain[2] == std::vector<std::size_t>{0});
    CHECK_THROWS(fast_nondominated_sort({}));
}

TEST_CASE("fast sort agrees with the brute-force filter") {
    Rng rng = make_rng(21, {});
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + uniform_index(rng, 120);
        const std::size_t m = 1 + uniform_index(rng, 4);
        const auto pop = random_population(rng, n, m, trial % 2 == 0);
        CHECK(fast_nondominated_sort(pop) == brute_force_fronts(pop));
    }
}

TEST_CASE("crowding distance") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(crowding_distance({{1, 2}}) == std::vector<double>{inf});
    CHECK(crowding_distance({{1, 2}, {2, 1}}) == std::vector<double>{inf, inf});
    const auto cd = crowding_distance({{0, 2}, {1, 1}, {2, 0}});
    CHECK(cd[0] == inf);
    CHECK(cd[2] == inf);
    CHECK(cd[1] == doctest::Approx(2.0));
}

TEST_CASE("archive merge keeps only non-dominated, deduplicated entries") {
    const ParetoArchive a{{{{0.0}, {1, 2}}}}, b{{{{1.0}, {2, 1}}}};
    CHECK(merge_archives({a, b}).size() == 2);
    const ParetoArchive lo{{{{0.0}, {1, 1}}}}, hi{{{{1.0}, {2, 2}}}};
    const auto m = merge_archives({lo, hi});
    REQUIRE(m.size() == 1);
    CHECK(m.entries[0].objectives == std::vector<double>{2, 2});
    const auto self = merge_archives({a, a});
    CHECK(self.size() == 1);
    const ParetoArchive wide{{{{0.0}, {1, 2, 3}}}};
    CHECK_THROWS_AS(merge_archives({a, wide}), InvalidArgument);
}

TEST_CASE("bi-objective segment front is covered") {
    NsgaConfig c;
    c.population_size = 40;
    c.max_iterations = 30;
    c.repeat_runs = 1;
    c.seed = 4;
    const auto archive = evolve(segment_problem(), c);
    std::vector<double> xs;
    for (const auto& e : archive.entries) xs.push_back(e.decision[0]);
    for (std::size_t i = 0; i < archive.size(); ++i) {
        for (std::size_t j = 0; j < archive.size(); ++j) {
            CHECK_FALSE(dominates(archive.entries[i].objectives, archive.entries[j].objectives));
        }
    }
    std::sort(xs.begin(), xs.end());
    CHECK(xs.front() < 0.1);
    CHECK(xs.back() > 0.9);
    for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] - xs[i - 1] < 0.1);
}

TEST_CASE("single objective converges to the concave maximum") {
    MooProblem p;
    p.lower_bounds = {-2.0, -2.0};
    p.upper_bounds = {2.0, 2.0};
    p.objective = [](std::span<const double> x) {
        return std::vector<double>{-(x[0] - 0.5) * (x[0] - 0.5) - (x[1] + 1.0) * (x[1] + 1.0)};
    };
    NsgaConfig c;
    c.population_size = 40;
    c.max_iterations = 40;
    c.repeat_runs = 2;
    const auto archive = evolve(p, c);
    double best = -1e9;
    for (const auto& e : archive.entries) best = std::max(best, e.objectives[0]);
    CHECK(best > -1e-2);
}

TEST_CASE("evolve is seed-deterministic, worker-independent and keeps inside bounds") {
    auto p = segment_problem();
    bool inside = true;
    auto inner = p.objective;
    p.objective = [&inside, inner](std::span<const double> x) {
        if (x[0] < 0.0 || x[0] > 1.0) inside = false;
        return inner(x);
    };
    NsgaConfig c;
    c.population_size = 24;
    c.max_iterations = 10;
    c.repeat_runs = 2;
    c.seed = 9;
    const auto a = evolve(p, c);
    c.workers = 3;
    const auto b = evolve(p, c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.entries[i].decision == b.entries[i].decision);
        CHECK(a.entries[i].objectives == b.entries[i].objectives);
    }
    CHECK(inside);
}

TEST_CASE("best value of each objective never decreases across generations") {
    MooProblem p;
    p.lower_bounds = {0, 0, 0};
    p.upper_bounds = {1, 1, 1};
    p.objective_count = 2;
    p.objective = [](std::span<const double> x) {
        return std::vector<double>{x[0] * x[1] - x[2], std::sin(3 * x[0]) + x[2] * x[1]};
    };
    NsgaConfig c;
    c.population_size = 30;
    c.max_iterations = 20;
    c.repeat_runs = 1;
    std::vector<double> best(2, -1e9);
    bool monotone = true;
    evolve(p, c, [&](const GenerationView& v) {
        for (std::size_t k = 0; k < 2; ++k) {
            double b = -1e9;
            for (const auto& o : v.objectives) b = std::max(b, o[k]);
            if (b < best[k]) monotone = false;
            best[k] = b;
        }
    });
    CHECK(monotone);
}

TEST_CASE("objective failures abort with context") {
    auto p = segment_problem();
    p.objective = [](std::span<const double>) -> std::vector<double> { throw std::runtime_error("boom"); };
    NsgaConfig c;
    c.population_size = 4;
    c.max_iterations = 1;
    c.repeat_runs = 1;
    CHECK_THROWS_AS(evolve(p, c), SolverError);
}

}
