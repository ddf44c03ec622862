#include "codesign/moo/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "codesign/common/error.hpp"
#include "codesign/common/parallel.hpp"
#include "codesign/common/random.hpp"

namespace codesign::moo {

void MooProblem::validate() const {
    if (lower_bounds.empty() || lower_bounds.size() != upper_bounds.size()) {
        throw InvalidArgument("MooProblem: bounds must be nonempty and equally sized");
    }
    for (std::size_t i = 0; i < lower_bounds.size(); ++i) {
        if (!(lower_bounds[i] < upper_bounds[i])) {
            throw InvalidArgument("MooProblem: lower bound not below upper bound in dimension " + std::to_string(i));
        }
    }
    if (objective_count < 1) {
        throw InvalidArgument("MooProblem: objective_count must be at least 1");
    }
    if (!objective) {
        throw InvalidArgument("MooProblem: objective function missing");
    }
}

void NsgaConfig::validate() const {
    if (population_size < 2) throw InvalidArgument("NsgaConfig: population_size must be at least 2");
    if (repeat_runs < 1) throw InvalidArgument("NsgaConfig: repeat_runs must be at least 1");
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(crossover_rate)) throw InvalidArgument("NsgaConfig: crossover_rate outside [0, 1]");
    if (!prob(mutation_rate)) throw InvalidArgument("NsgaConfig: mutation_rate outside [0, 1]");
    if (!(mutation_strength >= 0.0)) throw InvalidArgument("NsgaConfig: mutation_strength must be nonnegative");
}

namespace {

using Matrix = std::vector<std::vector<double>>;

struct Ranked {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
};

Ranked rank_population(const Matrix& objectives) {
    Ranked r;
    r.rank.assign(objectives.size(), 0);
    r.crowding.assign(objectives.size(), 0.0);
    const auto fronts = fast_nondominated_sort(objectives);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        Matrix members;
        members.reserve(fronts[f].size());
        for (auto i : fronts[f]) members.push_back(objectives[i]);
        const auto cd = crowding_distance(members);
        for (std::size_t k = 0; k < fronts[f].size(); ++k) {
            r.rank[fronts[f][k]] = f;
            r.crowding[fronts[f][k]] = cd[k];
        }
    }
    return r;
}

class Runner {
public:
    Runner(const MooProblem& problem, const NsgaConfig& config, std::size_t run)
        : problem_(problem), config_(config), run_(run), dim_(problem.dimension()) {}

    Matrix evaluate(const Matrix& decisions, std::size_t generation) const {
        Matrix out(decisions.size());
        parallel_for(decisions.size(), config_.workers, [&](std::size_t i) {
            std::vector<double> y;
            try {
                y = problem_.objective(decisions[i]);
            } catch (const std::exception& e) {
                throw SolverError("objective failed (run " + std::to_string(run_) + ", generation " +
                                  std::to_string(generation) + ", individual " + std::to_string(i) + "): " + e.what());
            }
            if (y.size() != problem_.objective_count) {
                throw SolverError("objective returned " + std::to_string(y.size()) + " values, expected " +
                                  std::to_string(problem_.objective_count));
            }
            for (double v : y) {
                if (!std::isfinite(v)) {
                    throw SolverError("objective returned a non-finite value (run " + std::to_string(run_) +
                                      ", generation " + std::to_string(generation) + ", individual " + std::to_string(i) + ")");
                }
            }
            out[i] = std::move(y);
        });
        return out;
    }

    std::size_t tournament(const Ranked& ranked, Rng& rng) const {
        const std::size_t n = ranked.rank.size();
        const std::size_t a = uniform_index(rng, n);
        const std::size_t b = uniform_index(rng, n);
        if (ranked.rank[a] != ranked.rank[b]) {
            return ranked.rank[a] < ranked.rank[b] ? a : b;
        }
        if (ranked.crowding[a] != ranked.crowding[b]) {
            return ranked.crowding[a] > ranked.crowding[b] ? a : b;
        }
        return uniform01(rng) < 0.5 ? a : b;
    }

    // simulated binary crossover, per gene with probability 1/2
    void crossover(std::vector<double>& c1, std::vector<double>& c2, Rng& rng) const {
        const double eta = config_.crossover_eta;
        for (std::size_t k = 0; k < dim_; ++k) {
            if (uniform01(rng) >= 0.5) {
                continue;
            }
            const double u = uniform01(rng);
            const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                                         : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
            const double x1 = c1[k], x2 = c2[k];
            c1[k] = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2);
            c2[k] = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2);
        }
    }

    void mutate(std::vector<double>& x, Rng& rng) const {
        for (std::size_t k = 0; k < dim_; ++k) {
            if (uniform01(rng) < config_.mutation_rate) {
                const double range = problem_.upper_bounds[k] - problem_.lower_bounds[k];
                x[k] += config_.mutation_strength * range * standard_normal(rng);
            }
        }
    }

    void clamp(std::vector<double>& x) const {
        for (std::size_t k = 0; k < dim_; ++k) {
            x[k] = std::clamp(x[k], problem_.lower_bounds[k], problem_.upper_bounds[k]);
        }
    }

    ParetoArchive run(const GenerationObserver& observer) const {
        const std::size_t n = config_.population_size;
        Rng init_rng = make_rng(config_.seed, {run_, 0});
        Matrix population(n, std::vector<double>(dim_));
        for (auto& x : population) {
            for (std::size_t k = 0; k < dim_; ++k) {
                x[k] = uniform(init_rng, problem_.lower_bounds[k], problem_.upper_bounds[k]);
            }
        }
        Matrix objectives = evaluate(population, 0);
        if (observer) observer({run_, 0, population, objectives});

        for (std::size_t gen = 1; gen <= config_.max_iterations; ++gen) {
            Rng rng = make_rng(config_.seed, {run_, gen});
            const Ranked ranked = rank_population(objectives);

            Matrix offspring;
            offspring.reserve(n + 1);
            while (offspring.size() < n) {
                std::vector<double> c1 = population[tournament(ranked, rng)];
                std::vector<double> c2 = population[tournament(ranked, rng)];
                if (uniform01(rng) < config_.crossover_rate) {
                    crossover(c1, c2, rng);
                }
                mutate(c1, rng);
                mutate(c2, rng);
                clamp(c1);
                clamp(c2);
                offspring.push_back(std::move(c1));
                if (offspring.size() < n) {
                    offspring.push_back(std::move(c2));
                }
            }
            Matrix offspring_obj = evaluate(offspring, gen);

            // (mu + lambda) environmental selection
            Matrix merged = population;
            Matrix merged_obj = objectives;
            merged.insert(merged.end(), offspring.begin(), offspring.end());
            merged_obj.insert(merged_obj.end(), offspring_obj.begin(), offspring_obj.end());

            const auto fronts = fast_nondominated_sort(merged_obj);
            std::vector<std::size_t> survivors;
            survivors.reserve(n);
            for (const auto& front : fronts) {
                if (survivors.size() + front.size() <= n) {
                    survivors.insert(survivors.end(), front.begin(), front.end());
                    continue;
                }
                Matrix members;
                for (auto i : front) members.push_back(merged_obj[i]);
                const auto cd = crowding_distance(members);
                std::vector<std::size_t> order(front.size());
                std::iota(order.begin(), order.end(), std::size_t{0});
                std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
                for (std::size_t k = 0; survivors.size() < n; ++k) {
                    survivors.push_back(front[order[k]]);
                }
                break;
            }

            Matrix next_pop, next_obj;
            next_pop.reserve(n);
            next_obj.reserve(n);
            for (auto i : survivors) {
                next_pop.push_back(std::move(merged[i]));
                next_obj.push_back(std::move(merged_obj[i]));
            }
            population = std::move(next_pop);
            objectives = std::move(next_obj);
            if (observer) observer({run_, gen, population, objectives});
        }

        std::vector<ArchiveEntry> entries;
        entries.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            entries.push_back({population[i], objectives[i]});
        }
        return nondominated_archive(std::move(entries));
    }

private:
    const MooProblem& problem_;
    const NsgaConfig& config_;
    std::size_t run_;
    std::size_t dim_;
};

} // namespace

ParetoArchive evolve_single_run(const MooProblem& problem, const NsgaConfig& config, std::size_t run_index,
                                const GenerationObserver& observer) {
    problem.validate();
    config.validate();
    return Runner(problem, config, run_index).run(observer);
}

ParetoArchive evolve(const MooProblem& problem, const NsgaConfig& config, const GenerationObserver& observer) {
    problem.validate();
    config.validate();
    std::vector<ParetoArchive> runs;
    runs.reserve(config.repeat_runs);
    for (std::size_t r = 0; r < config.repeat_runs; ++r) {
        runs.push_back(Runner(problem, config, r).run(observer));
    }
    return merge_archives(runs);
}

} // namespace codesign::moo
