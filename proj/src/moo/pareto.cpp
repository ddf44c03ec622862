#include "codesign/moo/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "codesign/common/error.hpp"

namespace codesign::moo {

bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw InvalidArgument("dominates: objective vectors differ in length (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    }
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) {
            return false;
        }
        if (a[i] > b[i]) {
            strictly_better = true;
        }
    }
    return strictly_better;
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(const std::vector<std::vector<double>>& objectives) {
    const std::size_t n = objectives.size();
    if (n == 0) {
        throw InvalidArgument("fast_nondominated_sort: empty population");
    }
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(objectives[p], objectives[q])) {
                dominated_by[p].push_back(q);
                ++domination_count[q];
            } else if (dominates(objectives[q], objectives[p])) {
                dominated_by[q].push_back(p);
                ++domination_count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (domination_count[p] == 0) {
            fronts[0].push_back(p);
        }
    }
    for (std::size_t f = 0; !fronts[f].empty(); ++f) {
        std::vector<std::size_t> next;
        for (auto p : fronts[f]) {
            for (auto q : dominated_by[p]) {
                if (--domination_count[q] == 0) {
                    next.push_back(q);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front) {
    const std::size_t n = front.size();
    if (n == 0) {
        throw InvalidArgument("crowding_distance: empty front");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> distance(n, 0.0);
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    const std::size_t m = front.front().size();
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < m; ++k) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return front[a][k] < front[b][k]; });
        const double lo = front[order.front()][k];
        const double hi = front[order.back()][k];
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        const double extent = hi - lo;
        if (extent <= 0.0) {
            continue;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            distance[order[i]] += (front[order[i + 1]][k] - front[order[i - 1]][k]) / extent;
        }
    }
    return distance;
}

bool same_decision(std::span<const double> a, std::span<const double> b, double tolerance) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
        if (std::abs(a[i] - b[i]) > tolerance * scale) {
            return false;
        }
    }
    return true;
}

ParetoArchive nondominated_archive(std::vector<ArchiveEntry> candidates) {
    ParetoArchive archive;
    if (candidates.empty()) {
        return archive;
    }
    const std::size_t m = candidates.front().objectives.size();
    for (const auto& c : candidates) {
        if (c.objectives.size() != m) {
            throw InvalidArgument("archive: objective dimension mismatch");
        }
    }

    // deduplicate first so clones cannot shadow each other
    std::vector<ArchiveEntry> unique;
    unique.reserve(candidates.size());
    for (auto& c : candidates) {
        const bool clone = std::any_of(unique.begin(), unique.end(),
                                       [&](const ArchiveEntry& u) { return same_decision(u.decision, c.decision); });
        if (!clone) {
            unique.push_back(std::move(c));
        }
    }

    for (std::size_t i = 0; i < unique.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < unique.size() && !dominated; ++j) {
            dominated = j != i && dominates(unique[j].objectives, unique[i].objectives);
        }
        if (!dominated) {
            archive.entries.push_back(unique[i]);
        }
    }
    return archive;
}

ParetoArchive merge_archives(const std::vector<ParetoArchive>& archives) {
    std::vector<ArchiveEntry> all;
    std::size_t m = 0;
    bool have_m = false;
    for (const auto& a : archives) {
        for (const auto& e : a.entries) {
            if (!have_m) {
                m = e.objectives.size();
                have_m = true;
            } else if (e.objectives.size() != m) {
                throw InvalidArgument("merge_archives: objective dimension mismatch (" + std::to_string(m) + " vs " +
                                      std::to_string(e.objectives.size()) + ")");
            }
            all.push_back(e);
        }
    }
    return nondominated_archive(std::move(all));
}

} // namespace codesign::moo
