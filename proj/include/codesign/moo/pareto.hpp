#ifndef CODESIGN_MOO_PARETO_HPP
#define CODESIGN_MOO_PARETO_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace codesign::moo {

// All dominance relations use the maximization convention.

/// True iff a >= b componentwise and a > b somewhere. Throws
/// InvalidArgument on a length mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Deb's fast non-dominated sort. Returns index lists; front 0 is the
/// maximal non-dominated set. Fronts partition the population and each
/// front is listed in ascending index order.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(const std::vector<std::vector<double>>& objectives);

/// Crowding distance of each member of one front. Boundary points of each
/// objective get +inf; interior points sum neighbour gaps normalized by the
/// objective's extent on the front.
std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front);

struct ArchiveEntry {
    std::vector<double> decision;
    std::vector<double> objectives;
};

/// Mutually non-dominated set of evaluated decisions.
struct ParetoArchive {
    std::vector<ArchiveEntry> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

/// Relative decision-space tolerance under which two entries are clones.
inline constexpr double kDedupTolerance = 1e-9;

bool same_decision(std::span<const double> a, std::span<const double> b, double tolerance = kDedupTolerance);

/// Non-dominated, deduplicated subset of `candidates`, in first-seen order.
ParetoArchive nondominated_archive(std::vector<ArchiveEntry> candidates);

/// Non-dominated filter over the concatenation of `archives`.
ParetoArchive merge_archives(const std::vector<ParetoArchive>& archives);

} // namespace codesign::moo

#endif
