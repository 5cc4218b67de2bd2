#pragma once

#include <iosfwd>
#include <vector>

#include "immunize/graph.hpp"
#include "immunize/spectral.hpp"

namespace immunize {

inline constexpr double kDefaultCombinationGuard = 1e7;

/// C(n, k) as a double, so the guard can be checked before anything overflows.
double binomial(NodeId n, NodeId k);

struct RemovalRow {
    std::vector<NodeId> removed;
    double residual_lambda1;
};

struct OptimalRemoval {
    std::vector<NodeId> best;
    double residual_lambda1;
    std::vector<RemovalRow> table; // lexicographic subset order; empty unless requested
};

/// Exhaustive search for the k-subset whose removal minimises the largest
/// eigenvalue. Ties go to the lexicographically smallest subset.
/// Throws GuardError when C(n, k) exceeds `guard`.
OptimalRemoval optimal_removal(const Graph& g, NodeId k, bool keep_table = false,
                               double guard = kDefaultCombinationGuard);

void write_removal_csv(std::ostream& out, const std::vector<RemovalRow>& table);

struct GapReport {
    NodeId k;
    std::vector<NodeId> av11_set;
    double av11_residual;
    std::vector<NodeId> optimal_set;
    double optimal_residual;
    double floor;         // lambda_{k+1}(A), may be negative
    double floor_clamped; // max(floor, 0)
};

/// floor <= optimal <= AV11 residual.
GapReport gap_report(const Graph& g, NodeId k, int power = kDefaultPower,
                     double guard = kDefaultCombinationGuard);

} // namespace immunize
