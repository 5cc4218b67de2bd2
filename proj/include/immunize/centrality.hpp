#pragma once

#include "immunize/graph.hpp"
#include "immunize/ranking.hpp"

namespace immunize {

/// Component-local closeness: (n_i - 1) / sum of distances to the nodes
/// reachable from i, where n_i is the size of i's component. Isolated nodes score 0.
std::vector<double> closeness_scores(const Graph& g);
Ranking closeness_ranking(const Graph& g);

/// Brandes accumulation over unordered pairs with fractional attribution
/// when several shortest paths tie.
std::vector<double> betweenness_scores(const Graph& g);
Ranking betweenness_ranking(const Graph& g);

} // namespace immunize
