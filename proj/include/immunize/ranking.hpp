#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "immunize/graph.hpp"

namespace immunize {

enum class Strategy {
    AV11,
    Degree,
    Closeness,
    Betweenness,
    DynamicalImportance,
    EstradaIndex,
    KCore,
    MostInfected,
};

inline constexpr std::array<Strategy, 8> kAllStrategies = {
    Strategy::AV11,        Strategy::Degree,      Strategy::Closeness,
    Strategy::Betweenness, Strategy::DynamicalImportance, Strategy::EstradaIndex,
    Strategy::KCore,       Strategy::MostInfected,
};

/// The seven strategies compared by default; k-core is left out because it tracks degree.
inline constexpr std::array<Strategy, 7> kComparisonStrategies = {
    Strategy::AV11,        Strategy::Degree,      Strategy::Closeness,
    Strategy::Betweenness, Strategy::DynamicalImportance, Strategy::EstradaIndex,
    Strategy::MostInfected,
};

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);
/// Comma-separated list of every accepted name, for usage messages.
std::string strategy_names();

/// Node ordering produced by a strategy, best first.
struct Ranking {
    Strategy strategy;
    std::vector<NodeId> order;
    std::vector<double> scores; // indexed by node id

    /// First `k` nodes of the order that are not in `exclude`.
    std::vector<NodeId> top(NodeId k, std::span<const NodeId> exclude = {}) const;
};

/// Builds a ranking ordered by descending score with ascending-id tie-break.
///
/// Scores that agree to a relative 1e-9 count as tied, so floating-point
/// noise between symmetric nodes cannot reorder them.
Ranking make_ranking(Strategy strategy, std::vector<double> scores);

Ranking degree_ranking(const Graph& g);

/// Core number by repeated removal of a minimum-degree node.
std::vector<NodeId> core_numbers(const Graph& g);
Ranking kcore_ranking(const Graph& g);

} // namespace immunize
