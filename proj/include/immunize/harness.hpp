#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "immunize/epidemic.hpp"
#include "immunize/graph.hpp"
#include "immunize/ranking.hpp"
#include "immunize/spectral.hpp"

namespace immunize {

inline constexpr const char* kToolVersion = "0.3.0";

struct ExperimentConfig {
    std::string graph_path;
    GraphFormat graph_format = GraphFormat::EdgeList;
    bool relabel = false;
    Budget budget = Budget::fraction(0.16);
    std::vector<Strategy> strategies{kComparisonStrategies.begin(), kComparisonStrategies.end()};
    RateRange beta_range = kDefaultBetaRange;
    RateRange delta_range = kDefaultDeltaRange;
    std::vector<NodeId> seeds;
    int steps = 200;
    int trials = 200;
    std::uint64_t master_seed = 1;
    int power = kDefaultPower;
    int calibration_trials = 100; // most-infected calibration run
    unsigned threads = 1;
    std::string csv_path;
    std::string json_path;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults; unknown keys and bad values throw ValidationError.
ExperimentConfig config_from_json(const nlohmann::json& j);
/// FNV-1a of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Sub-streams of the master seed.
std::uint64_t rate_seed(const ExperimentConfig& config);
std::uint64_t trials_seed(const ExperimentConfig& config);
std::uint64_t calibration_seed(const ExperimentConfig& config);

/// Everything a strategy may need besides the graph.
struct RankingContext {
    const RateModel* rates = nullptr;
    int power = kDefaultPower;
    MostInfectedProtocol calibration;
};

Ranking compute_ranking(const Graph& g, Strategy strategy, const RankingContext& ctx);

struct ComparisonRow {
    Strategy strategy;
    std::vector<NodeId> immunized;
    double mean_infected;
    double std_infected;
    double percent; // 100 * mean / n
    int rank;       // 1 = fewest infected; equal means share a rank
    std::vector<int> final_counts;      // per trial
    std::vector<double> mean_trajectory; // mean infected count at t = 0..steps
};

struct ComparisonTable {
    NodeId n;
    NodeId budget;
    std::vector<ComparisonRow> rows; // ascending mean, ties by strategy order
    ExperimentConfig config;
};

/// Runs every strategy's top-k immunization against the same per-trial seeds.
/// Seeds are never immunized: a seed in the top k is skipped for the next ranked node.
ComparisonTable run_comparison(const Graph& g, const ExperimentConfig& config);

void write_comparison_csv(std::ostream& out, const ComparisonTable& table);
nlohmann::json comparison_json(const ComparisonTable& table);
/// Human-readable table in the "count (percent)" layout.
void print_comparison(std::ostream& out, const ComparisonTable& table);

} // namespace immunize
