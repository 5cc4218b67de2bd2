#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "immunize/graph.hpp"
#include "immunize/random.hpp"
#include "immunize/ranking.hpp"

namespace immunize {

struct RateRange {
    double lo;
    double hi;
    friend bool operator==(const RateRange&, const RateRange&) = default;
};

inline constexpr RateRange kDefaultBetaRange{0.1, 0.4};
inline constexpr RateRange kDefaultDeltaRange{0.2, 0.5};

/// Per-link infection and per-node cure probabilities for one graph.
///
/// beta(i, j) is the probability that an infected j infects its neighbour i
/// in one step; beta(i, j) and beta(j, i) are drawn independently.
class RateModel {
public:
    /// Independent uniform draws; bit-identical for equal (graph, ranges, seed).
    static RateModel generate(const Graph& g, RateRange beta, RateRange delta, std::uint64_t seed);
    /// Same beta on every directed link and same delta on every node.
    static RateModel homogeneous(const Graph& g, double beta, double delta);
    /// Explicit rates. `beta` lists (i, j, beta_ij) and must cover every directed link once.
    static RateModel from_values(const Graph& g,
                                 std::span<const std::tuple<NodeId, NodeId, double>> beta,
                                 std::vector<double> delta);

    NodeId size() const noexcept { return static_cast<NodeId>(delta_.size()); }
    std::size_t link_count() const noexcept { return link_count_; }
    double beta(NodeId i, NodeId j) const;
    double delta(NodeId i) const { return delta_[i]; }
    const std::vector<double>& deltas() const noexcept { return delta_; }
    /// beta(i, neighbors(i)[idx]) for each neighbour, aligned with Graph::neighbors(i).
    std::span<const double> incoming(NodeId i) const { return incoming_[i]; }
    std::span<const NodeId> neighbors(NodeId i) const { return neighbors_[i]; }

    RateRange beta_range() const noexcept { return beta_range_; }
    RateRange delta_range() const noexcept { return delta_range_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Copy with every beta multiplied by `factor`; result must stay within [0, 1].
    RateModel scaled_beta(double factor) const;

    /// True when the model was built on a graph with this exact edge set.
    bool matches(const Graph& g) const;

    friend bool operator==(const RateModel&, const RateModel&) = default;
    friend RateModel load_rates(std::istream& in, const Graph& g);

private:
    std::vector<std::vector<NodeId>> neighbors_;
    std::vector<std::vector<double>> incoming_;
    std::vector<double> delta_;
    std::size_t link_count_ = 0;
    RateRange beta_range_{0, 0};
    RateRange delta_range_{0, 0};
    std::uint64_t seed_ = 0;
};

void save_rates(std::ostream& out, const RateModel& r);
RateModel load_rates(std::istream& in, const Graph& g);

/// m_ij = beta_ij on links, 0 off links, m_ii = 1 - delta_i.
Eigen::MatrixXd modified_matrix(const Graph& g, const RateModel& r);

struct ThresholdReport {
    double lambda_m;
    bool spreads; // lambda_m >= 1
};

/// Largest-modulus eigenvalue of a non-negative matrix (its Perron root).
ThresholdReport threshold_lambda(const Eigen::MatrixXd& m);

/// P(t) = M P(t-1). Row t of the result is P(t); row 0 is p0.
Eigen::MatrixXd linear_iteration(const Eigen::MatrixXd& m, const Eigen::VectorXd& p0, int steps);

/// p_i(t) = 1 - prod_k (1 - m_ik p_k(t-1)), self term included. Row layout as linear_iteration.
Eigen::MatrixXd exact_probability_iteration(const Eigen::MatrixXd& m, const Eigen::VectorXd& p0, int steps);

enum class NodeStatus : std::uint8_t { Susceptible, Infected, Immunized };

struct InfectionState {
    std::vector<NodeStatus> status;
    int t = 0;
};

struct SimulationParams {
    std::vector<NodeId> seeds;     // infected at t = 0
    std::vector<NodeId> immunized; // never infected
    int steps = 200;
    int trials = 200;
    std::uint64_t rng_seed = 1;
    /// Worker threads; 0 picks hardware concurrency. Results do not depend on it.
    unsigned threads = 1;
};

struct SimulationOutcome {
    std::uint64_t trial_seed;
    std::vector<int> infected_counts; // index t = 0..steps
    std::vector<NodeId> final_infected;
    std::vector<int> steps_infected;  // per node, over t = 1..steps
};

/// Seed used for trial `trial` of a run with master seed `master`.
std::uint64_t trial_seed(std::uint64_t master, int trial);

/// Advances one synchronous step. Each node infected at the start of the step
/// recovers with probability delta_i and independently tries to infect every
/// non-immunized neighbour i with probability beta(i, k). A node is infected
/// after the step if it stayed infected or received any transmission.
void sis_step(const Graph& g, const RateModel& r, InfectionState& state, Engine& engine);

/// Independent discrete-time SIS trials.
std::vector<SimulationOutcome> simulate_sis(const Graph& g, const RateModel& r, const SimulationParams& params);

/// Fraction of trials in which each node is infected at each time: row t, column node.
Eigen::MatrixXd infection_frequencies(const Graph& g, const RateModel& r, const SimulationParams& params);

struct MostInfectedProtocol {
    /// Initial infected set; empty rotates a single seed through the nodes, trial t seeding node t mod n.
    std::vector<NodeId> seeds;
    int steps = 200;
    int trials = 100;
    std::uint64_t rng_seed = 1;
};

/// Total infected time steps per node over an unimmunized calibration run.
Ranking most_infected_ranking(const Graph& g, const RateModel& r, const MostInfectedProtocol& protocol);

} // namespace immunize
