#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "immunize/graph.hpp"
#include "immunize/ranking.hpp"

namespace immunize {

/// Eigen-decomposition of a symmetric matrix, eigenvalues descending.
struct Spectrum {
    std::vector<double> values;
    /// Column j is the unit eigenvector of values[j]; present only when requested.
    std::optional<Eigen::MatrixXd> vectors;

    double largest() const { return values.front(); }
    double smallest() const { return values.back(); }
};

Spectrum symmetric_spectrum(const Eigen::MatrixXd& symmetric, bool want_vectors = false);
Spectrum spectrum(const Graph& g, bool want_vectors = false);

/// Largest eigenvalue of a symmetric matrix.
double largest_eigenvalue(const Eigen::MatrixXd& symmetric);

/// Z*A*Z: the adjacency matrix with the rows and columns of `removed` zeroed.
Eigen::MatrixXd masked_adjacency(const Graph& g, std::span<const NodeId> removed);

/// Largest eigenvalue left after zeroing `removed`; 0 once no edge survives.
double residual_lambda1(const Graph& g, std::span<const NodeId> removed);

/// 1 + |smallest eigenvalue of A|. Makes every masked matrix positive definite.
double diagonal_shift(const Graph& g);

inline constexpr int kDefaultPower = 16;

/// Throws ValidationError unless `power` is a positive even integer.
void check_power(int power);

/// Greedy spectral selection.
///
/// Each step forms P = (Z*A*Z + d*I)^p by repeated squaring and removes the
/// not-yet-selected node with the largest diagonal entry of P. The shift d
/// is fixed from the full matrix for the whole run. Ties (relative 1e-10)
/// go to the lowest id.
class Av11Selector {
public:
    Av11Selector(const Graph& g, int power = kDefaultPower);

    /// Selects and masks one more node; throws once every node is selected.
    NodeId step();

    const std::vector<NodeId>& selected() const noexcept { return selected_; }
    /// Z as a 0/1 vector: mask()[i] == 0 iff i was selected.
    const std::vector<int>& mask() const noexcept { return mask_; }
    double shift() const noexcept { return shift_; }
    int power() const noexcept { return power_; }
    NodeId iteration() const noexcept { return static_cast<NodeId>(selected_.size()); }
    /// Diagonal b_ii(h) of (Z*A*Z + d*I)^p at the current iteration.
    Eigen::VectorXd diagonal() const;

private:
    /// Diagonal of ((Z*A*Z + d*I) / scale)^p; multiply by scale^p for b_ii(h).
    Eigen::VectorXd scaled_diagonal() const;

    const Graph* graph_;
    Eigen::MatrixXd adjacency_;
    std::vector<NodeId> selected_;
    std::vector<int> mask_;
    double shift_;
    double scale_;
    int power_;
};

struct Av11Result {
    std::vector<NodeId> selected;
    double residual_lambda1;
};

Av11Result av11_select(const Graph& g, NodeId k, int power = kDefaultPower);
Av11Result av11_select(const Graph& g, const Budget& budget, int power = kDefaultPower);

/// Full selection order (k = n); score = n - position.
Ranking av11_ranking(const Graph& g, int power = kDefaultPower);

/// Drop of the largest eigenvalue when a single node is removed, one exact eigensolve per node.
std::vector<double> dynamical_importance_scores(const Graph& g);
Ranking dynamical_importance_ranking(const Graph& g);

/// Subgraph centrality: diagonal of exp(A), computed from the spectrum.
std::vector<double> estrada_scores(const Graph& g);
Ranking estrada_ranking(const Graph& g);

/// lambda_{k+1}(A): no k-node removal can push the largest eigenvalue below it.
double separation_lower_bound(const Spectrum& spec, NodeId k);

struct TracePowerBound {
    double bound;   // (sum_i b_ii)^(1/p) - d
    double lambda1; // exact largest eigenvalue of the masked matrix
    double shift;   // d
};

TracePowerBound trace_power_bound(const Graph& g, std::span<const NodeId> removed, int power);

/// M^power for a square matrix by binary exponentiation.
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int power);

} // namespace immunize
