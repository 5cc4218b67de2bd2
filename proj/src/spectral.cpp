#include "immunize/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "immunize/error.hpp"

namespace immunize {

Spectrum symmetric_spectrum(const Eigen::MatrixXd& symmetric, bool want_vectors)
{
    Spectrum out;
    const auto n = symmetric.rows();
    if (n == 0)
        return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        symmetric, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw Error("symmetric eigensolver did not converge");
    // Eigen returns ascending order.
    const auto& values = solver.eigenvalues();
    out.values.resize(n);
    for (Eigen::Index j = 0; j < n; ++j)
        out.values[j] = values(n - 1 - j);
    if (want_vectors)
        out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

Spectrum spectrum(const Graph& g, bool want_vectors)
{
    return symmetric_spectrum(g.adjacency(), want_vectors);
}

double largest_eigenvalue(const Eigen::MatrixXd& symmetric)
{
    if (symmetric.rows() == 0)
        return 0.0;
    if (symmetric.isZero(0.0))
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw Error("symmetric eigensolver did not converge");
    return solver.eigenvalues()(symmetric.rows() - 1);
}

Eigen::MatrixXd masked_adjacency(const Graph& g, std::span<const NodeId> removed)
{
    Eigen::MatrixXd a = g.adjacency();
    for (NodeId v : removed) {
        if (v < 0 || v >= g.size())
            throw ValidationError("node " + std::to_string(v) + " out of range");
        a.row(v).setZero();
        a.col(v).setZero();
    }
    return a;
}

double residual_lambda1(const Graph& g, std::span<const NodeId> removed)
{
    return largest_eigenvalue(masked_adjacency(g, removed));
}

double diagonal_shift(const Graph& g)
{
    if (g.size() == 0)
        return 1.0;
    return 1.0 + std::abs(spectrum(g).smallest());
}

void check_power(int power)
{
    if (power <= 0 || power % 2 != 0)
        throw ValidationError("power must be a positive even integer, got " + std::to_string(power));
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int power)
{
    if (power < 0)
        throw ValidationError("negative matrix power");
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    Eigen::MatrixXd base = m;
    bool first = true;
    while (power > 0) {
        if (power & 1) {
            if (first)
                result = base;
            else
                result = (result * base).eval();
            first = false;
        }
        power >>= 1;
        if (power > 0)
            base = (base * base).eval();
    }
    return result;
}

Av11Selector::Av11Selector(const Graph& g, int power)
    : graph_(&g), adjacency_(g.adjacency()), mask_(g.size(), 1), power_(power)
{
    check_power(power);
    shift_ = diagonal_shift(g);
    std::size_t max_degree = 0;
    for (NodeId v = 0; v < g.size(); ++v)
        max_degree = std::max(max_degree, g.degree(v));
    // Bounds every eigenvalue of the shifted matrix, so powers stay <= 1 in magnitude.
    scale_ = shift_ + static_cast<double>(max_degree);
}

Eigen::VectorXd Av11Selector::scaled_diagonal() const
{
    const auto n = adjacency_.rows();
    Eigen::MatrixXd shifted = adjacency_;
    for (NodeId v : selected_) {
        shifted.row(v).setZero();
        shifted.col(v).setZero();
    }
    shifted.diagonal().array() += shift_;
    shifted /= scale_;
    if (n == 0)
        return {};
    return matrix_power(shifted, power_).diagonal();
}

Eigen::VectorXd Av11Selector::diagonal() const
{
    return scaled_diagonal() * std::pow(scale_, power_);
}

NodeId Av11Selector::step()
{
    if (iteration() >= graph_->size())
        throw ValidationError("every node is already selected");
    const Eigen::VectorXd diag = scaled_diagonal();
    NodeId best = -1;
    double best_value = 0.0;
    for (NodeId v = 0; v < graph_->size(); ++v) {
        if (!mask_[v])
            continue;
        if (best < 0 || diag(v) > best_value * (1.0 + 1e-10)) {
            best = v;
            best_value = diag(v);
        }
    }
    selected_.push_back(best);
    mask_[best] = 0;
    return best;
}

Av11Result av11_select(const Graph& g, NodeId k, int power)
{
    check_power(power);
    if (k < 0 || k > g.size())
        throw ValidationError("budget " + std::to_string(k) + " outside [0, " + std::to_string(g.size()) + "]");
    Av11Selector selector(g, power);
    for (NodeId h = 0; h < k; ++h)
        selector.step();
    Av11Result result{selector.selected(), 0.0};
    result.residual_lambda1 = residual_lambda1(g, result.selected);
    return result;
}

Av11Result av11_select(const Graph& g, const Budget& budget, int power)
{
    return av11_select(g, budget.resolve(g.size()), power);
}

Ranking av11_ranking(const Graph& g, int power)
{
    Av11Selector selector(g, power);
    const NodeId n = g.size();
    std::vector<double> scores(n);
    for (NodeId position = 0; position < n; ++position)
        scores[selector.step()] = static_cast<double>(n - position);
    // Scores are distinct integers, so the ranking order is the selection order.
    return make_ranking(Strategy::AV11, std::move(scores));
}

std::vector<double> dynamical_importance_scores(const Graph& g)
{
    const NodeId n = g.size();
    const Eigen::MatrixXd a = g.adjacency();
    const double lambda1 = largest_eigenvalue(a);
    std::vector<double> scores(n);
    for (NodeId v = 0; v < n; ++v) {
        Eigen::MatrixXd reduced = a;
        reduced.row(v).setZero();
        reduced.col(v).setZero();
        scores[v] = lambda1 - largest_eigenvalue(reduced);
    }
    return scores;
}

Ranking dynamical_importance_ranking(const Graph& g)
{
    return make_ranking(Strategy::DynamicalImportance, dynamical_importance_scores(g));
}

std::vector<double> estrada_scores(const Graph& g)
{
    const NodeId n = g.size();
    std::vector<double> scores(n, 0.0);
    if (n == 0)
        return scores;
    auto spec = spectrum(g, true);
    const Eigen::MatrixXd& u = *spec.vectors;
    for (NodeId j = 0; j < n; ++j) {
        double weight = std::exp(spec.values[j]);
        for (NodeId i = 0; i < n; ++i)
            scores[i] += u(i, j) * u(i, j) * weight;
    }
    return scores;
}

Ranking estrada_ranking(const Graph& g) { return make_ranking(Strategy::EstradaIndex, estrada_scores(g)); }

double separation_lower_bound(const Spectrum& spec, NodeId k)
{
    const auto n = static_cast<NodeId>(spec.values.size());
    if (k < 0 || k >= n)
        throw ValidationError("removal count " + std::to_string(k) + " must lie in [0, " + std::to_string(n) + ")");
    return spec.values[k];
}

TracePowerBound trace_power_bound(const Graph& g, std::span<const NodeId> removed, int power)
{
    check_power(power);
    const double shift = diagonal_shift(g);
    const Eigen::MatrixXd masked = masked_adjacency(g, removed);
    std::size_t max_degree = 0;
    for (NodeId v = 0; v < g.size(); ++v)
        max_degree = std::max(max_degree, g.degree(v));
    const double scale = shift + static_cast<double>(max_degree);

    Eigen::MatrixXd shifted = masked;
    shifted.diagonal().array() += shift;
    shifted /= scale;
    // trace(B^p) = scale^p * trace((B/scale)^p)
    const double trace = matrix_power(shifted, power).trace();
    return {scale * std::pow(trace, 1.0 / power) - shift, largest_eigenvalue(masked), shift};
}

} // namespace immunize
