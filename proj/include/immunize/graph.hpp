#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace immunize {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph on nodes 0..n-1. Immutable once built.
///
/// Edges are stored once with u < v, sorted; neighbour lists are sorted
/// ascending. Construction symmetrizes and removes duplicate pairs, and
/// rejects self-loops and out-of-range ids.
class Graph {
public:
    Graph() = default;
    Graph(NodeId n, std::span<const Edge> edges, std::vector<std::string> labels = {});

    NodeId size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
    std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
    bool has_edge(NodeId u, NodeId v) const;

    bool has_labels() const noexcept { return !labels_.empty(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    /// External name of `v`, or its decimal id when no label map is present.
    std::string label(NodeId v) const;

    /// Dense symmetric 0/1 adjacency matrix.
    Eigen::MatrixXd adjacency() const;

    /// Graph induced by renaming node v to perm[v]. Labels follow their nodes.
    Graph relabeled(std::span<const NodeId> perm) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    NodeId n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<std::string> labels_;
};

enum class GraphFormat { EdgeList, Json };

std::optional<GraphFormat> parse_graph_format(std::string_view name);

/// Reads a graph from text.
///
/// EdgeList: one whitespace-separated "u v" pair per line, '#' starts a
/// comment. A comment of the form "# nodes: N" declares the node count so
/// isolated nodes survive a round trip. Without it, ids must cover 0..max
/// contiguously. With `relabel` set, tokens are arbitrary names that are
/// mapped to contiguous ids (numeric order when every token is an integer,
/// lexicographic otherwise) and kept as labels.
///
/// Json: {"n": int, "edges": [[u, v], ...], "labels": [..]?}.
Graph load_graph(std::istream& in, GraphFormat format, bool relabel = false);
Graph load_graph_file(const std::string& path, GraphFormat format, bool relabel = false);

/// Inverse of load_graph; load_graph(save_graph(g)) == g.
void save_graph(std::ostream& out, const Graph& g, GraphFormat format);

// Small named graphs and random generators, used by tests and the CLI.
Graph make_path(NodeId n);
Graph make_cycle(NodeId n);
Graph make_star(NodeId leaves);
Graph make_complete(NodeId n);
Graph make_empty(NodeId n);
Graph erdos_renyi(NodeId n, double p, std::uint64_t seed);
/// Preferential attachment: starts from a clique on m+1 nodes, each new node attaches to m distinct targets.
Graph barabasi_albert(NodeId n, NodeId m, std::uint64_t seed);

/// Connected components, labelled 0.. in order of their lowest node.
std::vector<NodeId> connected_components(const Graph& g);

/// Budget given either as an absolute count or a fraction of n.
class Budget {
public:
    static Budget count(NodeId k);
    static Budget fraction(double f);

    /// k, or ceil(f * n); never exceeds n.
    NodeId resolve(NodeId n) const;
    bool is_fraction() const noexcept { return fraction_.has_value(); }
    std::optional<NodeId> as_count() const noexcept { return count_; }
    std::optional<double> as_fraction() const noexcept { return fraction_; }
    std::string to_string() const;
    /// Accepts "19", "16%" or "0.16".
    static Budget parse(std::string_view text);

private:
    std::optional<NodeId> count_;
    std::optional<double> fraction_;
};

} // namespace immunize
