#include "immunize/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

#include "immunize/error.hpp"
#include "immunize/random.hpp"

namespace immunize {

Graph::Graph(NodeId n, std::span<const Edge> edges, std::vector<std::string> labels)
    : n_(n), adjacency_(static_cast<std::size_t>(std::max<NodeId>(n, 0))), labels_(std::move(labels))
{
    if (n < 0)
        throw ValidationError("node count must be non-negative");
    if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(n))
        throw ValidationError("label map has " + std::to_string(labels_.size()) + " entries for " +
                              std::to_string(n) + " nodes");

    edges_.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ValidationError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") out of range for " + std::to_string(n) + " nodes");
        if (u == v)
            throw ValidationError("self-loop on node " + std::to_string(u));
        edges_.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    for (auto [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& list : adjacency_)
        std::sort(list.begin(), list.end());
}

bool Graph::has_edge(NodeId u, NodeId v) const
{
    const auto& list = adjacency_[u];
    return std::binary_search(list.begin(), list.end(), v);
}

std::string Graph::label(NodeId v) const
{
    return labels_.empty() ? std::to_string(v) : labels_[v];
}

Eigen::MatrixXd Graph::adjacency() const
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    for (auto [u, v] : edges_) {
        a(u, v) = 1.0;
        a(v, u) = 1.0;
    }
    return a;
}

Graph Graph::relabeled(std::span<const NodeId> perm) const
{
    if (perm.size() != static_cast<std::size_t>(n_))
        throw ValidationError("permutation size does not match node count");
    std::vector<Edge> mapped;
    mapped.reserve(edges_.size());
    for (auto [u, v] : edges_)
        mapped.emplace_back(perm[u], perm[v]);
    std::vector<std::string> labels;
    if (!labels_.empty()) {
        labels.resize(labels_.size());
        for (NodeId v = 0; v < n_; ++v)
            labels[perm[v]] = labels_[v];
    }
    return Graph(n_, mapped, std::move(labels));
}

Graph make_path(NodeId n)
{
    std::vector<Edge> edges;
    for (NodeId v = 0; v + 1 < n; ++v)
        edges.emplace_back(v, v + 1);
    return Graph(n, edges);
}

Graph make_cycle(NodeId n)
{
    if (n < 3)
        throw ValidationError("a cycle needs at least 3 nodes");
    std::vector<Edge> edges;
    for (NodeId v = 0; v < n; ++v)
        edges.emplace_back(v, (v + 1) % n);
    return Graph(n, edges);
}

Graph make_star(NodeId leaves)
{
    std::vector<Edge> edges;
    for (NodeId v = 1; v <= leaves; ++v)
        edges.emplace_back(0, v);
    return Graph(leaves + 1, edges);
}

Graph make_complete(NodeId n)
{
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            edges.emplace_back(u, v);
    return Graph(n, edges);
}

Graph make_empty(NodeId n) { return Graph(n, {}); }

Graph erdos_renyi(NodeId n, double p, std::uint64_t seed)
{
    Engine engine(seed);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (bernoulli(engine, p))
                edges.emplace_back(u, v);
    return Graph(n, edges);
}

Graph barabasi_albert(NodeId n, NodeId m, std::uint64_t seed)
{
    if (m < 1 || n < m + 1)
        throw ValidationError("preferential attachment needs m >= 1 and n > m");
    Engine engine(seed);
    std::vector<Edge> edges;
    // Each endpoint appears once per incident edge, so a uniform pick is degree-proportional.
    std::vector<NodeId> endpoints;
    for (NodeId u = 0; u <= m; ++u)
        for (NodeId v = u + 1; v <= m; ++v) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    for (NodeId v = m + 1; v < n; ++v) {
        std::set<NodeId> targets;
        while (static_cast<NodeId>(targets.size()) < m) {
            auto pick = static_cast<std::size_t>(uniform01(engine) * static_cast<double>(endpoints.size()));
            targets.insert(endpoints[pick]);
        }
        for (NodeId t : targets) {
            edges.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return Graph(n, edges);
}

std::vector<NodeId> connected_components(const Graph& g)
{
    std::vector<NodeId> component(g.size(), -1);
    NodeId next = 0;
    for (NodeId s = 0; s < g.size(); ++s) {
        if (component[s] >= 0)
            continue;
        std::queue<NodeId> queue;
        queue.push(s);
        component[s] = next;
        while (!queue.empty()) {
            NodeId u = queue.front();
            queue.pop();
            for (NodeId v : g.neighbors(u))
                if (component[v] < 0) {
                    component[v] = next;
                    queue.push(v);
                }
        }
        ++next;
    }
    return component;
}

Budget Budget::count(NodeId k)
{
    if (k < 0)
        throw ValidationError("budget must be non-negative");
    Budget b;
    b.count_ = k;
    return b;
}

Budget Budget::fraction(double f)
{
    if (!(f >= 0.0 && f <= 1.0))
        throw ValidationError("budget fraction must lie in [0, 1]");
    Budget b;
    b.fraction_ = f;
    return b;
}

NodeId Budget::resolve(NodeId n) const
{
    if (count_) {
        if (*count_ > n)
            throw ValidationError("budget " + std::to_string(*count_) + " exceeds node count " +
                                  std::to_string(n));
        return *count_;
    }
    // Guard against 0.16 * 118 = 18.880000000000003 style noise before ceil.
    double raw = *fraction_ * static_cast<double>(n);
    double k = std::ceil(raw - 1e-9 * std::max(1.0, raw));
    return std::min<NodeId>(static_cast<NodeId>(k), n);
}

std::string Budget::to_string() const
{
    if (count_)
        return std::to_string(*count_);
    std::string s = std::to_string(*fraction_);
    while (s.size() > 1 && s.back() == '0')
        s.pop_back();
    if (!s.empty() && s.back() == '.')
        s.push_back('0');
    return s;
}

Budget Budget::parse(std::string_view text)
{
    std::string s(text);
    try {
        if (!s.empty() && s.back() == '%') {
            s.pop_back();
            std::size_t used = 0;
            double pct = std::stod(s, &used);
            if (used != s.size())
                throw ValidationError("");
            return fraction(pct / 100.0);
        }
        std::size_t used = 0;
        if (s.find_first_of(".eE") != std::string::npos) {
            double f = std::stod(s, &used);
            if (used != s.size())
                throw ValidationError("");
            return fraction(f);
        }
        long k = std::stol(s, &used);
        if (used != s.size())
            throw ValidationError("");
        return count(static_cast<NodeId>(k));
    } catch (const std::logic_error&) {
    } catch (const ValidationError&) {
    }
    throw ValidationError("invalid budget '" + std::string(text) + "' (expected a count, a fraction or N%)");
}

} // namespace immunize
