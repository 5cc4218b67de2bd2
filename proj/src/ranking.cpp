#include "immunize/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "immunize/error.hpp"

namespace immunize {

namespace {
constexpr std::array<std::string_view, 8> kNames = {
    "av11", "degree", "closeness", "betweenness", "dynamical-importance", "estrada", "kcore", "most-infected",
};
} // namespace

std::string_view strategy_name(Strategy s) { return kNames[static_cast<std::size_t>(s)]; }

std::optional<Strategy> parse_strategy(std::string_view name)
{
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == name)
            return static_cast<Strategy>(i);
    return std::nullopt;
}

std::string strategy_names()
{
    std::string out;
    for (auto name : kNames) {
        if (!out.empty())
            out += ", ";
        out += name;
    }
    return out;
}

std::vector<NodeId> Ranking::top(NodeId k, std::span<const NodeId> exclude) const
{
    std::vector<NodeId> picked;
    for (NodeId v : order) {
        if (static_cast<NodeId>(picked.size()) >= k)
            break;
        if (std::find(exclude.begin(), exclude.end(), v) == exclude.end())
            picked.push_back(v);
    }
    return picked;
}

Ranking make_ranking(Strategy strategy, std::vector<double> scores)
{
    const auto n = static_cast<NodeId>(scores.size());
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return scores[a] > scores[b]; });

    // Snap each run of near-equal scores to the run's leading value, then re-sort with id tie-break.
    std::vector<double> key(n);
    std::size_t i = 0;
    while (i < order.size()) {
        double lead = scores[order[i]];
        double tol = 1e-9 * std::max(1.0, std::abs(lead));
        std::size_t j = i;
        while (j < order.size() && lead - scores[order[j]] <= tol) {
            key[order[j]] = lead;
            ++j;
        }
        i = j;
    }
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return key[a] != key[b] ? key[a] > key[b] : a < b;
    });
    return Ranking{strategy, std::move(order), std::move(scores)};
}

Ranking degree_ranking(const Graph& g)
{
    std::vector<double> scores(g.size());
    for (NodeId v = 0; v < g.size(); ++v)
        scores[v] = static_cast<double>(g.degree(v));
    return make_ranking(Strategy::Degree, std::move(scores));
}

std::vector<NodeId> core_numbers(const Graph& g)
{
    // Bucket peeling (Batagelj-Zaversnik).
    const NodeId n = g.size();
    std::vector<NodeId> degree(n);
    NodeId max_degree = 0;
    for (NodeId v = 0; v < n; ++v) {
        degree[v] = static_cast<NodeId>(g.degree(v));
        max_degree = std::max(max_degree, degree[v]);
    }
    std::vector<NodeId> bin(max_degree + 1, 0);
    for (NodeId v = 0; v < n; ++v)
        ++bin[degree[v]];
    NodeId start = 0;
    for (auto& b : bin) {
        NodeId count = b;
        b = start;
        start += count;
    }
    std::vector<NodeId> vert(n), pos(n);
    for (NodeId v = 0; v < n; ++v) {
        pos[v] = bin[degree[v]]++;
        vert[pos[v]] = v;
    }
    for (NodeId d = max_degree; d > 0; --d)
        bin[d] = bin[d - 1];
    if (!bin.empty())
        bin[0] = 0;

    for (NodeId i = 0; i < n; ++i) {
        NodeId v = vert[i];
        for (NodeId u : g.neighbors(v)) {
            if (degree[u] > degree[v]) {
                NodeId du = degree[u];
                NodeId pu = pos[u];
                NodeId pw = bin[du];
                NodeId w = vert[pw];
                if (u != w) {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                ++bin[du];
                --degree[u];
            }
        }
    }
    return degree;
}

Ranking kcore_ranking(const Graph& g)
{
    auto cores = core_numbers(g);
    std::vector<double> scores(cores.begin(), cores.end());
    return make_ranking(Strategy::KCore, std::move(scores));
}

} // namespace immunize
