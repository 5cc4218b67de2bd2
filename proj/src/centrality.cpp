#include "immunize/centrality.hpp"

#include <queue>
#include <stack>

namespace immunize {

std::vector<double> closeness_scores(const Graph& g)
{
    const NodeId n = g.size();
    std::vector<double> scores(n, 0.0);
    std::vector<int> dist(n);
    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        std::queue<NodeId> queue;
        queue.push(s);
        long long total = 0;
        NodeId reached = 0;
        while (!queue.empty()) {
            NodeId u = queue.front();
            queue.pop();
            for (NodeId v : g.neighbors(u))
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    total += dist[v];
                    ++reached;
                    queue.push(v);
                }
        }
        if (total > 0)
            scores[s] = static_cast<double>(reached) / static_cast<double>(total);
    }
    return scores;
}

Ranking closeness_ranking(const Graph& g) { return make_ranking(Strategy::Closeness, closeness_scores(g)); }

std::vector<double> betweenness_scores(const Graph& g)
{
    const NodeId n = g.size();
    std::vector<double> centrality(n, 0.0);
    std::vector<std::vector<NodeId>> preds(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<int> dist(n);

    for (NodeId s = 0; s < n; ++s) {
        for (auto& p : preds)
            p.clear();
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        sigma[s] = 1.0;
        dist[s] = 0;

        std::stack<NodeId> visited;
        std::queue<NodeId> queue;
        queue.push(s);
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop();
            visited.push(v);
            for (NodeId w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        while (!visited.empty()) {
            NodeId w = visited.top();
            visited.pop();
            for (NodeId v : preds[w])
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s)
                centrality[w] += delta[w];
        }
    }
    // Every unordered pair was counted from both ends.
    for (auto& c : centrality)
        c /= 2.0;
    return centrality;
}

Ranking betweenness_ranking(const Graph& g)
{
    return make_ranking(Strategy::Betweenness, betweenness_scores(g));
}

} // namespace immunize
