#include <algorithm>
#include <istream>
#include <ostream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "immunize/epidemic.hpp"
#include "immunize/error.hpp"
#include "immunize/random.hpp"

namespace immunize {
namespace {

void check_range(RateRange r, const char* name)
{
    if (!(r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi))
        throw ValidationError(std::string(name) + " range [" + std::to_string(r.lo) + ", " +
                              std::to_string(r.hi) + "] must satisfy 0 <= lo <= hi <= 1");
}

void check_rate(double x, const char* name)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw ValidationError(std::string(name) + " value " + std::to_string(x) + " outside [0, 1]");
}

std::vector<std::vector<NodeId>> neighbor_lists(const Graph& g)
{
    std::vector<std::vector<NodeId>> lists(g.size());
    for (NodeId v = 0; v < g.size(); ++v)
        lists[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
    return lists;
}

} // namespace

RateModel RateModel::generate(const Graph& g, RateRange beta, RateRange delta, std::uint64_t seed)
{
    check_range(beta, "beta");
    check_range(delta, "delta");
    RateModel r;
    r.neighbors_ = neighbor_lists(g);
    r.beta_range_ = beta;
    r.delta_range_ = delta;
    r.seed_ = seed;
    // Separate streams so the cure rates do not depend on the edge set.
    Engine beta_engine(derive_seed(seed, 0));
    Engine delta_engine(derive_seed(seed, 1));
    r.incoming_.resize(g.size());
    for (NodeId i = 0; i < g.size(); ++i) {
        for (std::size_t idx = 0; idx < r.neighbors_[i].size(); ++idx)
            r.incoming_[i].push_back(uniform(beta_engine, beta.lo, beta.hi));
        r.link_count_ += r.neighbors_[i].size();
    }
    r.delta_.resize(g.size());
    for (auto& d : r.delta_)
        d = uniform(delta_engine, delta.lo, delta.hi);
    return r;
}

RateModel RateModel::homogeneous(const Graph& g, double beta, double delta)
{
    check_rate(beta, "beta");
    check_rate(delta, "delta");
    RateModel r;
    r.neighbors_ = neighbor_lists(g);
    r.beta_range_ = {beta, beta};
    r.delta_range_ = {delta, delta};
    r.incoming_.resize(g.size());
    for (NodeId i = 0; i < g.size(); ++i) {
        r.incoming_[i].assign(r.neighbors_[i].size(), beta);
        r.link_count_ += r.neighbors_[i].size();
    }
    r.delta_.assign(g.size(), delta);
    return r;
}

RateModel RateModel::from_values(const Graph& g, std::span<const std::tuple<NodeId, NodeId, double>> beta,
                                 std::vector<double> delta)
{
    if (delta.size() != static_cast<std::size_t>(g.size()))
        throw ValidationError("expected " + std::to_string(g.size()) + " cure rates, got " +
                              std::to_string(delta.size()));
    for (double d : delta)
        check_rate(d, "delta");
    RateModel r;
    r.neighbors_ = neighbor_lists(g);
    r.delta_ = std::move(delta);
    r.incoming_.resize(g.size());
    std::vector<std::vector<bool>> seen(g.size());
    for (NodeId i = 0; i < g.size(); ++i) {
        r.incoming_[i].assign(r.neighbors_[i].size(), 0.0);
        seen[i].assign(r.neighbors_[i].size(), false);
        r.link_count_ += r.neighbors_[i].size();
    }
    double lo = 1.0, hi = 0.0;
    for (auto [i, j, b] : beta) {
        check_rate(b, "beta");
        if (i < 0 || i >= g.size() || j < 0 || j >= g.size() || !g.has_edge(i, j))
            throw ValidationError("beta given for (" + std::to_string(i) + ", " + std::to_string(j) +
                                  "), which is not a link of the graph");
        const auto& list = r.neighbors_[i];
        auto idx = static_cast<std::size_t>(std::lower_bound(list.begin(), list.end(), j) - list.begin());
        if (seen[i][idx])
            throw ValidationError("beta for (" + std::to_string(i) + ", " + std::to_string(j) + ") given twice");
        seen[i][idx] = true;
        r.incoming_[i][idx] = b;
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    for (NodeId i = 0; i < g.size(); ++i)
        for (std::size_t idx = 0; idx < seen[i].size(); ++idx)
            if (!seen[i][idx])
                throw ValidationError("missing beta for (" + std::to_string(i) + ", " +
                                      std::to_string(r.neighbors_[i][idx]) + ")");
    r.beta_range_ = beta.empty() ? RateRange{0, 0} : RateRange{lo, hi};
    if (!r.delta_.empty()) {
        auto [dlo, dhi] = std::minmax_element(r.delta_.begin(), r.delta_.end());
        r.delta_range_ = {*dlo, *dhi};
    }
    return r;
}

double RateModel::beta(NodeId i, NodeId j) const
{
    const auto& list = neighbors_.at(i);
    auto it = std::lower_bound(list.begin(), list.end(), j);
    if (it == list.end() || *it != j)
        return 0.0;
    return incoming_[i][static_cast<std::size_t>(it - list.begin())];
}

RateModel RateModel::scaled_beta(double factor) const
{
    RateModel copy = *this;
    for (auto& list : copy.incoming_)
        for (auto& b : list) {
            b *= factor;
            check_rate(b, "scaled beta");
        }
    copy.beta_range_ = {beta_range_.lo * factor, beta_range_.hi * factor};
    return copy;
}

bool RateModel::matches(const Graph& g) const
{
    if (static_cast<NodeId>(neighbors_.size()) != g.size())
        return false;
    for (NodeId v = 0; v < g.size(); ++v) {
        auto nb = g.neighbors(v);
        if (!std::equal(nb.begin(), nb.end(), neighbors_[v].begin(), neighbors_[v].end()))
            return false;
    }
    return true;
}

void save_rates(std::ostream& out, const RateModel& r)
{
    nlohmann::json doc;
    doc["n"] = r.size();
    doc["generator"] = {{"beta_range", {r.beta_range().lo, r.beta_range().hi}},
                        {"delta_range", {r.delta_range().lo, r.delta_range().hi}},
                        {"seed", r.seed()}};
    auto beta = nlohmann::json::array();
    for (NodeId i = 0; i < r.size(); ++i) {
        auto nb = r.neighbors(i);
        auto rates = r.incoming(i);
        for (std::size_t idx = 0; idx < nb.size(); ++idx)
            beta.push_back({i, nb[idx], rates[idx]});
    }
    doc["beta"] = std::move(beta);
    doc["delta"] = r.deltas();
    out << doc.dump() << '\n';
}

RateModel load_rates(std::istream& in, const Graph& g)
{
    try {
        auto doc = nlohmann::json::parse(in);
        if (doc.at("n").get<NodeId>() != g.size())
            throw ValidationError("rate model is for " + doc.at("n").dump() + " nodes, graph has " +
                                  std::to_string(g.size()));
        std::vector<std::tuple<NodeId, NodeId, double>> beta;
        for (const auto& entry : doc.at("beta"))
            beta.emplace_back(entry.at(0).get<NodeId>(), entry.at(1).get<NodeId>(), entry.at(2).get<double>());
        RateModel r = RateModel::from_values(g, beta, doc.at("delta").get<std::vector<double>>());
        if (doc.contains("generator")) {
            const auto& gen = doc["generator"];
            r.beta_range_ = {gen.at("beta_range").at(0).get<double>(), gen.at("beta_range").at(1).get<double>()};
            r.delta_range_ = {gen.at("delta_range").at(0).get<double>(), gen.at("delta_range").at(1).get<double>()};
            r.seed_ = gen.at("seed").get<std::uint64_t>();
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad rate model document: ") + e.what(), 0);
    }
}

} // namespace immunize
