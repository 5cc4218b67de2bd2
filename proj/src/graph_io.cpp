#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "immunize/error.hpp"
#include "immunize/graph.hpp"

namespace immunize {
namespace {

std::string_view trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<long long> parse_integer(std::string_view token)
{
    long long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        return std::nullopt;
    return value;
}

// "# nodes: N" directive inside a comment.
std::optional<long long> node_directive(std::string_view comment)
{
    comment = trim(comment.substr(1));
    constexpr std::string_view key = "nodes:";
    if (comment.substr(0, key.size()) != key)
        return std::nullopt;
    return parse_integer(trim(comment.substr(key.size())));
}

struct RawEdge {
    std::string u, v;
    std::size_t line;
};

Graph load_edge_list(std::istream& in, bool relabel)
{
    std::vector<RawEdge> raw;
    std::optional<long long> declared;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty())
            continue;
        if (view.front() == '#') {
            if (auto n = node_directive(view)) {
                if (*n < 0)
                    throw ParseError("negative node count", line_no);
                declared = *n;
            }
            continue;
        }
        if (auto hash = view.find('#'); hash != std::string_view::npos)
            view = trim(view.substr(0, hash));
        std::istringstream fields{std::string(view)};
        std::string u, v, extra;
        if (!(fields >> u >> v) || (fields >> extra))
            throw ParseError("expected exactly two node ids, got '" + std::string(view) + "'", line_no);
        raw.push_back({u, v, line_no});
    }

    std::vector<Edge> edges;
    edges.reserve(raw.size());

    if (relabel) {
        std::vector<std::string> names;
        for (const auto& e : raw) {
            if (e.u == e.v)
                throw ParseError("self-loop on node " + e.u, e.line);
            names.push_back(e.u);
            names.push_back(e.v);
        }
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
        bool numeric = std::all_of(names.begin(), names.end(),
                                   [](const std::string& s) { return parse_integer(s).has_value(); });
        if (numeric)
            std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
                return *parse_integer(a) < *parse_integer(b);
            });
        std::map<std::string, NodeId> index;
        for (std::size_t i = 0; i < names.size(); ++i)
            index.emplace(names[i], static_cast<NodeId>(i));
        for (const auto& e : raw)
            edges.emplace_back(index.at(e.u), index.at(e.v));
        const auto n = static_cast<NodeId>(names.size());
        return Graph(n, edges, std::move(names));
    }

    long long max_id = -1;
    for (const auto& e : raw) {
        auto u = parse_integer(e.u);
        auto v = parse_integer(e.v);
        if (!u || !v)
            throw ParseError("node ids must be integers (use relabelling for named nodes)", e.line);
        if (*u < 0 || *v < 0)
            throw ParseError("negative node id", e.line);
        if (*u == *v)
            throw ParseError("self-loop on node " + std::to_string(*u), e.line);
        if (declared && (*u >= *declared || *v >= *declared))
            throw ParseError("node id exceeds declared count " + std::to_string(*declared), e.line);
        max_id = std::max({max_id, *u, *v});
        edges.emplace_back(static_cast<NodeId>(*u), static_cast<NodeId>(*v));
    }
    NodeId n = declared ? static_cast<NodeId>(*declared) : static_cast<NodeId>(max_id + 1);
    if (!declared) {
        std::vector<bool> seen(n, false);
        for (auto [u, v] : edges)
            seen[u] = seen[v] = true;
        auto gap = std::find(seen.begin(), seen.end(), false);
        if (gap != seen.end())
            throw ParseError("node ids are not contiguous: " + std::to_string(gap - seen.begin()) +
                                 " is missing (declare '# nodes: N' or relabel)",
                             0);
    }
    return Graph(n, edges);
}

Graph load_json(std::istream& in)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
    try {
        long long n = doc.at("n").get<long long>();
        if (n < 0)
            throw ParseError("negative node count", 0);
        std::vector<Edge> edges;
        for (const auto& pair : doc.at("edges")) {
            if (!pair.is_array() || pair.size() != 2)
                throw ParseError("each edge must be a [u, v] pair", 0);
            auto u = pair[0].get<long long>();
            auto v = pair[1].get<long long>();
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw ParseError("edge [" + std::to_string(u) + ", " + std::to_string(v) + "] out of range", 0);
            if (u == v)
                throw ParseError("self-loop on node " + std::to_string(u), 0);
            edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
        }
        std::vector<std::string> labels;
        if (doc.contains("labels") && !doc["labels"].is_null())
            labels = doc["labels"].get<std::vector<std::string>>();
        return Graph(static_cast<NodeId>(n), edges, std::move(labels));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad graph document: ") + e.what(), 0);
    }
}

} // namespace

std::optional<GraphFormat> parse_graph_format(std::string_view name)
{
    if (name == "edgelist" || name == "edges" || name == "txt")
        return GraphFormat::EdgeList;
    if (name == "json")
        return GraphFormat::Json;
    return std::nullopt;
}

Graph load_graph(std::istream& in, GraphFormat format, bool relabel)
{
    return format == GraphFormat::Json ? load_json(in) : load_edge_list(in, relabel);
}

Graph load_graph_file(const std::string& path, GraphFormat format, bool relabel)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open graph file '" + path + "'");
    return load_graph(in, format, relabel);
}

void save_graph(std::ostream& out, const Graph& g, GraphFormat format)
{
    if (format == GraphFormat::Json) {
        nlohmann::json doc;
        doc["n"] = g.size();
        doc["edges"] = nlohmann::json::array();
        for (auto [u, v] : g.edges())
            doc["edges"].push_back({u, v});
        if (g.has_labels())
            doc["labels"] = g.labels();
        out << doc.dump() << '\n';
        return;
    }
    // Labels do not survive the edge-list form; JSON is the lossless one.
    out << "# nodes: " << g.size() << '\n';
    for (auto [u, v] : g.edges())
        out << u << ' ' << v << '\n';
}

} // namespace immunize
