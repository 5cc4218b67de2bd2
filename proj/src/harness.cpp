#include "immunize/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "immunize/centrality.hpp"
#include "immunize/error.hpp"
#include "immunize/random.hpp"

namespace immunize {

using nlohmann::json;

namespace {

json budget_json(const Budget& b)
{
    if (b.is_fraction())
        return {{"fraction", *b.as_fraction()}};
    return {{"count", *b.as_count()}};
}

Budget budget_from_json(const json& j)
{
    if (j.is_string())
        return Budget::parse(j.get<std::string>());
    if (j.is_number_integer())
        return Budget::count(j.get<NodeId>());
    if (j.is_object() && j.size() == 1) {
        if (j.contains("count"))
            return Budget::count(j["count"].get<NodeId>());
        if (j.contains("fraction"))
            return Budget::fraction(j["fraction"].get<double>());
    }
    throw ValidationError("budget must be a count, {\"count\": k}, {\"fraction\": f} or \"N%\"");
}

RateRange range_from_json(const json& j, const char* name)
{
    if (!j.is_array() || j.size() != 2)
        throw ValidationError(std::string(name) + " must be a [lo, hi] pair");
    RateRange r{j[0].get<double>(), j[1].get<double>()};
    if (!(r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi))
        throw ValidationError(std::string(name) + " must satisfy 0 <= lo <= hi <= 1");
    return r;
}

std::string fixed(double x, int digits)
{
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << x;
    return out.str();
}

} // namespace

json to_json(const ExperimentConfig& c)
{
    json strategies = json::array();
    for (Strategy s : c.strategies)
        strategies.push_back(std::string(strategy_name(s)));
    return json{
        {"graph", {{"path", c.graph_path},
                   {"format", c.graph_format == GraphFormat::Json ? "json" : "edgelist"},
                   {"relabel", c.relabel}}},
        {"budget", budget_json(c.budget)},
        {"strategies", strategies},
        {"beta_range", {c.beta_range.lo, c.beta_range.hi}},
        {"delta_range", {c.delta_range.lo, c.delta_range.hi}},
        {"seeds", c.seeds},
        {"steps", c.steps},
        {"trials", c.trials},
        {"master_seed", c.master_seed},
        {"power", c.power},
        {"calibration_trials", c.calibration_trials},
        {"threads", c.threads},
        {"output", {{"csv", c.csv_path}, {"json", c.json_path}}},
    };
}

ExperimentConfig config_from_json(const json& j)
{
    static const std::vector<std::string> known = {
        "graph", "budget", "strategies", "beta_range", "delta_range", "seeds", "steps",
        "trials", "master_seed", "power", "calibration_trials", "threads", "output",
    };
    if (!j.is_object())
        throw ValidationError("experiment config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ValidationError("unknown config key '" + key + "'");

    ExperimentConfig c;
    try {
        if (j.contains("graph")) {
            const auto& g = j["graph"];
            if (g.is_string()) {
                c.graph_path = g.get<std::string>();
            } else {
                c.graph_path = g.value("path", std::string{});
                auto format = parse_graph_format(g.value("format", std::string("edgelist")));
                if (!format)
                    throw ValidationError("unknown graph format");
                c.graph_format = *format;
                c.relabel = g.value("relabel", false);
            }
        }
        if (j.contains("budget"))
            c.budget = budget_from_json(j["budget"]);
        if (j.contains("strategies")) {
            c.strategies.clear();
            for (const auto& name : j["strategies"]) {
                auto s = parse_strategy(name.get<std::string>());
                if (!s)
                    throw ValidationError("unknown strategy '" + name.get<std::string>() + "' (valid: " +
                                          strategy_names() + ")");
                c.strategies.push_back(*s);
            }
        }
        if (j.contains("beta_range"))
            c.beta_range = range_from_json(j["beta_range"], "beta_range");
        if (j.contains("delta_range"))
            c.delta_range = range_from_json(j["delta_range"], "delta_range");
        if (j.contains("seeds"))
            c.seeds = j["seeds"].get<std::vector<NodeId>>();
        c.steps = j.value("steps", c.steps);
        c.trials = j.value("trials", c.trials);
        c.master_seed = j.value("master_seed", c.master_seed);
        c.power = j.value("power", c.power);
        c.calibration_trials = j.value("calibration_trials", c.calibration_trials);
        c.threads = j.value("threads", c.threads);
        if (j.contains("output")) {
            c.csv_path = j["output"].value("csv", std::string{});
            c.json_path = j["output"].value("json", std::string{});
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad experiment config: ") + e.what());
    }
    if (c.steps < 1 || c.trials < 1 || c.calibration_trials < 1)
        throw ValidationError("steps, trials and calibration_trials must be positive");
    check_power(c.power);
    return c;
}

namespace {

// Execution settings do not change results, so they stay out of the hash and the CSV.
json result_json(const ExperimentConfig& config)
{
    json j = to_json(config);
    j.erase("threads");
    j.erase("output");
    return j;
}

} // namespace

std::string config_hash(const ExperimentConfig& config)
{
    json j = result_json(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t rate_seed(const ExperimentConfig& c) { return derive_seed(c.master_seed, 1); }
std::uint64_t trials_seed(const ExperimentConfig& c) { return derive_seed(c.master_seed, 2); }
std::uint64_t calibration_seed(const ExperimentConfig& c) { return derive_seed(c.master_seed, 3); }

Ranking compute_ranking(const Graph& g, Strategy strategy, const RankingContext& ctx)
{
    switch (strategy) {
    case Strategy::AV11:
        return av11_ranking(g, ctx.power);
    case Strategy::Degree:
        return degree_ranking(g);
    case Strategy::Closeness:
        return closeness_ranking(g);
    case Strategy::Betweenness:
        return betweenness_ranking(g);
    case Strategy::DynamicalImportance:
        return dynamical_importance_ranking(g);
    case Strategy::EstradaIndex:
        return estrada_ranking(g);
    case Strategy::KCore:
        return kcore_ranking(g);
    case Strategy::MostInfected:
        if (!ctx.rates)
            throw ValidationError("most-infected ranking needs a rate model");
        return most_infected_ranking(g, *ctx.rates, ctx.calibration);
    }
    throw ValidationError("unknown strategy");
}

ComparisonTable run_comparison(const Graph& g, const ExperimentConfig& config)
{
    const NodeId n = g.size();
    const NodeId k = config.budget.resolve(n);
    if (k >= n)
        throw ValidationError("budget " + std::to_string(k) + " must be smaller than the node count " +
                              std::to_string(n));
    if (config.seeds.empty())
        throw ValidationError("at least one initially infected seed node is required");
    for (NodeId s : config.seeds)
        if (s < 0 || s >= n)
            throw ValidationError("seed node " + std::to_string(s) + " out of range");
    if (config.strategies.empty())
        throw ValidationError("no strategies selected");
    check_power(config.power);

    const RateModel rates = RateModel::generate(g, config.beta_range, config.delta_range, rate_seed(config));
    RankingContext ctx{&rates, config.power,
                       MostInfectedProtocol{{}, config.steps, config.calibration_trials, calibration_seed(config)}};

    ComparisonTable table{n, k, {}, config};
    for (Strategy strategy : config.strategies) {
        Ranking ranking = compute_ranking(g, strategy, ctx);
        ComparisonRow row{strategy, ranking.top(k, config.seeds), 0, 0, 0, 0, {}, {}};

        SimulationParams params{config.seeds, row.immunized, config.steps, config.trials, trials_seed(config),
                                config.threads};
        auto outcomes = simulate_sis(g, rates, params);

        row.mean_trajectory.assign(config.steps + 1, 0.0);
        double sum = 0.0;
        for (const auto& o : outcomes) {
            int count = static_cast<int>(o.final_infected.size());
            row.final_counts.push_back(count);
            sum += count;
            for (int t = 0; t <= config.steps; ++t)
                row.mean_trajectory[t] += o.infected_counts[t];
        }
        const double trials = static_cast<double>(outcomes.size());
        for (auto& m : row.mean_trajectory)
            m /= trials;
        row.mean_infected = sum / trials;
        double ss = 0.0;
        for (int count : row.final_counts)
            ss += (count - row.mean_infected) * (count - row.mean_infected);
        row.std_infected = outcomes.size() > 1 ? std::sqrt(ss / (trials - 1.0)) : 0.0;
        row.percent = 100.0 * row.mean_infected / n;
        table.rows.push_back(std::move(row));
    }

    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const ComparisonRow& a, const ComparisonRow& b) { return a.mean_infected < b.mean_infected; });
    for (auto& row : table.rows)
        row.rank = 1 + static_cast<int>(std::count_if(table.rows.begin(), table.rows.end(), [&](const ComparisonRow& o) {
                       return o.mean_infected < row.mean_infected;
                   }));
    return table;
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table)
{
    out << "# immunize " << kToolVersion << '\n';
    out << "# config_hash " << config_hash(table.config) << '\n';
    out << "# config " << result_json(table.config).dump() << '\n';
    out << "# nodes " << table.n << " budget " << table.budget << '\n';
    out << "rank,strategy,mean_infected,std_infected,percent,immunized\n";
    for (const auto& row : table.rows) {
        out << row.rank << ',' << strategy_name(row.strategy) << ',' << fixed(row.mean_infected, 4) << ','
            << fixed(row.std_infected, 4) << ',' << fixed(row.percent, 2) << ',';
        for (std::size_t i = 0; i < row.immunized.size(); ++i)
            out << (i ? " " : "") << row.immunized[i];
        out << '\n';
    }
}

json comparison_json(const ComparisonTable& table)
{
    json rows = json::array();
    for (const auto& row : table.rows)
        rows.push_back({
            {"rank", row.rank},
            {"strategy", std::string(strategy_name(row.strategy))},
            {"mean_infected", row.mean_infected},
            {"std_infected", row.std_infected},
            {"percent", row.percent},
            {"immunized", row.immunized},
            {"final_counts", row.final_counts},
            {"mean_trajectory", row.mean_trajectory},
        });
    return json{
        {"tool", "immunize"},
        {"version", kToolVersion},
        {"config_hash", config_hash(table.config)},
        {"config", to_json(table.config)},
        {"nodes", table.n},
        {"budget", table.budget},
        {"rows", rows},
    };
}

void print_comparison(std::ostream& out, const ComparisonTable& table)
{
    out << "nodes " << table.n << ", budget " << table.budget << " (" << table.config.budget.to_string()
        << "), trials " << table.config.trials << ", steps " << table.config.steps << '\n';
    out << std::left << std::setw(24) << "Algorithm" << "Nr. still infected nodes, (percentage)\n";
    for (const auto& row : table.rows)
        out << std::left << std::setw(24) << strategy_name(row.strategy) << fixed(row.mean_infected, 1) << " ("
            << fixed(row.percent, 1) << "%)  sd " << fixed(row.std_infected, 1) << '\n';
}

} // namespace immunize
