// Command-line front end: rank, compare, threshold, simulate, oracle.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "immunize/centrality.hpp"
#include "immunize/epidemic.hpp"
#include "immunize/error.hpp"
#include "immunize/harness.hpp"
#include "immunize/oracle.hpp"
#include "immunize/spectral.hpp"

using namespace immunize;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GraphOptions {
    std::string path;
    std::string format = "edgelist";
    bool relabel = false;

    void add(CLI::App* cmd, bool required = true)
    {
        auto* opt = cmd->add_option("-g,--graph", path, "Graph file");
        if (required)
            opt->required();
        cmd->add_option("--graph-format", format, "edgelist or json")->capture_default_str();
        cmd->add_flag("--relabel", relabel, "Map arbitrary node names to contiguous ids");
    }

    GraphFormat parsed_format() const
    {
        auto f = parse_graph_format(format);
        if (!f)
            throw UsageError("unknown graph format '" + format + "' (valid: edgelist, json)");
        return *f;
    }

    Graph load() const { return load_graph_file(path, parsed_format(), relabel); }
};

RateRange parse_range(const std::string& text, const char* name)
{
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw UsageError(std::string("--") + name + " expects LO,HI");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::logic_error&) {
        throw UsageError(std::string("--") + name + " expects two numbers, got '" + text + "'");
    }
}

std::vector<NodeId> parse_nodes(const std::string& text)
{
    std::vector<NodeId> nodes;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty())
            continue;
        try {
            std::size_t used = 0;
            nodes.push_back(static_cast<NodeId>(std::stol(item, &used)));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw UsageError("bad node id '" + item + "'");
        }
    }
    return nodes;
}

Strategy parse_strategy_or_usage(const std::string& name)
{
    auto s = parse_strategy(name);
    if (!s)
        throw UsageError("unknown strategy '" + name + "'; valid strategies: " + strategy_names());
    return *s;
}

struct RateOptions {
    std::string beta = "0.1,0.4";
    std::string delta = "0.2,0.5";
    std::uint64_t seed = 1;
    std::string load_path;
    std::string save_path;

    void add(CLI::App* cmd)
    {
        cmd->add_option("--beta-range", beta, "Infection rate range LO,HI")->capture_default_str();
        cmd->add_option("--delta-range", delta, "Cure rate range LO,HI")->capture_default_str();
        cmd->add_option("--seed", seed, "Master RNG seed")->capture_default_str();
        cmd->add_option("--rates", load_path, "Load an explicit rate model (JSON)");
        cmd->add_option("--save-rates", save_path, "Write the rate model used (JSON)");
    }

    RateModel build(const Graph& g) const
    {
        RateModel r = [&] {
            if (!load_path.empty()) {
                std::ifstream in(load_path);
                if (!in)
                    throw ValidationError("cannot open rate file '" + load_path + "'");
                return load_rates(in, g);
            }
            ExperimentConfig c;
            c.master_seed = seed;
            return RateModel::generate(g, parse_range(beta, "beta-range"), parse_range(delta, "delta-range"),
                                       rate_seed(c));
        }();
        if (!save_path.empty()) {
            std::ofstream out(save_path);
            save_rates(out, r);
        }
        return r;
    }
};

void print_ranking(std::ostream& out, const Graph& g, const Ranking& r, const std::string& format)
{
    if (format == "json") {
        json rows = json::array();
        for (NodeId v : r.order)
            rows.push_back({{"node", v}, {"label", g.label(v)}, {"score", r.scores[v]}});
        out << json{{"tool", "immunize"}, {"version", kToolVersion}, {"strategy", strategy_name(r.strategy)},
                    {"ranking", rows}}
                   .dump(2)
            << '\n';
        return;
    }
    const char sep = format == "csv" ? ',' : ' ';
    if (format == "csv")
        out << "node,score\n";
    out << std::setprecision(12);
    for (NodeId v : r.order)
        out << g.label(v) << sep << r.scores[v] << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Budgeted network immunization: spectral selection, baselines and SIS simulation"};
    app.set_version_flag("--version", std::string("immunize ") + kToolVersion);
    app.require_subcommand(1);

    // rank
    auto* rank = app.add_subcommand("rank", "Rank nodes with one strategy");
    GraphOptions rank_graph;
    rank_graph.add(rank);
    std::string rank_strategy;
    int rank_power = kDefaultPower, rank_steps = 200, rank_trials = 100;
    std::string rank_format = "text";
    RateOptions rank_rates;
    rank->add_option("-s,--strategy", rank_strategy, "One of: " + strategy_names())->required();
    rank->add_option("--power", rank_power, "AV11 matrix power (even)")->capture_default_str();
    rank->add_option("--steps", rank_steps, "Most-infected calibration steps")->capture_default_str();
    rank->add_option("--trials", rank_trials, "Most-infected calibration trials")->capture_default_str();
    rank->add_option("--format", rank_format, "text, csv or json")->capture_default_str();
    rank_rates.add(rank);

    // compare
    auto* compare = app.add_subcommand("compare", "Immunize with each strategy and simulate");
    GraphOptions compare_graph;
    compare_graph.add(compare, false);
    std::string config_path, budget, strategies, beta_range, delta_range, seeds, csv_path, json_path;
    std::optional<int> power, steps, trials, calibration_trials;
    std::optional<std::uint64_t> master_seed;
    unsigned threads = 0;
    compare->add_option("-c,--config", config_path, "Experiment config (JSON)");
    compare->add_option("--budget", budget, "Count, fraction or N%");
    compare->add_option("--strategies", strategies, "Comma-separated strategy names");
    compare->add_option("--beta-range", beta_range, "Infection rate range LO,HI");
    compare->add_option("--delta-range", delta_range, "Cure rate range LO,HI");
    compare->add_option("--seeds", seeds, "Initially infected nodes, comma-separated");
    compare->add_option("--power", power, "AV11 matrix power (even)");
    compare->add_option("--steps", steps, "Time steps per trial");
    compare->add_option("--trials", trials, "Trials per strategy");
    compare->add_option("--calibration-trials", calibration_trials, "Most-infected calibration trials");
    compare->add_option("--seed", master_seed, "Master RNG seed");
    compare->add_option("--threads", threads, "Worker threads (0 = all cores)");
    compare->add_option("--csv", csv_path, "Write the comparison table as CSV");
    compare->add_option("--json", json_path, "Write the full results as JSON");

    // threshold
    auto* threshold = app.add_subcommand("threshold", "Largest eigenvalue of the modified matrix");
    GraphOptions threshold_graph;
    threshold_graph.add(threshold);
    RateOptions threshold_rates;
    threshold_rates.add(threshold);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run SIS trials with a fixed immunized set");
    GraphOptions sim_graph;
    sim_graph.add(simulate);
    RateOptions sim_rates;
    sim_rates.add(simulate);
    std::string sim_seeds, sim_immunized, sim_format = "text";
    int sim_steps = 200, sim_trials = 200;
    simulate->add_option("--seeds", sim_seeds, "Initially infected nodes, comma-separated")->required();
    simulate->add_option("--immunize", sim_immunized, "Immunized nodes, comma-separated");
    simulate->add_option("--steps", sim_steps, "Time steps per trial")->capture_default_str();
    simulate->add_option("--trials", sim_trials, "Trials")->capture_default_str();
    simulate->add_option("--format", sim_format, "text or json")->capture_default_str();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Exhaustive optimal k-node removal vs. AV11");
    GraphOptions oracle_graph;
    oracle_graph.add(oracle);
    NodeId oracle_k = 1;
    int oracle_power = kDefaultPower;
    double oracle_guard = kDefaultCombinationGuard;
    std::string oracle_table;
    oracle->add_option("-k,--budget", oracle_k, "Number of removed nodes")->capture_default_str();
    oracle->add_option("--power", oracle_power, "AV11 matrix power (even)")->capture_default_str();
    oracle->add_option("--guard", oracle_guard, "Maximum number of subsets")->capture_default_str();
    oracle->add_option("--table", oracle_table, "Write the full enumeration as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (rank->parsed()) {
            Strategy s = parse_strategy_or_usage(rank_strategy);
            if (rank_format != "text" && rank_format != "csv" && rank_format != "json")
                throw UsageError("--format must be text, csv or json");
            Graph g = rank_graph.load();
            std::optional<RateModel> rates;
            if (s == Strategy::MostInfected)
                rates = rank_rates.build(g);
            ExperimentConfig c;
            c.master_seed = rank_rates.seed;
            RankingContext ctx{rates ? &*rates : nullptr, rank_power,
                               MostInfectedProtocol{{}, rank_steps, rank_trials, calibration_seed(c)}};
            print_ranking(std::cout, g, compute_ranking(g, s, ctx), rank_format);
        } else if (compare->parsed()) {
            ExperimentConfig c;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in)
                    throw ValidationError("cannot open config '" + config_path + "'");
                json doc;
                try {
                    doc = json::parse(in);
                } catch (const json::parse_error& e) {
                    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
                }
                c = config_from_json(doc);
            }
            if (!compare_graph.path.empty()) {
                c.graph_path = compare_graph.path;
                c.graph_format = compare_graph.parsed_format();
                c.relabel = compare_graph.relabel;
            }
            if (!budget.empty())
                c.budget = Budget::parse(budget);
            if (!strategies.empty()) {
                c.strategies.clear();
                std::stringstream in(strategies);
                std::string name;
                while (std::getline(in, name, ','))
                    c.strategies.push_back(parse_strategy_or_usage(name));
            }
            if (!beta_range.empty())
                c.beta_range = parse_range(beta_range, "beta-range");
            if (!delta_range.empty())
                c.delta_range = parse_range(delta_range, "delta-range");
            if (!seeds.empty())
                c.seeds = parse_nodes(seeds);
            if (power)
                c.power = *power;
            if (steps)
                c.steps = *steps;
            if (trials)
                c.trials = *trials;
            if (calibration_trials)
                c.calibration_trials = *calibration_trials;
            if (master_seed)
                c.master_seed = *master_seed;
            if (compare->count("--threads"))
                c.threads = threads;
            if (!csv_path.empty())
                c.csv_path = csv_path;
            if (!json_path.empty())
                c.json_path = json_path;
            // Re-validate the merged config through its JSON form.
            c = config_from_json(to_json(c));
            if (c.graph_path.empty())
                throw UsageError("no graph given (--graph or \"graph\" in the config)");

            Graph g = load_graph_file(c.graph_path, c.graph_format, c.relabel);
            auto table = run_comparison(g, c);
            print_comparison(std::cout, table);
            if (!c.csv_path.empty()) {
                std::ofstream out(c.csv_path);
                write_comparison_csv(out, table);
            }
            if (!c.json_path.empty()) {
                std::ofstream out(c.json_path);
                out << comparison_json(table).dump(2) << '\n';
            }
        } else if (threshold->parsed()) {
            Graph g = threshold_graph.load();
            RateModel r = threshold_rates.build(g);
            auto report = threshold_lambda(modified_matrix(g, r));
            std::cout << "lambda_M = " << std::setprecision(10) << report.lambda_m
                      << (report.spreads ? " (above threshold)" : " (below threshold)") << '\n';
            std::cout << "lambda_1(A) = " << (g.size() ? spectrum(g).largest() : 0.0) << '\n';
        } else if (simulate->parsed()) {
            if (sim_format != "text" && sim_format != "json")
                throw UsageError("--format must be text or json");
            Graph g = sim_graph.load();
            RateModel r = sim_rates.build(g);
            ExperimentConfig c;
            c.master_seed = sim_rates.seed;
            SimulationParams params{parse_nodes(sim_seeds), parse_nodes(sim_immunized), sim_steps, sim_trials,
                                    trials_seed(c), 0};
            auto outcomes = simulate_sis(g, r, params);
            if (sim_format == "json") {
                json trials_json = json::array();
                for (const auto& o : outcomes)
                    trials_json.push_back({{"trial_seed", o.trial_seed},
                                           {"infected_counts", o.infected_counts},
                                           {"final_infected", o.final_infected}});
                std::cout << json{{"tool", "immunize"},
                                  {"version", kToolVersion},
                                  {"seeds", params.seeds},
                                  {"immunized", params.immunized},
                                  {"steps", params.steps},
                                  {"trials", trials_json}}
                                 .dump(2)
                          << '\n';
            } else {
                double sum = 0;
                for (const auto& o : outcomes)
                    sum += static_cast<double>(o.final_infected.size());
                std::cout << "trials " << outcomes.size() << ", steps " << sim_steps << '\n';
                std::cout << "mean final infected " << std::fixed << std::setprecision(3) << sum / outcomes.size()
                          << " of " << g.size() << '\n';
            }
        } else if (oracle->parsed()) {
            Graph g = oracle_graph.load();
            auto report = gap_report(g, oracle_k, oracle_power, oracle_guard);
            auto join = [](const std::vector<NodeId>& v) {
                std::string s;
                for (NodeId x : v)
                    s += (s.empty() ? "" : " ") + std::to_string(x);
                return s;
            };
            std::cout << std::setprecision(10);
            std::cout << "k = " << report.k << '\n';
            std::cout << "separation floor lambda_" << report.k + 1 << " = " << report.floor << " (clamped "
                      << report.floor_clamped << ")\n";
            std::cout << "optimal residual = " << report.optimal_residual << "  {" << join(report.optimal_set)
                      << "}\n";
            std::cout << "av11 residual    = " << report.av11_residual << "  {" << join(report.av11_set) << "}\n";
            if (!oracle_table.empty()) {
                auto full = optimal_removal(g, oracle_k, true, oracle_guard);
                std::ofstream out(oracle_table);
                out << "# immunize " << kToolVersion << '\n';
                write_removal_csv(out, full.table);
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const GuardError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
