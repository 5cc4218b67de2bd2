#include "immunize/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <Eigen/Eigenvalues>

#include "immunize/error.hpp"
#include "immunize/random.hpp"

namespace immunize {

Eigen::MatrixXd modified_matrix(const Graph& g, const RateModel& r)
{
    if (!r.matches(g))
        throw ValidationError("rate model was built for a different graph");
    const NodeId n = g.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (NodeId i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        auto rates = r.incoming(i);
        for (std::size_t idx = 0; idx < nb.size(); ++idx)
            m(i, nb[idx]) = rates[idx];
        m(i, i) = 1.0 - r.delta(i);
    }
    return m;
}

ThresholdReport threshold_lambda(const Eigen::MatrixXd& m)
{
    if (m.rows() == 0)
        return {0.0, false};
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success)
        throw Error("eigensolver did not converge");
    // The Perron root of a non-negative matrix is real and equals the spectral radius.
    double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
    return {radius, radius >= 1.0};
}

Eigen::MatrixXd linear_iteration(const Eigen::MatrixXd& m, const Eigen::VectorXd& p0, int steps)
{
    if (p0.size() != m.rows())
        throw ValidationError("initial vector size does not match the matrix");
    Eigen::MatrixXd trajectory(steps + 1, p0.size());
    trajectory.row(0) = p0.transpose();
    Eigen::VectorXd p = p0;
    for (int t = 1; t <= steps; ++t) {
        p = m * p;
        trajectory.row(t) = p.transpose();
    }
    return trajectory;
}

Eigen::MatrixXd exact_probability_iteration(const Eigen::MatrixXd& m, const Eigen::VectorXd& p0, int steps)
{
    if (p0.size() != m.rows())
        throw ValidationError("initial vector size does not match the matrix");
    if ((p0.array() < 0.0).any() || (p0.array() > 1.0).any())
        throw ValidationError("initial probabilities must lie in [0, 1]");
    const auto n = p0.size();
    Eigen::MatrixXd trajectory(steps + 1, n);
    trajectory.row(0) = p0.transpose();
    Eigen::VectorXd p = p0, next(n);
    for (int t = 1; t <= steps; ++t) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double escape = 1.0;
            for (Eigen::Index k = 0; k < n; ++k)
                if (m(i, k) > 0.0)
                    escape *= 1.0 - m(i, k) * p(k);
            next(i) = 1.0 - escape;
        }
        p = next;
        trajectory.row(t) = p.transpose();
    }
    return trajectory;
}

std::uint64_t trial_seed(std::uint64_t master, int trial)
{
    return derive_seed(master, static_cast<std::uint64_t>(trial));
}

namespace {

// outgoing[k][idx]: probability that k infects its idx-th neighbour.
std::vector<std::vector<double>> outgoing_rates(const Graph& g, const RateModel& r)
{
    std::vector<std::vector<double>> out(g.size());
    for (NodeId k = 0; k < g.size(); ++k)
        for (NodeId i : g.neighbors(k))
            out[k].push_back(r.beta(i, k));
    return out;
}

void advance(const Graph& g, const RateModel& r, const std::vector<std::vector<double>>& outgoing,
             InfectionState& state, Engine& engine, std::vector<NodeId>& infected, std::vector<char>& next)
{
    const NodeId n = g.size();
    infected.clear();
    for (NodeId v = 0; v < n; ++v)
        if (state.status[v] == NodeStatus::Infected)
            infected.push_back(v);
    next.assign(n, 0);
    for (NodeId k : infected) {
        if (!bernoulli(engine, r.delta(k)))
            next[k] = 1;
        auto nb = g.neighbors(k);
        const auto& rates = outgoing[k];
        for (std::size_t idx = 0; idx < nb.size(); ++idx) {
            NodeId i = nb[idx];
            bool hit = bernoulli(engine, rates[idx]);
            if (hit && state.status[i] != NodeStatus::Immunized)
                next[i] = 1;
        }
    }
    for (NodeId v = 0; v < n; ++v)
        if (state.status[v] != NodeStatus::Immunized)
            state.status[v] = next[v] ? NodeStatus::Infected : NodeStatus::Susceptible;
    ++state.t;
}

struct TrialContext {
    const Graph& g;
    const RateModel& r;
    std::vector<std::vector<double>> outgoing;
    std::vector<NodeStatus> initial;
    int steps;
};

std::vector<NodeStatus> initial_status(const Graph& g, std::span<const NodeId> seeds,
                                       std::span<const NodeId> immunized)
{
    std::vector<NodeStatus> status(g.size(), NodeStatus::Susceptible);
    for (NodeId v : immunized) {
        if (v < 0 || v >= g.size())
            throw ValidationError("immunized node " + std::to_string(v) + " out of range");
        status[v] = NodeStatus::Immunized;
    }
    for (NodeId v : seeds) {
        if (v < 0 || v >= g.size())
            throw ValidationError("seed node " + std::to_string(v) + " out of range");
        if (status[v] == NodeStatus::Immunized)
            throw ValidationError("seed node " + std::to_string(v) + " is immunized");
        status[v] = NodeStatus::Infected;
    }
    return status;
}

// `frequencies`, when given, accumulates infected indicators per (t, node).
SimulationOutcome run_trial(const TrialContext& ctx, std::uint64_t seed, Eigen::MatrixXd* frequencies = nullptr)
{
    const NodeId n = ctx.g.size();
    Engine engine(seed);
    InfectionState state{ctx.initial, 0};
    SimulationOutcome outcome{seed, {}, {}, std::vector<int>(n, 0)};
    outcome.infected_counts.reserve(ctx.steps + 1);

    auto record = [&] {
        int count = 0;
        for (NodeId v = 0; v < n; ++v)
            if (state.status[v] == NodeStatus::Infected) {
                ++count;
                if (state.t > 0)
                    ++outcome.steps_infected[v];
                if (frequencies)
                    (*frequencies)(state.t, v) += 1.0;
            }
        outcome.infected_counts.push_back(count);
    };

    std::vector<NodeId> infected;
    std::vector<char> next;
    record();
    for (int t = 1; t <= ctx.steps; ++t) {
        advance(ctx.g, ctx.r, ctx.outgoing, state, engine, infected, next);
        record();
    }
    for (NodeId v = 0; v < n; ++v)
        if (state.status[v] == NodeStatus::Infected)
            outcome.final_infected.push_back(v);
    return outcome;
}

TrialContext make_context(const Graph& g, const RateModel& r, const SimulationParams& params)
{
    if (!r.matches(g))
        throw ValidationError("rate model was built for a different graph");
    if (params.steps < 1)
        throw ValidationError("step count must be at least 1");
    if (params.trials < 1)
        throw ValidationError("trial count must be at least 1");
    return TrialContext{g, r, outgoing_rates(g, r), initial_status(g, params.seeds, params.immunized), params.steps};
}

} // namespace

void sis_step(const Graph& g, const RateModel& r, InfectionState& state, Engine& engine)
{
    if (static_cast<NodeId>(state.status.size()) != g.size())
        throw ValidationError("state size does not match the graph");
    std::vector<NodeId> infected;
    std::vector<char> next;
    advance(g, r, outgoing_rates(g, r), state, engine, infected, next);
}

std::vector<SimulationOutcome> simulate_sis(const Graph& g, const RateModel& r, const SimulationParams& params)
{
    const TrialContext ctx = make_context(g, r, params);
    std::vector<SimulationOutcome> outcomes(params.trials);

    unsigned threads = params.threads ? params.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(params.trials));
    auto work = [&](unsigned worker) {
        for (int trial = static_cast<int>(worker); trial < params.trials; trial += static_cast<int>(threads))
            outcomes[trial] = run_trial(ctx, trial_seed(params.rng_seed, trial));
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back(work, w);
    }
    return outcomes;
}

Eigen::MatrixXd infection_frequencies(const Graph& g, const RateModel& r, const SimulationParams& params)
{
    const TrialContext ctx = make_context(g, r, params);
    Eigen::MatrixXd frequencies = Eigen::MatrixXd::Zero(params.steps + 1, g.size());
    for (int trial = 0; trial < params.trials; ++trial)
        run_trial(ctx, trial_seed(params.rng_seed, trial), &frequencies);
    return frequencies / static_cast<double>(params.trials);
}

Ranking most_infected_ranking(const Graph& g, const RateModel& r, const MostInfectedProtocol& protocol)
{
    const NodeId n = g.size();
    std::vector<double> scores(n, 0.0);
    if (n == 0)
        return make_ranking(Strategy::MostInfected, std::move(scores));
    SimulationParams params{protocol.seeds, {}, protocol.steps, protocol.trials, protocol.rng_seed, 1};
    TrialContext ctx = make_context(g, r, params);
    for (int trial = 0; trial < protocol.trials; ++trial) {
        if (protocol.seeds.empty()) {
            NodeId seed = static_cast<NodeId>(trial % n);
            ctx.initial = initial_status(g, std::span<const NodeId>(&seed, 1), {});
        }
        auto outcome = run_trial(ctx, trial_seed(protocol.rng_seed, trial));
        for (NodeId v = 0; v < n; ++v)
            scores[v] += outcome.steps_infected[v];
    }
    return make_ranking(Strategy::MostInfected, std::move(scores));
}

} // namespace immunize
