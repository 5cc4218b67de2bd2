#include <doctest.h>

#include <cmath>
#include <sstream>

#include "immunize/epidemic.hpp"
#include "immunize/error.hpp"
#include "oracles.hpp"

using namespace immunize;

TEST_CASE("rate generation")
{
    Graph g = erdos_renyi(20, 0.3, 4);
    auto fixed = RateModel::generate(g, {0.5, 0.5}, {0.4, 0.4}, 99);
    for (NodeId i = 0; i < g.size(); ++i) {
        CHECK(fixed.delta(i) == 0.4);
        for (double b : fixed.incoming(i))
            CHECK(b == 0.5);
    }

    CHECK(RateModel::generate(g, {0, 1}, {0, 1}, 7) == RateModel::generate(g, {0, 1}, {0, 1}, 7));
    CHECK_FALSE(RateModel::generate(g, {0, 1}, {0, 1}, 7) == RateModel::generate(g, {0, 1}, {0, 1}, 8));

    auto k2 = RateModel::generate(make_complete(2), {0, 1}, {0, 1}, 3);
    CHECK(k2.link_count() == 2);
    for (double x : {k2.beta(0, 1), k2.beta(1, 0), k2.delta(0), k2.delta(1)}) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
    }
    CHECK(k2.beta(0, 1) != k2.beta(1, 0));

    CHECK_THROWS_AS(RateModel::generate(g, {0.4, 0.1}, {0, 1}, 1), ValidationError);
    CHECK_THROWS_AS(RateModel::generate(g, {0, 1.2}, {0, 1}, 1), ValidationError);
    CHECK_THROWS_AS(RateModel::generate(g, {0, 1}, {-0.1, 0.5}, 1), ValidationError);
}

TEST_CASE("rate model JSON replay is exact")
{
    Graph g = erdos_renyi(15, 0.3, 8);
    auto r = RateModel::generate(g, {0.1, 0.4}, {0.2, 0.5}, 1234);
    std::stringstream buf;
    save_rates(buf, r);
    CHECK(load_rates(buf, g) == r);

    std::stringstream wrong;
    save_rates(wrong, r);
    CHECK_THROWS_AS(load_rates(wrong, make_path(3)), ValidationError);
}

TEST_CASE("explicit rates must cover exactly the links")
{
    Graph k2 = make_complete(2);
    std::vector<std::tuple<NodeId, NodeId, double>> beta{{0, 1, 0.3}, {1, 0, 0.7}};
    auto r = RateModel::from_values(k2, beta, {0.1, 0.2});
    CHECK(r.beta(0, 1) == 0.3);
    CHECK(r.beta(1, 0) == 0.7);

    std::vector<std::tuple<NodeId, NodeId, double>> missing{{0, 1, 0.3}};
    CHECK_THROWS_AS(RateModel::from_values(k2, missing, {0.1, 0.2}), ValidationError);
    std::vector<std::tuple<NodeId, NodeId, double>> stray{{0, 1, 0.3}, {1, 0, 0.7}, {0, 0, 0.1}};
    CHECK_THROWS_AS(RateModel::from_values(k2, stray, {0.1, 0.2}), ValidationError);
}

TEST_CASE("modified matrix")
{
    Graph k2 = make_complete(2);
    Eigen::MatrixXd m = modified_matrix(k2, RateModel::homogeneous(k2, 0.5, 0.4));
    Eigen::Matrix2d expected;
    expected << 0.6, 0.5, 0.5, 0.6;
    CHECK(m.isApprox(expected));

    Graph one = make_empty(1);
    CHECK(modified_matrix(one, RateModel::homogeneous(one, 0.0, 0.3))(0, 0) == doctest::Approx(0.7));

    Graph p3 = make_path(3);
    auto r = RateModel::generate(p3, {0, 0}, {0.1, 0.9}, 5);
    Eigen::MatrixXd mp = modified_matrix(p3, r);
    for (NodeId i = 0; i < 3; ++i)
        for (NodeId j = 0; j < 3; ++j)
            CHECK(mp(i, j) == (i == j ? 1.0 - r.delta(i) : 0.0));

    CHECK_THROWS_AS(modified_matrix(make_path(4), r), ValidationError);

    // Off-diagonal pattern equals the graph's.
    Graph g = erdos_renyi(12, 0.3, 2);
    Eigen::MatrixXd mg = modified_matrix(g, RateModel::generate(g, {0.1, 0.9}, {0.1, 0.9}, 3));
    for (NodeId i = 0; i < g.size(); ++i)
        for (NodeId j = 0; j < g.size(); ++j)
            if (i != j)
                CHECK((mg(i, j) > 0) == g.has_edge(i, j));
}

TEST_CASE("threshold eigenvalue")
{
    Graph k2 = make_complete(2);
    auto above = threshold_lambda(modified_matrix(k2, RateModel::homogeneous(k2, 0.5, 0.4)));
    CHECK(above.lambda_m == doctest::Approx(1.1));
    CHECK(above.spreads);
    auto below = threshold_lambda(modified_matrix(k2, RateModel::homogeneous(k2, 0.5, 0.95)));
    CHECK(below.lambda_m == doctest::Approx(0.55));
    CHECK_FALSE(below.spreads);
    Graph one = make_empty(1);
    auto single = threshold_lambda(modified_matrix(one, RateModel::homogeneous(one, 0.0, 0.2)));
    CHECK(single.lambda_m == doctest::Approx(0.8));
    CHECK_FALSE(single.spreads);

    // Asymmetric rates: compare against power iteration.
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Graph g = erdos_renyi(20, 0.25, 40 + seed);
        Eigen::MatrixXd m = modified_matrix(g, RateModel::generate(g, {0.0, 0.6}, {0.1, 0.9}, seed));
        CHECK(threshold_lambda(m).lambda_m == doctest::Approx(oracle::perron_root(m)).epsilon(1e-7));
    }

    // Cure rate 1 leaves the beta-weighted adjacency; homogeneous beta scales lambda_1(A).
    Graph g = erdos_renyi(30, 0.2, 1);
    double lambda1 = oracle::power_iteration_lambda1(g.adjacency());
    auto r = RateModel::homogeneous(g, 0.9 / lambda1, 1.0);
    CHECK(threshold_lambda(modified_matrix(g, r)).lambda_m == doctest::Approx(0.9).epsilon(1e-8));
}

TEST_CASE("linear iteration")
{
    Graph k2 = make_complete(2);
    Eigen::MatrixXd m = modified_matrix(k2, RateModel::homogeneous(k2, 0.5, 0.4));
    Eigen::VectorXd p0(2);
    p0 << 0.1, 0.1;
    auto traj = linear_iteration(m, p0, 3);
    CHECK(traj.rows() == 4);
    CHECK(traj(1, 0) == doctest::Approx(0.11));
    CHECK(traj(1, 1) == doctest::Approx(0.11));

    Graph p3 = make_path(3);
    Eigen::MatrixXd identity = modified_matrix(p3, RateModel::homogeneous(p3, 0.0, 0.0));
    Eigen::VectorXd q(3);
    q << 0.2, 0.5, 0.9;
    auto fixed = linear_iteration(identity, q, 5);
    for (int t = 0; t <= 5; ++t)
        CHECK(fixed.row(t).transpose().isApprox(q));

    // Below threshold the norm decays to zero.
    Eigen::MatrixXd sub = modified_matrix(k2, RateModel::homogeneous(k2, 0.3, 0.6));
    auto decay = linear_iteration(sub, p0, 200);
    for (int t = 1; t <= 200; ++t)
        CHECK(decay.row(t).norm() <= decay.row(t - 1).norm());
    CHECK(decay.row(200).norm() < 1e-10);
}

TEST_CASE("exact probability iteration")
{
    Graph p3 = make_path(3);
    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
    auto dead = exact_probability_iteration(zero, Eigen::VectorXd::Ones(3), 4);
    for (int t = 1; t <= 4; ++t)
        CHECK(dead.row(t).isZero());

    Eigen::MatrixXd single(1, 1);
    single << 0.7;
    auto scalar = exact_probability_iteration(single, Eigen::VectorXd::Ones(1), 6);
    for (int t = 0; t <= 6; ++t)
        CHECK(scalar(t, 0) == doctest::Approx(std::pow(0.7, t)));

    CHECK_THROWS_AS(exact_probability_iteration(single, Eigen::VectorXd::Constant(1, 1.5), 1), ValidationError);
}

TEST_CASE("linear iteration dominates the exact iteration and outputs stay in [0, 1]")
{
    Engine engine(17);
    for (int instance = 0; instance < 30; ++instance) {
        Graph g = erdos_renyi(10, 0.3, engine());
        auto r = RateModel::generate(g, {0, 1}, {0, 1}, engine());
        Eigen::MatrixXd m = modified_matrix(g, r);
        Eigen::VectorXd p0(g.size());
        for (NodeId v = 0; v < g.size(); ++v)
            p0(v) = uniform01(engine);
        auto exact = exact_probability_iteration(m, p0, 10);
        auto linear = linear_iteration(m, p0, 10);
        CHECK((exact.array() >= 0.0).all());
        CHECK((exact.array() <= 1.0).all());
        CHECK((exact.array() <= linear.array() + 1e-12).all());
    }
}

TEST_CASE("equation iteration is exact for the first two steps from a deterministic start")
{
    // After two steps the node states become correlated and the product form is an approximation.
    for (Graph g : {make_complete(2), make_path(3), make_star(3)}) {
        auto r = RateModel::generate(g, {0.1, 0.4}, {0.2, 0.5}, 31);
        std::vector<int> start(g.size(), 0);
        start[0] = 1;
        Eigen::VectorXd p0 = Eigen::VectorXd::Zero(g.size());
        p0(0) = 1.0;
        auto chain = oracle::sis_markov_chain(g, r, start, 2);
        auto eq = exact_probability_iteration(modified_matrix(g, r), p0, 2);
        CHECK((chain - eq).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("simulation edge cases")
{
    Graph g = erdos_renyi(25, 0.2, 6);
    SimulationParams params;
    params.seeds = {0, 5};
    params.steps = 20;
    params.trials = 30;

    auto no_spread = simulate_sis(g, RateModel::generate(g, {0, 0}, {0.2, 0.5}, 1), params);
    for (const auto& o : no_spread)
        for (NodeId v : o.final_infected)
            CHECK((v == 0 || v == 5));

    auto instant_cure = simulate_sis(g, RateModel::homogeneous(g, 0.0, 1.0), params);
    for (const auto& o : instant_cure)
        for (int t = 1; t <= params.steps; ++t)
            CHECK(o.infected_counts[t] == 0);

    params.immunized = {1, 2, 3};
    params.seeds = {5};
    CHECK_THROWS_AS(simulate_sis(g, RateModel::homogeneous(g, 0.5, 0.5),
                                 SimulationParams{{1}, {1}, 5, 1, 1, 1}),
                    ValidationError);
    CHECK_THROWS_AS(simulate_sis(g, RateModel::homogeneous(g, 0.5, 0.5), SimulationParams{{0}, {}, 0, 1, 1, 1}),
                    ValidationError);
    CHECK_THROWS_AS(simulate_sis(make_path(3), RateModel::homogeneous(g, 0.5, 0.5), params), ValidationError);

    auto outcomes = simulate_sis(g, RateModel::generate(g, {0.3, 0.9}, {0.0, 0.3}, 2), params);
    for (const auto& o : outcomes) {
        for (int count : o.infected_counts)
            CHECK(count <= g.size() - 3);
        for (NodeId v : o.final_infected)
            CHECK((v != 1 && v != 2 && v != 3));
        CHECK(o.steps_infected[1] == 0);
    }
}

TEST_CASE("full transmission reaches exactly the unblocked component")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Graph g = erdos_renyi(30, 0.1, 500 + seed);
        std::vector<NodeId> blocked{3, 7, 11, 19};
        std::vector<NodeId> seeds{0};
        auto reach = oracle::reachable_avoiding(g, seeds, blocked);
        // Distances inside the unblocked subgraph bound the time to full infection.
        SimulationParams params{seeds, blocked, g.size(), 3, seed, 1};
        auto outcomes = simulate_sis(g, RateModel::homogeneous(g, 1.0, 0.0), params);
        for (const auto& o : outcomes)
            for (NodeId v = 0; v < g.size(); ++v) {
                bool infected = std::binary_search(o.final_infected.begin(), o.final_infected.end(), v);
                CHECK(infected == static_cast<bool>(reach[v]));
            }
    }
}

TEST_CASE("simulation is deterministic and independent of thread count")
{
    Graph g = barabasi_albert(60, 2, 3);
    auto r = RateModel::generate(g, kDefaultBetaRange, kDefaultDeltaRange, 5);
    SimulationParams params{{0, 10}, {1, 2}, 50, 40, 77, 1};
    auto serial = simulate_sis(g, r, params);
    params.threads = 4;
    auto parallel = simulate_sis(g, r, params);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].trial_seed == parallel[i].trial_seed);
        CHECK(serial[i].infected_counts == parallel[i].infected_counts);
        CHECK(serial[i].final_infected == parallel[i].final_infected);
    }
    CHECK(serial[0].trial_seed == trial_seed(77, 0));
}

TEST_CASE("single steps preserve immunity")
{
    Graph g = make_complete(4);
    auto r = RateModel::homogeneous(g, 1.0, 0.0);
    InfectionState state{{NodeStatus::Infected, NodeStatus::Immunized, NodeStatus::Susceptible,
                          NodeStatus::Susceptible},
                         0};
    Engine engine(1);
    sis_step(g, r, state, engine);
    CHECK(state.t == 1);
    CHECK(state.status[1] == NodeStatus::Immunized);
    CHECK(state.status[2] == NodeStatus::Infected);
    CHECK(state.status[3] == NodeStatus::Infected);
}

TEST_CASE("Monte-Carlo frequencies match the exact Markov chain")
{
    for (Graph g : {make_complete(2), make_path(3)}) {
        auto r = RateModel::generate(g, kDefaultBetaRange, kDefaultDeltaRange, 11);
        std::vector<int> start(g.size(), 0);
        start[0] = 1;
        const int trials = 20000;
        auto freq = infection_frequencies(g, r, SimulationParams{{0}, {}, 6, trials, 3, 1});
        auto chain = oracle::sis_markov_chain(g, r, start, 6);
        for (int t = 0; t <= 6; ++t)
            for (NodeId v = 0; v < g.size(); ++v) {
                double p = chain(t, v);
                double se = std::sqrt(std::max(p * (1 - p), 1e-12) / trials);
                CHECK(std::abs(freq(t, v) - p) <= 4 * se + 1e-12);
            }
    }
}

TEST_CASE("most-infected ranking")
{
    Graph g = make_path(5);
    auto quiet = most_infected_ranking(g, RateModel::homogeneous(g, 0.0, 0.3), MostInfectedProtocol{{2}, 20, 30, 1});
    CHECK(quiet.order.front() == 2);
    CHECK(quiet.scores[2] > 0);
    for (NodeId v : {0, 1, 3, 4})
        CHECK(quiet.scores[v] == 0.0);
    CHECK(quiet.order == std::vector<NodeId>{2, 0, 1, 3, 4});

    Graph k3 = make_complete(3);
    auto sym = most_infected_ranking(k3, RateModel::homogeneous(k3, 0.3, 0.3), MostInfectedProtocol{{}, 100, 300, 9});
    double mean = (sym.scores[0] + sym.scores[1] + sym.scores[2]) / 3;
    for (double s : sym.scores)
        CHECK(std::abs(s - mean) < 0.05 * mean);

    Graph star = make_star(6);
    int hub_wins = 0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        auto r = most_infected_ranking(star, RateModel::homogeneous(star, 0.3, 0.3),
                                       MostInfectedProtocol{{0}, 100, 100, rep});
        bool hub_top = true;
        for (NodeId leaf = 1; leaf <= 6; ++leaf)
            hub_top &= r.scores[0] >= r.scores[leaf];
        hub_wins += hub_top;
    }
    CHECK(hub_wins >= 19);
}
