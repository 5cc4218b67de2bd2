#include <doctest.h>

#include <sstream>

#include "immunize/error.hpp"
#include "immunize/oracle.hpp"
#include "oracles.hpp"

using namespace immunize;

TEST_CASE("binomial")
{
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(118, 19) > 1e7);
    CHECK(binomial(3, 4) == 0);
    CHECK(binomial(7, 0) == 1);
}

TEST_CASE("optimal removal examples")
{
    auto c4 = optimal_removal(make_cycle(4), 2);
    CHECK(c4.best == std::vector<NodeId>{0, 2});
    CHECK(c4.residual_lambda1 == 0.0);

    auto star = optimal_removal(make_star(4), 1);
    CHECK(star.best == std::vector<NodeId>{0});
    CHECK(star.residual_lambda1 == 0.0);

    auto p3 = optimal_removal(make_path(3), 1, true);
    CHECK(p3.best == std::vector<NodeId>{1});
    CHECK(p3.residual_lambda1 == 0.0);
    REQUIRE(p3.table.size() == 3);
    CHECK(p3.table[0].residual_lambda1 == doctest::Approx(1.0));

    Graph g = erdos_renyi(8, 0.4, 1);
    auto none = optimal_removal(g, 0);
    CHECK(none.best.empty());
    CHECK(none.residual_lambda1 == doctest::Approx(spectrum(g).largest()));
}

TEST_CASE("optimal removal guard")
{
    Graph g = erdos_renyi(40, 0.1, 2);
    try {
        optimal_removal(g, 10);
        FAIL("expected the guard to trip");
    } catch (const GuardError& e) {
        CHECK(e.count() == binomial(40, 10));
        CHECK(std::string(e.what()).find("C(40, 10)") != std::string::npos);
    }
    CHECK_THROWS_AS(optimal_removal(erdos_renyi(12, 0.3, 2), 3, false, 100), GuardError);
    CHECK_NOTHROW(optimal_removal(erdos_renyi(12, 0.3, 2), 3, false, 1000));
    CHECK_THROWS_AS(optimal_removal(g, 41), ValidationError);
}

TEST_CASE("enumeration table matches independent subset enumeration")
{
    Graph g = erdos_renyi(7, 0.5, 3);
    auto result = optimal_removal(g, 3, true);
    auto subsets = oracle::subsets(7, 3);
    REQUIRE(result.table.size() == subsets.size());
    double best = 1e9;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        CHECK(result.table[i].removed == subsets[i]);
        double r = oracle::power_iteration_lambda1(masked_adjacency(g, subsets[i]));
        CHECK(result.table[i].residual_lambda1 == doctest::Approx(r).epsilon(1e-7));
        best = std::min(best, result.table[i].residual_lambda1);
    }
    CHECK(result.residual_lambda1 == best);

    std::ostringstream csv;
    write_removal_csv(csv, result.table);
    CHECK(csv.str().rfind("subset,residual_lambda1\n0 1 2,", 0) == 0);
}

TEST_CASE("gap report examples")
{
    auto star = gap_report(make_star(4), 1);
    CHECK(star.av11_residual == doctest::Approx(0.0));
    CHECK(star.optimal_residual == doctest::Approx(0.0));
    CHECK(star.floor == doctest::Approx(0.0));

    auto k4 = gap_report(make_complete(4), 1);
    CHECK(k4.av11_residual == doctest::Approx(2.0));
    CHECK(k4.optimal_residual == doctest::Approx(2.0));
    CHECK(k4.floor == doctest::Approx(-1.0));
    CHECK(k4.floor_clamped == 0.0);

    Graph g = erdos_renyi(9, 0.4, 6);
    auto zero = gap_report(g, 0);
    double lambda1 = spectrum(g).largest();
    CHECK(zero.av11_residual == doctest::Approx(lambda1));
    CHECK(zero.optimal_residual == doctest::Approx(lambda1));
    CHECK(zero.floor == doctest::Approx(lambda1));
}

TEST_CASE("floor <= optimal <= av11 on small graphs, and the table agrees with av11")
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Graph g = erdos_renyi(4 + static_cast<NodeId>(seed % 7), 0.45, 900 + seed);
        for (NodeId k = 0; k <= 3 && k < g.size(); ++k) {
            auto report = gap_report(g, k);
            CHECK(report.floor <= report.optimal_residual + 1e-9);
            CHECK(report.optimal_residual <= report.av11_residual + 1e-9);

            auto full = optimal_removal(g, k, true);
            auto chosen = report.av11_set;
            std::sort(chosen.begin(), chosen.end());
            auto row = std::find_if(full.table.begin(), full.table.end(),
                                    [&](const RemovalRow& r) { return r.removed == chosen; });
            REQUIRE(row != full.table.end());
            CHECK(std::abs(row->residual_lambda1 - report.av11_residual) <= 1e-9);
        }
    }
}
