#include "immunize/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "immunize/error.hpp"

namespace immunize {

double binomial(NodeId n, NodeId k)
{
    if (k < 0 || k > n)
        return 0.0;
    k = std::min(k, n - k);
    double result = 1.0;
    for (NodeId i = 1; i <= k; ++i)
        result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(result);
}

OptimalRemoval optimal_removal(const Graph& g, NodeId k, bool keep_table, double guard)
{
    const NodeId n = g.size();
    if (k < 0 || k > n)
        throw ValidationError("removal count " + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
    const double combinations = binomial(n, k);
    if (combinations > guard) {
        std::ostringstream msg;
        msg << "C(" << n << ", " << k << ") = " << std::setprecision(15) << combinations
            << " subsets exceeds the exhaustive-search guard of " << guard;
        throw GuardError(msg.str(), combinations);
    }

    OptimalRemoval result{{}, std::numeric_limits<double>::infinity(), {}};
    if (keep_table)
        result.table.reserve(static_cast<std::size_t>(combinations));

    std::vector<NodeId> subset(k);
    std::iota(subset.begin(), subset.end(), 0);
    while (true) {
        double residual = residual_lambda1(g, subset);
        if (keep_table)
            result.table.push_back({subset, residual});
        // Strict improvement only, so the first (lexicographically smallest) minimiser stays.
        if (residual < result.residual_lambda1 - 1e-12) {
            result.residual_lambda1 = residual;
            result.best = subset;
        }
        // Next combination in lexicographic order.
        NodeId i = k - 1;
        while (i >= 0 && subset[i] == n - k + i)
            --i;
        if (i < 0)
            break;
        ++subset[i];
        for (NodeId j = i + 1; j < k; ++j)
            subset[j] = subset[j - 1] + 1;
    }
    return result;
}

void write_removal_csv(std::ostream& out, const std::vector<RemovalRow>& table)
{
    out << "subset,residual_lambda1\n";
    out << std::setprecision(17);
    for (const auto& row : table) {
        for (std::size_t i = 0; i < row.removed.size(); ++i)
            out << (i ? " " : "") << row.removed[i];
        out << ',' << row.residual_lambda1 << '\n';
    }
}

GapReport gap_report(const Graph& g, NodeId k, int power, double guard)
{
    if (k < 0 || k >= g.size())
        throw ValidationError("removal count " + std::to_string(k) + " must lie in [0, " +
                              std::to_string(g.size()) + ")");
    auto optimal = optimal_removal(g, k, false, guard);
    auto av11 = av11_select(g, k, power);
    double floor = separation_lower_bound(spectrum(g), k);
    return GapReport{k,       av11.selected, av11.residual_lambda1, optimal.best, optimal.residual_lambda1,
                     floor, std::max(floor, 0.0)};
}

} // namespace immunize
