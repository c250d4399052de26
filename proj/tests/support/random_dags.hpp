#pragma once

#include "hrt/subtask_graph.hpp"

#include <random>

namespace hrt::testing {

/// Random DAG with n nodes (2..max_nodes). Node n-1 is the sink; every other
/// node gets at least one edge toward a higher id, so all reach the sink.
/// Edge costs are drawn from [0, 20].
inline SubtaskGraph random_dag(std::mt19937& rng, int max_nodes = 10) {
    std::uniform_int_distribution<int> count(2, max_nodes);
    std::uniform_int_distribution<Cost> cost(0, 20);
    const int n = count(rng);
    std::vector<SubtaskNode> nodes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        nodes[static_cast<std::size_t>(i)].id = i;
        nodes[static_cast<std::size_t>(i)].name = "task " + std::to_string(i);
        nodes[static_cast<std::size_t>(i)].targets = {GridPos{i, 0}};
    }
    std::bernoulli_distribution extra(0.3);
    for (int i = 0; i + 1 < n; ++i) {
        std::uniform_int_distribution<int> later(i + 1, n - 1);
        const int first = later(rng);
        nodes[static_cast<std::size_t>(first)].parents.push_back(i);
        for (int j = i + 1; j < n; ++j)
            if (j != first && extra(rng)) nodes[static_cast<std::size_t>(j)].parents.push_back(i);
    }
    SubtaskGraph g = make_graph(std::move(nodes));
    g.sink = n - 1;
    for (auto& e : g.edges) e.cost = cost(rng);
    return g;
}

} // namespace hrt::testing
