#ifndef NETFLOW_TEST_HELPERS_HPP
#define NETFLOW_TEST_HELPERS_HPP

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "netflow/flow.hpp"
#include "netflow/graph.hpp"
#include "netflow/network_matrices.hpp"

namespace netflow::testing {

using Dense = std::vector<std::vector<int>>;

inline Dense dense(const IntSparse& m) {
    Dense out(m.rows(), std::vector<int>(m.cols(), 0));
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (IntSparse::InnerIterator it(m, r); it; ++it) out[it.row()][it.col()] = it.value();
    }
    return out;
}

inline const Dense& golden_b1() {
    static const Dense b = {
        {0, 0, 0, 1, 0},
        {1, 0, 0, 0, 0},
        {0, 1, 0, 0, 0},
        {0, 0, 1, 0, 1},
        {1, 0, 0, 0, 0},
    };
    return b;
}

inline const Dense& golden_b2() {
    static const Dense b = {
        {0, 0, 0, 1, 0, 0, 0, 0, 0},
        {1, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 1, 0, 0, 0, 0, 0, 1, 1},
        {0, 0, 1, 0, 1, 0, 0, 0, 0},
        {1, 0, 0, 0, 0, 0, 0, 0, 0},
        {1, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 1, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 1, 0, 0},
        {0, 0, 0, 0, 0, 1, 0, 0, 0},
    };
    return b;
}

/// Random simple directed graph: each ordered pair (u != v) is an edge with probability p.
inline DirectedGraph random_simple_graph(std::mt19937_64& rng, std::size_t max_vertices, double p) {
    std::uniform_int_distribution<std::size_t> vcount(1, max_vertices);
    std::bernoulli_distribution coin(p);
    const std::size_t v = vcount(rng);
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < v; ++a) {
        for (std::size_t b = 0; b < v; ++b) {
            if (a != b && coin(rng)) edges.push_back({a, b});
        }
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    return DirectedGraph(v, std::move(edges));
}

inline FlowSystem unit_system(const DirectedGraph& g) {
    return FlowSystem::with_unit_velocities(std::make_shared<const DirectedGraph>(g));
}

inline FlowSystem system_with(const DirectedGraph& g, std::vector<double> c) {
    return FlowSystem(std::make_shared<const DirectedGraph>(g), VelocityProfile(std::move(c)));
}

inline double log2_ratio(double coarse, double fine) { return std::log2(coarse / fine); }

} // namespace netflow::testing

#endif
