#include "doctest.h"

#include <random>

#include "helpers.hpp"
#include "netflow/errors.hpp"
#include "netflow/resolvent.hpp"
#include "netflow/tk_harness.hpp"

using namespace netflow;
using netflow::testing::unit_system;

namespace {

GridFunction signed_random(std::mt19937_64& rng, std::size_t edges, std::size_t cells) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GridFunction f(edges, cells);
    for (std::size_t j = 0; j < edges; ++j) {
        for (std::size_t k = 0; k < cells; ++k) f(j, k) = u(rng);
    }
    return f;
}

} // namespace

TEST_SUITE("properties") {

TEST_CASE("line-graph product agrees with the entrywise rule on random graphs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = testing::random_simple_graph(rng, 12, 0.3);
        const auto nm = network_matrices(g);
        CHECK(same_entries(nm.line_adjacency, line_graph_adjacency_entrywise(nm)));
        const auto b = testing::dense(nm.line_adjacency);
        for (std::size_t i = 0; i < g.edge_count(); ++i) {
            for (std::size_t j = 0; j < g.edge_count(); ++j) {
                CHECK(b[i][j] == (g.edge(j).head == g.edge(i).tail ? 1 : 0));
            }
        }
    }
}

TEST_CASE("norm axioms on random grid functions") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = signed_random(rng, 4, 16);
        const auto g = signed_random(rng, 4, 16);
        const double a = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
        CHECK(l1_norm(a * f) == doctest::Approx(std::abs(a) * l1_norm(f)).epsilon(1e-12));
        CHECK(l1_norm(f + g) <= l1_norm(f) + l1_norm(g) + 1e-12);
    }
}

TEST_CASE("embedding is isometric and cut-off is contractive") {
    std::mt19937_64 rng(6);
    const auto seq = ladder_sequence(4);
    for (std::size_t n = 0; n < 4; ++n) {
        const auto pair = ApproxPair::from_inclusion(seq.inclusion(n, 3));
        for (int trial = 0; trial < 10; ++trial) {
            const auto y = signed_random(rng, pair.small_edges(), 8);
            const auto x = signed_random(rng, pair.large_edges(), 8);
            CHECK(l1_norm(embed(pair, y)) == doctest::Approx(l1_norm(y)).epsilon(1e-12));
            CHECK(l1_norm(project(pair, x)) <= l1_norm(x) + 1e-12);
            CHECK(project(pair, embed(pair, y)) == y);
        }
    }
}

TEST_CASE("semigroup is positive, and exact on aligned random triples") {
    std::mt19937_64 rng(8);
    const auto sys = unit_system(example_g2());
    std::uniform_int_distribution<int> shift(0, 40);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = random_piecewise(9, 16, 4, rng());
        const double t = shift(rng) / 16.0;
        const double s = shift(rng) / 16.0;
        CHECK(semigroup_law_check(sys, f, t, s) <= 1e-12);
        for (double v : evolve_exact(sys, f, t).values()) CHECK(v >= 0.0);
    }
}

TEST_CASE("semigroup is linear") {
    std::mt19937_64 rng(9);
    const auto sys = unit_system(example_g1());
    const auto f = signed_random(rng, 5, 16);
    const auto g = signed_random(rng, 5, 16);
    const auto lhs = evolve_exact(sys, f + 2.5 * g, 1.75);
    const auto rhs = evolve_exact(sys, f, 1.75) + 2.5 * evolve_exact(sys, g, 1.75);
    CHECK(l1_distance(lhs, rhs) <= 1e-12 * l1_norm(rhs));
}

TEST_CASE("real resolvent above the Neumann threshold is positive") {
    const auto sys = unit_system(ladder_sequence(3).graph(2));
    const ResolventOperator r(sys, 2.0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto u = r.apply(random_piecewise(13, 32, 4, seed));
        for (const auto& v : u.values()) {
            CHECK(v.real() >= 0.0);
            CHECK(std::abs(v.imag()) == 0.0);
        }
    }
}

TEST_CASE("Hille-Yosida ratios respect the analytic bound on the ladder") {
    // ||λ^k R(λ)^k|| <= σ^{1 + k h} (λ / (λ - ln σ))^k for unit velocities on N = 1/h cells,
    // σ the l1 norm of B.
    const auto seq = ladder_sequence(5);
    for (std::size_t n = 0; n < 5; ++n) {
        const auto sys = unit_system(seq.graph(n));
        const double sigma = sys.boundary().l1_norm;
        for (double lambda : {2.0, 4.0}) {
            const auto f = random_piecewise(sys.edge_count(), 32, 4, n + 1);
            const auto ratios = hille_yosida_bound(sys, lambda, 5, f);
            for (std::size_t k = 0; k < ratios.size(); ++k) {
                const double kd = static_cast<double>(k);
                const double bound = std::pow(sigma, 1.0 + kd / 32.0) * std::pow(lambda / (lambda - std::log(sigma)), kd);
                CHECK(ratios[k] <= bound * (1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("pseudoresolvent defect at least halves with the cell width for random probes") {
    const auto sys = unit_system(example_g1());
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto coarse = pseudoresolvent_defect(sys, 1.0, 3.0, random_piecewise(5, 128, 4, seed));
        const auto fine = pseudoresolvent_defect(sys, 1.0, 3.0, random_piecewise(5, 256, 4, seed));
        CHECK(coarse / fine >= 1.6);
    }
}

}
