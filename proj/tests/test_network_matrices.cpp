#include "doctest.h"

#include "helpers.hpp"
#include "netflow/errors.hpp"
#include "netflow/network_matrices.hpp"

using namespace netflow;
using netflow::testing::dense;

TEST_SUITE("network_matrices") {

TEST_CASE("line-graph adjacency of the example graphs") {
    CHECK(dense(network_matrices(example_g1()).line_adjacency) == testing::golden_b1());
    CHECK(dense(network_matrices(example_g2()).line_adjacency) == testing::golden_b2());
}

TEST_CASE("upper-left block of B_2 is B_1") {
    const auto b2 = dense(network_matrices(example_g2()).line_adjacency);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) CHECK(b2[i][j] == testing::golden_b1()[i][j]);
    }
}

TEST_CASE("incidence matrices of the first example graph") {
    const auto nm = network_matrices(example_g1());
    const testing::Dense minus = {{1, 0, 0, 0, 0}, {0, 1, 0, 0, 1}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}};
    const testing::Dense plus = {{0, 0, 0, 1, 0}, {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 1}};
    CHECK(dense(nm.phi_minus) == minus);
    CHECK(dense(nm.phi_plus) == plus);
    const auto phi = dense(nm.phi);
    for (std::size_t v = 0; v < 4; ++v) {
        for (std::size_t j = 0; j < 5; ++j) CHECK(phi[v][j] == plus[v][j] - minus[v][j]);
    }
    const testing::Dense adj = {{0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 1, 1, 0}};
    CHECK(dense(nm.adjacency) == adj);
}

TEST_CASE("every edge has exactly one tail and one head") {
    const auto nm = network_matrices(ladder_sequence(4).graph(3));
    const auto minus = dense(nm.phi_minus);
    const auto plus = dense(nm.phi_plus);
    for (std::size_t j = 0; j < minus.front().size(); ++j) {
        int tails = 0;
        int heads = 0;
        for (std::size_t v = 0; v < minus.size(); ++v) {
            tails += minus[v][j];
            heads += plus[v][j];
        }
        CHECK(tails == 1);
        CHECK(heads == 1);
    }
}

TEST_CASE("entrywise rule matches the product on the 2-cycle") {
    const auto nm = network_matrices(two_cycle());
    CHECK(same_entries(nm.line_adjacency, line_graph_adjacency_entrywise(nm)));
    CHECK(dense(nm.line_adjacency) == testing::Dense{{0, 1}, {1, 0}});
}

TEST_CASE("graphs with loops are rejected") {
    CHECK_THROWS_AS(incidence_matrices(DirectedGraph(2, {{0, 0}})), UnsupportedInputError);
}

TEST_CASE("velocity profiles enforce positivity and bounds") {
    CHECK_THROWS_AS(VelocityProfile({1.0, 0.0}), InvalidVelocityError);
    CHECK_THROWS_AS(VelocityProfile({1.0, -2.0}), InvalidVelocityError);
    CHECK_THROWS_AS(VelocityProfile({1.0, std::nan("")}), InvalidVelocityError);
    CHECK_THROWS_AS(VelocityProfile({1.0, 3.0}, 0.5, 2.0), InvalidVelocityError);
    const VelocityProfile v({1.0, 3.0}, 0.5, 4.0);
    CHECK(v.lower_bound() == 0.5);
    CHECK(v.upper_bound() == 4.0);
    CHECK_FALSE(v.all_unit());
    CHECK(VelocityProfile::unit(3).all_unit());
}

TEST_CASE("weighted boundary operator scales by c_j / c_i") {
    const auto nm = network_matrices(example_g1());
    const VelocityProfile v({1.0, 2.0, 4.0, 0.5, 1.0});
    const auto op = boundary_operator(nm.line_adjacency, v);
    // B(2,1) = 1: c_1 / c_2 = 0.5. B(1,4) = 1: c_4 / c_1 = 0.5. B(4,3): c_3 / c_4 = 8. B(4,5): c_5 / c_4 = 2.
    CHECK(op.b_c.coeff(1, 0) == doctest::Approx(0.5));
    CHECK(op.b_c.coeff(0, 3) == doctest::Approx(0.5));
    CHECK(op.b_c.coeff(3, 2) == doctest::Approx(8.0));
    CHECK(op.b_c.coeff(3, 4) == doctest::Approx(2.0));
    CHECK(op.b_c.coeff(4, 0) == doctest::Approx(1.0));
    CHECK(op.b_c.coeff(0, 0) == 0.0);
}

TEST_CASE("l1 norm of B is the largest out-degree at an edge head") {
    CHECK(boundary_operator(network_matrices(example_g1()).line_adjacency, VelocityProfile::unit(5)).l1_norm == 2.0);
    const auto g5 = ladder_sequence(5).graph(4);
    CHECK(boundary_operator(network_matrices(g5).line_adjacency, VelocityProfile::unit(g5.edge_count())).l1_norm ==
          3.0);
    CHECK(boundary_operator(network_matrices(two_cycle()).line_adjacency, VelocityProfile::unit(2)).l1_norm == 1.0);
}

TEST_CASE("boundary operator validates its inputs") {
    const auto nm = network_matrices(example_g1());
    CHECK_THROWS_AS(boundary_operator(nm.line_adjacency, VelocityProfile::unit(4)), DimensionError);
    RealSparse negative(2, 2);
    negative.insert(0, 1) = -1.0;
    CHECK_THROWS_AS(boundary_operator(negative, VelocityProfile::unit(2)), ParameterError);
}

}
