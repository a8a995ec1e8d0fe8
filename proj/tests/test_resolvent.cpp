#include "doctest.h"

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "netflow/errors.hpp"
#include "netflow/resolvent.hpp"
#include "netflow/tk_harness.hpp"

using namespace netflow;
using netflow::testing::system_with;
using netflow::testing::unit_system;

namespace {

// ∫_0^T e^{-λt} T(t) f dt computed from the exact evaluator. Cell averages of
// T(t) f are linear in t between grid times, so each slab integrates exactly.
ComplexGridFunction laplace_oracle(const FlowSystem& sys, Complex lambda, const GridFunction& f, double t_end) {
    const std::size_t n = f.cells();
    const double h = 1.0 / static_cast<double>(n);
    const Complex z = lambda * h;
    const Complex em = std::exp(-z);
    const Complex phi1 = (1.0 - em * (1.0 + z)) / (z * z);
    const Complex phi0 = (1.0 - em) / z - phi1;
    ComplexGridFunction acc(f.edge_count(), n);
    GridFunction w = f;
    const auto steps = static_cast<std::size_t>(std::llround(t_end * static_cast<double>(n)));
    for (std::size_t s = 0; s < steps; ++s) {
        GridFunction next = evolve_exact(sys, w, h);
        const Complex weight = std::exp(-lambda * (static_cast<double>(s) * h)) * h;
        for (std::size_t j = 0; j < f.edge_count(); ++j) {
            for (std::size_t k = 0; k < n; ++k) acc(j, k) += weight * (phi0 * w(j, k) + phi1 * next(j, k));
        }
        w = std::move(next);
    }
    return acc;
}

double g1_spectral_radius() {
    // Largest root of r^4 = r + 1 (cycles of length 3 and 4 through e1).
    double lo = 1.0;
    double hi = 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid * mid * mid * mid - mid - 1.0 > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_SUITE("resolvent") {

TEST_CASE("complex expm1 is accurate near zero") {
    const Complex z{1e-10, 2e-10};
    const Complex r = expm1(z);
    CHECK(r.real() == doctest::Approx(1e-10).epsilon(1e-6));
    CHECK(r.imag() == doctest::Approx(2e-10).epsilon(1e-6));
    const Complex w{0.7, -1.3};
    CHECK(std::abs(expm1(w) - (std::exp(w) - 1.0)) < 1e-15);
}

TEST_CASE("constants on the 2-cycle are eigenfunctions of the resolvent") {
    const auto sys = unit_system(two_cycle());
    const GridFunction ones(2, 64, std::vector<double>(128, 1.0));
    for (Complex lambda : {Complex(0.5), Complex(2.0), Complex(1.0, 2.0), Complex(1.0, -2.0)}) {
        const auto u = ResolventOperator(sys, lambda).apply(ones);
        for (const auto& v : u.values()) CHECK(std::abs(v - 1.0 / lambda) < 1e-10);
    }
}

TEST_CASE("resolvent equals the Laplace transform of the semigroup") {
    const auto sys = unit_system(example_g1());
    const auto f = random_piecewise(5, 16, 4, 42);
    for (Complex lambda : {Complex(2.0), Complex(4.0), Complex(1.0, 2.0)}) {
        const auto expected = laplace_oracle(sys, lambda, f, 40.0);
        const auto actual = ResolventOperator(sys, lambda).apply(f);
        CHECK(l1_distance(actual, expected) <= 1e-10 * l1_norm(expected));
    }
}

TEST_CASE("Volterra part alone is the resolvent of the uncoupled edges") {
    const auto sys = unit_system(two_cycle());
    GridFunction f(2, 4, std::vector<double>(8, 1.0));
    const auto part = volterra_part(sys, 2.0, to_complex(f));
    // u(s) = (1 - e^{-2(1-s)}) / 2, so u(0) = (1 - e^{-2}) / 2.
    CHECK(std::abs(part.head_values[0] - (1.0 - std::exp(-2.0)) / 2.0) < 1e-14);
    const double avg_last = 0.5 * (1.0 - (1.0 - std::exp(-0.5)) / 0.5);
    CHECK(std::abs(part.averages(0, 3) - avg_last) < 1e-14);
}

TEST_CASE("Re(lambda) <= 0 is rejected") {
    const auto sys = unit_system(two_cycle());
    CHECK_THROWS_AS(ResolventOperator(sys, 0.0), ResolventSetError);
    CHECK_THROWS_AS(ResolventOperator(sys, Complex(-1.0, 3.0)), ResolventSetError);
    CHECK_THROWS_AS(volterra_part(sys, 0.0, ComplexGridFunction(2, 4)), ResolventSetError);
}

TEST_CASE("an eigenvalue of the first example graph is detected as near-singular") {
    const auto sys = unit_system(example_g1());
    const double lambda = std::log(g1_spectral_radius());
    CHECK(lambda > 0.0);
    CHECK_THROWS_AS(ResolventOperator(sys, lambda), NearSingularError);
    const ResolventOperator nearby(sys, lambda + 0.05);
    CHECK(nearby.condition_number() > 1.0);
    CHECK(nearby.warning().has_value());
}

TEST_CASE("no warning above the Neumann threshold") {
    const auto sys = unit_system(example_g1());
    CHECK(neumann_threshold(sys) == doctest::Approx(std::log(2.0)));
    CHECK_FALSE(ResolventOperator(sys, 1.0).warning().has_value());
    CHECK(neumann_threshold(unit_system(two_cycle())) == 0.0);
}

TEST_CASE("kernel factor solves (1 - B_lambda) K = B_lambda") {
    const auto sys = unit_system(two_cycle());
    const ResolventOperator r(sys, 1.0);
    // B_lambda = e^{-1} [[0,1],[1,0]]; K = B_lambda / (1 - e^{-2}) * [[q,1],[1,q]] with q = e^{-1}.
    const double q = std::exp(-1.0);
    const auto& k = r.kernel_factor();
    CHECK(std::abs(k(0, 1) - q / (1.0 - q * q)) < 1e-14);
    CHECK(std::abs(k(0, 0) - q * q / (1.0 - q * q)) < 1e-14);
}

TEST_CASE("resolvent defects are first order in the cell width") {
    const auto sys = unit_system(example_g1());
    auto defects = [&](std::size_t n) {
        const auto f = random_piecewise(5, n, 4, 17);
        return generator_defect(sys, 2.0, ResolventOperator(sys, 2.0).apply(f), f);
    };
    const auto d1 = defects(128);
    const auto d2 = defects(256);
    const auto d3 = defects(512);
    CHECK(d1.interior / d2.interior == doctest::Approx(2.0).epsilon(0.2));
    CHECK(d2.interior / d3.interior == doctest::Approx(2.0).epsilon(0.2));
    CHECK(d1.boundary / d2.boundary == doctest::Approx(2.0).epsilon(0.2));
    CHECK(d2.boundary / d3.boundary == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("mixed velocities keep the resolvent equation consistent") {
    const auto sys = system_with(example_g1(), {1.0, 1.5, 0.75, 1.25, 2.0});
    auto defect = [&](std::size_t n) {
        const auto f = random_piecewise(5, n, 4, 3);
        return generator_defect(sys, 3.0, ResolventOperator(sys, 3.0).apply(f), f).interior;
    };
    CHECK(defect(128) / defect(256) == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("pseudoresolvent identity on constants is exact") {
    const auto sys = unit_system(two_cycle());
    const GridFunction ones(2, 32, std::vector<double>(64, 1.0));
    CHECK(pseudoresolvent_defect(sys, 1.0, 3.0, ones) <= 1e-10);
    CHECK(pseudoresolvent_defect(sys, Complex(1.0, 2.0), 0.5, ones) <= 1e-10);
}

TEST_CASE("Hille-Yosida ratios on the 2-cycle never exceed one") {
    const auto sys = unit_system(two_cycle());
    const auto f = random_piecewise(2, 64, 4, 8);
    for (double lambda : {0.5, 1.0, 4.0}) {
        const auto ratios = hille_yosida_bound(sys, lambda, 5, f);
        REQUIRE(ratios.size() == 6);
        CHECK(ratios[0] == 1.0);
        for (double r : ratios) CHECK(r <= 1.0 + 1e-8);
    }
}

TEST_CASE("Hille-Yosida bound rejects bad input") {
    const auto sys = unit_system(two_cycle());
    CHECK_THROWS_AS(hille_yosida_bound(sys, 1.0, 3, GridFunction(2, 4)), InvalidProbeError);
    CHECK_THROWS_AS(hille_yosida_bound(sys, -1.0, 3, GridFunction(2, 4, {1, 0, 0, 0, 0, 0, 0, 0})),
                    ResolventSetError);
    CHECK_THROWS_AS(hille_yosida_bound(sys, 1.0, 11, GridFunction(2, 4, {1, 0, 0, 0, 0, 0, 0, 0})),
                    ParameterError);
}

TEST_CASE("apply is linear") {
    const auto sys = unit_system(example_g2());
    const ResolventOperator r(sys, Complex(2.0, 1.0));
    const auto f = random_piecewise(9, 32, 4, 1);
    const auto g = random_piecewise(9, 32, 4, 2);
    auto lhs = r.apply(to_complex(f) + Complex(3.0, -1.0) * to_complex(g));
    auto rhs = r.apply(f) + Complex(3.0, -1.0) * r.apply(g);
    CHECK(l1_distance(lhs, rhs) <= 1e-12 * l1_norm(rhs));
}

}
