#ifndef NETFLOW_GRID_FUNCTION_HPP
#define NETFLOW_GRID_FUNCTION_HPP

#include <cmath>
#include <complex>
#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "netflow/errors.hpp"
#include "netflow/graph.hpp"

namespace netflow {

/**
 * Piecewise-constant function on m unit intervals, each split into N equal
 * cells. `(j, k)` is the average of the j-th component over [k/N, (k+1)/N).
 * Storage is edge-major.
 */
template <class Scalar>
class BasicGridFunction {
public:
    using scalar_type = Scalar;

    BasicGridFunction() = default;
    BasicGridFunction(std::size_t edges, std::size_t cells)
        : edges_(edges), cells_(cells), values_(edges * cells, Scalar{}) {
        if (cells == 0) throw DimensionError("function-space", "a grid function needs at least one cell");
    }
    BasicGridFunction(std::size_t edges, std::size_t cells, std::vector<Scalar> values)
        : edges_(edges), cells_(cells), values_(std::move(values)) {
        if (cells == 0) throw DimensionError("function-space", "a grid function needs at least one cell");
        if (values_.size() != edges * cells) {
            throw DimensionError("function-space", "expected " + std::to_string(edges * cells) + " values, got " +
                                                       std::to_string(values_.size()));
        }
        for (const auto& v : values_) {
            if (!is_finite(v)) throw ParameterError("function-space", "grid function values must be finite");
        }
    }

    std::size_t edge_count() const noexcept { return edges_; }
    std::size_t cells() const noexcept { return cells_; }
    double cell_width() const noexcept { return 1.0 / static_cast<double>(cells_); }

    Scalar& operator()(std::size_t j, std::size_t k) { return values_[j * cells_ + k]; }
    const Scalar& operator()(std::size_t j, std::size_t k) const { return values_[j * cells_ + k]; }

    std::span<Scalar> edge(std::size_t j) { return {values_.data() + j * cells_, cells_}; }
    std::span<const Scalar> edge(std::size_t j) const { return {values_.data() + j * cells_, cells_}; }

    const std::vector<Scalar>& values() const noexcept { return values_; }

    bool same_shape(const BasicGridFunction& other) const noexcept {
        return edges_ == other.edges_ && cells_ == other.cells_;
    }

    bool all_finite() const {
        for (const auto& v : values_) {
            if (!is_finite(v)) return false;
        }
        return true;
    }

    BasicGridFunction& operator+=(const BasicGridFunction& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    BasicGridFunction& operator-=(const BasicGridFunction& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    BasicGridFunction& operator*=(Scalar a) {
        for (auto& v : values_) v *= a;
        return *this;
    }

    friend BasicGridFunction operator+(BasicGridFunction a, const BasicGridFunction& b) { return a += b; }
    friend BasicGridFunction operator-(BasicGridFunction a, const BasicGridFunction& b) { return a -= b; }
    friend BasicGridFunction operator*(Scalar s, BasicGridFunction a) { return a *= s; }

    friend bool operator==(const BasicGridFunction& a, const BasicGridFunction& b) {
        return a.edges_ == b.edges_ && a.cells_ == b.cells_ && a.values_ == b.values_;
    }

private:
    static bool is_finite(const Scalar& v) {
        if constexpr (std::is_floating_point_v<Scalar>) {
            return std::isfinite(v);
        } else {
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        }
    }

    void require_same_shape(const BasicGridFunction& o) const {
        if (!same_shape(o)) throw DimensionError("function-space", "grid functions differ in shape");
    }

    std::size_t edges_ = 0;
    std::size_t cells_ = 1;
    std::vector<Scalar> values_;
};

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<std::complex<double>>;

ComplexGridFunction to_complex(const GridFunction& f);
GridFunction real_part(const ComplexGridFunction& f);
GridFunction imag_part(const ComplexGridFunction& f);

/// ∫_0^1 ||f(s)||_1 ds, exact for piecewise constants.
template <class Scalar>
double l1_norm(const BasicGridFunction<Scalar>& f) {
    double sum = 0.0;
    for (const auto& v : f.values()) sum += std::abs(v);
    return sum / static_cast<double>(f.cells());
}

template <class Scalar>
double l1_distance(const BasicGridFunction<Scalar>& a, const BasicGridFunction<Scalar>& b) {
    if (!a.same_shape(b)) throw DimensionError("function-space", "grid functions differ in shape");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) sum += std::abs(a.values()[i] - b.values()[i]);
    return sum / static_cast<double>(a.cells());
}

/**
 * Embedding/cut-off pair between the function space of a small graph and
 * that of a larger one, induced by an injective edge map.
 */
class ApproxPair {
public:
    ApproxPair(std::size_t small_edges, std::size_t large_edges, std::vector<std::size_t> edge_injection);

    /// From an injective homomorphism G_n -> G.
    static ApproxPair from_inclusion(const GraphHomomorphism& psi);
    static ApproxPair identity(std::size_t edges);

    std::size_t small_edges() const noexcept { return small_; }
    std::size_t large_edges() const noexcept { return large_; }
    const std::vector<std::size_t>& edge_injection() const noexcept { return injection_; }

private:
    std::size_t small_;
    std::size_t large_;
    std::vector<std::size_t> injection_;
};

/// E_n: copy onto the injected edges, zero elsewhere.
template <class Scalar>
BasicGridFunction<Scalar> embed(const ApproxPair& p, const BasicGridFunction<Scalar>& f) {
    if (f.edge_count() != p.small_edges()) {
        throw DimensionError("function-space", "embed expects " + std::to_string(p.small_edges()) +
                                                   " edges, got " + std::to_string(f.edge_count()));
    }
    BasicGridFunction<Scalar> out(p.large_edges(), f.cells());
    for (std::size_t j = 0; j < p.small_edges(); ++j) {
        auto src = f.edge(j);
        auto dst = out.edge(p.edge_injection()[j]);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return out;
}

/// P_n: keep the injected edges only.
template <class Scalar>
BasicGridFunction<Scalar> project(const ApproxPair& p, const BasicGridFunction<Scalar>& f) {
    if (f.edge_count() != p.large_edges()) {
        throw DimensionError("function-space", "project expects " + std::to_string(p.large_edges()) +
                                                   " edges, got " + std::to_string(f.edge_count()));
    }
    BasicGridFunction<Scalar> out(p.small_edges(), f.cells());
    for (std::size_t j = 0; j < p.small_edges(); ++j) {
        auto src = f.edge(p.edge_injection()[j]);
        auto dst = out.edge(j);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return out;
}

/// (f(0), f(1)): values of the first and last cell of every edge. f(0) sits
/// at the head of each edge, f(1) at its tail.
template <class Scalar>
std::pair<std::vector<Scalar>, std::vector<Scalar>> boundary_traces(const BasicGridFunction<Scalar>& f) {
    std::vector<Scalar> head(f.edge_count());
    std::vector<Scalar> tail(f.edge_count());
    for (std::size_t j = 0; j < f.edge_count(); ++j) {
        head[j] = f(j, 0);
        tail[j] = f(j, f.cells() - 1);
    }
    return {std::move(head), std::move(tail)};
}

/// Cell averages of a callable g(edge, x) by composite Gauss-Legendre (3 points per cell).
template <class Fn>
GridFunction sample_cell_averages(std::size_t edges, std::size_t cells, Fn&& g) {
    static constexpr double nodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr double weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    GridFunction f(edges, cells);
    const double h = 1.0 / static_cast<double>(cells);
    for (std::size_t j = 0; j < edges; ++j) {
        for (std::size_t k = 0; k < cells; ++k) {
            const double mid = (static_cast<double>(k) + 0.5) * h;
            double acc = 0.0;
            for (int q = 0; q < 3; ++q) acc += weights[q] * g(j, mid + 0.5 * h * nodes[q]);
            f(j, k) = acc;
        }
    }
    return f;
}

/// Average neighbouring cell pairs: N cells -> N/2 cells. N must be even.
GridFunction coarsen(const GridFunction& f);

} // namespace netflow

#endif
