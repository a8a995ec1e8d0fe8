#include "netflow/grid_function.hpp"

#include <algorithm>

namespace netflow {

ComplexGridFunction to_complex(const GridFunction& f) {
    ComplexGridFunction out(f.edge_count(), f.cells());
    for (std::size_t j = 0; j < f.edge_count(); ++j) {
        for (std::size_t k = 0; k < f.cells(); ++k) out(j, k) = f(j, k);
    }
    return out;
}

GridFunction real_part(const ComplexGridFunction& f) {
    GridFunction out(f.edge_count(), f.cells());
    for (std::size_t j = 0; j < f.edge_count(); ++j) {
        for (std::size_t k = 0; k < f.cells(); ++k) out(j, k) = f(j, k).real();
    }
    return out;
}

GridFunction imag_part(const ComplexGridFunction& f) {
    GridFunction out(f.edge_count(), f.cells());
    for (std::size_t j = 0; j < f.edge_count(); ++j) {
        for (std::size_t k = 0; k < f.cells(); ++k) out(j, k) = f(j, k).imag();
    }
    return out;
}

ApproxPair::ApproxPair(std::size_t small_edges, std::size_t large_edges, std::vector<std::size_t> edge_injection)
    : small_(small_edges), large_(large_edges), injection_(std::move(edge_injection)) {
    if (injection_.size() != small_ || small_ > large_) {
        throw DimensionError("function-space", "edge injection does not match the space dimensions");
    }
    std::vector<bool> hit(large_, false);
    for (std::size_t j : injection_) {
        if (j >= large_ || hit[j]) throw MalformedInputError("function-space", "edge map is not an injection");
        hit[j] = true;
    }
}

ApproxPair ApproxPair::from_inclusion(const GraphHomomorphism& psi) {
    if (!psi.injective()) throw UnsupportedInputError("function-space", "E_n/P_n need an injective homomorphism");
    return ApproxPair(psi.source().edge_count(), psi.target().edge_count(), psi.edge_map());
}

ApproxPair ApproxPair::identity(std::size_t edges) {
    std::vector<std::size_t> map(edges);
    for (std::size_t j = 0; j < edges; ++j) map[j] = j;
    return ApproxPair(edges, edges, std::move(map));
}

GridFunction coarsen(const GridFunction& f) {
    if (f.cells() % 2 != 0) throw DimensionError("function-space", "coarsen needs an even cell count");
    GridFunction out(f.edge_count(), f.cells() / 2);
    for (std::size_t j = 0; j < f.edge_count(); ++j) {
        for (std::size_t k = 0; k < out.cells(); ++k) out(j, k) = 0.5 * (f(j, 2 * k) + f(j, 2 * k + 1));
    }
    return out;
}

} // namespace netflow
