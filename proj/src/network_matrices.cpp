#include "netflow/network_matrices.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netflow/errors.hpp"

namespace netflow {

namespace {

using Triplet = Eigen::Triplet<int>;

IntSparse from_triplets(Eigen::Index rows, Eigen::Index cols, const std::vector<Triplet>& triplets) {
    IntSparse m(rows, cols);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

// Row index of the single nonzero in each column.
std::vector<Eigen::Index> column_owner(const IntSparse& m, const char* name) {
    std::vector<Eigen::Index> owner(static_cast<std::size_t>(m.cols()), -1);
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (IntSparse::InnerIterator it(m, r); it; ++it) {
            if (it.value() == 0) continue;
            auto& slot = owner[static_cast<std::size_t>(it.col())];
            if (slot != -1 || it.value() != 1) {
                throw ConsistencyError("network-matrices", std::string(name) + " column " +
                                                               std::to_string(it.col() + 1) +
                                                               " is not a unit vector");
            }
            slot = it.row();
        }
    }
    for (std::size_t j = 0; j < owner.size(); ++j) {
        if (owner[j] == -1) {
            throw ConsistencyError("network-matrices",
                                   std::string(name) + " column " + std::to_string(j + 1) + " is empty");
        }
    }
    return owner;
}

} // namespace

NetworkMatrices incidence_matrices(const DirectedGraph& g) {
    auto check = validate_graph(g);
    if (!check.ok()) {
        throw UnsupportedInputError("network-matrices", "graph is not simple: " + check.violations.front().message);
    }
    const auto rows = static_cast<Eigen::Index>(g.vertex_count());
    const auto cols = static_cast<Eigen::Index>(g.edge_count());
    std::vector<Triplet> minus;
    std::vector<Triplet> plus;
    std::vector<Triplet> both;
    for (std::size_t j = 0; j < g.edge_count(); ++j) {
        const Edge& e = g.edge(j);
        const auto col = static_cast<Eigen::Index>(j);
        minus.emplace_back(static_cast<Eigen::Index>(e.tail), col, 1);
        plus.emplace_back(static_cast<Eigen::Index>(e.head), col, 1);
        both.emplace_back(static_cast<Eigen::Index>(e.tail), col, -1);
        both.emplace_back(static_cast<Eigen::Index>(e.head), col, 1);
    }
    NetworkMatrices nm;
    nm.phi_minus = from_triplets(rows, cols, minus);
    nm.phi_plus = from_triplets(rows, cols, plus);
    nm.phi = from_triplets(rows, cols, both);
    return nm;
}

IntSparse adjacency(const NetworkMatrices& nm) {
    IntSparse a = nm.phi_plus * IntSparse(nm.phi_minus.transpose());
    a.prune(0);
    a.makeCompressed();
    return a;
}

IntSparse line_graph_adjacency_entrywise(const NetworkMatrices& nm) {
    const auto tails = column_owner(nm.phi_minus, "Phi-");
    const auto heads = column_owner(nm.phi_plus, "Phi+");
    const std::size_t m = tails.size();
    // Edges grouped by tail vertex so the rule costs O(m * out-degree).
    std::vector<std::vector<std::size_t>> leaving(static_cast<std::size_t>(nm.phi_minus.rows()));
    for (std::size_t i = 0; i < m; ++i) leaving[static_cast<std::size_t>(tails[i])].push_back(i);
    std::vector<Triplet> entries;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i : leaving[static_cast<std::size_t>(heads[j])]) {
            entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), 1);
        }
    }
    return from_triplets(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m), entries);
}

IntSparse line_graph_adjacency(const NetworkMatrices& nm) {
    IntSparse product = IntSparse(nm.phi_minus.transpose()) * nm.phi_plus;
    product.prune(0);
    product.makeCompressed();
    if (!same_entries(product, line_graph_adjacency_entrywise(nm))) {
        throw ConsistencyError("network-matrices",
                               "(Phi-)^T Phi+ disagrees with the entrywise line-graph rule");
    }
    return product;
}

NetworkMatrices network_matrices(const DirectedGraph& g) {
    NetworkMatrices nm = incidence_matrices(g);
    nm.adjacency = adjacency(nm);
    nm.line_adjacency = line_graph_adjacency(nm);
    return nm;
}

bool same_entries(const IntSparse& a, const IntSparse& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    IntSparse diff = a - b;
    for (Eigen::Index r = 0; r < diff.outerSize(); ++r) {
        for (IntSparse::InnerIterator it(diff, r); it; ++it) {
            if (it.value() != 0) return false;
        }
    }
    return true;
}

VelocityProfile::VelocityProfile(std::vector<double> c) : c_(std::move(c)) {
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (!std::isfinite(c_[j]) || c_[j] <= 0.0) {
            throw InvalidVelocityError("network-matrices", "velocity of e" + std::to_string(j + 1) +
                                                               " must be positive and finite");
        }
    }
    if (!c_.empty()) {
        auto [lo, hi] = std::minmax_element(c_.begin(), c_.end());
        lower_ = *lo;
        upper_ = *hi;
    }
}

VelocityProfile::VelocityProfile(std::vector<double> c, double lower_bound, double upper_bound)
    : VelocityProfile(std::move(c)) {
    if (!(lower_bound > 0.0) || lower_bound > upper_bound) {
        throw InvalidVelocityError("network-matrices", "velocity bounds need 0 < m <= M");
    }
    if (!c_.empty() && (lower_ < lower_bound || upper_ > upper_bound)) {
        throw InvalidVelocityError("network-matrices", "velocities outside the stated bounds [m, M]");
    }
    lower_ = lower_bound;
    upper_ = upper_bound;
}

bool VelocityProfile::all_unit() const noexcept {
    return std::all_of(c_.begin(), c_.end(), [](double x) { return x == 1.0; });
}

double l1_operator_norm(const RealSparse& m) {
    std::vector<double> sums(static_cast<std::size_t>(m.cols()), 0.0);
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (RealSparse::InnerIterator it(m, r); it; ++it) sums[static_cast<std::size_t>(it.col())] += std::abs(it.value());
    }
    return sums.empty() ? 0.0 : *std::max_element(sums.begin(), sums.end());
}

BoundaryOperator boundary_operator(const RealSparse& b, const VelocityProfile& v) {
    if (b.rows() != b.cols() || static_cast<std::size_t>(b.rows()) != v.size()) {
        throw DimensionError("network-matrices", "boundary matrix is " + std::to_string(b.rows()) + "x" +
                                                     std::to_string(b.cols()) + " but there are " +
                                                     std::to_string(v.size()) + " velocities");
    }
    std::vector<Eigen::Triplet<double>> entries;
    for (Eigen::Index i = 0; i < b.outerSize(); ++i) {
        for (RealSparse::InnerIterator it(b, i); it; ++it) {
            if (it.value() < 0.0 || !std::isfinite(it.value())) {
                throw ParameterError("network-matrices", "boundary weights must be finite and nonnegative");
            }
            if (it.value() == 0.0) continue;
            const double ci = v[static_cast<std::size_t>(it.row())];
            const double cj = v[static_cast<std::size_t>(it.col())];
            entries.emplace_back(it.row(), it.col(), (cj / ci) * it.value());
        }
    }
    BoundaryOperator op;
    op.b_c = RealSparse(b.rows(), b.cols());
    op.b_c.setFromTriplets(entries.begin(), entries.end());
    op.b_c.makeCompressed();
    op.l1_norm = l1_operator_norm(op.b_c);
    return op;
}

BoundaryOperator boundary_operator(const IntSparse& b, const VelocityProfile& v) {
    return boundary_operator(RealSparse(b.cast<double>()), v);
}

} // namespace netflow
