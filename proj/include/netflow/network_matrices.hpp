#ifndef NETFLOW_NETWORK_MATRICES_HPP
#define NETFLOW_NETWORK_MATRICES_HPP

#include <vector>

#include <Eigen/SparseCore>

#include "netflow/graph.hpp"

namespace netflow {

using IntSparse = Eigen::SparseMatrix<int, Eigen::RowMajor>;
using RealSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/**
 * Structural matrices of a directed graph.
 *
 * Rows of the incidence matrices are vertices, columns are edges.
 * `adjacency` is the transposed adjacency matrix Phi+ (Phi-)^T and
 * `line_adjacency` the transposed line-graph adjacency (Phi-)^T Phi+, so
 * line_adjacency(i, j) = 1 exactly when edge j flows into edge i.
 */
struct NetworkMatrices {
    IntSparse phi_minus;  // tails
    IntSparse phi_plus;   // heads
    IntSparse phi;        // phi_plus - phi_minus
    IntSparse adjacency;
    IntSparse line_adjacency;
};

/// Phi-, Phi+ and Phi of a simple graph. Throws UnsupportedInputError if g does not validate.
NetworkMatrices incidence_matrices(const DirectedGraph& g);

IntSparse adjacency(const NetworkMatrices& nm);

/// (Phi-)^T Phi+, cross-checked against the entrywise rule
/// "head of e_j is the tail of e_i". A mismatch throws ConsistencyError.
IntSparse line_graph_adjacency(const NetworkMatrices& nm);

/// The entrywise rule alone, read off the tail/head structure of Phi- and Phi+.
IntSparse line_graph_adjacency_entrywise(const NetworkMatrices& nm);

/// All five matrices populated.
NetworkMatrices network_matrices(const DirectedGraph& g);

bool same_entries(const IntSparse& a, const IntSparse& b);

/// Edge velocities c_j with bounds m <= c_j <= M, m > 0.
class VelocityProfile {
public:
    /// Bounds taken as min/max of c. Throws InvalidVelocityError on c_j <= 0 or non-finite c_j.
    explicit VelocityProfile(std::vector<double> c);
    VelocityProfile(std::vector<double> c, double lower_bound, double upper_bound);

    static VelocityProfile unit(std::size_t edges) { return VelocityProfile(std::vector<double>(edges, 1.0)); }

    const std::vector<double>& c() const noexcept { return c_; }
    double operator[](std::size_t j) const { return c_[j]; }
    std::size_t size() const noexcept { return c_.size(); }
    double lower_bound() const noexcept { return lower_; }
    double upper_bound() const noexcept { return upper_; }
    bool all_unit() const noexcept;

private:
    std::vector<double> c_;
    double lower_ = 1.0;
    double upper_ = 1.0;
};

/// B_C = C^{-1} B C, i.e. b_c(i, j) = (c_j / c_i) b(i, j).
struct BoundaryOperator {
    RealSparse b_c;
    double l1_norm = 0.0;  // max column sum
};

BoundaryOperator boundary_operator(const RealSparse& b, const VelocityProfile& v);
BoundaryOperator boundary_operator(const IntSparse& b, const VelocityProfile& v);

/// Maximum absolute column sum.
double l1_operator_norm(const RealSparse& m);

} // namespace netflow

#endif
