#ifndef NETFLOW_FLOW_HPP
#define NETFLOW_FLOW_HPP

#include <cstddef>
#include <vector>

#include "netflow/graph.hpp"
#include "netflow/grid_function.hpp"
#include "netflow/network_matrices.hpp"

namespace netflow {

/**
 * Transport problem on a metric graph.
 *
 * Every edge is the interval [0,1] parametrized against the flow: the tail
 * sits at x = 1, the head at x = 0, and material moves toward x = 0 with
 * speed c_j. The generator acts as (Af)_j = c_j f_j' on functions with
 * f(1) = B_C f(0).
 */
class FlowSystem {
public:
    /// Boundary coupling from the line-graph adjacency of g.
    FlowSystem(GraphPtr graph, VelocityProfile velocities);
    /// Boundary coupling from caller-supplied nonnegative weights (edges x edges).
    FlowSystem(GraphPtr graph, VelocityProfile velocities, const RealSparse& weights);

    static FlowSystem with_unit_velocities(GraphPtr graph);

    const DirectedGraph& graph() const { return *graph_; }
    const GraphPtr& graph_ptr() const noexcept { return graph_; }
    const NetworkMatrices& matrices() const noexcept { return matrices_; }
    const VelocityProfile& velocities() const noexcept { return velocities_; }
    const BoundaryOperator& boundary() const noexcept { return boundary_; }
    std::size_t edge_count() const noexcept { return graph_->edge_count(); }

private:
    GraphPtr graph_;
    NetworkMatrices matrices_;
    VelocityProfile velocities_;
    BoundaryOperator boundary_;
};

struct DomainCheck {
    double residual = 0.0;  // ||f(1) - B_C f(0)||_1
    bool in_domain = false;
};

/// Trace identity only; traces follow the adjacent-cell convention, so the
/// residual of a sampled smooth domain element is O(1/N).
DomainCheck in_domain(const FlowSystem& sys, const GridFunction& f, double tol);

bool is_grid_aligned(double t, std::size_t cells);
/// t * N as an integer; throws AlignmentError carrying the two nearest aligned times.
std::size_t aligned_shift(double t, std::size_t cells);

/**
 * Closed-form evaluation for unit velocities:
 *   (T(t)f)(s) = (B^k f)(s + t - k),  k = floor(s + t),
 * realised as a cell shift combined with cached powers of B. The powers
 * are built in the constructor, so one evaluator may be shared across threads.
 */
class ExactEvaluator {
public:
    ExactEvaluator(const FlowSystem& sys, double t_max);

    GridFunction evolve(const GridFunction& f, double t) const;

    double t_max() const noexcept { return t_max_; }
    const std::vector<RealSparse>& powers() const noexcept { return powers_; }

private:
    std::size_t edges_;
    double t_max_;
    std::vector<RealSparse> powers_;  // powers_[k] = B^k, k >= 1; [0] unused
};

GridFunction evolve_exact(const FlowSystem& sys, const GridFunction& f, double t);

/**
 * First-order upwind finite volumes. Each step moves the fastest edge by
 * `cfl` cells; the inflow cell at the tail of edge i is fed by
 * sum_j B_C(i, j) * (head cell of edge j). The last step is shortened to
 * land on t. With unit velocities and cfl = 1 this is the exact shift.
 */
GridFunction evolve_upwind(const FlowSystem& sys, const GridFunction& f, double t, double cfl);

enum class Evaluator { Exact, Upwind };

struct EvolveOptions {
    Evaluator method = Evaluator::Exact;
    double cfl = 1.0;
};

GridFunction evolve(const FlowSystem& sys, const GridFunction& f, double t, const EvolveOptions& options);

/// ||T(t+s)f - T(t)T(s)f||_1.
double semigroup_law_check(const FlowSystem& sys, const GridFunction& f, double t, double s,
                           const EvolveOptions& options = {});

/// sum_j ∫ f_j.
double total_mass(const GridFunction& f);

} // namespace netflow

#endif
