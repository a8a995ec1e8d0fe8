#include "netflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "netflow/errors.hpp"

namespace netflow {

namespace {

void require_shape(const FlowSystem& sys, const GridFunction& f) {
    if (f.edge_count() != sys.edge_count()) {
        throw DimensionError("flow-semigroup", "function has " + std::to_string(f.edge_count()) +
                                                   " edges, network has " + std::to_string(sys.edge_count()));
    }
}

std::vector<double> multiply(const RealSparse& m, const std::vector<double>& x) {
    std::vector<double> y(static_cast<std::size_t>(m.rows()), 0.0);
    for (Eigen::Index i = 0; i < m.outerSize(); ++i) {
        double acc = 0.0;
        for (RealSparse::InnerIterator it(m, i); it; ++it) acc += it.value() * x[static_cast<std::size_t>(it.col())];
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

} // namespace

FlowSystem::FlowSystem(GraphPtr graph, VelocityProfile velocities)
    : graph_(std::move(graph)), matrices_(network_matrices(*graph_)), velocities_(std::move(velocities)) {
    if (velocities_.size() != graph_->edge_count()) {
        throw DimensionError("flow-semigroup", "need one velocity per edge");
    }
    boundary_ = boundary_operator(matrices_.line_adjacency, velocities_);
}

FlowSystem::FlowSystem(GraphPtr graph, VelocityProfile velocities, const RealSparse& weights)
    : graph_(std::move(graph)), matrices_(network_matrices(*graph_)), velocities_(std::move(velocities)) {
    if (velocities_.size() != graph_->edge_count()) {
        throw DimensionError("flow-semigroup", "need one velocity per edge");
    }
    boundary_ = boundary_operator(weights, velocities_);
}

FlowSystem FlowSystem::with_unit_velocities(GraphPtr graph) {
    const auto m = graph->edge_count();
    return FlowSystem(std::move(graph), VelocityProfile::unit(m));
}

DomainCheck in_domain(const FlowSystem& sys, const GridFunction& f, double tol) {
    require_shape(sys, f);
    auto [head, tail] = boundary_traces(f);
    const auto image = multiply(sys.boundary().b_c, head);
    DomainCheck check;
    for (std::size_t i = 0; i < tail.size(); ++i) check.residual += std::abs(tail[i] - image[i]);
    check.in_domain = check.residual <= tol;
    return check;
}

bool is_grid_aligned(double t, std::size_t cells) {
    const double steps = t * static_cast<double>(cells);
    return std::abs(steps - std::round(steps)) <= 1e-9 * std::max(1.0, std::abs(steps));
}

std::size_t aligned_shift(double t, std::size_t cells) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("flow-semigroup", "time must be finite and >= 0");
    const double n = static_cast<double>(cells);
    const double steps = t * n;
    if (!is_grid_aligned(t, cells)) {
        const double lo = std::floor(steps) / n;
        const double hi = std::ceil(steps) / n;
        std::ostringstream os;
        os.precision(17);
        os << "t = " << t << " is not a multiple of the cell width 1/" << cells << "; nearest aligned times are "
           << lo << " and " << hi;
        throw AlignmentError(os.str(), lo, hi);
    }
    return static_cast<std::size_t>(std::llround(steps));
}

ExactEvaluator::ExactEvaluator(const FlowSystem& sys, double t_max) : edges_(sys.edge_count()), t_max_(t_max) {
    if (!sys.velocities().all_unit()) {
        throw UnsupportedInputError("flow-semigroup", "the exact evaluator needs unit velocities; use evolve_upwind");
    }
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ParameterError("flow-semigroup", "t_max must be finite and >= 0");
    // A cell at time t needs at most floor(t) + 1 boundary crossings.
    const auto k_max = static_cast<std::size_t>(std::floor(t_max)) + 1;
    powers_.resize(k_max + 1);
    const RealSparse& b = sys.boundary().b_c;
    if (k_max >= 1) powers_[1] = b;
    for (std::size_t k = 2; k <= k_max; ++k) {
        powers_[k] = RealSparse(b * powers_[k - 1]);
        powers_[k].makeCompressed();
    }
}

GridFunction ExactEvaluator::evolve(const GridFunction& f, double t) const {
    if (f.edge_count() != edges_) {
        throw DimensionError("flow-semigroup", "function has " + std::to_string(f.edge_count()) +
                                                   " edges, network has " + std::to_string(edges_));
    }
    const std::size_t n = f.cells();
    const std::size_t shift = aligned_shift(t, n);
    const std::size_t q_first = shift / n;
    const std::size_t q_last = (shift + n - 1) / n;
    if (q_last >= powers_.size()) {
        throw ParameterError("flow-semigroup", "t exceeds the evaluator's t_max");
    }
    GridFunction out(edges_, n);
    for (std::size_t q = q_first; q <= q_last; ++q) {
        // cells k with floor((k + shift) / n) == q
        const std::size_t k_begin = q * n > shift ? q * n - shift : 0;
        const std::size_t k_end = std::min(n, (q + 1) * n - shift);
        if (k_begin >= k_end) continue;
        const std::size_t base = q * n;  // source cell = k + shift - base
        if (q == 0) {
            for (std::size_t j = 0; j < edges_; ++j) {
                for (std::size_t k = k_begin; k < k_end; ++k) out(j, k) = f(j, k + shift - base);
            }
            continue;
        }
        const RealSparse& p = powers_[q];
        for (Eigen::Index i = 0; i < p.outerSize(); ++i) {
            const auto row = static_cast<std::size_t>(i);
            for (RealSparse::InnerIterator it(p, i); it; ++it) {
                const auto col = static_cast<std::size_t>(it.col());
                const double w = it.value();
                for (std::size_t k = k_begin; k < k_end; ++k) out(row, k) += w * f(col, k + shift - base);
            }
        }
    }
    return out;
}

GridFunction evolve_exact(const FlowSystem& sys, const GridFunction& f, double t) {
    require_shape(sys, f);
    return ExactEvaluator(sys, t).evolve(f, t);
}

GridFunction evolve_upwind(const FlowSystem& sys, const GridFunction& f, double t, double cfl) {
    require_shape(sys, f);
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ParameterError("flow-semigroup", "cfl must lie in (0, 1]");
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("flow-semigroup", "time must be finite and >= 0");
    const std::size_t m = f.edge_count();
    const std::size_t n = f.cells();
    GridFunction w = f;
    if (m == 0 || t == 0.0) return w;

    const auto& c = sys.velocities().c();
    const double c_max = *std::max_element(c.begin(), c.end());
    // Distance travelled by the fastest edge, in cells.
    const double travel = t * static_cast<double>(n) * c_max;
    const auto full_steps = static_cast<std::size_t>(std::floor(travel / cfl + 1e-9));
    const double remainder = travel - static_cast<double>(full_steps) * cfl;

    GridFunction next(m, n);
    std::vector<double> heads(m);
    const RealSparse& b = sys.boundary().b_c;
    auto step = [&](double courant) {
        for (std::size_t j = 0; j < m; ++j) heads[j] = w(j, 0);
        const auto inflow = multiply(b, heads);
        for (std::size_t j = 0; j < m; ++j) {
            const double nu = courant * (c[j] / c_max);
            const double keep = 1.0 - nu;
            for (std::size_t k = 0; k + 1 < n; ++k) next(j, k) = keep * w(j, k) + nu * w(j, k + 1);
            next(j, n - 1) = keep * w(j, n - 1) + nu * inflow[j];
        }
        std::swap(w, next);
    };
    for (std::size_t s = 0; s < full_steps; ++s) step(cfl);
    if (remainder > 1e-9) step(remainder);
    return w;
}

GridFunction evolve(const FlowSystem& sys, const GridFunction& f, double t, const EvolveOptions& options) {
    if (options.method == Evaluator::Exact) return evolve_exact(sys, f, t);
    return evolve_upwind(sys, f, t, options.cfl);
}

double semigroup_law_check(const FlowSystem& sys, const GridFunction& f, double t, double s,
                           const EvolveOptions& options) {
    const auto whole = evolve(sys, f, t + s, options);
    const auto split = evolve(sys, evolve(sys, f, s, options), t, options);
    return l1_distance(whole, split);
}

double total_mass(const GridFunction& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    return sum / static_cast<double>(f.cells());
}

} // namespace netflow
