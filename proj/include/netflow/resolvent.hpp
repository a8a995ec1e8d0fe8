#ifndef NETFLOW_RESOLVENT_HPP
#define NETFLOW_RESOLVENT_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netflow/flow.hpp"
#include "netflow/grid_function.hpp"

namespace netflow {

using Complex = std::complex<double>;

/// expm1 for complex arguments without cancellation near zero.
Complex expm1(Complex z);

/// Result of the Volterra part of the resolvent: cell averages of
/// u_j(s) = ∫_s^1 e^{(λ/c_j)(s-t)} f_j(t) / c_j dt and the exact values u_j(0).
struct VolterraPart {
    ComplexGridFunction averages;
    std::vector<Complex> head_values;
};

/// Closed form per cell for piecewise-constant f, swept from x = 1 to x = 0.
/// Throws ResolventSetError when Re(lambda) <= 0.
VolterraPart volterra_part(const FlowSystem& sys, Complex lambda, const ComplexGridFunction& f);

ComplexGridFunction apply_r_lambda(const FlowSystem& sys, Complex lambda, const ComplexGridFunction& f);
ComplexGridFunction apply_r_lambda(const FlowSystem& sys, Complex lambda, const GridFunction& f);

/**
 * R(lambda, A) = (Id + E_lambda(.) (1 - B_{C,lambda})^{-1} B_{C,lambda} ⊗ δ_0) R_lambda
 * with E_lambda(s) = diag(e^{(lambda/c_j) s}) and B_{C,lambda} = E_lambda(-1) B_C.
 *
 * The edge-space factor is computed once by dense LU with partial pivoting;
 * `apply` is const and may run concurrently.
 */
class ResolventOperator {
public:
    /// Throws ResolventSetError for Re(lambda) <= 0 and NearSingularError when
    /// 1 - B_{C,lambda} has condition number above `max_condition`.
    ResolventOperator(const FlowSystem& sys, Complex lambda, double max_condition = 1e12);

    Complex lambda() const noexcept { return lambda_; }
    /// (1 - B_{C,lambda})^{-1} B_{C,lambda}.
    const Eigen::MatrixXcd& kernel_factor() const noexcept { return kernel_; }
    /// 1-norm condition estimate of 1 - B_{C,lambda}.
    double condition_number() const noexcept { return condition_; }
    /// Set when Re(lambda) is below the Neumann-series threshold max_j c_j * ln ||B_C||_1.
    const std::optional<std::string>& warning() const noexcept { return warning_; }

    ComplexGridFunction apply(const ComplexGridFunction& f) const;
    ComplexGridFunction apply(const GridFunction& f) const { return apply(to_complex(f)); }

private:
    FlowSystem sys_;
    Complex lambda_;
    Eigen::MatrixXcd kernel_;
    double condition_ = 1.0;
    std::optional<std::string> warning_;
};

inline ComplexGridFunction apply_resolvent(const ResolventOperator& r, const GridFunction& f) { return r.apply(f); }
inline ComplexGridFunction apply_resolvent(const ResolventOperator& r, const ComplexGridFunction& f) {
    return r.apply(f);
}

/// Re(lambda) above which 1 - B_{C,lambda} is invertible by a Neumann series; 0 when ||B_C||_1 <= 1.
double neumann_threshold(const FlowSystem& sys);

/// ||R(λ)f - R(μ)f - (μ - λ) R(λ) R(μ) f||_1, the resolvent identity for R(λ) = (λ - A)^{-1}.
double pseudoresolvent_defect(const FlowSystem& sys, Complex lambda, Complex mu, const GridFunction& f);

/// ||(λ R(λ))^k f|| / ||f|| for k = 0..k_max (k_max <= 10). Throws InvalidProbeError for f = 0.
std::vector<double> hille_yosida_bound(const FlowSystem& sys, double lambda, std::size_t k_max,
                                       const GridFunction& f);

struct GeneratorDefect {
    double interior = 0.0;  // ||λu - A_h u - f||_1
    double boundary = 0.0;  // ||u(1) - B_C u(0)||_1 with adjacent-cell traces
};

/**
 * Residual of the resolvent equation for cell averages u. A_h is c_j times
 * the forward difference along each edge, fed at the tail by B_C u(0), so
 * both parts are O(1/N) for the cell averages of R(λ, A) f.
 */
GeneratorDefect generator_defect(const FlowSystem& sys, Complex lambda, const ComplexGridFunction& u,
                                 const GridFunction& f);

/// Largest ratio over a probe set and a set of real lambdas.
double empirical_hille_yosida_constant(const FlowSystem& sys, std::span<const double> lambdas, std::size_t k_max,
                                       std::span<const GridFunction> probes);

} // namespace netflow

#endif
