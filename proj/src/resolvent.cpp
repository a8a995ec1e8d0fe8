#include "netflow/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>

#include "netflow/errors.hpp"

namespace netflow {

namespace {

// (e^z - 1) / z, the mean of e^{z r} over r in [0, 1].
Complex mean_exp(Complex z) {
    if (std::abs(z) < 1e-5) return 1.0 + z * (0.5 + z / 6.0);
    return expm1(z) / z;
}

void require_resolvent_set(Complex lambda) {
    if (!(lambda.real() > 0.0)) {
        std::ostringstream os;
        os << "lambda = " << lambda.real() << (lambda.imag() < 0 ? "" : "+") << lambda.imag()
           << "i is outside the half-plane Re(lambda) > 0";
        throw ResolventSetError("resolvent", os.str());
    }
}

} // namespace

Complex expm1(Complex z) {
    const double x = z.real();
    const double y = z.imag();
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

VolterraPart volterra_part(const FlowSystem& sys, Complex lambda, const ComplexGridFunction& f) {
    require_resolvent_set(lambda);
    if (f.edge_count() != sys.edge_count()) {
        throw DimensionError("resolvent", "function has " + std::to_string(f.edge_count()) + " edges, network has " +
                                              std::to_string(sys.edge_count()));
    }
    const std::size_t n = f.cells();
    const double h = f.cell_width();
    VolterraPart part{ComplexGridFunction(f.edge_count(), n), std::vector<Complex>(f.edge_count())};
    for (std::size_t j = 0; j < f.edge_count(); ++j) {
        const Complex mu = lambda / sys.velocities()[j];
        const Complex decay = std::exp(-mu * h);     // e^{-mu h}
        const Complex average = mean_exp(-mu * h);   // mean of e^{-mu r} over [0, h]
        // On cell k, u(s) = p + (u(x_{k+1}) - p) e^{-mu (x_{k+1} - s)} with p = f_k / lambda.
        Complex u_right = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            const Complex p = f(j, k) / lambda;
            part.averages(j, k) = p + (u_right - p) * average;
            u_right = p + (u_right - p) * decay;
        }
        part.head_values[j] = u_right;
    }
    return part;
}

ComplexGridFunction apply_r_lambda(const FlowSystem& sys, Complex lambda, const ComplexGridFunction& f) {
    return volterra_part(sys, lambda, f).averages;
}

ComplexGridFunction apply_r_lambda(const FlowSystem& sys, Complex lambda, const GridFunction& f) {
    return apply_r_lambda(sys, lambda, to_complex(f));
}

double neumann_threshold(const FlowSystem& sys) {
    const double sigma = sys.boundary().l1_norm;
    if (sigma <= 1.0 || sys.edge_count() == 0) return 0.0;
    return sys.velocities().upper_bound() * std::log(sigma);
}

ResolventOperator::ResolventOperator(const FlowSystem& sys, Complex lambda, double max_condition)
    : sys_(sys), lambda_(lambda) {
    require_resolvent_set(lambda);
    const auto m = static_cast<Eigen::Index>(sys.edge_count());
    Eigen::MatrixXcd b_lambda = Eigen::MatrixXcd::Zero(m, m);
    const RealSparse& b_c = sys.boundary().b_c;
    for (Eigen::Index i = 0; i < b_c.outerSize(); ++i) {
        const Complex row_scale = std::exp(-lambda / sys.velocities()[static_cast<std::size_t>(i)]);
        for (RealSparse::InnerIterator it(b_c, i); it; ++it) b_lambda(i, it.col()) = row_scale * it.value();
    }
    const Eigen::MatrixXcd system = Eigen::MatrixXcd::Identity(m, m) - b_lambda;
    if (m > 0) {
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
        const double rcond = lu.rcond();
        condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
        if (!(condition_ <= max_condition)) {
            std::ostringstream os;
            os << "1 - B_{C,lambda} is numerically singular at lambda = " << lambda.real()
               << (lambda.imag() < 0 ? "" : "+") << lambda.imag() << "i (condition number " << condition_ << ")";
            throw NearSingularError(os.str(), condition_);
        }
        kernel_ = lu.solve(b_lambda);
    } else {
        kernel_ = Eigen::MatrixXcd(0, 0);
    }
    const double threshold = neumann_threshold(sys);
    if (threshold > 0.0 && lambda.real() <= threshold) {
        std::ostringstream os;
        os << "Re(lambda) = " << lambda.real() << " is below the Neumann-series threshold " << threshold
           << "; invertibility rests on the LU factorization alone";
        warning_ = os.str();
    }
}

ComplexGridFunction ResolventOperator::apply(const ComplexGridFunction& f) const {
    auto part = volterra_part(sys_, lambda_, f);
    const auto m = static_cast<Eigen::Index>(f.edge_count());
    if (m == 0) return std::move(part.averages);
    Eigen::VectorXcd heads(m);
    for (Eigen::Index j = 0; j < m; ++j) heads(j) = part.head_values[static_cast<std::size_t>(j)];
    const Eigen::VectorXcd coeff = kernel_ * heads;

    ComplexGridFunction& u = part.averages;
    const std::size_t n = f.cells();
    const double h = f.cell_width();
    for (std::size_t j = 0; j < f.edge_count(); ++j) {
        const Complex a = coeff(static_cast<Eigen::Index>(j));
        if (a == Complex(0.0)) continue;
        const Complex mu = lambda_ / sys_.velocities()[j];
        const Complex cell_mean = mean_exp(mu * h);  // mean of e^{mu r} over [0, h]
        for (std::size_t k = 0; k < n; ++k) {
            u(j, k) += a * std::exp(mu * (static_cast<double>(k) * h)) * cell_mean;
        }
    }
    return std::move(part.averages);
}

double pseudoresolvent_defect(const FlowSystem& sys, Complex lambda, Complex mu, const GridFunction& f) {
    const ResolventOperator r_lambda(sys, lambda);
    const ResolventOperator r_mu(sys, mu);
    const auto a = r_lambda.apply(f);
    const auto b = r_mu.apply(f);
    auto rhs = r_lambda.apply(b);
    rhs *= (mu - lambda);
    return l1_distance(a - b, rhs);
}

GeneratorDefect generator_defect(const FlowSystem& sys, Complex lambda, const ComplexGridFunction& u,
                                 const GridFunction& f) {
    if (u.edge_count() != sys.edge_count() || u.edge_count() != f.edge_count() || u.cells() != f.cells()) {
        throw DimensionError("resolvent", "u, f and the network disagree in shape");
    }
    const std::size_t m = u.edge_count();
    const std::size_t n = u.cells();
    const double h = u.cell_width();
    std::vector<Complex> ghost(m, 0.0);
    const RealSparse& b_c = sys.boundary().b_c;
    for (Eigen::Index i = 0; i < b_c.outerSize(); ++i) {
        for (RealSparse::InnerIterator it(b_c, i); it; ++it) {
            ghost[static_cast<std::size_t>(i)] += it.value() * u(static_cast<std::size_t>(it.col()), 0);
        }
    }
    GeneratorDefect d;
    for (std::size_t j = 0; j < m; ++j) {
        const double c = sys.velocities()[j];
        for (std::size_t k = 0; k < n; ++k) {
            const Complex right = k + 1 < n ? u(j, k + 1) : ghost[j];
            const Complex r = lambda * u(j, k) - c * (right - u(j, k)) / h - f(j, k);
            d.interior += std::abs(r) * h;
        }
        d.boundary += std::abs(u(j, n - 1) - ghost[j]);
    }
    return d;
}

std::vector<double> hille_yosida_bound(const FlowSystem& sys, double lambda, std::size_t k_max,
                                       const GridFunction& f) {
    if (!(lambda > 0.0)) throw ResolventSetError("resolvent", "Hille-Yosida ratios need a real lambda > 0");
    if (k_max > 10) throw ParameterError("resolvent", "k_max is limited to 10");
    const double base = l1_norm(f);
    if (base == 0.0) throw InvalidProbeError("resolvent", "Hille-Yosida probe must be nonzero");
    const ResolventOperator r(sys, lambda);
    std::vector<double> ratios{1.0};
    ComplexGridFunction power = to_complex(f);
    for (std::size_t k = 1; k <= k_max; ++k) {
        power = r.apply(power);
        power *= Complex(lambda);
        ratios.push_back(l1_norm(power) / base);
    }
    return ratios;
}

double empirical_hille_yosida_constant(const FlowSystem& sys, std::span<const double> lambdas, std::size_t k_max,
                                       std::span<const GridFunction> probes) {
    double worst = 0.0;
    for (double lambda : lambdas) {
        for (const auto& f : probes) {
            const auto ratios = hille_yosida_bound(sys, lambda, k_max, f);
            worst = std::max(worst, *std::max_element(ratios.begin(), ratios.end()));
        }
    }
    return worst;
}

} // namespace netflow
