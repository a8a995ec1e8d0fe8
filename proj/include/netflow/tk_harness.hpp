#ifndef NETFLOW_TK_HARNESS_HPP
#define NETFLOW_TK_HARNESS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "netflow/flow.hpp"
#include "netflow/graph.hpp"
#include "netflow/grid_function.hpp"
#include "netflow/resolvent.hpp"

namespace netflow {

/**
 * Approximation experiment along a growing sequence. Member G_ref stands in
 * for the limit graph; every compared index n satisfies n <= reference.
 * Indices are 1-based (G_1 is the first member). Probes live on the
 * reference space.
 */
struct TKExperiment {
    GraphSequence sequence;
    std::vector<VelocityProfile> velocities{};  // one per sequence member
    std::size_t reference = 1;
    std::vector<std::size_t> indices{};
    std::vector<double> times{};
    std::vector<Complex> lambdas{};
    std::vector<GridFunction> probes{};
    std::vector<std::string> probe_ids{};
    std::size_t cells = 256;
    double cfl = 1.0;  // upwind only
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

/// Throws ParameterError / InvalidVelocityError / DimensionError on a broken experiment.
void validate_experiment(const TKExperiment& exp);

enum class ReportKind { Resolvent, Semigroup };

const char* to_string(ReportKind kind);

struct ReportRow {
    ReportKind kind = ReportKind::Semigroup;
    std::size_t n = 0;
    std::string param;  // t or lambda, as printed
    std::string probe;
    double error = 0.0;
};

struct ConvergenceReport {
    std::vector<ReportRow> rows;
    std::map<std::string, std::string> metadata;

    /// Errors for one (kind, param, probe) ordered by n.
    std::vector<double> series(ReportKind kind, const std::string& param, const std::string& probe) const;
    /// max over params of the error at (kind, n, probe).
    double sup_error(ReportKind kind, std::size_t n, const std::string& probe) const;
};

/// Shortest decimal text that round-trips (at most 17 significant digits).
std::string format_real(double x);
/// "2", "0.5", "1+2i", "1-2i".
std::string format_param(Complex lambda);

/**
 * ||E_n R(λ, A_n) P_n x - R(λ, A_ref) x||_1 for every (n, λ, probe).
 * Near-singular resolvents are rethrown with (n, λ) in the message.
 */
ConvergenceReport tk1_resolvent_errors(const TKExperiment& exp);

/**
 * ||E_n T_n(t) P_n x - T_ref(t) x||_1 for every (n, t, probe). Unit
 * velocities use the exact evaluator, anything else upwind with exp.cfl.
 */
ConvergenceReport tk1_semigroup_errors(const TKExperiment& exp);

/// Both reports merged (resolvent rows first).
ConvergenceReport tk1_report(const TKExperiment& exp);

struct LimitCandidate {
    std::size_t index = 0;                      // member whose approximant is the candidate
    std::vector<ComplexGridFunction> images;    // candidate applied to each probe
    std::vector<std::size_t> compared;          // sorted indices, reference last
    std::vector<double> pair_gaps;              // gap between consecutive compared indices
    double cauchy_gap = 0.0;                    // gap of the top pair
    std::vector<double> range_residuals;        // per probe
    double range_density_proxy = 0.0;           // max of range_residuals
};

/**
 * Candidate for the limit resolvent R = lim E_n R(λ, A_n) P_n built from
 * the approximants alone, an empirical Cauchy gap, and a dense-range proxy.
 * Needs at least two distinct indices (including the reference).
 */
LimitCandidate tk2_limit_candidate(const TKExperiment& exp, Complex lambda);

/// Relative L1 residual of the least-squares projection of y onto span(images).
double range_distance(std::span<const ComplexGridFunction> images, const ComplexGridFunction& y);

/**
 * Exponential formula T(t) f ≈ ((k/t) R(k/t, A))^k f with k = steps, i.e.
 * the semigroup rebuilt from resolvent data alone. `lambda_base` is the
 * lower end of the half-line where resolvent data are trusted; k/t must
 * exceed it.
 */
GridFunction tk2_semigroup_from_resolvent(const FlowSystem& sys, double lambda_base, double t, const GridFunction& f,
                                          std::size_t steps);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

/// Coarse random piecewise-constant values, `pieces` per edge, uniform in [0, 1).
/// Deterministic for a given seed on every platform.
GridFunction random_piecewise(std::size_t edges, std::size_t cells, std::size_t pieces, std::uint64_t seed);

/// Default probes on the reference space: indicator of e1, the constant 1
/// on G_1's edges, and five seeded random functions supported on G_1.
void default_probes(const GraphSequence& seq, std::size_t reference, std::size_t cells, std::uint64_t seed,
                    std::vector<GridFunction>& probes, std::vector<std::string>& ids);

/// Ladder family with unit velocities and the default probe set.
TKExperiment ladder_experiment(std::size_t n_max, std::size_t reference, std::size_t cells, std::vector<double> times,
                               std::vector<Complex> lambdas, std::uint64_t seed = 20240601);

/// Default t-grid {0, 0.5, 1, 2, 3, 5} restricted to times aligned with the grid.
std::vector<double> default_times(std::size_t cells);
/// Default lambda probes {0.5, 1, 2, 4, 1+2i, 1-2i}.
std::vector<Complex> default_lambdas();

} // namespace netflow

#endif
