#include "netflow/tk_harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/QR>

#include "netflow/errors.hpp"
#include "netflow/parallel.hpp"

namespace netflow {

namespace {

constexpr const char* kModule = "tk-harness";

// Everything needed to evaluate member n against the reference.
struct Member {
    std::size_t n = 0;
    FlowSystem system;
    ApproxPair pair;
};

std::vector<Member> build_members(const TKExperiment& exp, std::span<const std::size_t> indices) {
    std::vector<Member> members;
    members.reserve(indices.size());
    for (std::size_t n : indices) {
        const auto psi = exp.sequence.inclusion(n - 1, exp.reference - 1);
        members.push_back({n, FlowSystem(exp.sequence.graph_ptr(n - 1), exp.velocities[n - 1]),
                           ApproxPair::from_inclusion(psi)});
    }
    return members;
}

void check_approximation_pair(const Member& member, std::span<const GridFunction> probes) {
    for (const auto& x : probes) {
        const auto px = project(member.pair, x);
        const auto epx = embed(member.pair, px);
        const double nx = l1_norm(x);
        const double npx = l1_norm(px);
        const double tol = 1e-12 * std::max(1.0, nx);
        if (npx > nx + tol) throw ConsistencyError(kModule, "||P_n x|| > ||x|| for n = " + std::to_string(member.n));
        if (std::abs(l1_norm(epx) - npx) > tol) {
            throw ConsistencyError(kModule, "||E_n y|| != ||y|| for n = " + std::to_string(member.n));
        }
        if (!(project(member.pair, epx) == px)) {
            throw ConsistencyError(kModule, "P_n E_n != Id for n = " + std::to_string(member.n));
        }
    }
}

bool uses_exact(const TKExperiment& exp, std::span<const Member> members) {
    if (!exp.velocities[exp.reference - 1].all_unit()) return false;
    return std::all_of(members.begin(), members.end(),
                       [](const Member& m) { return m.system.velocities().all_unit(); });
}

void fill_metadata(const TKExperiment& exp, ConvergenceReport& report) {
    report.metadata["cells"] = std::to_string(exp.cells);
    report.metadata["reference"] = std::to_string(exp.reference);
    report.metadata["seed"] = std::to_string(exp.seed);
    const auto& ref = exp.velocities[exp.reference - 1];
    report.metadata["velocities"] = ref.all_unit() ? "unit"
                                                   : "range [" + format_real(ref.lower_bound()) + ", " +
                                                         format_real(ref.upper_bound()) + "]";
    report.metadata["preconditions"] = "||E_n|| <= 1, ||P_n|| <= 1, P_n E_n = Id verified on all probes";
}

std::string context(std::size_t n, Complex lambda) {
    return "n = " + std::to_string(n) + ", lambda = " + format_param(lambda);
}

} // namespace

const char* to_string(ReportKind kind) { return kind == ReportKind::Resolvent ? "resolvent" : "semigroup"; }

std::vector<double> ConvergenceReport::series(ReportKind kind, const std::string& param,
                                              const std::string& probe) const {
    std::vector<std::pair<std::size_t, double>> picked;
    for (const auto& row : rows) {
        if (row.kind == kind && row.param == param && row.probe == probe) picked.emplace_back(row.n, row.error);
    }
    std::sort(picked.begin(), picked.end());
    std::vector<double> out;
    for (const auto& p : picked) out.push_back(p.second);
    return out;
}

double ConvergenceReport::sup_error(ReportKind kind, std::size_t n, const std::string& probe) const {
    double sup = 0.0;
    bool found = false;
    for (const auto& row : rows) {
        if (row.kind == kind && row.n == n && row.probe == probe) {
            sup = std::max(sup, row.error);
            found = true;
        }
    }
    if (!found) throw ParameterError(kModule, "no rows for n = " + std::to_string(n) + ", probe " + probe);
    return sup;
}

std::string format_real(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_param(Complex lambda) {
    if (lambda.imag() == 0.0) return format_real(lambda.real());
    std::string s = format_real(lambda.real());
    if (lambda.imag() > 0.0) s += "+";
    return s + format_real(lambda.imag()) + "i";
}

void validate_experiment(const TKExperiment& exp) {
    const std::size_t size = exp.sequence.size();
    if (exp.reference < 1 || exp.reference > size) {
        throw ParameterError(kModule, "reference index " + std::to_string(exp.reference) + " outside 1.." +
                                          std::to_string(size));
    }
    if (exp.velocities.size() != size) throw ParameterError(kModule, "need one velocity profile per graph");
    for (std::size_t n = 0; n < size; ++n) {
        if (exp.velocities[n].size() != exp.sequence.graph(n).edge_count()) {
            throw DimensionError(kModule, "velocity profile of G_" + std::to_string(n + 1) + " has the wrong length");
        }
    }
    if (exp.indices.empty()) throw ParameterError(kModule, "no indices to compare");
    for (std::size_t n : exp.indices) {
        if (n < 1 || n > exp.reference) {
            throw ParameterError(kModule, "compared index " + std::to_string(n) + " exceeds the reference " +
                                              std::to_string(exp.reference));
        }
        const auto psi = exp.sequence.inclusion(n - 1, exp.reference - 1);
        const auto& small = exp.velocities[n - 1];
        const auto& large = exp.velocities[exp.reference - 1];
        for (std::size_t e = 0; e < psi.edge_map().size(); ++e) {
            if (small[e] != large[psi.edge_map()[e]]) {
                throw InvalidVelocityError(kModule, "velocity of e" + std::to_string(e + 1) + " in G_" +
                                                        std::to_string(n) + " differs from its image in G_" +
                                                        std::to_string(exp.reference));
            }
        }
    }
    for (double t : exp.times) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError(kModule, "times must be finite and >= 0");
    }
    for (Complex l : exp.lambdas) {
        if (!(l.real() > 0.0)) throw ParameterError(kModule, "lambda " + format_param(l) + " has Re <= 0");
    }
    if (exp.probes.size() != exp.probe_ids.size()) throw ParameterError(kModule, "every probe needs an id");
    const std::size_t m_ref = exp.sequence.graph(exp.reference - 1).edge_count();
    for (const auto& p : exp.probes) {
        if (p.edge_count() != m_ref || p.cells() != exp.cells) {
            throw DimensionError(kModule, "probes must live on the reference space with the experiment's grid");
        }
    }
    if (!(exp.cfl > 0.0 && exp.cfl <= 1.0)) throw ParameterError(kModule, "cfl must lie in (0, 1]");
}

ConvergenceReport tk1_resolvent_errors(const TKExperiment& exp) {
    validate_experiment(exp);
    const auto members = build_members(exp, exp.indices);
    for (const auto& m : members) check_approximation_pair(m, exp.probes);
    const FlowSystem reference(exp.sequence.graph_ptr(exp.reference - 1), exp.velocities[exp.reference - 1]);

    const std::size_t n_lambda = exp.lambdas.size();
    const std::size_t n_probe = exp.probes.size();

    // Factorizations are the synchronization point; applications run in parallel afterwards.
    auto factor = [&](const FlowSystem& sys, std::size_t n, Complex lambda) {
        try {
            return ResolventOperator(sys, lambda);
        } catch (const NearSingularError& e) {
            throw NearSingularError(std::string(e.what()) + " (" + context(n, lambda) + ")", e.condition_number());
        }
    };
    std::vector<ResolventOperator> ref_ops;
    for (Complex l : exp.lambdas) ref_ops.push_back(factor(reference, exp.reference, l));
    std::vector<std::vector<ResolventOperator>> member_ops(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (Complex l : exp.lambdas) member_ops[i].push_back(factor(members[i].system, members[i].n, l));
    }

    std::vector<ComplexGridFunction> ref_images(n_lambda * n_probe);
    parallel_for(ref_images.size(), exp.threads, [&](std::size_t c) {
        ref_images[c] = ref_ops[c / n_probe].apply(exp.probes[c % n_probe]);
    });

    ConvergenceReport report;
    report.rows.resize(members.size() * n_lambda * n_probe);
    parallel_for(report.rows.size(), exp.threads, [&](std::size_t c) {
        const std::size_t i = c / (n_lambda * n_probe);
        const std::size_t l = (c / n_probe) % n_lambda;
        const std::size_t p = c % n_probe;
        const auto& member = members[i];
        const auto approx = embed(member.pair, member_ops[i][l].apply(project(member.pair, exp.probes[p])));
        report.rows[c] = {ReportKind::Resolvent, member.n, format_param(exp.lambdas[l]), exp.probe_ids[p],
                          l1_distance(approx, ref_images[l * n_probe + p])};
    });
    fill_metadata(exp, report);
    report.metadata["evaluator"] = "resolvent";
    return report;
}

ConvergenceReport tk1_semigroup_errors(const TKExperiment& exp) {
    validate_experiment(exp);
    const auto members = build_members(exp, exp.indices);
    for (const auto& m : members) check_approximation_pair(m, exp.probes);
    const FlowSystem reference(exp.sequence.graph_ptr(exp.reference - 1), exp.velocities[exp.reference - 1]);
    const bool exact = uses_exact(exp, members);

    const double t_max = exp.times.empty() ? 0.0 : *std::max_element(exp.times.begin(), exp.times.end());
    if (exact) {
        for (double t : exp.times) aligned_shift(t, exp.cells);
    }
    std::optional<ExactEvaluator> ref_eval;
    std::vector<std::optional<ExactEvaluator>> member_eval(members.size());
    if (exact) {
        ref_eval.emplace(reference, t_max);
        for (std::size_t i = 0; i < members.size(); ++i) member_eval[i].emplace(members[i].system, t_max);
    }
    auto run = [&](const FlowSystem& sys, const std::optional<ExactEvaluator>& ev, const GridFunction& f, double t) {
        return exact ? ev->evolve(f, t) : evolve_upwind(sys, f, t, exp.cfl);
    };

    const std::size_t n_time = exp.times.size();
    const std::size_t n_probe = exp.probes.size();
    std::vector<GridFunction> ref_images(n_time * n_probe);
    parallel_for(ref_images.size(), exp.threads, [&](std::size_t c) {
        ref_images[c] = run(reference, ref_eval, exp.probes[c % n_probe], exp.times[c / n_probe]);
    });

    ConvergenceReport report;
    report.rows.resize(members.size() * n_time * n_probe);
    parallel_for(report.rows.size(), exp.threads, [&](std::size_t c) {
        const std::size_t i = c / (n_time * n_probe);
        const std::size_t k = (c / n_probe) % n_time;
        const std::size_t p = c % n_probe;
        const auto& member = members[i];
        const auto approx = embed(
            member.pair, run(member.system, member_eval[i], project(member.pair, exp.probes[p]), exp.times[k]));
        report.rows[c] = {ReportKind::Semigroup, member.n, format_real(exp.times[k]), exp.probe_ids[p],
                          l1_distance(approx, ref_images[k * n_probe + p])};
    });
    fill_metadata(exp, report);
    report.metadata["evaluator"] = exact ? "exact" : "upwind cfl=" + format_real(exp.cfl);
    return report;
}

ConvergenceReport tk1_report(const TKExperiment& exp) {
    ConvergenceReport merged = tk1_resolvent_errors(exp);
    ConvergenceReport semigroup = tk1_semigroup_errors(exp);
    merged.rows.insert(merged.rows.end(), semigroup.rows.begin(), semigroup.rows.end());
    merged.metadata["evaluator"] = semigroup.metadata["evaluator"];
    return merged;
}

double range_distance(std::span<const ComplexGridFunction> images, const ComplexGridFunction& y) {
    const double norm_y = l1_norm(y);
    if (norm_y == 0.0) return 0.0;
    if (images.empty()) return 1.0;
    const auto rows = static_cast<Eigen::Index>(y.values().size());
    Eigen::MatrixXcd basis(rows, static_cast<Eigen::Index>(images.size()));
    for (std::size_t c = 0; c < images.size(); ++c) {
        if (!images[c].same_shape(y)) throw DimensionError(kModule, "range images and probe differ in shape");
        for (Eigen::Index r = 0; r < rows; ++r) basis(r, static_cast<Eigen::Index>(c)) = images[c].values()[r];
    }
    Eigen::VectorXcd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) target(r) = y.values()[static_cast<std::size_t>(r)];
    const Eigen::VectorXcd coeff = basis.colPivHouseholderQr().solve(target);
    const Eigen::VectorXcd residual = target - basis * coeff;
    return residual.cwiseAbs().sum() / y.cells() / norm_y;
}

LimitCandidate tk2_limit_candidate(const TKExperiment& exp, Complex lambda) {
    validate_experiment(exp);
    if (!(lambda.real() > 0.0)) throw ResolventSetError(kModule, "lambda must have positive real part");
    std::set<std::size_t> unique(exp.indices.begin(), exp.indices.end());
    unique.insert(exp.reference);
    if (unique.size() < 2) {
        throw InsufficientDataError(kModule, "the Cauchy check needs at least two distinct sequence indices");
    }
    if (exp.probes.empty()) throw InsufficientDataError(kModule, "no probes");
    const std::vector<std::size_t> compared(unique.begin(), unique.end());
    const auto members = build_members(exp, compared);
    for (const auto& m : members) check_approximation_pair(m, exp.probes);

    const std::size_t n_probe = exp.probes.size();
    std::vector<std::vector<ComplexGridFunction>> images(members.size(), std::vector<ComplexGridFunction>(n_probe));
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& member = members[i];
        const ResolventOperator op = [&] {
            try {
                return ResolventOperator(member.system, lambda);
            } catch (const NearSingularError& e) {
                throw NearSingularError(std::string(e.what()) + " (" + context(member.n, lambda) + ")",
                                        e.condition_number());
            }
        }();
        parallel_for(n_probe, exp.threads, [&](std::size_t p) {
            images[i][p] = embed(member.pair, op.apply(project(member.pair, exp.probes[p])));
        });
    }

    LimitCandidate out;
    out.index = compared.back();
    out.compared = compared;
    for (std::size_t i = 1; i < members.size(); ++i) {
        double gap = 0.0;
        for (std::size_t p = 0; p < n_probe; ++p) gap = std::max(gap, l1_distance(images[i][p], images[i - 1][p]));
        out.pair_gaps.push_back(gap);
    }
    out.cauchy_gap = out.pair_gaps.back();
    out.images = std::move(images.back());
    for (const auto& y : exp.probes) {
        out.range_residuals.push_back(range_distance(out.images, to_complex(y)));
    }
    out.range_density_proxy = *std::max_element(out.range_residuals.begin(), out.range_residuals.end());
    return out;
}

GridFunction tk2_semigroup_from_resolvent(const FlowSystem& sys, double lambda_base, double t, const GridFunction& f,
                                          std::size_t steps) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError(kModule, "t must be positive");
    if (steps == 0) throw ParameterError(kModule, "steps must be >= 1");
    if (!(lambda_base > 0.0)) throw ParameterError(kModule, "lambda_base must be positive");
    const double lambda = static_cast<double>(steps) / t;
    if (!(lambda > lambda_base)) {
        throw ParameterError(kModule, "steps / t = " + format_real(lambda) + " does not exceed lambda_base = " +
                                          format_real(lambda_base) + "; use at least " +
                                          std::to_string(static_cast<std::size_t>(std::floor(lambda_base * t)) + 1) +
                                          " steps");
    }
    const ResolventOperator r(sys, lambda);
    ComplexGridFunction u = to_complex(f);
    for (std::size_t k = 0; k < steps; ++k) {
        u = r.apply(u);
        u *= Complex(lambda);
    }
    return real_part(u);
}

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) throw ParameterError(kModule, "spearman needs two equal series of length >= 2");
    auto ranks = [](std::span<const double> x) {
        std::vector<std::size_t> order(x.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
        std::vector<double> r(x.size());
        for (std::size_t i = 0; i < order.size();) {
            std::size_t j = i;
            while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double mean = (n + 1.0) / 2.0;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        cov += (ra[i] - mean) * (rb[i] - mean);
        va += (ra[i] - mean) * (ra[i] - mean);
        vb += (rb[i] - mean) * (rb[i] - mean);
    }
    if (va == 0.0 || vb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return cov / std::sqrt(va * vb);
}

GridFunction random_piecewise(std::size_t edges, std::size_t cells, std::size_t pieces, std::uint64_t seed) {
    if (pieces == 0) throw ParameterError(kModule, "need at least one piece per edge");
    std::mt19937_64 rng(seed);
    GridFunction f(edges, cells);
    for (std::size_t j = 0; j < edges; ++j) {
        std::vector<double> values(pieces);
        for (auto& v : values) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        for (std::size_t k = 0; k < cells; ++k) f(j, k) = values[k * pieces / cells];
    }
    return f;
}

void default_probes(const GraphSequence& seq, std::size_t reference, std::size_t cells, std::uint64_t seed,
                    std::vector<GridFunction>& probes, std::vector<std::string>& ids) {
    const auto psi = seq.inclusion(0, reference - 1);
    const ApproxPair pair = ApproxPair::from_inclusion(psi);
    const std::size_t m1 = seq.graph(0).edge_count();

    GridFunction indicator(m1, cells);
    for (std::size_t k = 0; k < cells; ++k) indicator(0, k) = 1.0;
    probes.push_back(embed(pair, indicator));
    ids.emplace_back("indicator_e1");

    GridFunction constant(m1, cells);
    for (std::size_t j = 0; j < m1; ++j) {
        for (std::size_t k = 0; k < cells; ++k) constant(j, k) = 1.0;
    }
    probes.push_back(embed(pair, constant));
    ids.emplace_back("constant_g1");

    for (std::uint64_t r = 0; r < 5; ++r) {
        probes.push_back(embed(pair, random_piecewise(m1, cells, 8, seed + r)));
        ids.push_back("random_" + std::to_string(r + 1));
    }
}

TKExperiment ladder_experiment(std::size_t n_max, std::size_t reference, std::size_t cells, std::vector<double> times,
                               std::vector<Complex> lambdas, std::uint64_t seed) {
    if (n_max < 1 || reference < n_max) throw ParameterError(kModule, "need 1 <= n_max <= reference");
    TKExperiment exp{ladder_sequence(reference)};
    for (std::size_t n = 0; n < reference; ++n) {
        exp.velocities.push_back(VelocityProfile::unit(exp.sequence.graph(n).edge_count()));
    }
    exp.reference = reference;
    for (std::size_t n = 1; n <= n_max; ++n) exp.indices.push_back(n);
    exp.times = std::move(times);
    exp.lambdas = std::move(lambdas);
    exp.cells = cells;
    exp.seed = seed;
    exp.threads = default_thread_count();
    default_probes(exp.sequence, reference, cells, seed, exp.probes, exp.probe_ids);
    return exp;
}

std::vector<double> default_times(std::size_t cells) {
    std::vector<double> out;
    for (double t : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0}) {
        if (is_grid_aligned(t, cells)) out.push_back(t);
    }
    return out;
}

std::vector<Complex> default_lambdas() { return {0.5, 1.0, 2.0, 4.0, {1.0, 2.0}, {1.0, -2.0}}; }

} // namespace netflow
