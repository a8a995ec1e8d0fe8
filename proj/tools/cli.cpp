#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "netflow/errors.hpp"
#include "netflow/flow.hpp"
#include "netflow/io.hpp"
#include "netflow/parallel.hpp"
#include "netflow/tk_harness.hpp"

namespace netflow::cli {

namespace {

double parse_real(std::string_view text) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    double v = 0.0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || first == last) {
        throw ParameterError("cli", "not a number: \"" + std::string(text) + "\"");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

Complex parse_term(std::string_view text) {
    if (!text.empty() && text.back() == 'i') {
        const auto split_at = text.find_last_of("+-", text.size() - 2);
        if (split_at == std::string_view::npos || split_at == 0) {
            throw ParameterError("cli", "malformed complex number \"" + std::string(text) + "\"");
        }
        return {parse_real(text.substr(0, split_at)),
                parse_real(text.substr(split_at, text.size() - 1 - split_at))};
    }
    return {parse_real(text), 0.0};
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MalformedInputError("cli", "cannot write " + path);
    return out;
}

std::size_t resolution(const RunConfig& config, const GridFunction& f) {
    if (config.cells && *config.cells != f.cells()) {
        throw DimensionError("cli", "--cells " + std::to_string(*config.cells) + " disagrees with the " +
                                        std::to_string(f.cells()) + " cells of " + config.initial_path);
    }
    return f.cells();
}

FlowSystem load_system(const RunConfig& config) {
    const GraphFile file = read_graph_file(config.graph_path);
    return FlowSystem(std::make_shared<const DirectedGraph>(file.graph), file.velocity_profile());
}

GridFunction load_initial(const RunConfig& config, const FlowSystem& sys) {
    GridFunction f = read_function_file(config.initial_path);
    resolution(config, f);
    if (f.edge_count() != sys.edge_count()) {
        throw DimensionError("cli", config.initial_path + " has " + std::to_string(f.edge_count()) +
                                        " edges, the graph has " + std::to_string(sys.edge_count()));
    }
    return f;
}

int cmd_matrices(const RunConfig& config, std::ostream& out) {
    const GraphFile file = read_graph_file(config.graph_path);
    const NetworkMatrices nm = network_matrices(file.graph);
    for (const auto& line : header_lines(config)) out << "# " << line << '\n';
    print_matrix(out, "phi_minus", nm.phi_minus);
    print_matrix(out, "phi_plus", nm.phi_plus);
    print_matrix(out, "phi", nm.phi);
    print_matrix(out, "adjacency", nm.adjacency);
    print_matrix(out, "line_adjacency", nm.line_adjacency);
    if (file.velocities) {
        const FlowSystem sys(std::make_shared<const DirectedGraph>(file.graph), file.velocity_profile());
        print_matrix(out, "b_c", sys.boundary().b_c);
    }
    return 0;
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
    const FlowSystem sys = load_system(config);
    const GridFunction f = load_initial(config, sys);
    EvolveOptions options;
    options.method = config.upwind ? Evaluator::Upwind : Evaluator::Exact;
    options.cfl = config.cfl;
    const GridFunction u = evolve(sys, f, config.t, options);
    write_function_file(config.out_path, u, header_lines(config));
    out << "wrote " << config.out_path << '\n';
    return 0;
}

int cmd_resolvent(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const FlowSystem sys = load_system(config);
    const GridFunction f = load_initial(config, sys);
    const ResolventOperator r(sys, config.lambda);
    if (r.warning()) err << "warning [resolvent]: " << *r.warning() << '\n';
    const ComplexGridFunction u = r.apply(f);
    auto header = header_lines(config);
    header.push_back("condition_number: " + format_decimal(r.condition_number()));
    write_function_file(config.out_path, real_part(u), header);
    out << "wrote " << config.out_path;
    if (config.lambda.imag() != 0.0) {
        header.push_back("part: imaginary");
        write_function_file(config.out_path + ".imag", imag_part(u), header);
        out << " and " << config.out_path << ".imag";
    }
    out << '\n';
    return 0;
}

int cmd_pseudoresolvent(const RunConfig& config, std::ostream& out) {
    if (config.trials == 0) throw ParameterError("cli", "--trials must be >= 1");
    const FlowSystem sys = load_system(config);
    const std::size_t cells = config.cells.value_or(256);
    double worst = 0.0;
    for (std::size_t k = 0; k < config.trials; ++k) {
        const GridFunction f = random_piecewise(sys.edge_count(), cells, 8, config.seed + k);
        worst = std::max(worst, pseudoresolvent_defect(sys, config.lambda, config.mu, f));
    }
    for (const auto& line : header_lines(config)) out << "# " << line << '\n';
    out << "max_defect " << format_decimal(worst) << '\n';
    return 0;
}

int cmd_tk_convergence(const RunConfig& config, std::ostream& out) {
    if (config.family != "ladder") throw ParameterError("cli", "unknown family \"" + config.family + "\"");
    if (config.out_path.empty()) throw ParameterError("cli", "--out is required");
    const std::size_t cells = config.cells.value_or(256);
    auto times = config.times.empty() ? default_times(cells) : config.times;
    auto lambdas = config.lambdas.empty() ? default_lambdas() : config.lambdas;
    TKExperiment exp = ladder_experiment(config.n_max, config.reference, cells, times, lambdas, config.seed);
    exp.threads = config.threads;
    const ConvergenceReport report = tk1_report(exp);
    {
        auto file = open_output(config.out_path);
        write_report(file, report, header_lines(config));
    }
    if (config.gnuplot) {
        for (ReportKind kind : {ReportKind::Resolvent, ReportKind::Semigroup}) {
            for (const auto& probe : exp.probe_ids) {
                const std::string path = config.out_path + "." + to_string(kind) + "." + probe + ".dat";
                auto file = open_output(path);
                write_gnuplot(file, report, kind, probe);
            }
        }
    }
    out << "wrote " << report.rows.size() << " rows to " << config.out_path << '\n';
    for (const auto& probe : exp.probe_ids) {
        out << "sup_t semigroup error, " << probe << ":";
        for (std::size_t n = 1; n <= config.n_max; ++n) {
            out << ' ' << format_decimal(report.sup_error(ReportKind::Semigroup, n, probe));
        }
        out << '\n';
    }
    return 0;
}

int cmd_validate_report(const RunConfig& config, std::ostream& out) {
    const ReportValidation v = validate_report(read_text_file(config.report_path));
    out << "valid report: " << v.rows << " rows";
    for (const auto& [kind, count] : v.rows_per_kind) out << ", " << kind << " " << count;
    out << '\n';
    return 0;
}

std::string join_reals(const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_real(values[i]);
    return s;
}

} // namespace

Complex parse_complex(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() == 2) return {parse_real(parts[0]), parse_real(parts[1])};
    if (parts.size() == 1) return parse_term(parts[0]);
    throw ParameterError("cli", "expected re[,im], got \"" + text + "\"");
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (auto part : split(text, ',')) out.push_back(parse_real(part));
    return out;
}

std::vector<Complex> parse_complex_list(const std::string& text) {
    std::vector<Complex> out;
    for (auto part : split(text, ',')) out.push_back(parse_term(part));
    return out;
}

std::vector<std::string> header_lines(const RunConfig& config) {
    std::vector<std::string> lines{std::string("netflow ") + kVersion, "command: " + config.command};
    auto add = [&](const std::string& key, const std::string& value) { lines.push_back(key + ": " + value); };
    const std::string cells = config.cells ? std::to_string(*config.cells) : "default";
    if (config.command == "matrices") {
        add("graph", config.graph_path);
    } else if (config.command == "simulate") {
        add("graph", config.graph_path);
        add("initial", config.initial_path);
        add("t", format_real(config.t));
        add("evaluator", config.upwind ? "upwind cfl=" + format_real(config.cfl) : "exact");
        add("cells", cells);
    } else if (config.command == "resolvent") {
        add("graph", config.graph_path);
        add("initial", config.initial_path);
        add("lambda", format_param(config.lambda));
        add("cells", cells);
    } else if (config.command == "pseudoresolvent-check") {
        add("graph", config.graph_path);
        add("lambda", format_param(config.lambda));
        add("mu", format_param(config.mu));
        add("trials", std::to_string(config.trials));
        add("cells", cells);
    } else if (config.command == "tk-convergence") {
        add("family", config.family);
        add("n_max", std::to_string(config.n_max));
        add("reference", std::to_string(config.reference));
        add("cells", cells);
        add("times", config.times.empty() ? "default" : join_reals(config.times));
        std::string lam;
        for (std::size_t i = 0; i < config.lambdas.size(); ++i) lam += (i ? "," : "") + format_param(config.lambdas[i]);
        add("lambdas", config.lambdas.empty() ? "default" : lam);
    }
    add("seed", std::to_string(config.seed));
    return lines;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.command == "matrices") return cmd_matrices(config, out);
        if (config.command == "simulate") return cmd_simulate(config, out);
        if (config.command == "resolvent") return cmd_resolvent(config, out, err);
        if (config.command == "pseudoresolvent-check") return cmd_pseudoresolvent(config, out);
        if (config.command == "tk-convergence") return cmd_tk_convergence(config, out);
        if (config.command == "validate-report") return cmd_validate_report(config, out);
        err << "error [cli]: unknown command \"" << config.command << "\"\n";
        return 2;
    } catch (const Error& e) {
        err << "error [" << e.module() << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    CLI::App app{"Linear transport flows on directed metric graphs"};
    app.set_version_flag("--version", std::string("netflow ") + kVersion);
    app.require_subcommand(0, 1);

    std::size_t cells = 0;
    std::size_t threads = default_thread_count();
    std::string lambda_text;
    std::string mu_text;
    std::string times_text;
    std::string lambdas_text;
    std::string validate_path;

    app.add_option("--validate-report", validate_path, "Validate a report CSV and exit");
    auto add_cells = [&](CLI::App* sub) {
        sub->add_option("--cells", cells, "Cells per edge (default 256)")->check(CLI::PositiveNumber);
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", threads, "Worker threads (NETFLOW_THREADS overrides)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", config.seed, "Random seed");
    };

    auto* matrices = app.add_subcommand("matrices", "Print incidence, adjacency and line-graph matrices");
    matrices->add_option("graph", config.graph_path)->required();
    add_common(matrices);

    auto* simulate = app.add_subcommand("simulate", "Evolve an initial function by the flow");
    simulate->add_option("graph", config.graph_path)->required();
    simulate->add_option("--initial", config.initial_path)->required();
    simulate->add_option("--t", config.t)->required();
    auto* exact_flag = simulate->add_flag("--exact", "Closed-form evaluator (unit velocities)");
    simulate->add_flag("--upwind", config.upwind, "Upwind finite volumes")->excludes(exact_flag);
    simulate->add_option("--cfl", config.cfl, "Courant number for --upwind")->capture_default_str();
    simulate->add_option("--out", config.out_path)->required();
    add_cells(simulate);
    add_common(simulate);

    auto* resolvent = app.add_subcommand("resolvent", "Apply R(lambda, A) to a function");
    resolvent->add_option("graph", config.graph_path)->required();
    resolvent->add_option("--lambda", lambda_text, "re[,im]")->required();
    resolvent->add_option("--initial", config.initial_path)->required();
    resolvent->add_option("--out", config.out_path)->required();
    add_cells(resolvent);
    add_common(resolvent);

    auto* pseudo = app.add_subcommand("pseudoresolvent-check", "Max resolvent-identity defect on random probes");
    pseudo->add_option("graph", config.graph_path)->required();
    pseudo->add_option("--lambda", lambda_text, "re[,im]")->required();
    pseudo->add_option("--mu", mu_text, "re[,im]")->required();
    pseudo->add_option("--trials", config.trials)->capture_default_str();
    add_cells(pseudo);
    add_common(pseudo);

    auto* tk = app.add_subcommand("tk-convergence", "Approximation errors along a graph sequence");
    tk->add_option("--family", config.family)->capture_default_str();
    tk->add_option("--n-max", config.n_max)->capture_default_str()->check(CLI::PositiveNumber);
    tk->add_option("--reference", config.reference)->capture_default_str()->check(CLI::PositiveNumber);
    tk->add_option("--times", times_text, "Comma-separated times");
    tk->add_option("--lambdas", lambdas_text, "Comma-separated lambdas, e.g. 2,1+2i");
    tk->add_option("--out", config.out_path)->required();
    tk->add_flag("--gnuplot", config.gnuplot, "Also write one two-column file per (kind, probe)");
    add_cells(tk);
    add_common(tk);

    auto* validate = app.add_subcommand("validate-report", "Check that a report CSV is well formed");
    validate->add_option("report", config.report_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (cells != 0) config.cells = cells;
        config.threads = std::getenv("NETFLOW_THREADS") ? default_thread_count() : threads;
        if (!lambda_text.empty()) config.lambda = parse_complex(lambda_text);
        if (!mu_text.empty()) config.mu = parse_complex(mu_text);
        if (!times_text.empty()) config.times = parse_real_list(times_text);
        if (!lambdas_text.empty()) config.lambdas = parse_complex_list(lambdas_text);
    } catch (const Error& e) {
        err << "error [" << e.module() << "]: " << e.what() << '\n';
        return 1;
    }

    if (!validate_path.empty()) {
        config.command = "validate-report";
        config.report_path = validate_path;
    } else if (!app.get_subcommands().empty()) {
        config.command = app.get_subcommands().front()->get_name();
    } else {
        out << app.help();
        return 2;
    }
    return run(config, out, err);
}

} // namespace netflow::cli
