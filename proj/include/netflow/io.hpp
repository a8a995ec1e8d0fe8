#ifndef NETFLOW_IO_HPP
#define NETFLOW_IO_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netflow/graph.hpp"
#include "netflow/grid_function.hpp"
#include "netflow/network_matrices.hpp"
#include "netflow/tk_harness.hpp"

namespace netflow {

/// Graph document with optional velocities, as read from a graph file.
struct GraphFile {
    DirectedGraph graph;
    std::optional<std::vector<double>> velocities;

    VelocityProfile velocity_profile() const;
};

/**
 * Parses {"vertices": V, "edges": [[t, h], ...], "velocities": [...]} with
 * 1-based vertex indices. Unknown keys, loops, parallel edges and bad
 * indices are rejected; syntax errors carry line and column.
 */
GraphFile parse_graph(const std::string& text);
GraphFile read_graph_file(const std::string& path);

/// Header `m N`, then m lines of N decimals. Lines starting with '#' are skipped.
GridFunction parse_function(const std::string& text);
GridFunction read_function_file(const std::string& path);
void write_function(std::ostream& os, const GridFunction& f, const std::vector<std::string>& header = {});
void write_function_file(const std::string& path, const GridFunction& f, const std::vector<std::string>& header = {});

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_decimal(double x);

/// Dense rows for up to `dense_limit` columns, otherwise 1-based "row col value" triplets.
void print_matrix(std::ostream& os, const std::string& name, const IntSparse& m, std::size_t dense_limit = 50);
void print_matrix(std::ostream& os, const std::string& name, const RealSparse& m, std::size_t dense_limit = 50);

/// CSV with '#'-prefixed header lines followed by `kind,n,param,probe,error`.
void write_report(std::ostream& os, const ConvergenceReport& report, const std::vector<std::string>& header = {});

struct ReportValidation {
    std::size_t rows = 0;
    std::size_t header_lines = 0;
    std::map<std::string, std::size_t> rows_per_kind;
};

/// Throws ParseError (with line/column) on anything a report writer would not emit.
ReportValidation validate_report(const std::string& text);

/// Two-column "n error" data for one (kind, probe), one block per param.
void write_gnuplot(std::ostream& os, const ConvergenceReport& report, ReportKind kind, const std::string& probe);

std::string read_text_file(const std::string& path);

} // namespace netflow

#endif
