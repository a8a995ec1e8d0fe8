#include "netflow/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "netflow/errors.hpp"

namespace netflow {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

[[noreturn]] void fail_at_key(const std::string& text, const std::string& key, const std::string& message) {
    const auto pos = text.find("\"" + key + "\"");
    if (pos == std::string::npos) throw ParseError(message, 0, 0);
    const auto [line, column] = line_column(text, pos);
    throw ParseError(message, line, column);
}

std::size_t positive_index(const json& value, const std::string& what) {
    if (!value.is_number_integer()) throw ParseError(what + " must be an integer", 0, 0);
    const auto v = value.get<long long>();
    if (v < 1) throw ParseError(what + " must be >= 1 (indices are 1-based), got " + std::to_string(v), 0, 0);
    return static_cast<std::size_t>(v);
}

bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

// Splits a line into whitespace-separated tokens with their 1-based columns.
std::vector<std::pair<std::string_view, std::size_t>> tokens(std::string_view line) {
    std::vector<std::pair<std::string_view, std::size_t>> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start), start + 1);
    }
    return out;
}

std::vector<std::string_view> split_lines(const std::string& text) {
    std::vector<std::string_view> lines;
    std::string_view rest(text);
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        auto line = rest.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        rest.remove_prefix(nl + 1);
    }
    return lines;
}

bool is_blank(std::string_view line) {
    for (char ch : line) {
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

template <class Matrix>
void print_sparse(std::ostream& os, const std::string& name, const Matrix& m, std::size_t dense_limit) {
    os << name << " (" << m.rows() << " x " << m.cols() << ")\n";
    auto text = [](auto v) {
        if constexpr (std::is_integral_v<decltype(v)>) {
            return std::to_string(v);
        } else {
            return format_real(v);
        }
    };
    if (static_cast<std::size_t>(m.cols()) <= dense_limit) {
        std::vector<std::vector<std::string>> cells(m.rows(), std::vector<std::string>(m.cols(), "0"));
        std::size_t width = 1;
        for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
            for (typename Matrix::InnerIterator it(m, r); it; ++it) {
                cells[it.row()][it.col()] = text(it.value());
                width = std::max(width, cells[it.row()][it.col()].size());
            }
        }
        for (const auto& row : cells) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) os << ' ';
                os << std::string(width - row[c].size(), ' ') << row[c];
            }
            os << '\n';
        }
    } else {
        for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
            for (typename Matrix::InnerIterator it(m, r); it; ++it) {
                if (it.value() == 0) continue;
                os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << text(it.value()) << '\n';
            }
        }
    }
}

} // namespace

VelocityProfile GraphFile::velocity_profile() const {
    if (velocities) return VelocityProfile(*velocities);
    return VelocityProfile::unit(graph.edge_count());
}

GraphFile parse_graph(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        const auto [line, column] = line_column(text, offset);
        std::string what = e.what();
        if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
        throw ParseError(what, line, column);
    }
    if (!doc.is_object()) throw ParseError("graph document must be an object", 1, 1);
    static const std::set<std::string> known{"vertices", "edges", "velocities"};
    for (const auto& item : doc.items()) {
        if (!known.count(item.key())) fail_at_key(text, item.key(), "unknown key \"" + item.key() + "\"");
    }
    if (!doc.contains("vertices")) throw ParseError("missing key \"vertices\"", 0, 0);
    if (!doc.contains("edges")) throw ParseError("missing key \"edges\"", 0, 0);

    const json& vertices = doc["vertices"];
    if (!vertices.is_number_integer() || vertices.get<long long>() < 0) {
        fail_at_key(text, "vertices", "\"vertices\" must be a nonnegative integer");
    }
    const auto vertex_count = static_cast<std::size_t>(vertices.get<long long>());

    const json& edges = doc["edges"];
    if (!edges.is_array()) fail_at_key(text, "edges", "\"edges\" must be an array");
    std::vector<Edge> list;
    for (std::size_t j = 0; j < edges.size(); ++j) {
        const std::string label = "edge " + std::to_string(j + 1);
        const json& e = edges[j];
        if (!e.is_array() || e.size() != 2) fail_at_key(text, "edges", label + " must be a pair [tail, head]");
        try {
            const std::size_t tail = positive_index(e[0], label + " tail");
            const std::size_t head = positive_index(e[1], label + " head");
            if (tail > vertex_count || head > vertex_count) {
                throw ParseError(label + " references a vertex beyond " + std::to_string(vertex_count), 0, 0);
            }
            list.push_back({tail - 1, head - 1});
        } catch (const ParseError& err) {
            fail_at_key(text, "edges", err.what());
        }
    }

    GraphFile out{DirectedGraph(vertex_count, std::move(list)), std::nullopt};
    const auto check = validate_graph(out.graph);
    if (!check.ok()) {
        std::string msg = "graph is not simple: " + check.violations.front().message;
        for (std::size_t i = 1; i < check.violations.size(); ++i) msg += "; " + check.violations[i].message;
        throw UnsupportedInputError("graph-core", msg);
    }

    if (doc.contains("velocities")) {
        const json& v = doc["velocities"];
        if (!v.is_array()) fail_at_key(text, "velocities", "\"velocities\" must be an array");
        if (v.size() != out.graph.edge_count()) {
            fail_at_key(text, "velocities", "\"velocities\" has " + std::to_string(v.size()) + " entries for " +
                                                std::to_string(out.graph.edge_count()) + " edges");
        }
        std::vector<double> c;
        for (const auto& x : v) {
            if (!x.is_number()) fail_at_key(text, "velocities", "velocities must be numbers");
            c.push_back(x.get<double>());
        }
        VelocityProfile check_profile(c);
        out.velocities = std::move(c);
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedInputError("io", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GraphFile read_graph_file(const std::string& path) { return parse_graph(read_text_file(path)); }

GridFunction parse_function(const std::string& text) {
    const auto lines = split_lines(text);
    std::size_t i = 0;
    auto skip = [&] {
        while (i < lines.size() && (is_blank(lines[i]) || lines[i].front() == '#')) ++i;
    };
    skip();
    if (i == lines.size()) throw ParseError("missing header line \"m N\"", 0, 0);
    const auto header = tokens(lines[i]);
    if (header.size() != 2) throw ParseError("header must be \"m N\"", i + 1, 1);
    std::size_t dims[2] = {0, 0};
    for (int d = 0; d < 2; ++d) {
        const auto tok = header[d].first;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), dims[d]);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
            throw ParseError("expected a nonnegative integer, got \"" + std::string(tok) + "\"", i + 1,
                             header[d].second);
        }
    }
    const std::size_t m = dims[0];
    const std::size_t n = dims[1];
    if (n == 0) throw ParseError("cell count must be positive", i + 1, header[1].second);
    ++i;
    std::vector<double> values;
    values.reserve(m * n);
    for (std::size_t j = 0; j < m; ++j) {
        skip();
        if (i == lines.size()) {
            throw ParseError("expected " + std::to_string(m) + " data lines, found " + std::to_string(j),
                             lines.size() + 1, 1);
        }
        const auto row = tokens(lines[i]);
        if (row.size() != n) {
            throw ParseError("expected " + std::to_string(n) + " values, found " + std::to_string(row.size()), i + 1,
                             1);
        }
        for (const auto& [tok, col] : row) {
            double v = 0.0;
            if (!parse_double(tok, v) || !std::isfinite(v)) {
                throw ParseError("not a finite decimal: \"" + std::string(tok) + "\"", i + 1, col);
            }
            values.push_back(v);
        }
        ++i;
    }
    skip();
    if (i != lines.size()) throw ParseError("unexpected trailing data", i + 1, 1);
    return GridFunction(m, n, std::move(values));
}

GridFunction read_function_file(const std::string& path) { return parse_function(read_text_file(path)); }

std::string format_decimal(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_function(std::ostream& os, const GridFunction& f, const std::vector<std::string>& header) {
    for (const auto& line : header) os << "# " << line << '\n';
    os << f.edge_count() << ' ' << f.cells() << '\n';
    for (std::size_t j = 0; j < f.edge_count(); ++j) {
        for (std::size_t k = 0; k < f.cells(); ++k) {
            if (k) os << ' ';
            os << format_decimal(f(j, k));
        }
        os << '\n';
    }
}

void write_function_file(const std::string& path, const GridFunction& f, const std::vector<std::string>& header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MalformedInputError("io", "cannot write " + path);
    write_function(out, f, header);
}

void print_matrix(std::ostream& os, const std::string& name, const IntSparse& m, std::size_t dense_limit) {
    print_sparse(os, name, m, dense_limit);
}

void print_matrix(std::ostream& os, const std::string& name, const RealSparse& m, std::size_t dense_limit) {
    print_sparse(os, name, m, dense_limit);
}

void write_report(std::ostream& os, const ConvergenceReport& report, const std::vector<std::string>& header) {
    for (const auto& line : header) os << "# " << line << '\n';
    for (const auto& [key, value] : report.metadata) os << "# " << key << ": " << value << '\n';
    os << "kind,n,param,probe,error\n";
    for (const auto& row : report.rows) {
        os << to_string(row.kind) << ',' << row.n << ',' << row.param << ',' << row.probe << ','
           << format_decimal(row.error) << '\n';
    }
}

ReportValidation validate_report(const std::string& text) {
    const auto lines = split_lines(text);
    ReportValidation out;
    std::size_t i = 0;
    while (i < lines.size() && !lines[i].empty() && lines[i].front() == '#') {
        ++i;
        ++out.header_lines;
    }
    if (i == lines.size() || lines[i] != "kind,n,param,probe,error") {
        throw ParseError("expected the column line \"kind,n,param,probe,error\"", i + 1, 1);
    }
    ++i;
    for (; i < lines.size(); ++i) {
        const auto line = lines[i];
        if (line.empty() && i + 1 == lines.size()) break;
        std::vector<std::pair<std::string_view, std::size_t>> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.emplace_back(line.substr(start, comma - start), start + 1);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 5) {
            throw ParseError("expected 5 fields, found " + std::to_string(fields.size()), i + 1, 1);
        }
        const auto [kind, kind_col] = fields[0];
        if (kind != "resolvent" && kind != "semigroup") {
            throw ParseError("kind must be resolvent or semigroup, got \"" + std::string(kind) + "\"", i + 1,
                             kind_col);
        }
        std::size_t n = 0;
        const auto [n_text, n_col] = fields[1];
        auto res = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
        if (res.ec != std::errc() || res.ptr != n_text.data() + n_text.size() || n == 0) {
            throw ParseError("n must be a positive integer", i + 1, n_col);
        }
        const auto [param, param_col] = fields[2];
        double p = 0.0;
        if (kind == "semigroup") {
            if (!parse_double(param, p) || !(p >= 0.0)) throw ParseError("t must be a real >= 0", i + 1, param_col);
        } else {
            // Real or re±im followed by i; the sign split is searched after the first character.
            std::string_view re = param;
            if (!param.empty() && param.back() == 'i') {
                const auto split = param.find_last_of("+-", param.size() - 2);
                if (split == std::string_view::npos || split == 0) {
                    throw ParseError("malformed complex parameter", i + 1, param_col);
                }
                double im = 0.0;
                if (!parse_double(param.substr(split, param.size() - 1 - split), im)) {
                    throw ParseError("malformed imaginary part", i + 1, param_col);
                }
                re = param.substr(0, split);
            }
            if (!parse_double(re, p) || !(p > 0.0)) {
                throw ParseError("lambda must have positive real part", i + 1, param_col);
            }
        }
        if (fields[3].first.empty()) throw ParseError("empty probe id", i + 1, fields[3].second);
        double err = 0.0;
        if (!parse_double(fields[4].first, err) || !std::isfinite(err) || err < 0.0) {
            throw ParseError("error must be a finite nonnegative decimal", i + 1, fields[4].second);
        }
        ++out.rows;
        ++out.rows_per_kind[std::string(kind)];
    }
    return out;
}

void write_gnuplot(std::ostream& os, const ConvergenceReport& report, ReportKind kind, const std::string& probe) {
    std::vector<std::string> params;
    for (const auto& row : report.rows) {
        if (row.kind == kind && row.probe == probe &&
            std::find(params.begin(), params.end(), row.param) == params.end()) {
            params.push_back(row.param);
        }
    }
    os << "# " << to_string(kind) << " errors for probe " << probe << "; columns: n error\n";
    for (std::size_t b = 0; b < params.size(); ++b) {
        if (b) os << "\n\n";
        os << "# " << (kind == ReportKind::Resolvent ? "lambda" : "t") << " = " << params[b] << '\n';
        std::vector<std::pair<std::size_t, double>> points;
        for (const auto& row : report.rows) {
            if (row.kind == kind && row.probe == probe && row.param == params[b]) points.emplace_back(row.n, row.error);
        }
        std::sort(points.begin(), points.end());
        for (const auto& [n, e] : points) os << n << ' ' << format_decimal(e) << '\n';
    }
}

} // namespace netflow
