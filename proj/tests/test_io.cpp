#include "doctest.h"

#include <sstream>

#include "helpers.hpp"
#include "netflow/errors.hpp"
#include "netflow/io.hpp"

using namespace netflow;

TEST_SUITE("io") {

TEST_CASE("graph documents use 1-based vertices") {
    const auto file = parse_graph(R"({"vertices": 4, "edges": [[1,2],[2,3],[3,4],[4,1],[2,4]]})");
    CHECK(file.graph == example_g1());
    CHECK_FALSE(file.velocities.has_value());
    CHECK(file.velocity_profile().all_unit());
}

TEST_CASE("velocities are optional and validated") {
    const auto file = parse_graph(R"({"vertices": 2, "edges": [[1,2],[2,1]], "velocities": [1, 2.5]})");
    REQUIRE(file.velocities.has_value());
    CHECK(*file.velocities == std::vector<double>{1.0, 2.5});
    CHECK_THROWS_AS(parse_graph(R"({"vertices": 2, "edges": [[1,2]], "velocities": [0]})"), InvalidVelocityError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": 2, "edges": [[1,2]], "velocities": [1, 2]})"), ParseError);
}

TEST_CASE("unknown keys are rejected with their position") {
    try {
        parse_graph("{\"vertices\": 2,\n  \"edges\": [[1,2]],\n  \"weights\": [1]}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 3);
        CHECK(std::string(e.what()).find("unknown key \"weights\"") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parse_graph("{\"vertices\": 2,\n \"edges\": [[1,2]\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.module() == "io");
    }
}

TEST_CASE("graph documents must describe simple graphs") {
    CHECK_THROWS_AS(parse_graph(R"({"vertices": 2, "edges": [[1,1]]})"), UnsupportedInputError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": 2, "edges": [[1,2],[1,2]]})"), UnsupportedInputError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": 2, "edges": [[0,1]]})"), ParseError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": 2, "edges": [[1,3]]})"), ParseError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": 2, "edges": [[1,2,3]]})"), ParseError);
    CHECK_THROWS_AS(parse_graph(R"({"edges": []})"), ParseError);
    CHECK_THROWS_AS(parse_graph(R"([1, 2])"), ParseError);
}

TEST_CASE("function files round-trip bit for bit") {
    const auto f = random_piecewise(3, 7, 7, 12);
    std::ostringstream os;
    write_function(os, f, {"comment"});
    const auto g = parse_function(os.str());
    CHECK(g == f);
    CHECK(os.str().rfind("# comment\n3 7\n", 0) == 0);
}

TEST_CASE("function parse errors point at the token") {
    try {
        parse_function("2 3\n1 2 3\n4 x 6\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(parse_function("2 3\n1 2 3\n"), ParseError);
    CHECK_THROWS_AS(parse_function("1 3\n1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_function("1 0\n\n"), ParseError);
    CHECK_THROWS_AS(parse_function("1 2\n1 2\n3 4\n"), ParseError);
    CHECK_THROWS_AS(parse_function(""), ParseError);
    CHECK(parse_function("# hdr\n1 2\n  -1.5e0   +2\n") == GridFunction(1, 2, {-1.5, 2.0}));
}

TEST_CASE("decimals use 17 significant digits") {
    CHECK(format_decimal(0.1) == "0.10000000000000001");
    CHECK(format_decimal(2.0) == "2");
    CHECK(format_decimal(1e-20) == "9.9999999999999995e-21");
}

TEST_CASE("dense matrix printing") {
    std::ostringstream os;
    print_matrix(os, "line_adjacency", network_matrices(example_g1()).line_adjacency);
    CHECK(os.str() ==
          "line_adjacency (5 x 5)\n"
          "0 0 0 1 0\n"
          "1 0 0 0 0\n"
          "0 1 0 0 0\n"
          "0 0 1 0 1\n"
          "1 0 0 0 0\n");
}

TEST_CASE("large matrices print as 1-based triplets") {
    const auto g = ladder_sequence(13).graph(12);
    REQUIRE(g.edge_count() == 53);
    std::ostringstream os;
    print_matrix(os, "line_adjacency", network_matrices(g).line_adjacency);
    std::istringstream in(os.str());
    std::string title;
    std::getline(in, title);
    CHECK(title == "line_adjacency (53 x 53)");
    std::string first;
    std::getline(in, first);
    CHECK(first == "1 4 1");
}

TEST_CASE("reports round-trip through the validator") {
    ConvergenceReport report;
    report.rows = {{ReportKind::Resolvent, 1, "1+2i", "p", 0.25},
                   {ReportKind::Resolvent, 2, "2", "p", 0.0},
                   {ReportKind::Semigroup, 1, "0.5", "q", 1e-300}};
    report.metadata["cells"] = "16";
    std::ostringstream os;
    write_report(os, report, {"netflow test"});
    const auto v = validate_report(os.str());
    CHECK(v.rows == 3);
    CHECK(v.header_lines == 2);
    CHECK(v.rows_per_kind.at("resolvent") == 2);
    CHECK(v.rows_per_kind.at("semigroup") == 1);
}

TEST_CASE("report validation reports the offending field") {
    const std::string head = "kind,n,param,probe,error\n";
    auto fails_at = [&](const std::string& body, std::size_t line, std::size_t column) {
        try {
            validate_report(head + body);
            return false;
        } catch (const ParseError& e) {
            return e.line() == line && e.column() == column;
        }
    };
    CHECK(fails_at("flow,1,2,p,0\n", 2, 1));
    CHECK(fails_at("resolvent,0,2,p,0\n", 2, 11));
    CHECK(fails_at("semigroup,1,-1,p,0\n", 2, 13));
    CHECK(fails_at("resolvent,1,-1+2i,p,0\n", 2, 13));
    CHECK(fails_at("resolvent,1,2,,0\n", 2, 15));
    CHECK(fails_at("resolvent,1,2,p,-1\n", 2, 17));
    CHECK(fails_at("resolvent,1,2,p\n", 2, 1));
    CHECK_THROWS_AS(validate_report("# only a header\n"), ParseError);
}

TEST_CASE("gnuplot blocks are ordered by n") {
    ConvergenceReport report;
    report.rows = {{ReportKind::Semigroup, 2, "1", "p", 0.5},
                   {ReportKind::Semigroup, 1, "1", "p", 1.0},
                   {ReportKind::Semigroup, 1, "2", "p", 3.0},
                   {ReportKind::Resolvent, 1, "2", "p", 9.0}};
    std::ostringstream os;
    write_gnuplot(os, report, ReportKind::Semigroup, "p");
    CHECK(os.str() ==
          "# semigroup errors for probe p; columns: n error\n"
          "# t = 1\n1 1\n2 0.5\n\n\n"
          "# t = 2\n1 3\n");
}

}
