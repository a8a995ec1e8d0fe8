#ifndef NETFLOW_CLI_HPP
#define NETFLOW_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netflow/resolvent.hpp"

namespace netflow::cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string command;
    std::string graph_path;
    std::string initial_path;
    std::string report_path;  // validate-report input
    std::string out_path;

    std::optional<std::size_t> cells;  // unset: 256, or the function file's own resolution
    double t = 0.0;
    bool upwind = false;
    double cfl = 1.0;
    Complex lambda{1.0, 0.0};
    Complex mu{2.0, 0.0};
    std::size_t trials = 5;

    std::string family = "ladder";
    std::size_t n_max = 5;
    std::size_t reference = 8;
    std::vector<double> times;     // empty: default t-grid
    std::vector<Complex> lambdas;  // empty: default lambda set
    bool gnuplot = false;

    std::uint64_t seed = 20240601;
    std::size_t threads = 1;
};

/// Executes one configured command. Returns the process exit status and
/// reports every failure on `err` with the module that raised it.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the command line (CLI11) and runs it.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

/// "2", "1,2" or "1+2i" / "1-2i".
Complex parse_complex(const std::string& text);
/// Comma-separated list of reals.
std::vector<double> parse_real_list(const std::string& text);
/// Comma-separated list of reals or "a+bi" terms.
std::vector<Complex> parse_complex_list(const std::string& text);

/// Deterministic echo of the configuration for output headers.
std::vector<std::string> header_lines(const RunConfig& config);

} // namespace netflow::cli

#endif
