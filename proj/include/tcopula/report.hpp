#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcopula/copulas.hpp"
#include "tcopula/estimators.hpp"

// CSV builders for the command-line tool. Every output starts with a block
// of '#' manifest lines, then a header row, then data rows. Numbers are
// written in shortest round-trip form, and nothing depends on the clock
// unless a timestamp is supplied explicitly.
namespace tcopula::report {

// How "gamma standard deviations" converts to a raw threshold.
enum class StdMode {
    Unit,      // threshold = gamma
    StudentT,  // threshold = gamma * sqrt(nu / (nu - 2))
};

std::string_view to_string(StdMode mode) noexcept;
StdMode parse_std_mode(std::string_view text);

// Standard deviation used to scale gamma; throws for StudentT with nu <= 2.
double threshold_std(StdMode mode, double nu);

// Self-describing header block written ahead of every CSV.
struct RunManifest {
    std::string command;
    std::optional<SimConfig> config;
    bool all_methods = false;  // the command runs every construction
    std::optional<StdMode> std_mode;
    double threshold_std = 1.0;
    std::optional<GridSpec> grid;
    std::string timestamp;  // empty = omitted
    std::vector<std::pair<std::string, std::string>> extra;

    void write(std::ostream& out) const;
};

std::string format_double(double x);

// Parses "lo:hi".
Interval parse_range(std::string_view text);
// Comma-separated list of reals.
std::vector<double> parse_real_list(std::string_view text);

struct RunOptions {
    SimConfig config;
    int gamma_max = 20;
    StdMode std_mode = StdMode::Unit;
    GridSpec grid;
    unsigned threads = 0;
    std::string timestamp;
};

// Rows (nu, exact_factor, asymptotic_factor). Domain errors become an
// "error" column entry and the table continues.
void write_reduction_table(std::ostream& out, const std::vector<double>& nus,
                           const std::string& timestamp = {});

// Rows gamma = 2..gamma_max, one run per method; undefined cells empty.
void write_tail_table(std::ostream& out, const RunOptions& options);
void write_tail_counts(std::ostream& out, const RunOptions& options);

// n_samples rows "u,v"; the manifest records count, means and correlation
// computed from the exact values written.
void write_samples(std::ostream& out, const RunOptions& options);

// Raw or copula-scale grid as a matrix: header "v_center\u_center,...",
// one row per V bin.
void write_density(std::ostream& out, const RunOptions& options);

// Rows (mu, tail_correlation) from the correlated-t tail law.
void write_tail_curve(std::ostream& out, double rho, double nu, const std::vector<double>& mus,
                      const std::string& timestamp = {});

// Pairs with U above gamma * std.
void write_tail_scatter(std::ostream& out, const RunOptions& options, double gamma);

// Writes through a temporary file in the same directory and renames it
// into place; on any exception the target is untouched and no temporary
// remains. An empty path or "-" writes to stdout.
void write_file_atomically(const std::string& path, const std::function<void(std::ostream&)>& body);

}  // namespace tcopula::report
