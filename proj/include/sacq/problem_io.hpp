#pragma once
// On-disk formats. Problems, configs and solutions are versioned JSON
// documents (see docs/file_formats.md); iteration traces are CSV.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sacq/problem.hpp"
#include "sacq/solver.hpp"

namespace sacq::io {

inline constexpr int kFormatVersion = 1;

/// Dense rows above this many coefficients must be given as sparse triplets.
inline constexpr std::size_t kDenseCoefficientLimit = 1'000'000;

/// Malformed or inconsistent file content. The message locates the problem
/// by line/column for syntax errors and by field path otherwise.
class FormatError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

struct ProblemFile {
    std::size_t n = 0;
    std::vector<BlockSpec> blocks;
};

ProblemFile parse_problem(std::string_view text);
std::string format_problem(const ProblemFile& problem);

SolverConfig parse_config(std::string_view text);
std::string format_config(const SolverConfig& config);

Vector parse_solution(std::string_view text);
std::string format_solution(std::span<const double> x);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

std::string format_trace(const SplitProblem& problem, const std::vector<TraceRecord>& trace);

struct TraceTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Index of a column by name; throws FormatError if absent.
    std::size_t column(std::string_view name) const;
};

TraceTable parse_trace(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace sacq::io
