#pragma once
// The four CLI commands, callable in-process. Each returns the process exit
// code and writes human-readable output to `out` and diagnostics to `err`.
//
//   generate  0 ok, 2 bad parameter, 3 I/O failure
//   solve     0 Solved, 1 MaxIters/Stalled/NonFinite, 2 invalid input, 3 I/O failure
//   check     0 feasible, 1 infeasible, 2 malformed input
//   report    0 ok, 2 malformed or empty trace, 3 I/O failure

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace sacq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNotSolved = 1;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitIo = 3;

/// Environment variable read by cmd_solve for the worker thread count.
inline constexpr const char* kThreadsEnv = "SACQ_THREADS";

struct GenerateOptions {
    std::string kind;  // "phantom" or "random-feasible"
    std::filesystem::path out;
    std::optional<std::filesystem::path> witness;
    std::uint64_t seed = 1;

    // phantom
    long long grid = 16;
    long long angles = 4;
    long long beamlets = 2;
    double kernel_width = 1.5;

    // random-feasible
    long long n = 20;
    long long rows = 30;
    long long blocks = 2;
    double alpha = 0.2;
    double beta = 0.1;
    bool pvc = true;
    double density = 1.0;
    bool sparse = false;
    bool tight = false;
};

struct SolveOptions {
    std::filesystem::path problem;
    std::optional<std::filesystem::path> config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;  // overrides the config's random-dynamic seed
    bool verbose = false;
};

struct CheckOptions {
    std::filesystem::path problem;
    std::filesystem::path solution;
    double tol = 1e-6;  // relative: excess > tol * max(1, |bound|) is a violation
};

struct ReportOptions {
    std::filesystem::path trace;
    std::filesystem::path out;
    std::optional<std::filesystem::path> problem;   // with solution: also write dvh.csv
    std::optional<std::filesystem::path> solution;
    long long dvh_points = 51;
};

int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err);
int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace sacq::cli
