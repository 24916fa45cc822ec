#pragma once
// The iterative driver: x^{k+1} = Gamma_{Theta_k, w_k}(x^k) with block
// operators R_i = U_i V_i built from a translated problem.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sacq/problem.hpp"
#include "sacq/string_averaging.hpp"

namespace sacq {

/// Relaxation and step parameters in effect for one iteration.
struct BlockParams {
    std::vector<double> lambda;          // per block, relaxes that block's half-space projections
    std::vector<double> gamma;           // per block; meaningful for PVC blocks only
    std::vector<std::size_t> stacked;    // per block; copies of P_Q inside T

    bool operator==(const BlockParams&) const = default;
};

struct AdaptiveRule {
    bool enabled = false;
    double factor = 0.9;           // lambda <- max(floor, factor * lambda)
    double lambda_floor = 0.1;
    std::size_t stacked_max = 1;   // N_q grows by one per trigger up to this value
};

struct SolverConfig {
    Strategy strategy = Strategy::sequential();
    std::optional<double> delta;        // default 1/(2p)
    std::optional<std::size_t> q_bar;   // default max(p, longest custom string)
    double gamma_scale = kDefaultGammaScale;
    double lambda = 1.0;                // initial lambda for every block, in (0, 2)
    std::size_t stacked = 1;            // initial N_q
    AdaptiveRule adaptive;
    double tol = 1e-6;
    std::size_t max_iter = 10000;
    std::size_t stall_window = 50;
    double stall_eps = 1e-10;
    std::optional<Vector> x0;           // default: zero vector
    unsigned threads = 1;
    double count_tol = 1e-6;            // relative tolerance for violation counts and the Solved test

    /// Throws InvalidArgument on any out-of-range field.
    void check() const;
};

struct TraceRecord {
    std::size_t k = 0;
    double proximity = 0.0;
    std::vector<BlockCounts> counts;
    BlockParams params;
};

struct SolverState {
    Vector iterate;
    std::size_t iteration = 0;
    std::vector<TraceRecord> trace;
};

enum class SolveStatus { Solved, MaxIters, Stalled, NonFinite };

const char* to_string(SolveStatus s);

struct SolveResult {
    Vector solution;
    SolverState state;
    SolveStatus status = SolveStatus::MaxIters;
    double initial_proximity = 0.0;
    double final_proximity = 0.0;
    std::size_t operator_count = 0;
};

/// Number of block operators R_i for the problem: max(#domain operators, #Landweber operators).
std::size_t operator_count(const SplitProblem& problem);

BlockParams initial_params(const SplitProblem& problem, const SolverConfig& config);

/// R_0..R_{p-1}. Domain operators are the relaxed half-space projections in
/// row order followed by the orthant projector; Landweber operators follow
/// PVC block order. The shorter list is padded with identities.
std::vector<OperatorPtr> build_block_operators(const SplitProblem& problem, const BlockParams& params);

/// Adjusts parameters after an iteration: a PVC block whose excess original
/// violations (count - K) exceed its relaxed-bound violations gets a smaller
/// lambda and, if allowed, one more stacked projection. Returns true if
/// anything changed.
bool adaptive_update(const std::vector<BlockCounts>& counts, const SplitProblem& problem, const AdaptiveRule& rule,
                     BlockParams& params);

/// True when x >= -tol, no row is outside its relaxed bound and every PVC
/// block has at most K rows outside the original bound.
bool counts_feasible(std::span<const double> x, const std::vector<BlockCounts>& counts, const SplitProblem& problem,
                     double tol);

/// Called with (k, x^k) after every accepted iterate, k >= 1.
using IterateObserver = std::function<void(std::size_t, std::span<const double>)>;

/// Solved requires proximity <= tol and counts_feasible at count_tol.
SolveResult solve(const SplitProblem& problem, const SolverConfig& config, const IterateObserver& observer = {});

}  // namespace sacq
