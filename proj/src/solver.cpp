#include "sacq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sacq {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Solved: return "Solved";
        case SolveStatus::MaxIters: return "MaxIters";
        case SolveStatus::Stalled: return "Stalled";
        case SolveStatus::NonFinite: return "NonFinite";
    }
    return "unknown";
}

void SolverConfig::check() const {
    if (delta && !(*delta > 0.0)) throw InvalidArgument("delta must be positive");
    if (!(gamma_scale > 0.0 && gamma_scale < 1.0))
        throw InvalidArgument("gamma_scale must lie in (0, 1), got " + std::to_string(gamma_scale));
    if (!(lambda > 0.0 && lambda < 2.0)) throw InvalidArgument("lambda must lie in (0, 2), got " + std::to_string(lambda));
    if (stacked == 0) throw InvalidArgument("stacked projection count must be at least 1");
    if (adaptive.enabled) {
        if (!(adaptive.factor > 0.0 && adaptive.factor < 1.0))
            throw InvalidArgument("adaptive factor must lie in (0, 1)");
        if (!(adaptive.lambda_floor > 0.0 && adaptive.lambda_floor <= lambda))
            throw InvalidArgument("adaptive lambda floor must lie in (0, lambda]");
        if (adaptive.stacked_max < stacked)
            throw InvalidArgument("adaptive stacked_max must be at least the initial stacked count");
    }
    if (!(tol >= 0.0) || !std::isfinite(tol)) throw InvalidArgument("tol must be a nonnegative number");
    if (max_iter == 0) throw InvalidArgument("max_iter must be positive");
    if (stall_window == 0) throw InvalidArgument("stall_window must be positive");
    if (!(stall_eps >= 0.0)) throw InvalidArgument("stall_eps must be nonnegative");
    if (!(count_tol >= 0.0)) throw InvalidArgument("count_tol must be nonnegative");
    if (threads == 0) throw InvalidArgument("threads must be at least 1");
    if (x0) require_finite(*x0, "x0");
}

std::size_t operator_count(const SplitProblem& problem) {
    return std::max(problem.halfspaces.size() + 1, problem.pvc_blocks.size());
}

BlockParams initial_params(const SplitProblem& problem, const SolverConfig& config) {
    const std::size_t nb = problem.blocks.size();
    BlockParams p;
    p.lambda.assign(nb, config.lambda);
    p.gamma.assign(nb, 0.0);
    p.stacked.assign(nb, 0);
    for (std::size_t bi : problem.pvc_blocks) {
        p.gamma[bi] = config.gamma_scale / problem.blocks[bi].norm_sq_upper;
        p.stacked[bi] = config.stacked;
    }
    return p;
}

bool counts_feasible(std::span<const double> x, const std::vector<BlockCounts>& counts, const SplitProblem& problem,
                     double tol) {
    for (double v : x)
        if (v < -tol) return false;
    for (std::size_t b = 0; b < counts.size(); ++b) {
        if (counts[b].relaxed_violations > 0) return false;
        if (problem.blocks[b].pvc_set && counts[b].original_violations > counts[b].budget) return false;
    }
    return true;
}

namespace {

std::vector<OperatorPtr> base_projectors(const SplitProblem& problem) {
    std::vector<OperatorPtr> out;
    out.reserve(problem.halfspaces.size());
    for (const auto& hs : problem.halfspaces) out.push_back(make_halfspace_projector(hs));
    return out;
}

std::vector<OperatorPtr> assemble(const SplitProblem& problem, const std::vector<OperatorPtr>& base,
                                  const BlockParams& params) {
    std::vector<OperatorPtr> domain;
    domain.reserve(base.size() + 1);
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double lambda = params.lambda[problem.row_block[i]];
        domain.push_back(lambda == 1.0 ? base[i] : make_relaxation(base[i], RelaxationParam(lambda)));
    }
    domain.push_back(make_orthant_projector());

    std::vector<OperatorPtr> range;
    range.reserve(problem.pvc_blocks.size());
    for (std::size_t bi : problem.pvc_blocks) {
        const auto& b = problem.blocks[bi];
        auto target = make_stacked(make_pvc_projector(b.pvc_set), params.stacked[bi]);
        auto v = std::make_shared<const LandweberOp>(b.map, std::move(target), params.gamma[bi], b.norm_sq_upper);
        range.push_back(make_landweber(std::move(v)));
    }

    const std::size_t p = std::max(domain.size(), range.size());
    std::vector<OperatorPtr> ops;
    ops.reserve(p);
    for (std::size_t i = 0; i < p; ++i) {
        if (i < range.size() && i < domain.size())
            ops.push_back(make_block_operator(domain[i], range[i]));
        else if (i < domain.size())
            ops.push_back(domain[i]);
        else
            ops.push_back(range[i]);
    }
    return ops;
}

}  // namespace

std::vector<OperatorPtr> build_block_operators(const SplitProblem& problem, const BlockParams& params) {
    return assemble(problem, base_projectors(problem), params);
}

bool adaptive_update(const std::vector<BlockCounts>& counts, const SplitProblem& problem, const AdaptiveRule& rule,
                     BlockParams& params) {
    if (!rule.enabled) return false;
    bool changed = false;
    for (std::size_t bi : problem.pvc_blocks) {
        const BlockCounts& c = counts.at(bi);
        const std::size_t excess = c.original_violations > c.budget ? c.original_violations - c.budget : 0;
        if (excess == 0 || excess <= c.relaxed_violations) continue;
        const double lowered = std::max(rule.lambda_floor, params.lambda[bi] * rule.factor);
        if (lowered != params.lambda[bi]) {
            params.lambda[bi] = lowered;
            changed = true;
        }
        if (params.stacked[bi] < rule.stacked_max) {
            ++params.stacked[bi];
            changed = true;
        }
    }
    return changed;
}

SolveResult solve(const SplitProblem& problem, const SolverConfig& config, const IterateObserver& observer) {
    config.check();
    const std::size_t p = operator_count(problem);
    const PlanConstraints constraints{config.delta.value_or(1.0 / (2.0 * static_cast<double>(p))),
                                      config.q_bar.value_or(std::max(p, longest_string(config.strategy)))};
    constraints.check(p);
    if (config.strategy.kind == StrategyKind::Custom) {
        if (config.strategy.schedule.empty()) throw InvalidArgument("custom strategy: empty schedule");
        for (std::size_t i = 0; i < config.strategy.schedule.size(); ++i) {
            const PlanCheck c = validate_plan(config.strategy.schedule[i], constraints, p);
            if (!c.ok())
                throw InvalidArgument("custom schedule entry " + std::to_string(i) + ": " + to_string(c.error) + ": " +
                                      c.message);
        }
    }

    SolveResult result;
    result.operator_count = p;
    Vector x = config.x0 ? *config.x0 : Vector(problem.n, 0.0);
    require_same_size(x.size(), problem.n, "x0");

    BlockParams params = initial_params(problem, config);
    const auto base = base_projectors(problem);
    auto ops = assemble(problem, base, params);

    double prox = proximity(x, problem);
    result.initial_proximity = prox;
    std::vector<double> history{prox};
    SolveStatus status = SolveStatus::MaxIters;
    SolverState& state = result.state;

    if (prox <= config.tol && counts_feasible(x, block_counts(x, problem, config.count_tol), problem, config.count_tol)) {
        status = SolveStatus::Solved;
    } else {
        for (std::size_t k = 0; k < config.max_iter; ++k) {
            const StringPlan plan = next_plan(config.strategy, k, p, constraints);
            Vector next = gamma_apply(plan, ops, x, config.threads);
            if (!all_finite(next)) {
                status = SolveStatus::NonFinite;
                break;
            }
            x = std::move(next);
            state.iteration = k + 1;
            if (observer) observer(k + 1, x);
            prox = proximity(x, problem);
            history.push_back(prox);

            TraceRecord rec;
            rec.k = k + 1;
            rec.proximity = prox;
            rec.counts = block_counts(x, problem, config.count_tol);
            rec.params = params;
            state.trace.push_back(std::move(rec));

            if (prox <= config.tol && counts_feasible(x, state.trace.back().counts, problem, config.count_tol)) {
                status = SolveStatus::Solved;
                break;
            }
            if (config.adaptive.enabled && adaptive_update(state.trace.back().counts, problem, config.adaptive, params))
                ops = assemble(problem, base, params);
            if (history.size() > config.stall_window) {
                const double old = history[history.size() - 1 - config.stall_window];
                if (old - prox <= config.stall_eps * old) {
                    status = SolveStatus::Stalled;
                    break;
                }
            }
        }
    }

    state.iterate = x;
    result.solution = x;
    result.status = status;
    result.final_proximity = prox;
    return result;
}

}  // namespace sacq
