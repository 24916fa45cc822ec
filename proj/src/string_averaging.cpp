#include "sacq/string_averaging.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "sacq/kernels.hpp"

namespace sacq {

StringPlan::StringPlan(std::vector<WeightedString> strings) : strings_(std::move(strings)) {
    std::stable_sort(strings_.begin(), strings_.end(),
                     [](const WeightedString& a, const WeightedString& b) { return a.string < b.string; });
}

PlanConstraints PlanConstraints::defaults(std::size_t p, std::size_t longest_custom) {
    if (p == 0) throw InvalidArgument("plan constraints: no operators");
    return {1.0 / (2.0 * static_cast<double>(p)), std::max(p, longest_custom)};
}

void PlanConstraints::check(std::size_t p) const {
    if (p == 0) throw InvalidArgument("plan constraints: no operators");
    if (!(delta > 0.0 && delta < 1.0 / static_cast<double>(p)))
        throw InvalidArgument("delta must lie in (0, 1/p) = (0, " + std::to_string(1.0 / static_cast<double>(p)) +
                              "), got " + std::to_string(delta));
    if (q_bar < p)
        throw InvalidArgument("q_bar must be at least p = " + std::to_string(p) + ", got " + std::to_string(q_bar));
}

const char* to_string(PlanError e) {
    switch (e) {
        case PlanError::None: return "ok";
        case PlanError::EmptyPlan: return "EmptyPlan";
        case PlanError::EmptyString: return "EmptyString";
        case PlanError::IndexOutOfRange: return "IndexOutOfRange";
        case PlanError::DuplicateString: return "DuplicateString";
        case PlanError::StringTooLong: return "StringTooLong";
        case PlanError::WeightBelowDelta: return "WeightBelowDelta";
        case PlanError::WeightSumViolation: return "WeightSumViolation";
        case PlanError::NotFit: return "NotFit";
    }
    return "unknown";
}

PlanCheck validate_plan(const StringPlan& plan, const PlanConstraints& constraints, std::size_t p) {
    auto fail = [](PlanError e, std::string msg) {
        PlanCheck c;
        c.error = e;
        c.message = std::move(msg);
        return c;
    };
    if (plan.size() == 0) return fail(PlanError::EmptyPlan, "plan has no strings");

    std::vector<bool> covered(p, false);
    double sum = 0.0;
    for (std::size_t s = 0; s < plan.size(); ++s) {
        const auto& ws = plan.strings()[s];
        const auto& idx = ws.string.indices;
        if (idx.empty()) return fail(PlanError::EmptyString, "string " + std::to_string(s) + " is empty");
        for (std::size_t i : idx) {
            if (i >= p)
                return fail(PlanError::IndexOutOfRange,
                            "string " + std::to_string(s) + " uses index " + std::to_string(i) + " >= p = " +
                                std::to_string(p));
            covered[i] = true;
        }
        if (s > 0 && plan.strings()[s - 1].string == ws.string)
            return fail(PlanError::DuplicateString, "string " + std::to_string(s) + " appears twice");
        if (idx.size() > constraints.q_bar)
            return fail(PlanError::StringTooLong, "string " + std::to_string(s) + " has length " +
                                                      std::to_string(idx.size()) + " > q_bar = " +
                                                      std::to_string(constraints.q_bar));
        if (!(ws.weight >= constraints.delta) || !std::isfinite(ws.weight))
            return fail(PlanError::WeightBelowDelta, "string " + std::to_string(s) + " has weight " +
                                                         std::to_string(ws.weight) + " < delta = " +
                                                         std::to_string(constraints.delta));
        sum += ws.weight;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        return fail(PlanError::WeightSumViolation, "weights sum to " + std::to_string(sum));

    PlanCheck c;
    for (std::size_t i = 0; i < p; ++i)
        if (!covered[i]) c.missing.push_back(i);
    if (!c.missing.empty()) {
        c.error = PlanError::NotFit;
        c.message = "indices not covered by any string:";
        for (std::size_t i : c.missing) c.message += " " + std::to_string(i);
    }
    return c;
}

Vector string_apply(const IndexVector& t, std::span<const OperatorPtr> ops, std::span<const double> x) {
    Vector z(x.begin(), x.end());
    for (std::size_t i : t.indices) {
        if (i >= ops.size())
            throw InvalidArgument("string index " + std::to_string(i) + " out of range for " +
                                  std::to_string(ops.size()) + " operators");
        ops[i]->apply_inplace(z);
    }
    return z;
}

Vector gamma_apply(const StringPlan& plan, std::span<const OperatorPtr> ops, std::span<const double> x,
                   unsigned threads) {
    const auto& strings = plan.strings();
    if (strings.empty()) throw InvalidArgument("gamma_apply: empty plan");
    if (strings.size() == 1 && strings.front().weight == 1.0) return string_apply(strings.front().string, ops, x);

    std::vector<Vector> ends(strings.size());
    const unsigned workers = std::min<unsigned>(std::max(threads, 1u), static_cast<unsigned>(strings.size()));
    if (workers <= 1) {
        for (std::size_t s = 0; s < strings.size(); ++s) ends[s] = string_apply(strings[s].string, ops, x);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t s = w; s < strings.size(); s += workers)
                            ends[s] = string_apply(strings[s].string, ops, x);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    Vector acc(x.size(), 0.0);
    for (std::size_t s = 0; s < strings.size(); ++s) kernels::axpy(strings[s].weight, ends[s], acc);
    return acc;
}

const char* to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::Sequential: return "sequential";
        case StrategyKind::Simultaneous: return "simultaneous";
        case StrategyKind::RandomDynamic: return "random-dynamic";
        case StrategyKind::Custom: return "custom";
    }
    return "unknown";
}

std::size_t longest_string(const Strategy& s) {
    std::size_t longest = 0;
    for (const auto& plan : s.schedule)
        for (const auto& ws : plan.strings()) longest = std::max(longest, ws.string.indices.size());
    return longest;
}

namespace {

StringPlan random_partition(std::uint64_t seed, std::size_t k, std::size_t p, const PlanConstraints& c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::mt19937_64 rng(seq);

    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);

    // Number of strings: uniform weights 1/s must stay >= delta and every
    // string must fit in q_bar.
    const auto max_by_delta = static_cast<std::size_t>(std::floor(1.0 / c.delta));
    const std::size_t min_by_len = (p + c.q_bar - 1) / c.q_bar;
    const std::size_t hi = std::max<std::size_t>(1, std::min(p, max_by_delta));
    const std::size_t lo = std::min(std::max<std::size_t>(1, min_by_len), hi);
    const std::size_t s = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);

    // s-1 distinct cut points in 1..p-1. Every piece has length <= p <= q_bar.
    std::vector<std::size_t> cuts(p - 1);
    std::iota(cuts.begin(), cuts.end(), std::size_t{1});
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(s - 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(p);

    std::vector<WeightedString> strings;
    strings.reserve(s);
    const double w = 1.0 / static_cast<double>(s);
    std::size_t begin = 0;
    for (std::size_t end : cuts) {
        IndexVector t;
        t.indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(begin), perm.begin() + static_cast<std::ptrdiff_t>(end));
        strings.push_back({std::move(t), w});
        begin = end;
    }
    return StringPlan(std::move(strings));
}

}  // namespace

StringPlan next_plan(const Strategy& strategy, std::size_t k, std::size_t p, const PlanConstraints& constraints) {
    switch (strategy.kind) {
        case StrategyKind::Sequential: {
            IndexVector t;
            t.indices.resize(p);
            std::iota(t.indices.begin(), t.indices.end(), std::size_t{0});
            return StringPlan({{std::move(t), 1.0}});
        }
        case StrategyKind::Simultaneous: {
            std::vector<WeightedString> strings;
            strings.reserve(p);
            const double w = 1.0 / static_cast<double>(p);
            for (std::size_t i = 0; i < p; ++i) strings.push_back({IndexVector{{i}}, w});
            return StringPlan(std::move(strings));
        }
        case StrategyKind::RandomDynamic:
            return random_partition(strategy.seed, k, p, constraints);
        case StrategyKind::Custom: {
            if (strategy.schedule.empty()) throw InvalidArgument("custom strategy: empty schedule");
            const auto& plan = strategy.schedule[k % strategy.schedule.size()];
            const PlanCheck check = validate_plan(plan, constraints, p);
            if (!check.ok())
                throw InvalidArgument("custom schedule entry " + std::to_string(k % strategy.schedule.size()) +
                                      ": " + to_string(check.error) + ": " + check.message);
            return plan;
        }
    }
    throw InvalidArgument("unknown strategy");
}

}  // namespace sacq
