#pragma once
// Index vectors, string operators and their convex combination.
//
// Operator indices are zero-based throughout the library and the file
// formats: a problem with p block operators uses indices 0..p-1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sacq/core.hpp"
#include "sacq/operators.hpp"

namespace sacq {

/// One string t = (t_1, ..., t_q); the first listed operator acts first.
struct IndexVector {
    std::vector<std::size_t> indices;

    auto operator<=>(const IndexVector&) const = default;
};

struct WeightedString {
    IndexVector string;
    double weight = 0.0;

    bool operator==(const WeightedString&) const = default;
};

/// A family of strings with weights. Construction sorts the strings into
/// canonical (lexicographic) order; no other validation happens here.
class StringPlan {
public:
    StringPlan() = default;
    explicit StringPlan(std::vector<WeightedString> strings);

    const std::vector<WeightedString>& strings() const { return strings_; }
    std::size_t size() const { return strings_.size(); }
    bool operator==(const StringPlan&) const = default;

private:
    std::vector<WeightedString> strings_;
};

/// Delta in (0, 1/p) and q_bar >= p bound the admissible plans.
struct PlanConstraints {
    double delta = 0.0;
    std::size_t q_bar = 0;

    /// Delta = 1/(2p), q_bar = max(p, longest_custom).
    static PlanConstraints defaults(std::size_t p, std::size_t longest_custom = 0);
    /// Throws InvalidArgument when the pair is outside its range for p operators.
    void check(std::size_t p) const;
};

enum class PlanError {
    None,
    EmptyPlan,
    EmptyString,
    IndexOutOfRange,
    DuplicateString,
    StringTooLong,
    WeightBelowDelta,
    WeightSumViolation,
    NotFit,
};

const char* to_string(PlanError e);

struct PlanCheck {
    PlanError error = PlanError::None;
    std::vector<std::size_t> missing;  // uncovered indices when error == NotFit
    std::string message;

    bool ok() const { return error == PlanError::None; }
};

PlanCheck validate_plan(const StringPlan& plan, const PlanConstraints& constraints, std::size_t p);

/// R_{t_q} ... R_{t_1}(x).
Vector string_apply(const IndexVector& t, std::span<const OperatorPtr> ops, std::span<const double> x);

/// sum_t w(t) Z[t](x), summed in canonical string order. With threads > 1
/// string end-points are computed concurrently; the sum order is unchanged.
Vector gamma_apply(const StringPlan& plan, std::span<const OperatorPtr> ops, std::span<const double> x,
                   unsigned threads = 1);

enum class StrategyKind { Sequential, Simultaneous, RandomDynamic, Custom };

const char* to_string(StrategyKind k);

struct Strategy {
    StrategyKind kind = StrategyKind::Sequential;
    std::uint64_t seed = 0;
    /// Cycled by iteration index for Custom.
    std::vector<StringPlan> schedule;

    static Strategy sequential() { return {StrategyKind::Sequential, 0, {}}; }
    static Strategy simultaneous() { return {StrategyKind::Simultaneous, 0, {}}; }
    static Strategy random_dynamic(std::uint64_t seed) { return {StrategyKind::RandomDynamic, seed, {}}; }
    static Strategy custom(std::vector<StringPlan> schedule) {
        return {StrategyKind::Custom, 0, std::move(schedule)};
    }
};

/// Longest string appearing in a custom schedule, 0 for other strategies.
std::size_t longest_string(const Strategy& s);

/// The plan used at iteration k (zero-based). Throws InvalidArgument when a
/// custom plan fails validation.
StringPlan next_plan(const Strategy& strategy, std::size_t k, std::size_t p, const PlanConstraints& constraints);

}  // namespace sacq
