#pragma once
// Fixed-point operators on R^n: metric projections, relaxations, and the
// composite operator trees that the string-averaging engine evaluates.

#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sacq/core.hpp"

namespace sacq {

class PvcSet;
class LandweberOp;

/// Residual at or below this value counts as "already in the set".
inline constexpr double kFeasibilityShortCircuit = 1e-12;

/// {x : <a, x> <= b} or {x : <a, x> >= c}.
class HalfSpace {
public:
    /// Throws InvalidArgument on a zero or non-finite normal, or a non-finite bound.
    HalfSpace(Vector normal, double bound, Sense sense);

    const Vector& normal() const { return normal_; }
    double bound() const { return bound_; }
    Sense sense() const { return sense_; }
    double normal_sq() const { return normal_sq_; }
    std::size_t dim() const { return normal_.size(); }

    /// Amount by which x violates the inequality; <= 0 when x is inside.
    double excess(std::span<const double> x) const;

private:
    Vector normal_;
    double bound_;
    Sense sense_;
    double normal_sq_;
};

class RelaxationParam {
public:
    /// Throws InvalidArgument unless 0 <= lambda <= 2.
    explicit RelaxationParam(double lambda);
    double value() const { return lambda_; }

private:
    double lambda_;
};

Vector project_halfspace(const HalfSpace& hs, std::span<const double> x);
void project_halfspace_inplace(const HalfSpace& hs, std::span<double> x);
/// Squared distance from x to the half-space.
double halfspace_dist_sq(const HalfSpace& hs, std::span<const double> x);

Vector project_orthant(std::span<const double> x);

class Operator;
using OperatorPtr = std::shared_ptr<const Operator>;

/// Immutable operator tree node. Build with the factory functions below;
/// evaluation is pure and may run concurrently on distinct inputs.
class Operator {
public:
    struct Identity {};
    struct HalfSpaceProjector {
        HalfSpace set;
    };
    struct OrthantProjector {};
    struct PvcProjector {
        std::shared_ptr<const PvcSet> set;
    };
    struct Relaxation {
        OperatorPtr base;
        double lambda;
    };
    // Applied right to left: the last child acts first.
    struct Composition {
        std::vector<OperatorPtr> children;
    };
    struct ConvexCombination {
        std::vector<OperatorPtr> children;
        std::vector<double> weights;
    };
    struct Landweber {
        std::shared_ptr<const LandweberOp> op;
    };

    using Node = std::variant<Identity, HalfSpaceProjector, OrthantProjector, PvcProjector, Relaxation,
                              Composition, ConvexCombination, Landweber>;

    explicit Operator(Node node);

    const Node& node() const { return node_; }

    /// Domain dimension when the node fixes one; Identity and the orthant
    /// projector accept any length.
    std::optional<std::size_t> dim() const { return dim_; }

    Vector apply(std::span<const double> x) const;
    void apply_inplace(Vector& x) const;

private:
    Node node_;
    std::optional<std::size_t> dim_;
};

OperatorPtr make_identity();
OperatorPtr make_halfspace_projector(HalfSpace hs);
OperatorPtr make_orthant_projector();
OperatorPtr make_pvc_projector(std::shared_ptr<const PvcSet> set);
OperatorPtr make_relaxation(OperatorPtr base, RelaxationParam lambda);
/// `children` listed outermost first: make_composition({A, B})(x) == A(B(x)).
OperatorPtr make_composition(std::vector<OperatorPtr> children);
/// Weights must be positive and sum to 1 within 1e-12.
OperatorPtr make_convex_combination(std::vector<OperatorPtr> children, std::vector<double> weights);
OperatorPtr make_landweber(std::shared_ptr<const LandweberOp> op);

Vector apply(const Operator& op, std::span<const double> x);

/// (1 - lambda) x + lambda op(x).
Vector relax(const Operator& op, RelaxationParam lambda, std::span<const double> x);

/// <op(x) - x, op(x) - w>. Non-positive at every fixed point w certifies the
/// cutter inequality at x.
double cutter_residual(const Operator& op, std::span<const double> x, std::span<const double> w);

}  // namespace sacq
