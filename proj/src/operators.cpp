#include "sacq/operators.hpp"

#include <cmath>
#include <string>

#include "sacq/kernels.hpp"
#include "sacq/landweber.hpp"
#include "sacq/pvc.hpp"

namespace sacq {

const char* to_string(Sense s) { return s == Sense::UpperLE ? "upper" : "lower"; }

bool all_finite(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

void require_finite(std::span<const double> x, const char* what) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            throw InvalidArgument(std::string(what) + ": non-finite entry at index " + std::to_string(i));
}

HalfSpace::HalfSpace(Vector normal, double bound, Sense sense)
    : normal_(std::move(normal)), bound_(bound), sense_(sense) {
    require_finite(normal_, "half-space normal");
    if (!std::isfinite(bound_)) throw InvalidArgument("half-space bound is not finite");
    normal_sq_ = kernels::dot(normal_, normal_);
    if (!(normal_sq_ > 0.0)) throw InvalidArgument("half-space normal is zero");
}

double HalfSpace::excess(std::span<const double> x) const {
    require_same_size(x.size(), normal_.size(), "half-space point");
    const double ax = kernels::dot(normal_, x);
    return sense_ == Sense::UpperLE ? ax - bound_ : bound_ - ax;
}

RelaxationParam::RelaxationParam(double lambda) : lambda_(lambda) {
    if (!(lambda >= 0.0 && lambda <= 2.0))
        throw InvalidArgument("relaxation parameter must lie in [0, 2], got " + std::to_string(lambda));
}

void project_halfspace_inplace(const HalfSpace& hs, std::span<double> x) {
    const double e = hs.excess(x);
    if (e <= kFeasibilityShortCircuit) return;
    // Upper: x - (e/|a|^2) a. Lower: x + (e/|a|^2) a.
    const double step = e / hs.normal_sq();
    kernels::axpy(hs.sense() == Sense::UpperLE ? -step : step, hs.normal(), x);
}

Vector project_halfspace(const HalfSpace& hs, std::span<const double> x) {
    Vector out(x.begin(), x.end());
    project_halfspace_inplace(hs, out);
    return out;
}

double halfspace_dist_sq(const HalfSpace& hs, std::span<const double> x) {
    const double e = hs.excess(x);
    return e > 0.0 ? e * e / hs.normal_sq() : 0.0;
}

Vector project_orthant(std::span<const double> x) {
    Vector out(x.size());
    kernels::clamp_nonneg(x, out);
    return out;
}

namespace {

std::optional<std::size_t> merge_dims(const std::vector<OperatorPtr>& children, const char* what) {
    std::optional<std::size_t> d;
    for (const auto& c : children) {
        if (!c) throw InvalidArgument(std::string(what) + ": null child operator");
        const auto cd = c->dim();
        if (!cd) continue;
        if (d && *d != *cd)
            throw DimensionError(std::string(what) + ": children disagree on dimension (" + std::to_string(*d) +
                                 " vs " + std::to_string(*cd) + ")");
        d = cd;
    }
    return d;
}

struct DimOf {
    std::optional<std::size_t> operator()(const Operator::Identity&) const { return std::nullopt; }
    std::optional<std::size_t> operator()(const Operator::HalfSpaceProjector& n) const { return n.set.dim(); }
    std::optional<std::size_t> operator()(const Operator::OrthantProjector&) const { return std::nullopt; }
    std::optional<std::size_t> operator()(const Operator::PvcProjector& n) const { return n.set->size(); }
    std::optional<std::size_t> operator()(const Operator::Relaxation& n) const { return n.base->dim(); }
    std::optional<std::size_t> operator()(const Operator::Composition& n) const {
        return merge_dims(n.children, "composition");
    }
    std::optional<std::size_t> operator()(const Operator::ConvexCombination& n) const {
        return merge_dims(n.children, "convex combination");
    }
    std::optional<std::size_t> operator()(const Operator::Landweber& n) const { return n.op->map().cols(); }
};

struct ApplyInPlace {
    Vector& x;

    void operator()(const Operator::Identity&) const {}
    void operator()(const Operator::HalfSpaceProjector& n) const { project_halfspace_inplace(n.set, x); }
    void operator()(const Operator::OrthantProjector&) const { kernels::clamp_nonneg(x, x); }
    void operator()(const Operator::PvcProjector& n) const { project_pvc_inplace(x, *n.set); }
    void operator()(const Operator::Relaxation& n) const {
        if (n.lambda == 1.0) {
            n.base->apply_inplace(x);
            return;
        }
        Vector image = x;
        n.base->apply_inplace(image);
        kernels::blend(n.lambda, x, image, x);
    }
    void operator()(const Operator::Composition& n) const {
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) (*it)->apply_inplace(x);
    }
    void operator()(const Operator::ConvexCombination& n) const {
        Vector acc(x.size(), 0.0);
        Vector image;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            image = x;
            n.children[i]->apply_inplace(image);
            kernels::axpy(n.weights[i], image, acc);
        }
        x = std::move(acc);
    }
    void operator()(const Operator::Landweber& n) const { n.op->apply_inplace(x); }
};

}  // namespace

Operator::Operator(Node node) : node_(std::move(node)) { dim_ = std::visit(DimOf{}, node_); }

void Operator::apply_inplace(Vector& x) const {
    if (dim_) require_same_size(x.size(), *dim_, "operator input");
    std::visit(ApplyInPlace{x}, node_);
}

Vector Operator::apply(std::span<const double> x) const {
    Vector out(x.begin(), x.end());
    apply_inplace(out);
    return out;
}

OperatorPtr make_identity() { return std::make_shared<const Operator>(Operator::Identity{}); }

OperatorPtr make_halfspace_projector(HalfSpace hs) {
    return std::make_shared<const Operator>(Operator::HalfSpaceProjector{std::move(hs)});
}

OperatorPtr make_orthant_projector() { return std::make_shared<const Operator>(Operator::OrthantProjector{}); }

OperatorPtr make_pvc_projector(std::shared_ptr<const PvcSet> set) {
    if (!set) throw InvalidArgument("pvc projector: null set");
    return std::make_shared<const Operator>(Operator::PvcProjector{std::move(set)});
}

OperatorPtr make_relaxation(OperatorPtr base, RelaxationParam lambda) {
    if (!base) throw InvalidArgument("relaxation: null base operator");
    return std::make_shared<const Operator>(Operator::Relaxation{std::move(base), lambda.value()});
}

OperatorPtr make_composition(std::vector<OperatorPtr> children) {
    if (children.empty()) throw InvalidArgument("composition: empty operator list");
    return std::make_shared<const Operator>(Operator::Composition{std::move(children)});
}

OperatorPtr make_convex_combination(std::vector<OperatorPtr> children, std::vector<double> weights) {
    if (children.empty()) throw InvalidArgument("convex combination: empty operator list");
    if (children.size() != weights.size())
        throw InvalidArgument("convex combination: " + std::to_string(children.size()) + " operators but " +
                              std::to_string(weights.size()) + " weights");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("convex combination: weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw InvalidArgument("convex combination: weights sum to " + std::to_string(sum) + ", expected 1");
    return std::make_shared<const Operator>(Operator::ConvexCombination{std::move(children), std::move(weights)});
}

OperatorPtr make_landweber(std::shared_ptr<const LandweberOp> op) {
    if (!op) throw InvalidArgument("landweber: null operator");
    return std::make_shared<const Operator>(Operator::Landweber{std::move(op)});
}

Vector apply(const Operator& op, std::span<const double> x) { return op.apply(x); }

Vector relax(const Operator& op, RelaxationParam lambda, std::span<const double> x) {
    Vector image = op.apply(x);
    Vector out(x.size());
    kernels::blend(lambda.value(), x, image, out);
    return out;
}

double cutter_residual(const Operator& op, std::span<const double> x, std::span<const double> w) {
    require_same_size(w.size(), x.size(), "cutter reference point");
    const Vector tx = op.apply(x);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (tx[i] - x[i]) * (tx[i] - w[i]);
    return s;
}

}  // namespace sacq
