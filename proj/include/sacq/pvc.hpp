#pragma once
// Percentage-violation constraints: sets of the form
//   {y : ||(y - b)_+||_0 <= K}   (upper)   or   {y : ||(c - y)_+||_0 <= K}   (lower)
// together with bound relaxation, violation counting and the exact
// (non-convex) Euclidean projection.

#include <cstddef>
#include <span>
#include <vector>

#include "sacq/core.hpp"

namespace sacq {

class PvcSet {
public:
    /// Throws InvalidArgument if max_violations > bounds.size() or a bound is not finite.
    PvcSet(Vector bounds, Sense sense, std::size_t max_violations);

    /// K = floor(alpha * m) for alpha in [0, 1].
    static PvcSet from_fraction(Vector bounds, Sense sense, double alpha);

    const Vector& bounds() const { return bounds_; }
    Sense sense() const { return sense_; }
    std::size_t max_violations() const { return max_violations_; }
    std::size_t size() const { return bounds_.size(); }

private:
    Vector bounds_;
    Sense sense_;
    std::size_t max_violations_;
};

/// floor(alpha * m), robust to alpha * m landing a few ulps under an integer.
std::size_t violation_budget(double alpha, std::size_t m);

struct ViolationReport {
    std::size_t count = 0;
    std::vector<std::size_t> indices;
    Vector magnitudes;
};

/// (1 + beta) b for upper bounds, (1 - beta) c for lower bounds; 0 < beta < 1.
Vector translate_bounds(std::span<const double> bounds, double beta, Sense sense);

/// Strict violations: y_i > b_i (upper) or y_i < c_i (lower).
ViolationReport count_violations(std::span<const double> y, const PvcSet& set);

bool is_member(std::span<const double> y, const PvcSet& set);

/// Nearest point of y in the set. Keeps the K largest violations, clips the
/// rest to their bounds; equal magnitudes keep the lower index.
Vector project_pvc(std::span<const double> y, const PvcSet& set);
void project_pvc_inplace(std::span<double> y, const PvcSet& set);

/// Squared distance from y to the set (the cost of the clipped violations).
double pvc_dist_sq(std::span<const double> y, const PvcSet& set);

}  // namespace sacq
