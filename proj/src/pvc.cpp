#include "sacq/pvc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sacq {

PvcSet::PvcSet(Vector bounds, Sense sense, std::size_t max_violations)
    : bounds_(std::move(bounds)), sense_(sense), max_violations_(max_violations) {
    require_finite(bounds_, "pvc bounds");
    if (max_violations_ > bounds_.size())
        throw InvalidArgument("pvc: violation budget " + std::to_string(max_violations_) + " exceeds row count " +
                              std::to_string(bounds_.size()));
}

std::size_t violation_budget(double alpha, std::size_t m) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InvalidArgument("pvc: alpha must lie in [0, 1], got " + std::to_string(alpha));
    // 0.29 * 100 evaluates to 28.999999999999996.
    const double raw = alpha * static_cast<double>(m);
    const auto k = static_cast<std::size_t>(std::floor(raw + 1e-9 * std::max(1.0, raw)));
    return std::min(k, m);
}

PvcSet PvcSet::from_fraction(Vector bounds, Sense sense, double alpha) {
    const std::size_t k = violation_budget(alpha, bounds.size());
    return PvcSet(std::move(bounds), sense, k);
}

Vector translate_bounds(std::span<const double> bounds, double beta, Sense sense) {
    if (!(beta > 0.0 && beta < 1.0))
        throw InvalidArgument("pvc: beta must lie in (0, 1), got " + std::to_string(beta));
    const double factor = sense == Sense::UpperLE ? 1.0 + beta : 1.0 - beta;
    Vector out(bounds.size());
    std::transform(bounds.begin(), bounds.end(), out.begin(), [factor](double b) { return factor * b; });
    return out;
}

namespace {

inline double violation(double y, double bound, Sense sense) {
    return sense == Sense::UpperLE ? y - bound : bound - y;
}

// Indices of strict violations, ordered by magnitude descending, then index ascending.
std::vector<std::size_t> ranked_violations(std::span<const double> y, const PvcSet& set) {
    const auto& b = set.bounds();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (violation(y[i], b[i], set.sense()) > 0.0) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        const double vi = violation(y[i], b[i], set.sense());
        const double vj = violation(y[j], b[j], set.sense());
        if (vi != vj) return vi > vj;
        return i < j;
    });
    return idx;
}

}  // namespace

ViolationReport count_violations(std::span<const double> y, const PvcSet& set) {
    require_same_size(y.size(), set.size(), "pvc point");
    ViolationReport r;
    const auto& b = set.bounds();
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double v = violation(y[i], b[i], set.sense());
        if (v > 0.0) {
            r.indices.push_back(i);
            r.magnitudes.push_back(v);
        }
    }
    r.count = r.indices.size();
    return r;
}

bool is_member(std::span<const double> y, const PvcSet& set) {
    require_same_size(y.size(), set.size(), "pvc point");
    const auto& b = set.bounds();
    std::size_t count = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (violation(y[i], b[i], set.sense()) > 0.0 && ++count > set.max_violations()) return false;
    return true;
}

void project_pvc_inplace(std::span<double> y, const PvcSet& set) {
    require_same_size(y.size(), set.size(), "pvc point");
    if (is_member(y, set)) return;
    const auto ranked = ranked_violations(y, set);
    const auto& b = set.bounds();
    for (std::size_t r = set.max_violations(); r < ranked.size(); ++r) y[ranked[r]] = b[ranked[r]];
}

Vector project_pvc(std::span<const double> y, const PvcSet& set) {
    Vector out(y.begin(), y.end());
    project_pvc_inplace(out, set);
    return out;
}

double pvc_dist_sq(std::span<const double> y, const PvcSet& set) {
    require_same_size(y.size(), set.size(), "pvc point");
    if (is_member(y, set)) return 0.0;
    const auto ranked = ranked_violations(y, set);
    double s = 0.0;
    for (std::size_t r = set.max_violations(); r < ranked.size(); ++r) {
        const double v = violation(y[ranked[r]], set.bounds()[ranked[r]], set.sense());
        s += v * v;
    }
    return s;
}

}  // namespace sacq
