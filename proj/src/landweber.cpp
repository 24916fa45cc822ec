#include "sacq/landweber.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sacq/kernels.hpp"

namespace sacq {

NormEstimate spectral_norm_sq(const LinearMap& map, double tol, std::size_t max_iter) {
    if (!(tol > 0.0)) throw InvalidArgument("spectral norm: tolerance must be positive");
    if (max_iter == 0) throw InvalidArgument("spectral norm: max_iter must be positive");
    if (map.nonzeros() == 0) throw InvalidArgument("spectral norm: zero map has no step bound");

    std::mt19937_64 rng(0x9E3779B97F4A7C15ULL * (map.rows() + 1) ^ (map.cols() * 0xBF58476D1CE4E5B9ULL));
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector v(map.cols());
    for (auto& e : v) e = unif(rng);
    double nv = std::sqrt(kernels::dot(v, v));
    for (auto& e : v) e /= nv;

    Vector w(map.rows());
    Vector z(map.cols());
    NormEstimate est;
    double prev = 0.0;
    double residual = 0.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        map.apply(v, w);
        map.apply_transpose(w, z);
        const double rho = kernels::dot(w, w);  // v^T A^T A v with |v| = 1
        est.rayleigh = std::max(est.rayleigh, rho);
        est.iterations = it;
        const double nz = std::sqrt(kernels::dot(z, z));
        if (nz == 0.0) {
            // Start vector in the null space; restart from a coordinate direction.
            std::fill(v.begin(), v.end(), 0.0);
            v[it % v.size()] = 1.0;
            continue;
        }
        if (rho >= est.rayleigh) residual = std::sqrt(std::max(0.0, nz * nz - rho * rho));  // |A^T A v - rho v|
        for (std::size_t j = 0; j < z.size(); ++j) v[j] = z[j] / nz;
        if (it > 1 && std::abs(rho - prev) < tol * rho) {
            est.converged = true;
            break;
        }
        prev = rho;
    }
    // ||A||_1 ||A||_inf always bounds ||A||^2
    std::vector<double> col_sum(map.cols(), 0.0), row_sum(map.rows(), 0.0);
    for (const auto& t : map.triplets()) {
        col_sum[t.col] += std::abs(t.value);
        row_sum[t.row] += std::abs(t.value);
    }
    const double hard = *std::max_element(col_sum.begin(), col_sum.end()) *
                        *std::max_element(row_sum.begin(), row_sum.end());
    est.value = std::min(hard, std::max(est.rayleigh * (1.0 + 10.0 * tol), est.rayleigh + residual));
    return est;
}

LandweberOp::LandweberOp(std::shared_ptr<const LinearMap> map, OperatorPtr target, double gamma,
                         double norm_sq_upper)
    : map_(std::move(map)), target_(std::move(target)), gamma_(gamma), norm_sq_upper_(norm_sq_upper) {
    if (!map_) throw InvalidArgument("landweber: null map");
    if (!target_) throw InvalidArgument("landweber: null target operator");
    if (target_->dim() && *target_->dim() != map_->rows())
        throw DimensionError("landweber: target acts on R^" + std::to_string(*target_->dim()) + " but map has " +
                             std::to_string(map_->rows()) + " rows");
    if (!(norm_sq_upper_ > 0.0) || !std::isfinite(norm_sq_upper_))
        throw InvalidArgument("landweber: norm bound must be positive");
    if (!(gamma_ > 0.0 && gamma_ < 1.0 / norm_sq_upper_))
        throw InvalidArgument("landweber: step " + std::to_string(gamma_) + " outside (0, 1/L) with L = " +
                              std::to_string(norm_sq_upper_));
}

LandweberOp LandweberOp::with_scale(std::shared_ptr<const LinearMap> map, OperatorPtr target, double gamma_scale) {
    if (!(gamma_scale > 0.0 && gamma_scale < 1.0))
        throw InvalidArgument("landweber: gamma scale must lie in (0, 1), got " + std::to_string(gamma_scale));
    if (!map) throw InvalidArgument("landweber: null map");
    const NormEstimate est = spectral_norm_sq(*map);
    return LandweberOp(std::move(map), std::move(target), gamma_scale / est.value, est.value);
}

void LandweberOp::apply_inplace(Vector& x) const {
    require_same_size(x.size(), map_->cols(), "landweber input");
    Vector ax = map_->apply(x);
    Vector tax = ax;
    target_->apply_inplace(tax);
    // ax <- A x - T(A x)
    kernels::axpy(-1.0, tax, ax);
    const Vector g = map_->apply_transpose(ax);
    kernels::axpy(-gamma_, g, x);
}

Vector apply_landweber(const LandweberOp& op, std::span<const double> x) {
    Vector out(x.begin(), x.end());
    op.apply_inplace(out);
    return out;
}

OperatorPtr make_block_operator(OperatorPtr u, OperatorPtr v) {
    if (!u || !v) throw InvalidArgument("block operator: null factor");
    if (u->dim() && v->dim() && *u->dim() != *v->dim())
        throw DimensionError("block operator: factors act on R^" + std::to_string(*u->dim()) + " and R^" +
                             std::to_string(*v->dim()));
    return make_composition({std::move(u), std::move(v)});
}

double fixed_point_residual(const Operator& op, std::span<const double> x) {
    const Vector tx = op.apply(x);
    return std::sqrt(kernels::sq_dist(tx, x));
}

OperatorPtr make_stacked(OperatorPtr projector, std::size_t count) {
    if (count == 0) throw InvalidArgument("stacked projection: count must be at least 1");
    if (count == 1) return projector;
    return make_composition(std::vector<OperatorPtr>(count, projector));
}

}  // namespace sacq
