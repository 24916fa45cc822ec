#pragma once
// Landweber-type operators V = I - gamma A^T (I - T) A, which pull a
// range-space operator T back to the domain through A.

#include <cstddef>
#include <memory>
#include <span>

#include "sacq/core.hpp"
#include "sacq/linear_map.hpp"
#include "sacq/operators.hpp"

namespace sacq {

struct NormEstimate {
    /// Rayleigh quotient plus the eigen-residual (at least a 1 + 10 tol
    /// inflation), capped by ||A||_1 ||A||_inf. Meant as an upper bound on ||A||^2.
    double value = 0.0;
    /// Last Rayleigh quotient, before inflation.
    double rayleigh = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Power iteration on A^T A from a start vector seeded by the map's
/// dimensions. Stops when successive Rayleigh quotients agree to `tol`
/// relatively. Throws InvalidArgument for tol <= 0 or a zero map.
NormEstimate spectral_norm_sq(const LinearMap& map, double tol = 1e-12, std::size_t max_iter = 10000);

inline constexpr double kDefaultGammaScale = 0.95;

class LandweberOp {
public:
    /// Requires 0 < gamma < 1 / norm_sq_upper and target acting on R^rows.
    LandweberOp(std::shared_ptr<const LinearMap> map, OperatorPtr target, double gamma, double norm_sq_upper);

    /// Estimates ||A||^2 and uses gamma = gamma_scale / L, gamma_scale in (0, 1).
    static LandweberOp with_scale(std::shared_ptr<const LinearMap> map, OperatorPtr target,
                                  double gamma_scale = kDefaultGammaScale);

    const LinearMap& map() const { return *map_; }
    const std::shared_ptr<const LinearMap>& map_ptr() const { return map_; }
    const OperatorPtr& target() const { return target_; }
    double gamma() const { return gamma_; }
    double norm_sq_upper() const { return norm_sq_upper_; }

    void apply_inplace(Vector& x) const;

private:
    std::shared_ptr<const LinearMap> map_;
    OperatorPtr target_;
    double gamma_;
    double norm_sq_upper_;
};

/// x - gamma A^T (A x - T(A x)).
Vector apply_landweber(const LandweberOp& op, std::span<const double> x);

/// R = U V: V applied first.
OperatorPtr make_block_operator(OperatorPtr u, OperatorPtr v);

/// ||op(x) - x||.
double fixed_point_residual(const Operator& op, std::span<const double> x);

/// P_Q composed with itself `count` times.
OperatorPtr make_stacked(OperatorPtr projector, std::size_t count);

}  // namespace sacq
