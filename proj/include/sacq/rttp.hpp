#pragma once
// Radiation-therapy planning layer: synthetic 2D phantoms with a parallel
// beamlet dose model, random feasible test instances, dose-volume
// histograms and plan evaluation.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sacq/problem.hpp"

namespace sacq::rttp {

/// A disk (or annulus when inner_radius > 0) in grid coordinates. Voxels
/// belong to the first listed structure that contains their centre.
struct StructureSpec {
    std::string name;
    Sense sense = Sense::UpperLE;  // UpperLE: avoidance structure, LowerGE: target
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
    double inner_radius = 0.0;
    std::optional<PvcParams> pvc;
};

struct PhantomConfig {
    std::size_t grid = 16;
    std::size_t angles = 4;
    std::size_t beamlets_per_angle = 2;
    double kernel_width = 1.5;     // Gaussian sigma, in voxels
    double tail_threshold = 1e-6;  // relative dose below which an entry is dropped
    std::vector<StructureSpec> structures;

    /// Centred target disk (alpha 0.2, beta 0.1) and an off-centre organ at
    /// risk (alpha 0.3, beta 0.1).
    static PhantomConfig standard(std::size_t grid = 16, std::size_t angles = 4, std::size_t beamlets_per_angle = 2);
    void check() const;
};

struct Beamlet {
    double angle = 0.0;   // direction of travel, radians
    double offset = 0.0;  // signed distance of the ray from the grid centre
};

struct Geometry {
    std::size_t grid = 0;
    std::vector<int> labels;  // grid*grid, row-major (y, x); -1 for unassigned voxels
    std::vector<std::vector<std::size_t>> structure_voxels;
    std::vector<Beamlet> beamlets;
    double kernel_width = 0.0;

    /// Perpendicular distance from the centre of voxel v to beamlet j's ray.
    double ray_distance(std::size_t voxel, std::size_t beamlet) const;
};

struct Phantom {
    std::vector<BlockSpec> blocks;
    Geometry geometry;
    Vector witness;  // beamlet intensities that satisfy every translated constraint
};

/// Builds dose matrices for every structure and sets uniform bounds from a
/// seeded witness plan: target prescriptions and organ limits are placed
/// so that at most K voxels per PVC block miss the original bound and none
/// misses the relaxed bound. Throws InvalidArgument on an empty structure.
Phantom generate_phantom(const PhantomConfig& config, std::uint64_t seed);

struct BlockDims {
    std::string name;
    std::size_t rows = 0;
    Sense sense = Sense::UpperLE;
    std::optional<PvcParams> pvc;
    double density = 1.0;  // fraction of nonzero entries; 0 gives a zero block
};

struct InstanceDims {
    std::size_t n = 0;
    std::vector<BlockDims> blocks;
    bool tight = false;    // force exactly K original-bound violations per PVC block
    bool sparse = false;   // store maps as sparse triplets
};

struct Instance {
    std::vector<BlockSpec> blocks;
    Vector witness;
};

Instance generate_feasible_instance(const InstanceDims& dims, std::uint64_t seed);

/// Fraction of entries with dose >= tau for every threshold tau.
Vector compute_dvh(std::span<const double> dose, std::span<const double> thresholds);

/// `count` evenly spaced thresholds from 0 to max_dose inclusive.
Vector dvh_thresholds(double max_dose, std::size_t count);

struct BlockEval {
    std::string name;
    Sense sense = Sense::UpperLE;
    Vector dose;
    Vector dvh;
    std::size_t relaxed_violations = 0;
    std::size_t original_violations = 0;
    std::optional<std::size_t> budget;  // K when the block has a PVC
    bool pvc_satisfied = true;
};

struct PlanEval {
    std::vector<BlockEval> blocks;
    Vector thresholds;
    double proximity = 0.0;

    bool feasible() const;
};

/// Evaluates x against the untranslated blocks. `tol` is relative: a row is
/// violated when its excess exceeds tol * max(1, |bound|). Throws
/// InvalidArgument if an entry of x is below -tol. Zero rows are allowed
/// here; one with a violated bound makes the proximity infinite.
PlanEval evaluate_plan(std::span<const double> x, const std::vector<BlockSpec>& blocks, double tol = 1e-6,
                       std::size_t dvh_points = 51);

}  // namespace sacq::rttp
