#pragma once
// Block-structured linear feasibility problems with percentage-violation
// constraints, and their translation into the split problem solved by the
// string-averaging engine:
//
//   every row:      <a_i, x> <= (1 + beta) b_i   or   <a_i, x> >= (1 - beta) c_i
//   domain:         x >= 0
//   each PVC block: A x in {y : at most K = floor(alpha m) rows violate the original bounds}

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sacq/core.hpp"
#include "sacq/landweber.hpp"
#include "sacq/linear_map.hpp"
#include "sacq/operators.hpp"
#include "sacq/pvc.hpp"

namespace sacq {

struct PvcParams {
    double alpha = 0.0;  // fraction of rows allowed to violate, [0, 1]
    double beta = 0.0;   // relative bound relaxation, (0, 1)

    bool operator==(const PvcParams&) const = default;
};

/// One anatomical structure or constraint group. Upper-bound blocks are
/// avoidance structures, lower-bound blocks are targets.
struct BlockSpec {
    std::string name;
    std::shared_ptr<const LinearMap> map;
    Sense sense = Sense::UpperLE;
    Vector bounds;
    std::optional<PvcParams> pvc;

    std::size_t rows() const { return map ? map->rows() : 0; }
};

bool operator==(const BlockSpec& a, const BlockSpec& b);

struct TranslatedBlock {
    std::string name;
    std::shared_ptr<const LinearMap> map;
    Sense sense;
    Vector original_bounds;
    Vector relaxed_bounds;
    std::optional<PvcParams> pvc;
    std::shared_ptr<const PvcSet> pvc_set;  // over the original bounds; null without PVC
    double norm_sq_upper = 0.0;             // set for PVC blocks
    std::size_t first_row = 0;              // offset into SplitProblem::halfspaces
};

struct SplitProblem {
    std::size_t n = 0;
    std::vector<TranslatedBlock> blocks;
    std::vector<HalfSpace> halfspaces;
    std::vector<std::size_t> row_block;  // block index of each half-space
    std::vector<std::size_t> pvc_blocks; // blocks carrying a PVC, in block order
};

/// Throws InvalidArgument / DimensionError on inconsistent column counts,
/// bound lengths, zero rows, or PVC parameters out of range.
SplitProblem translate_problem(const std::vector<BlockSpec>& blocks);

/// Sum of squared distances of x to every half-space and to the orthant,
/// plus the squared distance of A_l x to each PVC set.
double proximity(std::span<const double> x, const SplitProblem& problem);

struct BlockCounts {
    std::size_t relaxed_violations = 0;   // rows outside their relaxed bound
    std::size_t original_violations = 0;  // rows outside their original bound
    std::size_t budget = 0;               // K for PVC blocks, 0 otherwise
};

/// Violation counts at x for every block. A row counts as violated when its
/// excess is above `tol * max(1, |bound|)`.
std::vector<BlockCounts> block_counts(std::span<const double> x, const SplitProblem& problem, double tol);

}  // namespace sacq
