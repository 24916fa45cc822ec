#include "sacq/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sacq/kernels.hpp"

namespace sacq {

bool operator==(const BlockSpec& a, const BlockSpec& b) {
    const bool maps_equal = (a.map == b.map) || (a.map && b.map && *a.map == *b.map);
    return a.name == b.name && maps_equal && a.sense == b.sense && a.bounds == b.bounds && a.pvc == b.pvc;
}

SplitProblem translate_problem(const std::vector<BlockSpec>& blocks) {
    if (blocks.empty()) throw InvalidArgument("problem has no blocks");
    SplitProblem sp;
    sp.n = blocks.front().map ? blocks.front().map->cols() : 0;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const BlockSpec& b = blocks[bi];
        const std::string where = "block '" + b.name + "'";
        if (!b.map) throw InvalidArgument(where + ": missing matrix");
        if (b.map->cols() != sp.n)
            throw DimensionError(where + ": has " + std::to_string(b.map->cols()) + " columns, expected " +
                                 std::to_string(sp.n));
        require_same_size(b.bounds.size(), b.map->rows(), (where + " bounds").c_str());
        require_finite(b.bounds, (where + " bounds").c_str());

        TranslatedBlock tb;
        tb.name = b.name;
        tb.map = b.map;
        tb.sense = b.sense;
        tb.original_bounds = b.bounds;
        tb.pvc = b.pvc;
        tb.first_row = sp.halfspaces.size();
        if (b.pvc) {
            if (!(b.pvc->alpha >= 0.0 && b.pvc->alpha <= 1.0))
                throw InvalidArgument(where + ": alpha must lie in [0, 1]");
            tb.relaxed_bounds = translate_bounds(b.bounds, b.pvc->beta, b.sense);
            tb.pvc_set = std::make_shared<const PvcSet>(PvcSet::from_fraction(b.bounds, b.sense, b.pvc->alpha));
            tb.norm_sq_upper = spectral_norm_sq(*b.map).value;
            sp.pvc_blocks.push_back(bi);
        } else {
            tb.relaxed_bounds = b.bounds;
        }
        for (std::size_t i = 0; i < b.map->rows(); ++i) {
            Vector row = b.map->row(i);
            bool zero = true;
            for (double v : row) zero = zero && v == 0.0;
            if (zero) throw InvalidArgument(where + ": row " + std::to_string(i) + " is zero");
            sp.halfspaces.emplace_back(std::move(row), tb.relaxed_bounds[i], b.sense);
            sp.row_block.push_back(bi);
        }
        sp.blocks.push_back(std::move(tb));
    }
    return sp;
}

double proximity(std::span<const double> x, const SplitProblem& problem) {
    require_same_size(x.size(), problem.n, "proximity point");
    double total = 0.0;
    for (const auto& hs : problem.halfspaces) total += halfspace_dist_sq(hs, x);
    total += kernels::sq_neg_part(x);
    for (std::size_t bi : problem.pvc_blocks) {
        const auto& b = problem.blocks[bi];
        total += pvc_dist_sq(b.map->apply(x), *b.pvc_set);
    }
    return total;
}

std::vector<BlockCounts> block_counts(std::span<const double> x, const SplitProblem& problem, double tol) {
    require_same_size(x.size(), problem.n, "count point");
    std::vector<BlockCounts> out(problem.blocks.size());
    for (std::size_t bi = 0; bi < problem.blocks.size(); ++bi) {
        const auto& b = problem.blocks[bi];
        const Vector d = b.map->apply(x);
        BlockCounts& c = out[bi];
        c.budget = b.pvc_set ? b.pvc_set->max_violations() : 0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double sign = b.sense == Sense::UpperLE ? 1.0 : -1.0;
            const double relaxed = sign * (d[i] - b.relaxed_bounds[i]);
            const double original = sign * (d[i] - b.original_bounds[i]);
            if (relaxed > tol * std::max(1.0, std::abs(b.relaxed_bounds[i]))) ++c.relaxed_violations;
            if (original > tol * std::max(1.0, std::abs(b.original_bounds[i]))) ++c.original_violations;
        }
    }
    return out;
}

}  // namespace sacq
