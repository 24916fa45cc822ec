#include "sacq/rttp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "sacq/pvc.hpp"

namespace sacq::rttp {

PhantomConfig PhantomConfig::standard(std::size_t grid, std::size_t angles, std::size_t beamlets_per_angle) {
    PhantomConfig c;
    c.grid = grid;
    c.angles = angles;
    c.beamlets_per_angle = beamlets_per_angle;
    const double g = static_cast<double>(grid);
    c.structures.push_back({"PTV", Sense::LowerGE, 0.5 * g, 0.5 * g, 0.22 * g, 0.0, PvcParams{0.2, 0.1}});
    c.structures.push_back({"OAR", Sense::UpperLE, 0.78 * g, 0.5 * g, 0.14 * g, 0.0, PvcParams{0.3, 0.1}});
    return c;
}

void PhantomConfig::check() const {
    if (grid == 0) throw InvalidArgument("grid must be positive");
    if (angles == 0) throw InvalidArgument("angles must be positive");
    if (beamlets_per_angle == 0) throw InvalidArgument("beamlets_per_angle must be positive");
    if (!(kernel_width > 0.0)) throw InvalidArgument("kernel_width must be positive");
    if (!(tail_threshold > 0.0 && tail_threshold < 1.0)) throw InvalidArgument("tail_threshold must lie in (0, 1)");
    if (structures.empty()) throw InvalidArgument("phantom has no structures");
    for (const auto& s : structures) {
        if (!(s.radius > 0.0) || s.inner_radius < 0.0 || s.inner_radius >= s.radius)
            throw InvalidArgument("structure '" + s.name + "': need 0 <= inner_radius < radius");
        if (s.pvc) {
            if (!(s.pvc->alpha >= 0.0 && s.pvc->alpha <= 1.0))
                throw InvalidArgument("structure '" + s.name + "': alpha must lie in [0, 1]");
            if (!(s.pvc->beta > 0.0 && s.pvc->beta < 1.0))
                throw InvalidArgument("structure '" + s.name + "': beta must lie in (0, 1)");
        }
    }
}

double Geometry::ray_distance(std::size_t voxel, std::size_t beamlet) const {
    const double g = static_cast<double>(grid);
    const double vx = static_cast<double>(voxel % grid) + 0.5 - 0.5 * g;
    const double vy = static_cast<double>(voxel / grid) + 0.5 - 0.5 * g;
    const Beamlet& b = beamlets[beamlet];
    // Unit normal to the direction of travel (cos, sin).
    const double nx = -std::sin(b.angle);
    const double ny = std::cos(b.angle);
    return std::abs(vx * nx + vy * ny - b.offset);
}

namespace {

Vector uniform_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(n);
    for (auto& e : v) e = u(rng);
    return v;
}

// k-th smallest (zero-based) of a copy of d.
double order_stat(Vector d, std::size_t k) {
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    return d[k];
}

}  // namespace

Phantom generate_phantom(const PhantomConfig& config, std::uint64_t seed) {
    config.check();
    Phantom ph;
    Geometry& geo = ph.geometry;
    geo.grid = config.grid;
    geo.kernel_width = config.kernel_width;
    const std::size_t voxels = config.grid * config.grid;
    geo.labels.assign(voxels, -1);
    geo.structure_voxels.resize(config.structures.size());
    for (std::size_t v = 0; v < voxels; ++v) {
        const double x = static_cast<double>(v % config.grid) + 0.5;
        const double y = static_cast<double>(v / config.grid) + 0.5;
        for (std::size_t s = 0; s < config.structures.size(); ++s) {
            const auto& st = config.structures[s];
            const double r = std::hypot(x - st.cx, y - st.cy);
            if (r <= st.radius && r >= st.inner_radius) {
                geo.labels[v] = static_cast<int>(s);
                geo.structure_voxels[s].push_back(v);
                break;
            }
        }
    }
    for (std::size_t s = 0; s < config.structures.size(); ++s)
        if (geo.structure_voxels[s].empty())
            throw InvalidArgument("structure '" + config.structures[s].name + "' contains no voxels");

    const double g = static_cast<double>(config.grid);
    const double spacing = 0.5 * g / static_cast<double>(config.beamlets_per_angle);
    for (std::size_t a = 0; a < config.angles; ++a) {
        const double angle = std::numbers::pi * static_cast<double>(a) / static_cast<double>(config.angles);
        for (std::size_t b = 0; b < config.beamlets_per_angle; ++b)
            geo.beamlets.push_back({angle, (static_cast<double>(b) + 0.5) * spacing - 0.25 * g});
    }
    const std::size_t n = geo.beamlets.size();

    std::mt19937_64 rng(seed);
    ph.witness = uniform_vector(rng, n, 0.5, 1.5);

    const double two_sigma_sq = 2.0 * config.kernel_width * config.kernel_width;
    for (std::size_t s = 0; s < config.structures.size(); ++s) {
        const auto& st = config.structures[s];
        const auto& vox = geo.structure_voxels[s];
        std::vector<Triplet> entries;
        std::vector<bool> reached(vox.size(), false);
        for (std::size_t r = 0; r < vox.size(); ++r) {
            for (std::size_t j = 0; j < n; ++j) {
                const double d = geo.ray_distance(vox[r], j);
                const double dose = std::exp(-d * d / two_sigma_sq);
                if (dose < config.tail_threshold) continue;
                entries.push_back({r, j, dose});
                reached[r] = true;
            }
        }
        for (std::size_t r = 0; r < vox.size(); ++r)
            if (!reached[r])
                throw InvalidArgument("structure '" + st.name + "': voxel " + std::to_string(vox[r]) +
                                      " receives no dose from any beamlet");
        auto map = std::make_shared<const LinearMap>(LinearMap::sparse(vox.size(), n, entries));
        const Vector dose = map->apply(ph.witness);
        const std::size_t m = dose.size();
        const std::size_t k = st.pvc ? violation_budget(st.pvc->alpha, m) : 0;

        double bound = 0.0;
        if (st.sense == Sense::LowerGE) {
            // At most k voxels below the prescription, none below (1 - beta) of it.
            const double lowest = order_stat(dose, 0);
            bound = st.pvc ? std::min(order_stat(dose, std::min(k, m - 1)), lowest / (1.0 - st.pvc->beta)) : lowest;
        } else {
            const double highest = order_stat(dose, m - 1);
            bound = st.pvc ? std::max(order_stat(dose, m - 1 - std::min(k, m - 1)), highest / (1.0 + st.pvc->beta))
                           : highest;
        }
        ph.blocks.push_back({st.name, std::move(map), st.sense, Vector(m, bound), st.pvc});
    }
    return ph;
}

Instance generate_feasible_instance(const InstanceDims& dims, std::uint64_t seed) {
    if (dims.n == 0) throw InvalidArgument("instance: n must be positive");
    if (dims.blocks.empty()) throw InvalidArgument("instance: no blocks");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Instance inst;
    inst.witness = uniform_vector(rng, dims.n, 0.5, 1.5);

    for (const auto& bd : dims.blocks) {
        if (bd.rows == 0) throw InvalidArgument("instance block '" + bd.name + "': rows must be positive");
        if (!(bd.density >= 0.0 && bd.density <= 1.0))
            throw InvalidArgument("instance block '" + bd.name + "': density must lie in [0, 1]");
        if (bd.pvc && !(bd.pvc->beta > 0.0 && bd.pvc->beta < 1.0))
            throw InvalidArgument("instance block '" + bd.name + "': beta must lie in (0, 1)");

        std::vector<Triplet> entries;
        std::uniform_int_distribution<std::size_t> col(0, dims.n - 1);
        for (std::size_t i = 0; i < bd.rows; ++i) {
            if (bd.density == 0.0) continue;
            bool any = false;
            for (std::size_t j = 0; j < dims.n; ++j) {
                if (unit(rng) < bd.density) {
                    entries.push_back({i, j, unit(rng)});
                    any = true;
                }
            }
            if (!any) entries.push_back({i, col(rng), 0.5 + 0.5 * unit(rng)});
        }
        std::shared_ptr<const LinearMap> map;
        if (dims.sparse || bd.density == 0.0) {
            map = std::make_shared<const LinearMap>(LinearMap::sparse(bd.rows, dims.n, entries));
        } else {
            Vector dense(bd.rows * dims.n, 0.0);
            for (const auto& t : entries) dense[t.row * dims.n + t.col] += t.value;
            map = std::make_shared<const LinearMap>(LinearMap::dense(bd.rows, dims.n, std::move(dense)));
        }
        const Vector dose = map->apply(inst.witness);

        // Rows that miss the original bound at the witness: exactly K when
        // tight, otherwise a random count in [0, K].
        std::size_t violators = 0;
        if (bd.pvc) {
            const std::size_t k = violation_budget(bd.pvc->alpha, bd.rows);
            violators = dims.tight ? k : std::uniform_int_distribution<std::size_t>(0, k)(rng);
        }
        std::vector<std::size_t> order(bd.rows);
        for (std::size_t i = 0; i < bd.rows; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);

        Vector bounds(bd.rows);
        for (std::size_t r = 0; r < bd.rows; ++r) {
            const std::size_t i = order[r];
            const double d = dose[i];
            if (r < violators && d > 0.0) {
                // d misses b by a fraction u * beta of b, u in [0.2, 0.9].
                const double u = 0.2 + 0.7 * unit(rng);
                bounds[i] = bd.sense == Sense::UpperLE ? d / (1.0 + u * bd.pvc->beta) : d / (1.0 - u * bd.pvc->beta);
            } else {
                const double slack = 0.05 + 0.45 * unit(rng);
                if (d == 0.0)
                    bounds[i] = bd.sense == Sense::UpperLE ? slack : 0.0;
                else
                    bounds[i] = bd.sense == Sense::UpperLE ? d * (1.0 + slack) : d * (1.0 - slack);
            }
        }
        inst.blocks.push_back({bd.name, std::move(map), bd.sense, std::move(bounds), bd.pvc});
    }
    return inst;
}

Vector compute_dvh(std::span<const double> dose, std::span<const double> thresholds) {
    for (std::size_t i = 0; i < dose.size(); ++i)
        if (!(dose[i] >= 0.0)) throw InvalidArgument("dvh: negative dose at index " + std::to_string(i));
    Vector sorted(dose.begin(), dose.end());
    std::sort(sorted.begin(), sorted.end());
    Vector out;
    out.reserve(thresholds.size());
    const double m = static_cast<double>(sorted.size());
    for (double tau : thresholds) {
        if (sorted.empty()) {
            out.push_back(0.0);
            continue;
        }
        const auto first = std::lower_bound(sorted.begin(), sorted.end(), tau);
        out.push_back(static_cast<double>(sorted.end() - first) / m);
    }
    return out;
}

Vector dvh_thresholds(double max_dose, std::size_t count) {
    Vector t;
    if (count == 0) return t;
    if (count == 1) return {0.0};
    t.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        t.push_back(max_dose * static_cast<double>(i) / static_cast<double>(count - 1));
    return t;
}

bool PlanEval::feasible() const {
    for (const auto& b : blocks)
        if (b.relaxed_violations > 0 || !b.pvc_satisfied) return false;
    return true;
}

PlanEval evaluate_plan(std::span<const double> x, const std::vector<BlockSpec>& blocks, double tol,
                       std::size_t dvh_points) {
    PlanEval ev;
    double prox = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < -tol) throw InvalidArgument("evaluate_plan: x has a negative entry at index " + std::to_string(i));
        if (x[i] < 0.0) prox += x[i] * x[i];
    }

    double max_dose = 0.0;
    for (const auto& b : blocks) {
        if (!b.map) throw InvalidArgument("evaluate_plan: block '" + b.name + "' has no matrix");
        require_same_size(x.size(), b.map->cols(), "evaluate_plan point");
        require_same_size(b.bounds.size(), b.map->rows(), "evaluate_plan bounds");
        BlockEval be;
        be.name = b.name;
        be.sense = b.sense;
        be.dose = b.map->apply(x);
        const double beta = b.pvc ? b.pvc->beta : 0.0;
        const double sign = b.sense == Sense::UpperLE ? 1.0 : -1.0;
        const double factor = b.sense == Sense::UpperLE ? 1.0 + beta : 1.0 - beta;
        for (std::size_t i = 0; i < be.dose.size(); ++i) {
            const double orig = b.bounds[i];
            const double relaxed = factor * orig;
            const double excess = sign * (be.dose[i] - relaxed);
            if (excess > tol * std::max(1.0, std::abs(relaxed))) ++be.relaxed_violations;
            if (excess > 0.0) {
                const Vector row = b.map->row(i);
                double norm_sq = 0.0;
                for (double a : row) norm_sq += a * a;
                prox += norm_sq > 0.0 ? excess * excess / norm_sq : std::numeric_limits<double>::infinity();
            }
            if (sign * (be.dose[i] - orig) > tol * std::max(1.0, std::abs(orig))) ++be.original_violations;
            max_dose = std::max(max_dose, be.dose[i]);
        }
        if (b.pvc) {
            be.budget = violation_budget(b.pvc->alpha, be.dose.size());
            be.pvc_satisfied = be.original_violations <= *be.budget;
            prox += pvc_dist_sq(be.dose, PvcSet(b.bounds, b.sense, *be.budget));
        }
        ev.blocks.push_back(std::move(be));
    }
    ev.thresholds = dvh_thresholds(max_dose, dvh_points);
    for (auto& be : ev.blocks) {
        Vector clipped(be.dose.size());
        std::transform(be.dose.begin(), be.dose.end(), clipped.begin(), [](double d) { return std::max(d, 0.0); });
        be.dvh = compute_dvh(clipped, ev.thresholds);
    }
    ev.proximity = prox;
    return ev;
}

}  // namespace sacq::rttp
