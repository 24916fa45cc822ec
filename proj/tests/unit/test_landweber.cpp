#include <doctest.h>

#include <random>

#include "sacq/landweber.hpp"
#include "sacq/linear_map.hpp"
#include "sacq/pvc.hpp"
#include "support/oracles.hpp"

using namespace sacq;

namespace {

std::shared_ptr<const LinearMap> dense(const oracle::Mat& a) {
    return std::make_shared<const LinearMap>(
        LinearMap::dense(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()), oracle::row_major(a)));
}

OperatorPtr upper_box(Vector b) {
    return make_pvc_projector(std::make_shared<const PvcSet>(std::move(b), Sense::UpperLE, 0));
}

}  // namespace

TEST_CASE("linear map products match dense arithmetic") {
    std::mt19937_64 rng(3);
    for (int c = 0; c < 50; ++c) {
        const int m = std::uniform_int_distribution<int>(1, 20)(rng);
        const int n = std::uniform_int_distribution<int>(1, 20)(rng);
        oracle::Mat a = oracle::random_matrix(rng, m, n);
        std::vector<Triplet> trip;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                if (std::bernoulli_distribution(0.6)(rng)) a(i, j) = 0.0;
                if (a(i, j) != 0.0) {
                    // split entries into duplicates to exercise summation
                    trip.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), a(i, j) * 0.25});
                    trip.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), a(i, j) * 0.75});
                }
            }
        const LinearMap d = LinearMap::dense(m, n, oracle::row_major(a));
        const LinearMap s = LinearMap::sparse(m, n, trip);
        const oracle::Vec x = oracle::random_vector(rng, n);
        const oracle::Vec y = oracle::random_vector(rng, m);
        const oracle::Vec ax = a * x, aty = a.transpose() * y;
        for (const LinearMap* map : {&d, &s}) {
            CHECK((oracle::to_eigen(map->apply(oracle::to_std(x))) - ax).norm() <= 1e-12 * (1 + ax.norm()));
            CHECK((oracle::to_eigen(map->apply_transpose(oracle::to_std(y))) - aty).norm() <= 1e-12 * (1 + aty.norm()));
        }
        for (int i = 0; i < m; ++i) CHECK(oracle::max_abs_diff(s.row(i), oracle::to_std(a.row(i).transpose())) <= 1e-15);
    }
    CHECK_THROWS_AS(LinearMap::dense(2, 2, {1, 2, 3}), DimensionError);
    const Triplet bad{2, 0, 1.0};
    CHECK_THROWS(LinearMap::sparse(2, 2, std::span<const Triplet>(&bad, 1)));
}

TEST_CASE("spectral norm estimates") {
    oracle::Mat id = oracle::Mat::Identity(4, 4);
    CHECK(spectral_norm_sq(*dense(id)).value == doctest::Approx(1.0).epsilon(1e-9));
    oracle::Mat dg = oracle::Mat::Zero(2, 2);
    dg(0, 0) = 3;
    dg(1, 1) = 1;
    CHECK(spectral_norm_sq(*dense(dg)).value == doctest::Approx(9.0).epsilon(1e-9));

    std::mt19937_64 rng(21);
    for (int c = 0; c < 100; ++c) {
        const int m = std::uniform_int_distribution<int>(1, 15)(rng);
        const int n = std::uniform_int_distribution<int>(1, 15)(rng);
        const oracle::Mat a = oracle::random_matrix(rng, m, n);
        const double truth = oracle::spectral_norm_sq(a);
        const NormEstimate e = spectral_norm_sq(*dense(a));
        CHECK(std::abs(e.rayleigh - truth) <= 1e-6 * truth);
        CHECK(e.value >= truth);
        CHECK(e.value <= truth * (1 + 1e-4));
        const oracle::Vec v = oracle::random_vector(rng, n);
        CHECK(e.value >= (a * v).squaredNorm() / v.squaredNorm());
    }
    const oracle::Mat a = oracle::random_matrix(rng, 5, 4);
    CHECK(spectral_norm_sq(*dense(a)).value == spectral_norm_sq(*dense(a)).value);
    CHECK_THROWS_AS(spectral_norm_sq(*dense(oracle::Mat::Zero(3, 2))), InvalidArgument);
    CHECK_THROWS_AS(spectral_norm_sq(*dense(a), 0.0), InvalidArgument);
}

TEST_CASE("Landweber step") {
    auto id2 = dense(oracle::Mat::Identity(2, 2));
    const LandweberOp v(id2, upper_box({1, 1e9}), 0.5, 1.0);
    const Vector r = apply_landweber(v, Vector{2, 0});
    CHECK(r[0] == doctest::Approx(1.5));
    CHECK(r[1] == 0.0);
    const LandweberOp vi(id2, make_identity(), 0.5, 1.0);
    CHECK(apply_landweber(vi, Vector{7, -3}) == Vector{7, -3});

    CHECK_THROWS_AS(LandweberOp(id2, make_identity(), 1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(LandweberOp(id2, make_identity(), 0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(LandweberOp(id2, make_identity(), -0.1, 1.0), InvalidArgument);
    const LandweberOp w = LandweberOp::with_scale(id2, make_identity());
    CHECK(w.gamma() * w.norm_sq_upper() == doctest::Approx(kDefaultGammaScale));
}

TEST_CASE("Landweber step against direct formula") {
    std::mt19937_64 rng(8);
    for (int c = 0; c < 100; ++c) {
        const int m = std::uniform_int_distribution<int>(1, 12)(rng);
        const int n = std::uniform_int_distribution<int>(1, 12)(rng);
        const oracle::Mat a = oracle::random_matrix(rng, m, n);
        const oracle::Vec b = oracle::random_vector(rng, m);
        const auto map = dense(a);
        const double l = spectral_norm_sq(*map).value;
        const LandweberOp v(map, upper_box(oracle::to_std(b)), 0.7 / l, l);
        const oracle::Vec x = oracle::random_vector(rng, n, -3, 3);
        const oracle::Vec ax = a * x;
        const oracle::Vec want = x - (0.7 / l) * a.transpose() * (ax - ax.cwiseMin(b));
        CHECK((oracle::to_eigen(apply_landweber(v, oracle::to_std(x))) - want).norm() <= 1e-12 * (1 + want.norm()));
    }
}

TEST_CASE("block operator and residual") {
    auto id2 = dense(oracle::Mat::Identity(2, 2));
    auto v = make_landweber(std::make_shared<const LandweberOp>(id2, upper_box({1, 1e9}), 0.5, 1.0));
    const auto r = make_block_operator(make_orthant_projector(), v);
    const Vector out = sacq::apply(*r, Vector{2, -1});
    CHECK(out[0] == doctest::Approx(1.5));
    CHECK(out[1] == 0.0);
    const auto ident = make_block_operator(make_identity(),
                                           make_landweber(std::make_shared<const LandweberOp>(id2, make_identity(), 0.5, 1.0)));
    CHECK(sacq::apply(*ident, Vector{3, -4}) == Vector{3, -4});
    CHECK(sacq::apply(*r, Vector{0.5, 0.25}) == Vector{0.5, 0.25});

    const auto p = make_halfspace_projector(HalfSpace({1}, 1, Sense::UpperLE));
    CHECK(fixed_point_residual(*make_identity(), Vector{1, 2}) == 0.0);
    CHECK(fixed_point_residual(*p, Vector{3}) == doctest::Approx(2.0));
    CHECK(fixed_point_residual(*p, Vector{0.2}) == 0.0);
}

TEST_CASE("stacked projections compose copies") {
    auto q = upper_box({1, 2});
    const auto s3 = make_stacked(q, 3);
    const auto* comp = std::get_if<Operator::Composition>(&s3->node());
    REQUIRE(comp != nullptr);
    CHECK(comp->children.size() == 3);
    CHECK(sacq::apply(*s3, Vector{5, 5}) == sacq::apply(*q, Vector{5, 5}));
    CHECK(make_stacked(q, 1) == q);
    CHECK_THROWS_AS(make_stacked(q, 0), InvalidArgument);
}
