#include "probframe/frames.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"
#include "support/sampling.hpp"

#include <doctest.h>

using namespace probframe;
using testing::delta;
using testing::line;
using doctest::Approx;

namespace {

const DiscreteMeasure kBasis = DiscreteMeasure::uniform(2, {{1, 0}, {0, 1}});

}  // namespace

TEST_CASE("frame operator") {
    CHECK(frame_operator(delta(1)) == Matrix::from_rows({{1}}));
    CHECK(frame_operator(kBasis) == 0.5 * Matrix::identity(2));
    CHECK(frame_operator(line({0.5, 1.5}, {0.5, 0.5}))(0, 0) == Approx(1.25).epsilon(1e-15));
}

TEST_CASE("analyze classifies frames") {
    FrameReport r = analyze(kBasis);
    CHECK(r.is_frame);
    CHECK(r.is_tight);
    CHECK_FALSE(r.is_parseval);
    CHECK(r.lower_bound == Approx(0.5));
    CHECK(r.upper_bound == Approx(0.5));

    r = analyze(DiscreteMeasure::uniform(2, {{1, 0}}));
    CHECK_FALSE(r.is_frame);
    CHECK_FALSE(r.is_tight);

    r = analyze(delta(1));
    CHECK(r.is_frame);
    CHECK(r.is_parseval);
    CHECK(r.lower_bound == 1.0);
    CHECK(r.upper_bound == 1.0);
    CHECK(r.second_moment == 1.0);

    CHECK_FALSE(analyze(delta(0)).is_frame);
}

TEST_CASE("canonical dual") {
    DualFrame d = canonical_dual(delta(1));
    CHECK(same_measure(d.measure, delta(1), 0.0));
    CHECK(d.coupling.plan() == Matrix::from_rows({{1}}));

    d = canonical_dual(kBasis);
    CHECK(same_measure(d.measure, DiscreteMeasure::uniform(2, {{2, 0}, {0, 2}}), 1e-15));

    std::mt19937_64 rng(21);
    const DiscreteMeasure mu = testing::random_frame(rng, 3, 6);
    const FrameReport r = analyze(mu);
    const FrameReport dr = analyze(canonical_dual(mu).measure);
    CHECK(dr.lower_bound == Approx(1.0 / r.upper_bound).epsilon(1e-10));
    CHECK(dr.upper_bound == Approx(1.0 / r.lower_bound).epsilon(1e-10));

    CHECK_CODE(canonical_dual(delta(0)), NotAFrame);
    CHECK_CODE(inverse_frame_operator(DiscreteMeasure::uniform(2, {{1, 0}})), NotAFrame);
}

TEST_CASE("kernel of the analysis range") {
    const Vector x{3.0};
    const Vector y{-2.0};
    CHECK(rkhs_kernel(delta(1), x, y) == -6.0);
    const Vector u{1.0, 2.0};
    const Vector v{-3.0, 0.5};
    CHECK(rkhs_kernel(kBasis, u, v) == Approx(2.0 * (-3.0 + 1.0)));

    std::mt19937_64 rng(22);
    const DiscreteMeasure mu = testing::random_frame(rng, 3, 5);
    for (int t = 0; t < 50; ++t) {
        const Vector a = testing::normal_vector(rng, 3);
        const Vector b = testing::normal_vector(rng, 3);
        CHECK(rkhs_kernel(mu, a, b) == Approx(rkhs_kernel(mu, b, a)).epsilon(1e-12));
    }
    CHECK_CODE(rkhs_kernel(delta(0), x, y), NotAFrame);
    CHECK_CODE(rkhs_kernel(kBasis, x, y), DimMismatch);
}

TEST_CASE("reproducing property") {
    const Vector zero{0.0, 0.0};
    CHECK(reproducing_residual(kBasis, zero, zero) == 0.0);
    const Vector one{1.0};
    const Vector three{3.0};
    CHECK(reproducing_residual(delta(1), one, three) == 0.0);

    std::mt19937_64 rng(23);
    for (int t = 0; t < 100; ++t) {
        const DiscreteMeasure mu = testing::random_frame(rng, 3, 3 + rng() % 5);
        const Vector u = testing::normal_vector(rng, 3);
        const Vector z = testing::normal_vector(rng, 3);
        CHECK(reproducing_residual(mu, u, z) <= 1e-9 * (1 + norm(u) * norm(z)));
    }
    CHECK_CODE(reproducing_residual(delta(0), one, three), NotAFrame);
}

TEST_CASE("quadratic form identity") {
    std::mt19937_64 rng(24);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + rng() % 4;
        const DiscreteMeasure mu = testing::random_measure(rng, n, 1 + rng() % 6);
        const Matrix s = frame_operator(mu);
        const Vector x = testing::normal_vector(rng, n);
        double direct = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double p = dot(x, mu.atom(i));
            direct += mu.weight(i) * p * p;
        }
        CHECK(std::abs(direct - dot(x, s * x)) <= 1e-10 * (1 + direct));
    }
}

TEST_CASE("sampled directions never leave the spectral bounds") {
    std::mt19937_64 rng(25);
    const DiscreteMeasure mu = testing::random_frame(rng, 3, 7);
    const FrameReport r = analyze(mu);
    double lo = 1e300;
    double hi = 0.0;
    for (int t = 0; t < 10000; ++t) {
        Vector x = testing::normal_vector(rng, 3);
        const double nx = norm(x);
        for (double& v : x) {
            v /= nx;
        }
        const double q = dot(x, r.frame_operator * x);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    CHECK(lo >= r.lower_bound - 1e-8);
    CHECK(lo <= r.lower_bound + 1e-1);
    CHECK(hi <= r.upper_bound + 1e-8);
    CHECK(hi >= r.upper_bound - 1e-1);
}

TEST_CASE("canonical dual of a tight frame is a rescaling") {
    const double s3 = std::sqrt(3.0) / 2;
    const DiscreteMeasure mercedes =
        DiscreteMeasure::uniform(2, {{0, 1}, {s3, -0.5}, {-s3, -0.5}});
    const FrameReport r = analyze(mercedes);
    REQUIRE(r.is_tight);
    const DiscreteMeasure dual = canonical_dual(mercedes).measure;
    const Matrix scale = (1.0 / r.lower_bound) * Matrix::identity(2);
    CHECK(same_measure(dual, pushforward_linear(mercedes, scale), 1e-12));
    CHECK(max_abs(frame_operator(dual) - (1.0 / r.lower_bound) * Matrix::identity(2)) <= 1e-12);
}

TEST_CASE("frame operator of the canonical dual is the inverse frame operator") {
    std::mt19937_64 rng(26);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + rng() % 4;
        const DiscreteMeasure mu = testing::random_frame(rng, n, n + rng() % 5);
        CHECK(max_abs(frame_operator(canonical_dual(mu).measure) - inverse(frame_operator(mu))) <= 1e-9);
    }
}
