#include "probframe/frames.hpp"
#include "probframe/transport.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"
#include "support/sampling.hpp"

#include <doctest.h>

#include <cmath>

using namespace probframe;
using testing::delta;
using testing::line;
using doctest::Approx;

namespace {

const DiscreteMeasure kEta = line({0.5, 1.0 / 3}, {0.5, 0.5});
const DiscreteMeasure kMu1 = line({0.5, 1.5}, {0.5, 0.5});
const DiscreteMeasure kSigns = line({-1, 1}, {0.5, 0.5});

}  // namespace

TEST_CASE("coupling rejects wrong marginals") {
    CHECK_CODE(Coupling(delta(1), kEta, Matrix::from_rows({{0.6, 0.5}})), MarginalMismatch);
    CHECK_CODE(Coupling(delta(1), kEta, Matrix::from_rows({{0.5}, {0.5}})), MarginalMismatch);
    CHECK_CODE(Coupling(delta(1), kEta, Matrix::from_rows({{1.5, -0.5}})), MarginalMismatch);
}

TEST_CASE("product coupling") {
    CHECK(product_coupling(delta(1), delta(0.5)).plan() == Matrix::from_rows({{1}}));
    CHECK(product_coupling(delta(1), kEta).plan() == Matrix::from_rows({{0.5, 0.5}}));
}

TEST_CASE("graph coupling") {
    const Coupling diag = diagonal_coupling(kMu1);
    CHECK(diag.plan() == Matrix::diagonal(kMu1.weights()));

    const std::vector<Vector> ones{{1.0}, {1.0}};
    const Coupling c = graph_coupling(kMu1, ones);
    REQUIRE(c.target().size() == 1);
    CHECK(c.target().atom(0) == Vector{1.0});
    CHECK(c.plan() == Matrix::from_rows({{0.5}, {0.5}}));

    const DiscreteMeasure basis = DiscreteMeasure::uniform(2, {{1, 0}, {0, 1}});
    const std::vector<Vector> doubled{{2, 0}, {0, 2}};
    const Coupling g = graph_coupling(basis, doubled);
    CHECK(same_measure(g.target(), DiscreteMeasure::uniform(2, {{2, 0}, {0, 2}}), 1e-15));
    CHECK(mixed_frame_operator(g) == Matrix::identity(2));

    CHECK_CODE(graph_coupling(kMu1, std::vector<Vector>{{1.0}}), MissingImage);
}

TEST_CASE("mixed frame operator") {
    CHECK(mixed_frame_operator(product_coupling(delta(1), kEta))(0, 0) == Approx(5.0 / 12));
    std::mt19937_64 rng(41);
    const DiscreteMeasure mu = testing::random_frame(rng, 3, 6);
    const Matrix s = frame_operator(mu);
    CHECK(max_abs(mixed_frame_operator(diagonal_coupling(mu)) - s) <= 1e-14);
    const DualFrame dual = canonical_dual(mu);
    CHECK(max_abs(mixed_frame_operator(dual.coupling) - Matrix::identity(3)) <= 1e-12);
}

TEST_CASE("transport cost") {
    CHECK(transport_cost(diagonal_coupling(kMu1)) == 0.0);
    CHECK(transport_cost(product_coupling(delta(0), delta(1))) == 1.0);
    for (int k = 1; k <= 10; ++k) {
        const DiscreteMeasure mk = testing::mu_k(k);
        const std::vector<Vector> ones{{1.0}, {1.0}};
        CHECK(transport_cost(graph_coupling(mk, ones)) == Approx(0.5 / ((k + 1.0) * (k + 1.0))));
    }
}

TEST_CASE("coalesced and transposed couplings") {
    const DiscreteMeasure twice = line({1, 1}, {0.25, 0.75});
    const Coupling c(twice, kEta, Matrix::from_rows({{0.25, 0.0}, {0.25, 0.5}}));
    const Coupling merged = c.coalesced();
    REQUIRE(merged.source().size() == 1);
    CHECK(merged.plan() == Matrix::from_rows({{0.5, 0.5}}));
    const Coupling t = c.transposed();
    CHECK(t.plan() == c.plan().transposed());
    CHECK(same_measure(t.source(), kEta, 0.0));
}

TEST_CASE("W2 examples") {
    CHECK(solve_w2(kMu1, kMu1).w2 == 0.0);
    for (int k = 1; k <= 10; ++k) {
        const TransportResult r = solve_w2(testing::mu_k(k), delta(1));
        CHECK(std::abs(r.w2 - 1.0 / (std::sqrt(2.0) * (k + 1))) <= 1e-10);
    }
    const DiscreteMeasure low = DiscreteMeasure::uniform(2, {{0, 0}, {1, 0}});
    const DiscreteMeasure high = DiscreteMeasure::uniform(2, {{0, 1}, {1, 1}});
    CHECK(solve_w2(low, high).w2 == Approx(1.0));
    CHECK(w2_bruteforce(low, high).w2 == Approx(1.0));
    CHECK_CODE(solve_w2(low, kMu1), DimMismatch);
}

TEST_CASE("W2 result is certified and self-consistent") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 50; ++t) {
        const DiscreteMeasure a = testing::random_measure(rng, 2, 1 + rng() % 7);
        const DiscreteMeasure b = testing::random_measure(rng, 2, 1 + rng() % 7);
        const TransportResult r = solve_w2(a, b);
        CHECK(transport_cost(r.plan) == r.cost);
        CHECK(r.w2 == std::sqrt(r.cost));
        CHECK(r.slackness_residual <= 1e-9);
        CHECK(r.dual_infeasibility <= 1e-9);
    }
}

TEST_CASE("W2 on the line matches the quantile coupling") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 100; ++t) {
        const DiscreteMeasure a = testing::random_measure(rng, 1, 1 + rng() % 8);
        const DiscreteMeasure b = testing::random_measure(rng, 1, 1 + rng() % 8);
        CHECK(std::abs(solve_w2(a, b).w2 - oracle::w2_line(a, b)) <= 1e-10);
    }
}

TEST_CASE("W2 agrees with enumeration") {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 100; ++t) {
        const std::size_t count = 1 + rng() % 6;
        const DiscreteMeasure a = testing::random_measure(rng, 2, count, true);
        const DiscreteMeasure b = testing::random_measure(rng, 2, count, true);
        CHECK(std::abs(solve_w2(a, b).w2 - w2_bruteforce(a, b).w2) <= 1e-9);
    }
    CHECK(w2_bruteforce(delta(2), delta(-1)).w2 == 3.0);
    CHECK_CODE(w2_bruteforce(kEta, line({0, 1}, {0.25, 0.75})), Unsupported);
    CHECK_CODE(w2_bruteforce(kEta, delta(1)), Unsupported);
    const DiscreteMeasure big = testing::random_measure(rng, 1, 8, true);
    CHECK_CODE(w2_bruteforce(big, big), Unsupported);
}

TEST_CASE("W2 triangle inequality") {
    std::mt19937_64 rng(45);
    for (int t = 0; t < 100; ++t) {
        const DiscreteMeasure a = testing::random_measure(rng, 3, 1 + rng() % 6);
        const DiscreteMeasure b = testing::random_measure(rng, 3, 1 + rng() % 6);
        const DiscreteMeasure c = testing::random_measure(rng, 3, 1 + rng() % 6);
        CHECK(solve_w2(a, c).w2 <= solve_w2(a, b).w2 + solve_w2(b, c).w2 + 1e-8);
    }
}

TEST_CASE("gluing") {
    const Coupling c = product_coupling(delta(1), kEta);
    const Coupling left = glue(diagonal_coupling(delta(1)), c);
    CHECK(left.plan() == c.plan());
    const Coupling right = glue(c, diagonal_coupling(kEta));
    CHECK(max_abs(right.plan() - c.plan()) <= 1e-15);

    // graph of T1 then graph of T2 is the graph of T2 after T1.
    const DiscreteMeasure basis = DiscreteMeasure::uniform(2, {{1, 0}, {0, 1}});
    const std::vector<Vector> swap{{0, 1}, {1, 0}};
    const Coupling g1 = graph_coupling(basis, swap);
    const Coupling g2 = graph_coupling(g1.target(), std::vector<Vector>{{0, 3}, {3, 0}});
    const Coupling composed = glue(g1, g2);
    const std::vector<Vector> direct{{0, 3}, {3, 0}};
    const Coupling expected = graph_coupling(basis, direct);
    CHECK(same_measure(composed.target(), expected.target(), 1e-15));
    CHECK(max_abs(mixed_frame_operator(composed) - mixed_frame_operator(expected)) <= 1e-15);

    const std::vector<Vector> ones{{1.0}, {1.0}};
    const Coupling mk = graph_coupling(testing::mu_k(1), ones);
    const Coupling glued = glue(mk, canonical_dual(delta(1)).coupling);
    CHECK(glued.plan() == Matrix::from_rows({{0.5}, {0.5}}));
    CHECK(mixed_frame_operator(glued)(0, 0) == Approx(0.75));

    CHECK_CODE(glue(c, diagonal_coupling(kMu1)), MarginalMismatch);
}

TEST_CASE("glued marginals are the outer marginals") {
    std::mt19937_64 rng(46);
    for (int t = 0; t < 30; ++t) {
        const DiscreteMeasure a = testing::random_measure(rng, 2, 1 + rng() % 5);
        const DiscreteMeasure b = testing::random_measure(rng, 2, 1 + rng() % 5);
        const DiscreteMeasure c = testing::random_measure(rng, 2, 1 + rng() % 5);
        const Coupling g = glue(solve_w2(a, b).plan, solve_w2(b, c).plan);
        CHECK(same_measure(g.source(), a, 0.0));
        CHECK(same_measure(g.target(), c, 0.0));
    }
}

TEST_CASE("plan family on the signs has mixed operator 4a - 1") {
    for (double a : {0.0, 0.1, 0.25, 0.4, 0.5}) {
        const Coupling c(kSigns, kSigns, Matrix::from_rows({{a, 0.5 - a}, {0.5 - a, a}}));
        CHECK(mixed_frame_operator(c)(0, 0) == Approx(4 * a - 1));
    }
}

TEST_CASE("mixed operator search") {
    std::mt19937_64 rng(47);
    const DiscreteMeasure mu = testing::random_frame(rng, 2, 4);
    const DualFrame dual = canonical_dual(mu);
    MixedSearchResult r = optimize_mixed_operator(mu, dual.measure, Matrix::identity(2));
    CHECK(r.residual <= 1e-6);

    r = optimize_mixed_operator(kSigns, kSigns, Matrix::identity(1));
    CHECK(r.residual <= 1e-6);
    CHECK(r.coupling.plan()(0, 0) == Approx(0.5).epsilon(1e-6));

    r = optimize_mixed_operator(delta(1), delta(0.5), Matrix::identity(1));
    CHECK(r.residual == Approx(0.5));
    CHECK(r.duality_gap <= 1e-12);

    CHECK_CODE(optimize_mixed_operator(mu, kSigns, Matrix::identity(2)), DimMismatch);
    CHECK_CODE(optimize_mixed_operator(mu, mu, Matrix::identity(3)), DimMismatch);
}

TEST_CASE("mixed operator search history never increases") {
    std::mt19937_64 rng(48);
    for (int t = 0; t < 20; ++t) {
        const DiscreteMeasure a = testing::random_measure(rng, 2, 2 + rng() % 4);
        const DiscreteMeasure b = testing::random_measure(rng, 2, 2 + rng() % 4);
        const MixedSearchResult r =
            optimize_mixed_operator(a, b, Matrix::identity(2), {.max_iterations = 300});
        for (std::size_t i = 1; i < r.residual_history.size(); ++i) {
            CHECK(r.residual_history[i] <= r.residual_history[i - 1] + 1e-12);
        }
        CHECK(std::abs(frobenius_norm(mixed_frame_operator(r.coupling) - Matrix::identity(2)) -
                       r.residual) <= 1e-9);
        CHECK(same_measure(r.coupling.source(), a, 0.0));
    }
}
