#include "probframe/measures.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"
#include "support/sampling.hpp"

#include <doctest.h>

#include <limits>

using namespace probframe;
using testing::delta;
using testing::line;
using doctest::Approx;

TEST_CASE("validate accepts probability vectors and rejects the rest") {
    CHECK_NOTHROW(line({1, 2}, {0.5, 0.5}));
    CHECK_CODE(line({1, 2}, {0.5, 0.6}), BadWeights);
    CHECK_CODE(line({1, 2}, {1.5, -0.5}), BadWeights);
    CHECK_CODE(line({1, 2}, {1.0, 0.0}), BadWeights);
    CHECK_CODE(line({1}, {0.5, 0.5}), BadWeights);
    CHECK_CODE(line({}, {}), BadWeights);
    CHECK_CODE(line({std::numeric_limits<double>::infinity()}, {1.0}), BadWeights);
    CHECK_CODE(DiscreteMeasure(2, {{1, 2, 3}}, {1.0}), DimMismatch);
    CHECK_CODE(DiscreteMeasure(0, {{}}, {1.0}), DimMismatch);
}

TEST_CASE("weights are stored as given") {
    const DiscreteMeasure m = line({1, 2, 3}, {0.2, 0.3, 0.5});
    CHECK(m.weights() == std::vector<double>{0.2, 0.3, 0.5});
}

TEST_CASE("second moment") {
    CHECK(second_moment(delta(1)) == 1.0);
    CHECK(second_moment(line({0.5, 1.5}, {0.5, 0.5})) == Approx(1.25).epsilon(1e-15));
    CHECK(second_moment(DiscreteMeasure::uniform(2, {{1, 0}, {0, 1}})) == 1.0);
}

TEST_CASE("linear pushforward") {
    const DiscreteMeasure m = line({1, 2}, {0.5, 0.5});
    CHECK(same_measure(pushforward_linear(m, Matrix::identity(1)), m, 0.0));
    CHECK(same_measure(pushforward_linear(delta(1), Matrix::from_rows({{2}})), delta(2), 0.0));
    const double a = 3.25;
    CHECK(same_measure(pushforward_linear(m, Matrix::from_rows({{a}})), line({a, 2 * a}, {0.5, 0.5}),
                       1e-15));
    CHECK_CODE(pushforward_linear(m, Matrix::identity(2)), DimMismatch);
}

TEST_CASE("pushforward by atom images") {
    const DiscreteMeasure mu1 = line({0.5, 1.5}, {0.5, 0.5});
    CHECK(same_measure(pushforward_map(mu1, mu1.atoms()), mu1, 0.0));

    const std::vector<Vector> ones{{1.0}, {1.0}};
    CHECK(same_measure(coalesce(pushforward_map(mu1, ones)).measure, delta(1), 0.0));

    const std::vector<Vector> swapped{{1.5}, {0.5}};
    CHECK(oracle::same_support(pushforward_map(mu1, swapped), mu1, 0.0));

    const std::vector<Vector> short_list{{1.0}};
    CHECK_CODE(pushforward_map(mu1, short_list), MissingImage);
    const std::vector<Vector> wrong_dim{{1.0, 0.0}, {1.0, 0.0}};
    CHECK_CODE(pushforward_map(mu1, wrong_dim), DimMismatch);
}

TEST_CASE("mixtures") {
    const std::vector<DiscreteMeasure> single{delta(1)};
    const std::vector<double> one{1.0};
    CHECK(same_measure(mixture(single, one), delta(1), 0.0));

    const std::vector<DiscreteMeasure> parts{delta(0.5), delta(1.0 / 3)};
    const std::vector<double> halves{0.5, 0.5};
    CHECK(same_measure(mixture(parts, halves), line({0.5, 1.0 / 3}, {0.5, 0.5}), 0.0));

    const DiscreteMeasure mu = line({1, 2, 4}, {0.25, 0.25, 0.5});
    const std::vector<DiscreteMeasure> twice{mu, mu};
    CHECK(same_measure(mixture(twice, halves), mu, 1e-15));

    const std::vector<DiscreteMeasure> mixed_dims{delta(1), DiscreteMeasure::dirac({1, 0})};
    CHECK_CODE(mixture(mixed_dims, halves), DimMismatch);
    const std::vector<double> bad{0.7, 0.7};
    CHECK_CODE(mixture(parts, bad), BadWeights);
}

TEST_CASE("coalescing merges duplicates and keeps first positions") {
    const DiscreteMeasure m = line({2, 1, 2, 1 + 1e-13}, {0.1, 0.2, 0.3, 0.4});
    const Coalescing c = coalesce(m);
    REQUIRE(c.measure.size() == 2);
    CHECK(c.measure.atom(0)[0] == 2.0);
    CHECK(c.measure.weight(0) == Approx(0.4));
    CHECK(c.measure.weight(1) == Approx(0.6));
    CHECK(c.index == std::vector<std::size_t>{0, 1, 0, 1});
    CHECK(coalesce(m, 0.0).measure.size() == 3);
}

TEST_CASE("second moment of a linear pushforward is bounded by |A|^2 M2") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + rng() % 4;
        const DiscreteMeasure m = testing::random_measure(rng, n, 1 + rng() % 6);
        const Matrix a = testing::normal_matrix(rng, n, n);
        const double s = spectral_norm(a);
        CHECK(second_moment(pushforward_linear(m, a)) <= s * s * second_moment(m) * (1 + 1e-12));
    }
}

TEST_CASE("linear pushforwards compose") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + rng() % 4;
        const DiscreteMeasure m = testing::random_measure(rng, n, 1 + rng() % 6);
        const Matrix a = testing::normal_matrix(rng, n, n);
        const Matrix b = testing::normal_matrix(rng, n, n);
        CHECK(same_measure(pushforward_linear(m, a * b), pushforward_linear(pushforward_linear(m, b), a),
                           1e-12));
    }
    const DiscreteMeasure r = line({1, 3}, {0.5, 0.5});
    const Matrix two = Matrix::from_rows({{2}});
    const Matrix three = Matrix::from_rows({{3}});
    CHECK(same_measure(pushforward_linear(r, two * three),
                       pushforward_linear(pushforward_linear(r, three), two), 0.0));
}

TEST_CASE("mixture keeps total mass one") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 50; ++t) {
        std::vector<DiscreteMeasure> parts;
        for (int k = 0; k < 3; ++k) {
            parts.push_back(testing::random_measure(rng, 2, 1 + rng() % 4));
        }
        parts.push_back(parts.front());
        const std::vector<double> ws = testing::random_weights(rng, parts.size());
        const DiscreteMeasure mixed = mixture(parts, ws);
        double total = 0.0;
        for (double w : mixed.weights()) {
            total += w;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("mean") {
    CHECK(mean(line({1, 3}, {0.25, 0.75})) == Vector{2.5});
}
