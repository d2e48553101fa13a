#pragma once

#include "probframe/frames.hpp"
#include "probframe/measures.hpp"
#include "probframe/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace probframe::testing {

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit(rng);
}

/// Box-Muller pair of independent standard normals.
inline std::pair<double, double> normal_pair(std::mt19937_64& rng) {
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = unit(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
}

inline Vector normal_vector(std::mt19937_64& rng, std::size_t n) {
    Vector v(n);
    for (std::size_t i = 0; i < n; i += 2) {
        const auto [a, b] = normal_pair(rng);
        v[i] = a;
        if (i + 1 < n) {
            v[i + 1] = b;
        }
    }
    return v;
}

inline Matrix normal_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const Vector r = normal_vector(rng, cols);
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = r[j];
        }
    }
    return m;
}

/// Positive weights in [0.5, 1.5] scaled to sum to one.
inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t count) {
    std::vector<double> w(count);
    double total = 0.0;
    for (double& x : w) {
        x = uniform(rng, 0.5, 1.5);
        total += x;
    }
    for (double& x : w) {
        x /= total;
    }
    return w;
}

inline DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t n, std::size_t count,
                                      bool uniform_weights = false) {
    std::vector<Vector> atoms;
    for (std::size_t i = 0; i < count; ++i) {
        atoms.push_back(normal_vector(rng, n));
    }
    if (uniform_weights) {
        return DiscreteMeasure::uniform(n, std::move(atoms));
    }
    return DiscreteMeasure(n, std::move(atoms), random_weights(rng, count));
}

/// Random frame with lambda_min(S) >= floor, redrawn until it qualifies.
inline DiscreteMeasure random_frame(std::mt19937_64& rng, std::size_t n, std::size_t count,
                                    double floor = 1e-2) {
    for (;;) {
        DiscreteMeasure m = random_measure(rng, n, count);
        if (analyze(m).lower_bound >= floor) {
            return m;
        }
    }
}

/// I + E with ||E|| = deviation in spectral norm.
inline Matrix near_identity(std::mt19937_64& rng, std::size_t n, double deviation) {
    Matrix e = normal_matrix(rng, n, n);
    e *= deviation / spectral_norm(e);
    return Matrix::identity(n) + e;
}

/// Uniform measure on `count` standard normal points of R^2 shifted by e_1.
inline DiscreteMeasure shifted_gaussian_cloud(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::vector<Vector> atoms;
    for (std::size_t i = 0; i < count; ++i) {
        const auto [a, b] = normal_pair(rng);
        atoms.push_back({a + 1.0, b});
    }
    return DiscreteMeasure::uniform(2, std::move(atoms));
}

}  // namespace probframe::testing
