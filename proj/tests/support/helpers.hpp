#pragma once

#include "probframe/error.hpp"
#include "probframe/measures.hpp"

#include <optional>
#include <vector>

namespace probframe::testing {

inline DiscreteMeasure line(std::vector<double> xs, std::vector<double> ws) {
    std::vector<Vector> atoms;
    for (double x : xs) {
        atoms.push_back({x});
    }
    return DiscreteMeasure(1, std::move(atoms), std::move(ws));
}

inline DiscreteMeasure delta(double x) {
    return line({x}, {1.0});
}

/// mu_k = 1/2 delta_1 + 1/2 delta_{1 - 1/(k+1)}.
inline DiscreteMeasure mu_k(int k) {
    return line({1.0, 1.0 - 1.0 / (k + 1)}, {0.5, 0.5});
}

template <class F>
std::optional<ErrorCode> code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

}  // namespace probframe::testing

#define CHECK_CODE(expr, expected) \
    CHECK(::probframe::testing::code_of([&] { (void)(expr); }) == ::probframe::ErrorCode::expected)
