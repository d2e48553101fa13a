#pragma once

#include "probframe/numerics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace probframe {

inline constexpr double kWeightSumTolerance = 1e-12;
/// Atoms closer than this (Euclidean) are merged by coalesce().
inline constexpr double kCoalesceTolerance = 1e-12;

/// Finitely supported probability measure on R^dim. Weights are stored as
/// given; construction rejects anything that is not a probability vector
/// instead of renormalising it. Duplicate atoms are allowed until coalesced.
class DiscreteMeasure {
public:
    DiscreteMeasure(std::size_t dim, std::vector<Vector> atoms, std::vector<double> weights);

    static DiscreteMeasure uniform(std::size_t dim, std::vector<Vector> atoms);
    static DiscreteMeasure dirac(Vector point);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    const std::vector<Vector>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const Vector& atom(std::size_t i) const { return atoms_.at(i); }
    double weight(std::size_t i) const { return weights_.at(i); }

private:
    std::size_t dim_;
    std::vector<Vector> atoms_;
    std::vector<double> weights_;
};

/// Throws BadWeights or DimMismatch when the parts do not form a measure.
void validate(std::size_t dim, std::span<const Vector> atoms, std::span<const double> weights);

struct Coalescing {
    DiscreteMeasure measure;
    /// index[i] is the coalesced atom that original atom i was merged into.
    std::vector<std::size_t> index;
};

/// Merges atoms within tol of an earlier kept atom; tol = 0 merges only exact
/// duplicates. Kept atoms retain first-occurrence order and position.
Coalescing coalesce(const DiscreteMeasure& m, double tol = kCoalesceTolerance);

/// Same atoms (index-wise, within tol) and same weights (within tol).
bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol);

double second_moment(const DiscreteMeasure& m);
Vector mean(const DiscreteMeasure& m);

/// A_# m: atoms mapped through A, weights unchanged.
DiscreteMeasure pushforward_linear(const DiscreteMeasure& m, const Matrix& a);

/// T_# m where T is given by its value at each atom.
DiscreteMeasure pushforward_map(const DiscreteMeasure& m, std::span<const Vector> images);

/// Convex combination sum_k ws[k] * ms[k], coalesced. Components with zero
/// mixing weight are dropped.
DiscreteMeasure mixture(std::span<const DiscreteMeasure> ms, std::span<const double> ws);

}  // namespace probframe
