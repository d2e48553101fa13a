#pragma once

#include "probframe/measures.hpp"
#include "probframe/numerics.hpp"

#include <cstddef>
#include <optional>
#include <utility>

namespace probframe {

/// Synthesis operator of an N-atom measure as an n x N matrix: column i is
/// w_i x_i, i.e. the image of the i-th coordinate vector of weighted N-space.
struct SynthesisMatrix {
    Matrix matrix;
    std::vector<double> weights;

    std::size_t dim() const noexcept { return matrix.rows(); }
    std::size_t atom_count() const noexcept { return matrix.cols(); }
};

SynthesisMatrix synthesis_matrix(const DiscreteMeasure& m);

/// Kernel dimension of the synthesis operator of the coalesced measure:
/// N - rank. Defined for every measure, frame or not.
std::size_t redundancy_rank(const DiscreteMeasure& m, std::optional<double> tol = std::nullopt);

/// sum_i (1 - w_i x_i^t S^{-1} x_i) over the coalesced atoms, the trace of the
/// projection onto the kernel of the synthesis operator in the orthonormal
/// basis 1/sqrt(w_i) e_i. Throws NotAFrame.
double redundancy_trace(const DiscreteMeasure& m);

/// (redundancy of m, redundancy of A_# m). Throws Singular unless A is
/// invertible.
std::pair<std::size_t, std::size_t> equivalence_redundancy_check(const DiscreteMeasure& m,
                                                                 const Matrix& a);

}  // namespace probframe
