#include "probframe/redundancy.hpp"

#include "probframe/error.hpp"
#include "probframe/frames.hpp"

namespace probframe {

SynthesisMatrix synthesis_matrix(const DiscreteMeasure& m) {
    Matrix u(m.dim(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t d = 0; d < m.dim(); ++d) {
            u(d, i) = m.weight(i) * m.atom(i)[d];
        }
    }
    return {std::move(u), m.weights()};
}

std::size_t redundancy_rank(const DiscreteMeasure& m, std::optional<double> tol) {
    const DiscreteMeasure distinct = coalesce(m).measure;
    const SynthesisMatrix u = synthesis_matrix(distinct);
    return u.atom_count() - numeric_rank(u.matrix, tol);
}

double redundancy_trace(const DiscreteMeasure& m) {
    const DiscreteMeasure distinct = coalesce(m).measure;
    const Matrix s_inv = inverse_frame_operator(distinct);
    double total = 0.0;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        const Vector& x = distinct.atom(i);
        total += 1.0 - distinct.weight(i) * dot(x, s_inv * x);
    }
    return total;
}

std::pair<std::size_t, std::size_t> equivalence_redundancy_check(const DiscreteMeasure& m,
                                                                 const Matrix& a) {
    require(a.is_square() && a.rows() == m.dim(), ErrorCode::DimMismatch,
            "equivalence map does not match the measure dimension");
    (void)inverse(a);  // throws Singular
    return {redundancy_rank(m), redundancy_rank(pushforward_linear(m, a))};
}

}  // namespace probframe
