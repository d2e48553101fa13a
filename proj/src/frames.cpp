#include "probframe/frames.hpp"

#include "probframe/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace probframe {

Matrix frame_operator(const DiscreteMeasure& m) {
    const std::size_t n = m.dim();
    Matrix s(n, n);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Vector& x = m.atom(i);
        const double w = m.weight(i);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                s(a, b) += w * x[a] * x[b];
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            s(a, b) = s(b, a);
        }
    }
    return s;
}

FrameReport analyze(const DiscreteMeasure& m, FrameTolerances tol) {
    FrameReport r;
    r.frame_operator = frame_operator(m);
    const Spectrum spectrum = eig_sym(r.frame_operator);
    r.lower_bound = spectrum.min();
    r.upper_bound = spectrum.max();
    r.is_frame = r.lower_bound > tol.frame * std::max(1.0, r.upper_bound);
    r.is_tight = r.is_frame && (r.upper_bound - r.lower_bound) <= tol.tight * r.upper_bound;
    r.is_parseval = r.is_tight && std::abs(r.upper_bound - 1.0) <= tol.tight &&
                    std::abs(r.lower_bound - 1.0) <= tol.tight;
    r.second_moment = second_moment(m);
    return r;
}

Matrix inverse_frame_operator(const DiscreteMeasure& m, FrameTolerances tol) {
    const FrameReport r = analyze(m, tol);
    if (!r.is_frame) {
        std::ostringstream msg;
        msg << "lambda_min(S) = " << r.lower_bound << " with lambda_max(S) = " << r.upper_bound;
        throw Error(ErrorCode::NotAFrame, msg.str());
    }
    return inverse(r.frame_operator);
}

DualFrame canonical_dual(const DiscreteMeasure& m) {
    const Matrix s_inv = inverse_frame_operator(m);
    std::vector<Vector> images;
    images.reserve(m.size());
    for (const Vector& x : m.atoms()) {
        images.push_back(s_inv * x);
    }
    Coupling c = graph_coupling(m, images);
    DiscreteMeasure dual = c.target();
    return {std::move(dual), std::move(c)};
}

double rkhs_kernel(const DiscreteMeasure& m, std::span<const double> x, std::span<const double> y) {
    require(x.size() == m.dim() && y.size() == m.dim(), ErrorCode::DimMismatch,
            "kernel arguments must match the measure dimension");
    return dot(x, inverse_frame_operator(m) * y);
}

double reproducing_residual(const DiscreteMeasure& m, std::span<const double> u,
                            std::span<const double> z) {
    require(u.size() == m.dim() && z.size() == m.dim(), ErrorCode::DimMismatch,
            "reproducing check arguments must match the measure dimension");
    const Matrix s_inv = inverse_frame_operator(m);
    const Vector s_inv_z = s_inv * z;
    double total = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Vector& x = m.atom(i);
        total += m.weight(i) * dot(u, x) * dot(s_inv_z, x);
    }
    return std::abs(total - dot(u, z));
}

}  // namespace probframe
