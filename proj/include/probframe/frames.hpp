#pragma once

#include "probframe/measures.hpp"
#include "probframe/numerics.hpp"
#include "probframe/transport.hpp"

namespace probframe {

struct FrameTolerances {
    /// lambda_min > frame * max(1, lambda_max) declares a frame.
    double frame = 1e-10;
    /// (B - A) / B <= tight declares a tight frame; Parseval also needs |B - 1| <= tight.
    double tight = 1e-9;
};

struct FrameReport {
    Matrix frame_operator;
    double lower_bound = 0.0;  // lambda_min(S), the optimal lower frame bound
    double upper_bound = 0.0;  // lambda_max(S), the optimal upper frame bound
    bool is_frame = false;
    bool is_tight = false;
    bool is_parseval = false;
    double second_moment = 0.0;
};

/// S = sum_i w_i x_i x_i^t.
Matrix frame_operator(const DiscreteMeasure& m);

FrameReport analyze(const DiscreteMeasure& m, FrameTolerances tol = {});

/// S^{-1}; throws NotAFrame when m fails the frame test of analyze().
Matrix inverse_frame_operator(const DiscreteMeasure& m, FrameTolerances tol = {});

/// A measure paired with the coupling that makes it a (possibly approximate)
/// dual of the coupling's source.
struct DualFrame {
    DiscreteMeasure measure;
    Coupling coupling;
};

/// S^{-1}_# m with the graph coupling (Id, S^{-1})_# m.
DualFrame canonical_dual(const DiscreteMeasure& m);

/// Reproducing kernel x^t S^{-1} y of the range of the analysis operator.
double rkhs_kernel(const DiscreteMeasure& m, std::span<const double> x, std::span<const double> y);

/// |sum_i w_i <u, x_i> K(z, x_i) - <u, z>|: the reproducing property for
/// f = <u, .> evaluated at z.
double reproducing_residual(const DiscreteMeasure& m, std::span<const double> u,
                            std::span<const double> z);

}  // namespace probframe
