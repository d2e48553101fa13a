#pragma once

#include "probframe/measures.hpp"
#include "probframe/numerics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace probframe {

inline constexpr double kMarginalTolerance = 1e-10;

/// A transport plan between two discrete measures: plan(i, j) is the mass
/// sent from source atom i to target atom j. Row sums match the source
/// weights and column sums the target weights (within kMarginalTolerance).
class Coupling {
public:
    Coupling(DiscreteMeasure source, DiscreteMeasure target, Matrix plan);

    const DiscreteMeasure& source() const noexcept { return source_; }
    const DiscreteMeasure& target() const noexcept { return target_; }
    const Matrix& plan() const noexcept { return plan_; }

    /// Merges duplicate atoms on both sides, summing the matching plan rows
    /// and columns.
    Coupling coalesced(double tol = kCoalesceTolerance) const;

    /// Swaps the roles of source and target.
    Coupling transposed() const;

private:
    DiscreteMeasure source_;
    DiscreteMeasure target_;
    Matrix plan_;
};

struct TransportResult {
    double cost;  // squared-distance mass
    double w2;    // sqrt(cost)
    Coupling plan;
    double slackness_residual = 0.0;
    double dual_infeasibility = 0.0;
};

Coupling product_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// (Id, T)_# mu with T given on each atom; the target T_# mu is coalesced.
Coupling graph_coupling(const DiscreteMeasure& mu, std::span<const Vector> images);

/// (Id, Id)_# mu.
Coupling diagonal_coupling(const DiscreteMeasure& mu);

/// (Id, A)_# c: every target atom y is replaced by A y, the plan is unchanged.
Coupling push_target(const Coupling& c, const Matrix& a);

/// sum_ij plan(i, j) x_i y_j^t.
Matrix mixed_frame_operator(const Coupling& c);

/// sum_ij plan(i, j) |x_i - y_j|^2.
double transport_cost(const Coupling& c);

/// Exact W2 by the transportation simplex on squared Euclidean costs.
TransportResult solve_w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Enumerates all N! assignment plans. Uniform weights, equal atom counts and
/// N <= 7 only (Unsupported otherwise).
TransportResult w2_bruteforce(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Gluing through the shared middle marginal:
/// out(i, k) = sum_j c12(i, j) c23(j, k) / w_j.
Coupling glue(const Coupling& c12, const Coupling& c23);

struct MixedSearchOptions {
    std::size_t max_iterations = 10000;
    double gap_tolerance = 1e-8;
};

struct MixedSearchResult {
    Coupling coupling;
    double residual;      // ||mixed(coupling) - target||_F
    double duality_gap;   // last Frank-Wolfe gap, an upper bound on f - f*
    std::size_t iterations;
    std::vector<double> residual_history;
};

/// Minimises ||sum_ij g_ij x_i y_j^t - target||_F^2 over the transportation
/// polytope Gamma(mu, nu) with away-step Frank-Wolfe and exact line search.
/// The linear minimisation oracle is the transportation simplex.
MixedSearchResult optimize_mixed_operator(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                          const Matrix& target, MixedSearchOptions options = {});

}  // namespace probframe
