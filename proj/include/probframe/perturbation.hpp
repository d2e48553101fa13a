#pragma once

#include "probframe/duals.hpp"
#include "probframe/frames.hpp"
#include "probframe/measures.hpp"
#include "probframe/transport.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>

namespace probframe {

/// Which closeness hypotheses were evaluated and whether they hold. An empty
/// optional means the hypothesis does not apply to the operation.
struct HypothesisFlags {
    std::optional<bool> quadratic_closeness;  // lambda < A
    std::optional<bool> ac_le_one;            // A C <= 1
    std::optional<bool> m2c_lt_one;           // M2(nu) C_direction < 1
    std::optional<bool> inv_closeness;        // sum pi |x - A^{-1} y|^2 < 1 / C
    std::optional<bool> w2_below_sqrt_an;     // W2(eta, mu_hat) < sqrt(A_N)

    /// True when at least one flag was evaluated and every evaluated flag holds.
    bool all_evaluated_hold() const noexcept;
};

struct PerturbationReport {
    double lambda = 0.0;       // transport cost of the closeness coupling
    double lower_bound = 0.0;  // A, lower frame bound of the reference frame
    std::optional<double> dual_upper_bound;       // C, upper frame bound of the dual
    std::optional<double> lower_bound_estimate;   // (sqrt A - sqrt lambda)^2
    std::optional<double> measured_lower_bound;   // lambda_min of the perturbed frame operator
    std::optional<double> directional_constant;   // lambda_max(sum pi (x - y)(x - y)^t)
    std::optional<double> inverse_displaced_cost; // sum pi |x - A^{-1} y|^2
    std::optional<double> deviation_bound;        // bound the glued deviation must respect
    std::optional<double> w2;
    std::optional<double> a_n;
    std::optional<double> c_n;
    HypothesisFlags flags;
    std::optional<DualCertificate> certificate;
    bool claim_made = false;   // hypotheses held, so an inequality was checked
    bool claim_holds = true;   // result of that check (true when no claim was made)
    bool estimated = false;    // closeness measured against a held-out sample only
};

/// Lower frame bound of eta from its closeness to the frame mu. c must lie in
/// Gamma(eta, mu); without c the optimal W2 plan is used.
PerturbationReport perturbed_frame_bound(const DiscreteMeasure& mu, const DiscreteMeasure& eta,
                                         const std::optional<Coupling>& c = std::nullopt);

/// Glues c in Gamma(eta, mu) with an exact dual coupling in Gamma(mu, nu) and
/// certifies nu as an approximate dual of eta. Claims deviation < sqrt(A C)
/// when lambda < A and A C <= 1.
PerturbationReport perturbed_approx_dual(const DiscreteMeasure& mu, const Coupling& dual,
                                         const DiscreteMeasure& eta, const Coupling& c,
                                         double tol = kExactTolerance);

/// The directional (M2(nu) C_direction < 1, exact base) and inverse-displaced
/// (sum pi |x - A^{-1} y|^2 < 1 / C) closeness tests on the same glued
/// coupling. Throws SingularMixedOperator when the base mixed operator is
/// singular.
PerturbationReport variant_certificates(const DiscreteMeasure& mu, const Coupling& base,
                                        const DiscreteMeasure& eta, const Coupling& c,
                                        double tol = kExactTolerance);

/// xi = (A^t S_eta^{-1})_# eta with its graph coupling, whose mixed operator is
/// the mixed operator A of the approximate base pair.
DualFrame matched_mixed_dual(const DiscreteMeasure& mu, const Coupling& base,
                             const DiscreteMeasure& eta, const Coupling& c,
                             double tol = kExactTolerance);

/// N-point subsample of the coalesced eta with Voronoi (eta-mass) weights.
/// Built incrementally: each size adds the farthest atom to the previous
/// selection and then applies improving swaps, so W2(eta, result) never
/// increases with N. The first atom is picked by the seed.
DiscreteMeasure greedy_subsample(const DiscreteMeasure& eta, std::size_t n, std::uint64_t seed);

using Sampler = std::function<Vector(std::mt19937_64&)>;

struct PipelineOptions {
    std::size_t samples = 0;  // N
    std::uint64_t seed = 0;
    /// Defaults to A_eta / 4.
    std::optional<double> a_n;
    /// Size of the held-out draw in sampler mode; 0 picks max(4 N, 200).
    std::size_t held_out = 0;
    double tol = kExactTolerance;
};

struct PipelineResult {
    DiscreteMeasure mu_hat;
    DualFrame nu_hat;  // canonical dual of mu_hat
    PerturbationReport report;
};

/// Discrete approximate dual of eta: subsample, take the canonical dual of the
/// subsample, glue the optimal W2 plan with it and certify against eta.
PipelineResult discrete_dual_pipeline(const DiscreteMeasure& eta, const PipelineOptions& options);

/// Sampler variant: mu_hat is the uniform empirical measure of N draws and
/// every eta quantity is measured on a held-out draw (report.estimated).
PipelineResult discrete_dual_pipeline(const Sampler& sampler, std::size_t dim,
                                      const PipelineOptions& options);

}  // namespace probframe
