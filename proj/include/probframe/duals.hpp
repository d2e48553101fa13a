#pragma once

#include "probframe/frames.hpp"
#include "probframe/measures.hpp"
#include "probframe/numerics.hpp"
#include "probframe/transport.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace probframe {

/// Default absolute tolerance on ||A - Id|| for an exact dual.
inline constexpr double kExactTolerance = 1e-9;

enum class DualClass { exact, approximate, pseudo, none };

std::string_view to_string(DualClass c) noexcept;
DualClass dual_class_from_string(std::string_view s);

/// What a coupling gamma in Gamma(mu, nu) proves about nu as a dual of mu.
///
/// The mixed operator is stored untransposed, A = sum gamma_ij x_i y_j^t.
/// Constructions that act on nu (Neumann partial sums, rescue) use its
/// transpose internally.
struct DualCertificate {
    Coupling coupling;
    Matrix mixed_operator;
    double deviation = 0.0;  // ||A - Id|| in spectral norm
    DualClass classification = DualClass::none;
    /// 1 / (B_mu ||A^{-1}||^2), present when A is invertible.
    std::optional<double> dual_lower_bound;
    /// M2(nu), present when A is invertible.
    std::optional<double> dual_upper_bound;
    double tol = kExactTolerance;
};

/// Strictest class satisfied: deviation <= tol -> exact; deviation < 1 ->
/// approximate; A invertible -> pseudo; otherwise none.
DualCertificate certify(const Coupling& c, double tol = kExactTolerance);

enum class DualRequirement { approximate, pseudo };

/// (A^t S^{-1})_# mu with its graph coupling; the mixed operator is A.
/// With DualRequirement::pseudo only invertibility of A is demanded.
DualFrame approx_dual_pushforward(const DiscreteMeasure& mu, const Matrix& a,
                                  DualRequirement requirement = DualRequirement::approximate);

/// T_# mu with T(x) = A^t S^{-1} x + h(x) - sum_j w_j <S^{-1} x, y_j> h(y_j).
/// The correction makes the mixed operator exactly A for any h; A defaults to
/// the identity, giving an exact dual.
DualFrame pushforward_dual(const DiscreteMeasure& mu, std::span<const Vector> h,
                           std::optional<Matrix> a = std::nullopt);

struct NeumannDual {
    DiscreteMeasure measure;  // nu_N
    Coupling coupling;        // (Id, P_N)_# gamma
    double error_bound;       // ||Id - A^t||^(N+1)
};

/// nu_N = (sum_{k=0}^N (Id - A^t)^k)_# nu for A the mixed operator of c.
/// Throws NotApproximate unless ||A - Id|| < 1.
NeumannDual neumann_approx_dual(const Coupling& c, unsigned terms);

/// (A^t)^{-1}_# nu with the pushed coupling; an exact dual whenever the mixed
/// operator A is invertible. Throws SingularMixedOperator.
DualFrame rescue_exact_dual(const Coupling& c);

struct UncertaintyProduct {
    double lhs;  // (f^t A^{-1} S_mu A^{-t} f) (f^t S_nu f)
    double rhs;  // ||f||^4
};

UncertaintyProduct uncertainty_product(const Coupling& c, std::span<const double> f);

struct BoundInequalities {
    double lower_mu, upper_mu;
    double lower_nu, upper_nu;
    double inverse_norm;   // ||A^{-1}||
    double slack_nu;       // A_nu - 1 / (B_mu ||A^{-1}||^2)
    double slack_mu;       // A_mu - 1 / (B_nu ||A^{-1}||^2)
    bool equality_nu;      // |slack_nu| <= 1e-8
    bool equality_mu;      // |slack_mu| <= 1e-8
};

/// Both marginals must be frames (NotAFrame) and A invertible
/// (SingularMixedOperator).
BoundInequalities bound_inequalities(const Coupling& c);

/// Certificate of w nu_1 + (1 - w) nu_2 under w gamma_1 + (1 - w) gamma_2.
/// Both couplings must share their source (SourceMismatch) and certify at
/// least approximate (NotApproximate).
DualCertificate convex_combination_certificate(const Coupling& c1, const Coupling& c2, double w,
                                               double tol = kExactTolerance);

}  // namespace probframe
