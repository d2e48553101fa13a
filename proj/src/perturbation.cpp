#include "probframe/perturbation.hpp"

#include "probframe/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace probframe {

bool HypothesisFlags::all_evaluated_hold() const noexcept {
    bool any = false;
    for (const std::optional<bool>& f :
         {quadratic_closeness, ac_le_one, m2c_lt_one, inv_closeness, w2_below_sqrt_an}) {
        if (f) {
            any = true;
            if (!*f) {
                return false;
            }
        }
    }
    return any;
}

namespace {

constexpr double kClaimSlack = 1e-9;
constexpr double kProductSlack = 1e-12;

void require_same_dim(const DiscreteMeasure& mu, const DiscreteMeasure& eta) {
    require(mu.dim() == eta.dim(), ErrorCode::DimMismatch, "measures live in different dimensions");
}

void require_between(const Coupling& c, const DiscreteMeasure& source, const DiscreteMeasure& target,
                     const char* what) {
    require(same_measure(c.source(), source, kMarginalTolerance) &&
                same_measure(c.target(), target, kMarginalTolerance),
            ErrorCode::MarginalMismatch, what);
}

Matrix invert_mixed(const Matrix& a) {
    try {
        return inverse(a);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Singular) {
            throw Error(ErrorCode::SingularMixedOperator, "base mixed frame operator is not invertible");
        }
        throw;
    }
}

double displacement_constant(const Coupling& c) {
    const std::size_t n = c.source().dim();
    Matrix d(n, n);
    for (std::size_t i = 0; i < c.source().size(); ++i) {
        for (std::size_t j = 0; j < c.target().size(); ++j) {
            const double p = c.plan()(i, j);
            if (p == 0.0) {
                continue;
            }
            const Vector& x = c.source().atom(i);
            const Vector& y = c.target().atom(j);
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    d(a, b) += p * (x[a] - y[a]) * (x[b] - y[b]);
                }
            }
        }
    }
    return eig_sym(d).max();
}

double inverse_displaced_cost(const Coupling& c, const Matrix& inv) {
    double total = 0.0;
    for (std::size_t j = 0; j < c.target().size(); ++j) {
        const Vector mapped = inv * c.target().atom(j);
        for (std::size_t i = 0; i < c.source().size(); ++i) {
            const double p = c.plan()(i, j);
            if (p != 0.0) {
                total += p * squared_distance(c.source().atom(i), mapped);
            }
        }
    }
    return total;
}

double closeness_estimate(double a, double lambda) {
    const double gap = std::sqrt(a) - std::sqrt(lambda);
    return gap * gap;
}

}  // namespace

PerturbationReport perturbed_frame_bound(const DiscreteMeasure& mu, const DiscreteMeasure& eta,
                                         const std::optional<Coupling>& c) {
    require_same_dim(mu, eta);
    const FrameReport mu_report = analyze(mu);
    require(mu_report.is_frame, ErrorCode::NotAFrame, "reference measure is not a frame");

    PerturbationReport r;
    if (c) {
        require_between(*c, eta, mu, "coupling must lie in Gamma(eta, mu)");
        r.lambda = transport_cost(*c);
    } else {
        const TransportResult ot = solve_w2(eta, mu);
        r.lambda = ot.cost;
        r.w2 = ot.w2;
    }
    r.lower_bound = mu_report.lower_bound;
    r.measured_lower_bound = analyze(eta).lower_bound;
    const bool close = r.lambda < r.lower_bound;
    r.flags.quadratic_closeness = close;
    if (close) {
        r.lower_bound_estimate = closeness_estimate(r.lower_bound, r.lambda);
        r.claim_made = true;
        r.claim_holds = *r.measured_lower_bound >= *r.lower_bound_estimate - kClaimSlack;
    }
    return r;
}

PerturbationReport perturbed_approx_dual(const DiscreteMeasure& mu, const Coupling& dual,
                                         const DiscreteMeasure& eta, const Coupling& c, double tol) {
    require_same_dim(mu, eta);
    require(same_measure(dual.source(), mu, kMarginalTolerance), ErrorCode::MarginalMismatch,
            "dual coupling must start at mu");
    require_between(c, eta, mu, "coupling must lie in Gamma(eta, mu)");
    require(certify(dual, tol).classification == DualClass::exact, ErrorCode::NotExactDual,
            "base coupling does not certify an exact dual");

    PerturbationReport r;
    r.lambda = transport_cost(c);
    r.lower_bound = analyze(mu).lower_bound;
    const double upper = analyze(dual.target()).upper_bound;
    r.dual_upper_bound = upper;
    r.measured_lower_bound = analyze(eta).lower_bound;
    r.deviation_bound = std::sqrt(r.lambda * upper);
    r.certificate = certify(glue(c, dual), tol);

    const bool close = r.lambda < r.lower_bound;
    const bool product = r.lower_bound * upper <= 1.0 + kProductSlack;
    r.flags.quadratic_closeness = close;
    r.flags.ac_le_one = product;
    if (close) {
        r.lower_bound_estimate = closeness_estimate(r.lower_bound, r.lambda);
    }
    if (close && product) {
        const double dev = r.certificate->deviation;
        r.claim_made = true;
        r.claim_holds = dev < std::sqrt(r.lower_bound * upper) + kClaimSlack &&
                        dev <= *r.deviation_bound + kClaimSlack;
    }
    return r;
}

PerturbationReport variant_certificates(const DiscreteMeasure& mu, const Coupling& base,
                                        const DiscreteMeasure& eta, const Coupling& c, double tol) {
    require_same_dim(mu, eta);
    require(same_measure(base.source(), mu, kMarginalTolerance), ErrorCode::MarginalMismatch,
            "base coupling must start at mu");
    require_between(c, eta, mu, "coupling must lie in Gamma(eta, mu)");

    const DualCertificate base_cert = certify(base, tol);
    const Matrix inv = invert_mixed(base_cert.mixed_operator);

    PerturbationReport r;
    r.lambda = transport_cost(c);
    r.lower_bound = analyze(mu).lower_bound;
    r.measured_lower_bound = analyze(eta).lower_bound;
    const double upper = analyze(base.target()).upper_bound;
    r.dual_upper_bound = upper;
    r.certificate = certify(glue(c, base), tol);

    double bound = std::numeric_limits<double>::infinity();
    r.directional_constant = displacement_constant(c);
    if (base_cert.classification == DualClass::exact) {
        const double m2 = second_moment(base.target());
        r.flags.m2c_lt_one = m2 * *r.directional_constant < 1.0;
        bound = std::min(bound, std::sqrt(m2 * *r.directional_constant));
    }
    r.inverse_displaced_cost = inverse_displaced_cost(c, inv);
    r.flags.inv_closeness = *r.inverse_displaced_cost * upper < 1.0;
    bound = std::min(bound, std::sqrt(*r.inverse_displaced_cost * upper));
    r.deviation_bound = bound;

    if (r.flags.m2c_lt_one.value_or(false) || *r.flags.inv_closeness) {
        const double dev = r.certificate->deviation;
        r.claim_made = true;
        r.claim_holds = dev < 1.0 && dev <= bound + kClaimSlack;
    }
    return r;
}

DualFrame matched_mixed_dual(const DiscreteMeasure& mu, const Coupling& base,
                             const DiscreteMeasure& eta, const Coupling& c, double tol) {
    require_same_dim(mu, eta);
    require(same_measure(base.source(), mu, kMarginalTolerance), ErrorCode::MarginalMismatch,
            "base coupling must start at mu");
    require_between(c, eta, mu, "coupling must lie in Gamma(eta, mu)");
    const DualCertificate cert = certify(base, tol);
    require(cert.classification == DualClass::exact || cert.classification == DualClass::approximate,
            ErrorCode::NotApproximate, "base pair is not an approximate dual pair");
    require(transport_cost(c) < analyze(mu).lower_bound, ErrorCode::EtaNotFrame,
            "eta is not close enough to mu to be a frame");
    require(analyze(eta).is_frame, ErrorCode::EtaNotFrame, "eta is not a frame");
    return approx_dual_pushforward(eta, cert.mixed_operator);
}

DiscreteMeasure greedy_subsample(const DiscreteMeasure& eta, std::size_t n, std::uint64_t seed) {
    const DiscreteMeasure base = coalesce(eta).measure;
    const std::size_t m = base.size();
    require(n >= 1, ErrorCode::TooFewSamples, "subsample needs at least one atom");
    if (n >= m) {
        return base;
    }

    std::vector<double> dist(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            dist[i * m + j] = squared_distance(base.atom(i), base.atom(j));
        }
    }
    const auto d = [&](std::size_t i, std::size_t j) { return dist[i * m + j]; };

    const auto voronoi_cost = [&](const std::vector<std::size_t>& sel) {
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t s : sel) {
                best = std::min(best, d(i, s));
            }
            total += base.weight(i) * best;
        }
        return total;
    };

    // Unselected atoms ordered by distance to each atom, for swap candidates.
    constexpr std::size_t kCandidates = 8;
    constexpr int kPasses = 5;
    std::vector<std::vector<std::size_t>> neighbours(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return d(i, a) < d(i, b); });
        neighbours[i] = std::move(order);
    }

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> selected{static_cast<std::size_t>(rng() % m)};
    std::vector<char> in_set(m, 0);
    in_set[selected[0]] = 1;

    while (selected.size() < n) {
        std::size_t far = m;
        double far_dist = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (in_set[i]) {
                continue;
            }
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t s : selected) {
                best = std::min(best, d(i, s));
            }
            if (best > far_dist) {
                far_dist = best;
                far = i;
            }
        }
        selected.push_back(far);
        in_set[far] = 1;

        double cost = voronoi_cost(selected);
        for (int pass = 0; pass < kPasses; ++pass) {
            bool improved = false;
            for (std::size_t k = 0; k < selected.size(); ++k) {
                std::size_t tried = 0;
                for (std::size_t cand : neighbours[selected[k]]) {
                    if (tried == kCandidates) {
                        break;
                    }
                    if (in_set[cand]) {
                        continue;
                    }
                    ++tried;
                    const std::size_t old = selected[k];
                    selected[k] = cand;
                    const double trial = voronoi_cost(selected);
                    if (trial < cost * (1.0 - 1e-12)) {
                        cost = trial;
                        in_set[old] = 0;
                        in_set[cand] = 1;
                        improved = true;
                        break;
                    }
                    selected[k] = old;
                }
            }
            if (!improved) {
                break;
            }
        }
    }

    std::sort(selected.begin(), selected.end());
    std::vector<double> weights(selected.size(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t owner = 0;
        for (std::size_t k = 1; k < selected.size(); ++k) {
            if (d(i, selected[k]) < d(i, selected[owner])) {
                owner = k;
            }
        }
        weights[owner] += base.weight(i);
    }
    std::vector<Vector> atoms;
    atoms.reserve(selected.size());
    for (std::size_t s : selected) {
        atoms.push_back(base.atom(s));
    }
    return DiscreteMeasure(base.dim(), std::move(atoms), std::move(weights));
}

namespace {

PipelineResult run_pipeline(const DiscreteMeasure& eta, DiscreteMeasure mu_hat,
                            const PipelineOptions& options, bool estimated) {
    const FrameReport eta_report = analyze(eta);
    require(eta_report.is_frame, ErrorCode::EtaNotFrame, "eta is not a frame");
    const double a_eta = eta_report.lower_bound;

    DualFrame nu_hat = canonical_dual(mu_hat);
    const TransportResult ot = solve_w2(eta, mu_hat);

    PerturbationReport r;
    r.estimated = estimated;
    r.lambda = ot.cost;
    r.w2 = ot.w2;
    r.lower_bound = a_eta;
    r.measured_lower_bound = analyze(mu_hat).lower_bound;
    if (r.lambda < a_eta) {
        r.lower_bound_estimate = closeness_estimate(a_eta, r.lambda);
    }
    const double a_n = options.a_n.value_or(a_eta / 4.0);
    const double c_n = analyze(nu_hat.measure).upper_bound;
    r.a_n = a_n;
    r.c_n = c_n;
    r.dual_upper_bound = c_n;
    r.deviation_bound = std::sqrt(r.lambda * c_n);
    r.flags.w2_below_sqrt_an = ot.w2 < std::sqrt(a_n);
    r.flags.ac_le_one = a_n * c_n <= 1.0 + kProductSlack;
    r.certificate = certify(glue(ot.plan, nu_hat.coupling), options.tol);

    if (*r.flags.w2_below_sqrt_an && *r.flags.ac_le_one) {
        const double dev = r.certificate->deviation;
        r.claim_made = true;
        r.claim_holds = dev < 1.0 && dev <= *r.deviation_bound + kClaimSlack;
    }
    return {std::move(mu_hat), std::move(nu_hat), std::move(r)};
}

}  // namespace

PipelineResult discrete_dual_pipeline(const DiscreteMeasure& eta, const PipelineOptions& options) {
    require(options.samples >= eta.dim(), ErrorCode::TooFewSamples,
            "need at least as many samples as the dimension");
    require(analyze(eta).is_frame, ErrorCode::EtaNotFrame, "eta is not a frame");
    DiscreteMeasure mu_hat = greedy_subsample(eta, options.samples, options.seed);
    return run_pipeline(eta, std::move(mu_hat), options, false);
}

PipelineResult discrete_dual_pipeline(const Sampler& sampler, std::size_t dim,
                                      const PipelineOptions& options) {
    require(options.samples >= dim, ErrorCode::TooFewSamples,
            "need at least as many samples as the dimension");
    std::mt19937_64 rng(options.seed);
    const auto draw = [&](std::size_t count) {
        std::vector<Vector> atoms;
        atoms.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            Vector x = sampler(rng);
            require(x.size() == dim, ErrorCode::DimMismatch, "sampler returned a vector of wrong size");
            atoms.push_back(std::move(x));
        }
        return coalesce(DiscreteMeasure::uniform(dim, std::move(atoms))).measure;
    };
    DiscreteMeasure mu_hat = draw(options.samples);
    const std::size_t held = options.held_out != 0 ? options.held_out
                                                   : std::max<std::size_t>(4 * options.samples, 200);
    const DiscreteMeasure eta_hat = draw(held);
    return run_pipeline(eta_hat, std::move(mu_hat), options, true);
}

}  // namespace probframe
