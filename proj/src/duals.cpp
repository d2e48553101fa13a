#include "probframe/duals.hpp"

#include "probframe/error.hpp"

#include <cmath>
#include <sstream>

namespace probframe {

std::string_view to_string(DualClass c) noexcept {
    switch (c) {
        case DualClass::exact: return "exact";
        case DualClass::approximate: return "approximate";
        case DualClass::pseudo: return "pseudo";
        case DualClass::none: return "none";
    }
    return "none";
}

DualClass dual_class_from_string(std::string_view s) {
    if (s == "exact") return DualClass::exact;
    if (s == "approximate") return DualClass::approximate;
    if (s == "pseudo") return DualClass::pseudo;
    if (s == "none") return DualClass::none;
    throw Error(ErrorCode::ParseError, "unknown dual classification '" + std::string(s) + "'");
}

namespace {

std::optional<Matrix> try_inverse(const Matrix& a) {
    try {
        return inverse(a);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Singular) {
            throw;
        }
        return std::nullopt;
    }
}

Matrix require_inverse(const Matrix& a) {
    std::optional<Matrix> inv = try_inverse(a);
    require(inv.has_value(), ErrorCode::SingularMixedOperator, "mixed frame operator is not invertible");
    return *std::move(inv);
}

double deviation_from_identity(const Matrix& a) {
    return spectral_norm(a - Matrix::identity(a.rows()));
}

}  // namespace

DualCertificate certify(const Coupling& c, double tol) {
    DualCertificate cert{c, mixed_frame_operator(c), 0.0, DualClass::none, std::nullopt,
                         std::nullopt, tol};
    cert.deviation = deviation_from_identity(cert.mixed_operator);
    const std::optional<Matrix> inv = try_inverse(cert.mixed_operator);
    if (cert.deviation <= tol) {
        cert.classification = DualClass::exact;
    } else if (cert.deviation < 1.0) {
        cert.classification = DualClass::approximate;
    } else if (inv) {
        cert.classification = DualClass::pseudo;
    }
    if (inv) {
        const double upper_mu = analyze(c.source()).upper_bound;
        const double inv_norm = spectral_norm(*inv);
        cert.dual_lower_bound = 1.0 / (upper_mu * inv_norm * inv_norm);
        cert.dual_upper_bound = second_moment(c.target());
    }
    return cert;
}

DualFrame approx_dual_pushforward(const DiscreteMeasure& mu, const Matrix& a,
                                  DualRequirement requirement) {
    require(a.is_square() && a.rows() == mu.dim(), ErrorCode::DimMismatch,
            "mixed operator does not match the measure dimension");
    const Matrix s_inv = inverse_frame_operator(mu);
    if (requirement == DualRequirement::approximate) {
        const double dev = deviation_from_identity(a);
        if (!(dev < 1.0)) {
            std::ostringstream msg;
            msg << "||A - Id|| = " << dev << " is not below 1";
            throw Error(ErrorCode::DeviationTooLarge, msg.str());
        }
    } else {
        (void)require_inverse(a);
    }
    const Matrix map = a.transposed() * s_inv;
    std::vector<Vector> images;
    images.reserve(mu.size());
    for (const Vector& x : mu.atoms()) {
        images.push_back(map * x);
    }
    Coupling c = graph_coupling(mu, images);
    DiscreteMeasure nu = c.target();
    return {std::move(nu), std::move(c)};
}

DualFrame pushforward_dual(const DiscreteMeasure& mu, std::span<const Vector> h,
                           std::optional<Matrix> a) {
    if (h.size() != mu.size()) {
        throw Error(ErrorCode::MissingImage, "h must give one vector per atom");
    }
    const std::size_t n = mu.dim();
    for (const Vector& v : h) {
        require(v.size() == n, ErrorCode::DimMismatch, "h values must match the measure dimension");
    }
    const Matrix s_inv = inverse_frame_operator(mu);
    const Matrix map = a ? a->transposed() * s_inv : s_inv;
    require(map.rows() == n && map.cols() == n, ErrorCode::DimMismatch,
            "mixed operator does not match the measure dimension");

    std::vector<Vector> images;
    images.reserve(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const Vector s_inv_x = s_inv * mu.atom(i);
        Vector t = map * mu.atom(i);
        for (std::size_t d = 0; d < n; ++d) {
            t[d] += h[i][d];
        }
        for (std::size_t j = 0; j < mu.size(); ++j) {
            const double k = mu.weight(j) * dot(s_inv_x, mu.atom(j));
            for (std::size_t d = 0; d < n; ++d) {
                t[d] -= k * h[j][d];
            }
        }
        images.push_back(std::move(t));
    }
    Coupling c = graph_coupling(mu, images);
    DiscreteMeasure nu = c.target();
    return {std::move(nu), std::move(c)};
}

NeumannDual neumann_approx_dual(const Coupling& c, unsigned terms) {
    const Matrix mixed = mixed_frame_operator(c);
    const std::size_t n = mixed.rows();
    const double dev = deviation_from_identity(mixed);
    if (!(dev < 1.0)) {
        std::ostringstream msg;
        msg << "||A - Id|| = " << dev << " is not below 1";
        throw Error(ErrorCode::NotApproximate, msg.str());
    }
    const Matrix residual = Matrix::identity(n) - mixed.transposed();
    Matrix partial = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (unsigned k = 1; k <= terms; ++k) {
        term = term * residual;
        partial += term;
    }
    Coupling pushed = push_target(c, partial);
    DiscreteMeasure nu = pushed.target();
    return {std::move(nu), std::move(pushed), std::pow(dev, static_cast<double>(terms) + 1.0)};
}

DualFrame rescue_exact_dual(const Coupling& c) {
    const Matrix mixed = mixed_frame_operator(c);
    const Matrix inv_t = require_inverse(mixed.transposed());
    Coupling pushed = push_target(c, inv_t);
    DiscreteMeasure nu = pushed.target();
    return {std::move(nu), std::move(pushed)};
}

UncertaintyProduct uncertainty_product(const Coupling& c, std::span<const double> f) {
    const std::size_t n = c.source().dim();
    require(f.size() == n, ErrorCode::DimMismatch, "f must match the measure dimension");
    const Matrix inv = require_inverse(mixed_frame_operator(c));
    // f^t A^{-1} S_mu A^{-t} f = |S_mu^{1/2} A^{-t} f|^2 computed as a sum over atoms.
    const Vector g = inv.transposed() * f;
    double analysis_mu = 0.0;
    for (std::size_t i = 0; i < c.source().size(); ++i) {
        const double p = dot(c.source().atom(i), g);
        analysis_mu += c.source().weight(i) * p * p;
    }
    double analysis_nu = 0.0;
    for (std::size_t j = 0; j < c.target().size(); ++j) {
        const double p = dot(c.target().atom(j), f);
        analysis_nu += c.target().weight(j) * p * p;
    }
    const double ff = dot(f, f);
    return {analysis_mu * analysis_nu, ff * ff};
}

BoundInequalities bound_inequalities(const Coupling& c) {
    const Matrix inv = require_inverse(mixed_frame_operator(c));
    const FrameReport mu = analyze(c.source());
    const FrameReport nu = analyze(c.target());
    require(mu.is_frame, ErrorCode::NotAFrame, "source marginal is not a frame");
    require(nu.is_frame, ErrorCode::NotAFrame, "target marginal is not a frame");
    const double inv_norm = spectral_norm(inv);
    BoundInequalities b{};
    b.lower_mu = mu.lower_bound;
    b.upper_mu = mu.upper_bound;
    b.lower_nu = nu.lower_bound;
    b.upper_nu = nu.upper_bound;
    b.inverse_norm = inv_norm;
    b.slack_nu = nu.lower_bound - 1.0 / (mu.upper_bound * inv_norm * inv_norm);
    b.slack_mu = mu.lower_bound - 1.0 / (nu.upper_bound * inv_norm * inv_norm);
    b.equality_nu = std::abs(b.slack_nu) <= 1e-8;
    b.equality_mu = std::abs(b.slack_mu) <= 1e-8;
    return b;
}

DualCertificate convex_combination_certificate(const Coupling& c1, const Coupling& c2, double w,
                                               double tol) {
    require(w >= 0.0 && w <= 1.0, ErrorCode::BadWeights, "mixing weight must lie in [0, 1]");
    require(same_measure(c1.source(), c2.source(), kMarginalTolerance), ErrorCode::SourceMismatch,
            "couplings do not share their source measure");
    for (const Coupling* c : {&c1, &c2}) {
        const DualClass k = certify(*c, tol).classification;
        require(k == DualClass::exact || k == DualClass::approximate, ErrorCode::NotApproximate,
                "convex combination needs approximate duals");
    }

    const DiscreteMeasure& mu = c1.source();
    std::vector<Vector> atoms;
    std::vector<double> weights;
    struct Column {
        const Coupling* coupling;
        std::size_t index;
        double share;
    };
    std::vector<Column> columns;
    for (auto [c, share] : {std::pair{&c1, w}, std::pair{&c2, 1.0 - w}}) {
        if (share == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < c->target().size(); ++j) {
            atoms.push_back(c->target().atom(j));
            weights.push_back(share * c->target().weight(j));
            columns.push_back({c, j, share});
        }
    }
    Matrix plan(mu.size(), columns.size());
    for (std::size_t k = 0; k < columns.size(); ++k) {
        const auto [c, j, share] = columns[k];
        for (std::size_t i = 0; i < mu.size(); ++i) {
            plan(i, k) = share * c->plan()(i, j);
        }
    }
    DiscreteMeasure nu(mu.dim(), std::move(atoms), std::move(weights));
    const Coupling mixed(mu, std::move(nu), std::move(plan));
    return certify(mixed.coalesced(), tol);
}

}  // namespace probframe
