#include "probframe/transport.hpp"

#include "probframe/error.hpp"
#include "probframe/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace probframe {

Coupling::Coupling(DiscreteMeasure source, DiscreteMeasure target, Matrix plan)
    : source_(std::move(source)), target_(std::move(target)), plan_(std::move(plan)) {
    require(source_.dim() == target_.dim(), ErrorCode::DimMismatch,
            "coupling marginals live in different dimensions");
    require(plan_.rows() == source_.size() && plan_.cols() == target_.size(),
            ErrorCode::MarginalMismatch, "plan shape does not match the marginals");
    for (double v : plan_.values()) {
        require(v >= 0.0 && std::isfinite(v), ErrorCode::MarginalMismatch,
                "plan entries must be finite and nonnegative");
    }
    for (std::size_t i = 0; i < plan_.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < plan_.cols(); ++j) {
            s += plan_(i, j);
        }
        if (std::abs(s - source_.weight(i)) > kMarginalTolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "row " << i << " sums to " << s << ", source weight is " << source_.weight(i);
            throw Error(ErrorCode::MarginalMismatch, msg.str());
        }
    }
    for (std::size_t j = 0; j < plan_.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < plan_.rows(); ++i) {
            s += plan_(i, j);
        }
        if (std::abs(s - target_.weight(j)) > kMarginalTolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "column " << j << " sums to " << s << ", target weight is " << target_.weight(j);
            throw Error(ErrorCode::MarginalMismatch, msg.str());
        }
    }
}

Coupling Coupling::coalesced(double tol) const {
    Coalescing src = coalesce(source_, tol);
    Coalescing tgt = coalesce(target_, tol);
    Matrix plan(src.measure.size(), tgt.measure.size());
    for (std::size_t i = 0; i < plan_.rows(); ++i) {
        for (std::size_t j = 0; j < plan_.cols(); ++j) {
            plan(src.index[i], tgt.index[j]) += plan_(i, j);
        }
    }
    return Coupling(std::move(src.measure), std::move(tgt.measure), std::move(plan));
}

Coupling Coupling::transposed() const {
    return Coupling(target_, source_, plan_.transposed());
}

Coupling product_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    require(mu.dim() == nu.dim(), ErrorCode::DimMismatch, "product of measures in different dimensions");
    return Coupling(mu, nu, Matrix::outer(mu.weights(), nu.weights()));
}

Coupling graph_coupling(const DiscreteMeasure& mu, std::span<const Vector> images) {
    Coalescing image = coalesce(pushforward_map(mu, images));
    Matrix plan(mu.size(), image.measure.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        plan(i, image.index[i]) = mu.weight(i);
    }
    return Coupling(mu, std::move(image.measure), std::move(plan));
}

Coupling diagonal_coupling(const DiscreteMeasure& mu) {
    return Coupling(mu, mu, Matrix::diagonal(mu.weights()));
}

Coupling push_target(const Coupling& c, const Matrix& a) {
    return Coupling(c.source(), pushforward_linear(c.target(), a), c.plan());
}

Matrix mixed_frame_operator(const Coupling& c) {
    const std::size_t n = c.source().dim();
    Matrix out(n, n);
    const Matrix& plan = c.plan();
    for (std::size_t i = 0; i < plan.rows(); ++i) {
        const Vector& x = c.source().atom(i);
        for (std::size_t j = 0; j < plan.cols(); ++j) {
            const double g = plan(i, j);
            if (g == 0.0) {
                continue;
            }
            const Vector& y = c.target().atom(j);
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    out(a, b) += g * x[a] * y[b];
                }
            }
        }
    }
    return out;
}

double transport_cost(const Coupling& c) {
    double s = 0.0;
    const Matrix& plan = c.plan();
    for (std::size_t i = 0; i < plan.rows(); ++i) {
        for (std::size_t j = 0; j < plan.cols(); ++j) {
            if (plan(i, j) != 0.0) {
                s += plan(i, j) * squared_distance(c.source().atom(i), c.target().atom(j));
            }
        }
    }
    return s;
}

namespace {

Matrix squared_distance_costs(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    Matrix cost(mu.size(), nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < nu.size(); ++j) {
            cost(i, j) = squared_distance(mu.atom(i), nu.atom(j));
        }
    }
    return cost;
}

}  // namespace

TransportResult solve_w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    require(mu.dim() == nu.dim(), ErrorCode::DimMismatch, "W2 between different dimensions");
    const Matrix cost = squared_distance_costs(mu, nu);
    TransportationSolution sol = solve_transportation(mu.weights(), nu.weights(), cost);
    Coupling plan(mu, nu, std::move(sol.flow));
    const double c = std::max(0.0, transport_cost(plan));
    return TransportResult{c, std::sqrt(c), std::move(plan), sol.slackness_residual,
                           sol.dual_infeasibility};
}

TransportResult w2_bruteforce(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    require(mu.dim() == nu.dim(), ErrorCode::DimMismatch, "W2 between different dimensions");
    const std::size_t n = mu.size();
    require(nu.size() == n, ErrorCode::Unsupported, "brute force needs equal atom counts");
    require(n <= 7, ErrorCode::Unsupported, "brute force supports at most 7 atoms");
    const double w = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        require(std::abs(mu.weight(i) - w) <= kWeightSumTolerance &&
                    std::abs(nu.weight(i) - w) <= kWeightSumTolerance,
                ErrorCode::Unsupported, "brute force needs uniform weights");
    }
    const Matrix cost = squared_distance_costs(mu, nu);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::size_t> best_perm = perm;
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += cost(i, perm[i]);
        }
        if (s < best) {
            best = s;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    Matrix plan(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        plan(i, best_perm[i]) = mu.weight(i);
    }
    Coupling c(mu, nu, std::move(plan));
    const double total = transport_cost(c);
    return TransportResult{total, std::sqrt(total), std::move(c)};
}

Coupling glue(const Coupling& c12, const Coupling& c23) {
    const DiscreteMeasure& middle = c12.target();
    if (!same_measure(middle, c23.source(), kMarginalTolerance)) {
        throw Error(ErrorCode::MarginalMismatch,
                    "glue: target of the first coupling is not the source of the second");
    }
    const Matrix& a = c12.plan();
    const Matrix& b = c23.plan();
    Matrix plan(a.rows(), b.cols());
    for (std::size_t j = 0; j < middle.size(); ++j) {
        const double wj = middle.weight(j);
        if (wj <= 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const double aij = a(i, j);
            if (aij == 0.0) {
                continue;
            }
            for (std::size_t k = 0; k < b.cols(); ++k) {
                plan(i, k) += aij * b(j, k) / wj;
            }
        }
    }
    return Coupling(c12.source(), c23.target(), std::move(plan));
}

}  // namespace probframe
