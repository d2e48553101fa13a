#include "probframe/error.hpp"
#include "probframe/network_simplex.hpp"
#include "probframe/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace probframe {

namespace {

// The objective only sees a plan through its mixed operator, so line
// searches and gaps are evaluated on n x n matrices.
class MixedObjective {
public:
    MixedObjective(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Matrix& target)
        : mu_(mu), nu_(nu), target_(target) {}

    Matrix mixed(const Matrix& plan) const {
        const std::size_t n = mu_.dim();
        Matrix out(n, n);
        for (std::size_t i = 0; i < plan.rows(); ++i) {
            for (std::size_t j = 0; j < plan.cols(); ++j) {
                const double g = plan(i, j);
                if (g == 0.0) {
                    continue;
                }
                for (std::size_t a = 0; a < n; ++a) {
                    for (std::size_t b = 0; b < n; ++b) {
                        out(a, b) += g * mu_.atom(i)[a] * nu_.atom(j)[b];
                    }
                }
            }
        }
        return out;
    }

    // Gradient with respect to plan entries: 2 x_i^t G y_j, G = M - target.
    Matrix plan_gradient(const Matrix& residual) const {
        Matrix grad(mu_.size(), nu_.size());
        for (std::size_t i = 0; i < mu_.size(); ++i) {
            const Vector gx = residual.transposed() * mu_.atom(i);
            for (std::size_t j = 0; j < nu_.size(); ++j) {
                grad(i, j) = 2.0 * dot(gx, nu_.atom(j));
            }
        }
        return grad;
    }

    Matrix vertex(const Matrix& grad) const {
        return solve_transportation(mu_.weights(), nu_.weights(), grad).flow;
    }

    const Matrix& target() const { return target_; }

private:
    const DiscreteMeasure& mu_;
    const DiscreteMeasure& nu_;
    const Matrix& target_;
};

struct Atom {
    Matrix plan;
    Matrix mixed;
    double weight;
};

}  // namespace

MixedSearchResult optimize_mixed_operator(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                          const Matrix& target, MixedSearchOptions options) {
    require(mu.dim() == nu.dim(), ErrorCode::DimMismatch, "mixed search between different dimensions");
    require(target.is_square() && target.rows() == mu.dim(), ErrorCode::DimMismatch,
            "target operator does not match the measure dimension");

    const MixedObjective objective(mu, nu, target);

    // Start from the vertex selected by the gradient at the product plan.
    std::vector<Atom> active;
    {
        const Matrix product = Matrix::outer(mu.weights(), nu.weights());
        const Matrix grad = objective.plan_gradient(objective.mixed(product) - target);
        Matrix v = objective.vertex(grad);
        Matrix m = objective.mixed(v);
        active.push_back({std::move(v), std::move(m), 1.0});
    }

    auto current_mixed = [&] {
        Matrix m(mu.dim(), mu.dim());
        for (const Atom& a : active) {
            m += a.mixed * a.weight;
        }
        return m;
    };

    MixedSearchResult out{Coupling(mu, nu, active.front().plan), 0.0, 0.0, 0, {}};
    Matrix m = current_mixed();
    out.residual_history.push_back(frobenius_norm(m - target));

    double gap = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    for (; it < options.max_iterations; ++it) {
        const Matrix g = m - target;
        const Matrix grad = objective.plan_gradient(g);
        Matrix s = objective.vertex(grad);
        Matrix ms = objective.mixed(s);

        gap = 2.0 * frobenius_inner(g, m - ms);
        if (gap <= options.gap_tolerance) {
            break;
        }

        std::size_t away = 0;
        double away_score = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < active.size(); ++k) {
            const double score = frobenius_inner(g, active[k].mixed);
            if (score > away_score) {
                away_score = score;
                away = k;
            }
        }
        const double away_gap = 2.0 * (away_score - frobenius_inner(g, m));

        const bool frank_wolfe_step = gap >= away_gap || active.size() == 1;
        Matrix direction(mu.dim(), mu.dim());
        double max_step = 1.0;
        if (frank_wolfe_step) {
            direction = ms - m;
        } else {
            direction = m - active[away].mixed;
            const double la = active[away].weight;
            max_step = la / (1.0 - la);
        }

        const double dd = frobenius_inner(direction, direction);
        double step = 0.0;
        if (dd > 0.0) {
            step = std::clamp(-frobenius_inner(g, direction) / dd, 0.0, max_step);
        }
        if (step == 0.0) {
            // No descent along either direction at machine precision.
            break;
        }

        if (frank_wolfe_step) {
            for (Atom& a : active) {
                a.weight *= 1.0 - step;
            }
            auto found = std::find_if(active.begin(), active.end(),
                                      [&](const Atom& a) { return a.plan == s; });
            if (step >= 1.0) {
                active.clear();
                active.push_back({std::move(s), std::move(ms), 1.0});
            } else if (found != active.end()) {
                found->weight += step;
            } else {
                active.push_back({std::move(s), std::move(ms), step});
            }
        } else {
            for (Atom& a : active) {
                a.weight *= 1.0 + step;
            }
            active[away].weight -= step;
            if (step >= max_step || active[away].weight <= 0.0) {
                active.erase(active.begin() + static_cast<std::ptrdiff_t>(away));
            }
        }
        double total = 0.0;
        for (const Atom& a : active) {
            total += a.weight;
        }
        for (Atom& a : active) {
            a.weight /= total;
        }

        Matrix next = current_mixed();
        out.residual_history.push_back(frobenius_norm(next - target));
        m = std::move(next);
    }

    Matrix plan(mu.size(), nu.size());
    for (const Atom& a : active) {
        plan += a.plan * a.weight;
    }
    out.coupling = Coupling(mu, nu, std::move(plan));
    out.residual = frobenius_norm(mixed_frame_operator(out.coupling) - target);
    out.duality_gap = std::max(0.0, gap);
    out.iterations = it;
    return out;
}

}  // namespace probframe
