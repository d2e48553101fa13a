#include "probframe/measures.hpp"

#include "probframe/error.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace probframe {

void validate(std::size_t dim, std::span<const Vector> atoms, std::span<const double> weights) {
    require(dim > 0, ErrorCode::DimMismatch, "measure dimension must be positive");
    require(atoms.size() == weights.size(), ErrorCode::BadWeights,
            "atom and weight counts differ");
    require(!atoms.empty(), ErrorCode::BadWeights, "measure has no atoms");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i].size() != dim) {
            std::ostringstream msg;
            msg << "atom " << i << " has length " << atoms[i].size() << ", expected " << dim;
            throw Error(ErrorCode::DimMismatch, msg.str());
        }
        for (double x : atoms[i]) {
            require(std::isfinite(x), ErrorCode::BadWeights, "atom coordinate is not finite");
        }
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
            std::ostringstream msg;
            msg << "weight " << i << " = " << weights[i] << " is not positive";
            throw Error(ErrorCode::BadWeights, msg.str());
        }
        total += weights[i];
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "weights sum to " << total;
        throw Error(ErrorCode::BadWeights, msg.str());
    }
}

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<Vector> atoms,
                                 std::vector<double> weights)
    : dim_(dim), atoms_(std::move(atoms)), weights_(std::move(weights)) {
    validate(dim_, atoms_, weights_);
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t dim, std::vector<Vector> atoms) {
    const std::size_t n = atoms.size();
    std::vector<double> w(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
    return DiscreteMeasure(dim, std::move(atoms), std::move(w));
}

DiscreteMeasure DiscreteMeasure::dirac(Vector point) {
    const std::size_t dim = point.size();
    return DiscreteMeasure(dim, {std::move(point)}, {1.0});
}

Coalescing coalesce(const DiscreteMeasure& m, double tol) {
    const double tol2 = tol * tol;
    std::vector<Vector> atoms;
    std::vector<double> weights;
    std::vector<std::size_t> index(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::size_t found = atoms.size();
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            if (squared_distance(atoms[k], m.atom(i)) <= tol2) {
                found = k;
                break;
            }
        }
        if (found == atoms.size()) {
            atoms.push_back(m.atom(i));
            weights.push_back(m.weight(i));
        } else {
            weights[found] += m.weight(i);
        }
        index[i] = found;
    }
    return {DiscreteMeasure(m.dim(), std::move(atoms), std::move(weights)), std::move(index)};
}

bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
    if (a.dim() != b.dim() || a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a.weight(i) - b.weight(i)) > tol) {
            return false;
        }
        for (std::size_t d = 0; d < a.dim(); ++d) {
            if (std::abs(a.atom(i)[d] - b.atom(i)[d]) > tol) {
                return false;
            }
        }
    }
    return true;
}

double second_moment(const DiscreteMeasure& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        s += m.weight(i) * dot(m.atom(i), m.atom(i));
    }
    return s;
}

Vector mean(const DiscreteMeasure& m) {
    Vector out(m.dim(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t d = 0; d < m.dim(); ++d) {
            out[d] += m.weight(i) * m.atom(i)[d];
        }
    }
    return out;
}

DiscreteMeasure pushforward_linear(const DiscreteMeasure& m, const Matrix& a) {
    require(a.is_square() && a.rows() == m.dim(), ErrorCode::DimMismatch,
            "pushforward matrix does not match the measure dimension");
    std::vector<Vector> atoms;
    atoms.reserve(m.size());
    for (const auto& x : m.atoms()) {
        atoms.push_back(a * x);
    }
    return DiscreteMeasure(m.dim(), std::move(atoms), m.weights());
}

DiscreteMeasure pushforward_map(const DiscreteMeasure& m, std::span<const Vector> images) {
    if (images.size() != m.size()) {
        std::ostringstream msg;
        msg << "map gives " << images.size() << " images for " << m.size() << " atoms";
        throw Error(ErrorCode::MissingImage, msg.str());
    }
    std::vector<Vector> atoms(images.begin(), images.end());
    return DiscreteMeasure(m.dim(), std::move(atoms), m.weights());
}

DiscreteMeasure mixture(std::span<const DiscreteMeasure> ms, std::span<const double> ws) {
    require(!ms.empty() && ms.size() == ws.size(), ErrorCode::BadWeights,
            "mixture needs one weight per component");
    double total = 0.0;
    for (double w : ws) {
        require(w >= 0.0 && std::isfinite(w), ErrorCode::BadWeights, "negative mixture weight");
        total += w;
    }
    require(std::abs(total - 1.0) <= kWeightSumTolerance, ErrorCode::BadWeights,
            "mixture weights do not sum to 1");
    const std::size_t dim = ms.front().dim();
    std::vector<Vector> atoms;
    std::vector<double> weights;
    for (std::size_t k = 0; k < ms.size(); ++k) {
        require(ms[k].dim() == dim, ErrorCode::DimMismatch, "mixture components differ in dimension");
        if (ws[k] == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < ms[k].size(); ++i) {
            atoms.push_back(ms[k].atom(i));
            weights.push_back(ws[k] * ms[k].weight(i));
        }
    }
    return coalesce(DiscreteMeasure(dim, std::move(atoms), std::move(weights))).measure;
}

}  // namespace probframe
