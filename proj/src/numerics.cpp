#include "probframe/numerics.hpp"

#include "probframe/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace probframe {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    require(data_.size() == rows_ * cols_, ErrorCode::DimMismatch,
            "matrix entry count does not match its shape");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        m(i, i) = diag[i];
    }
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> copy;
    copy.reserve(rows.size());
    for (const auto& r : rows) {
        copy.emplace_back(r);
    }
    return from_rows(copy);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        require(row.size() == c, ErrorCode::DimMismatch, "ragged matrix rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
}

Matrix Matrix::outer(std::span<const double> x, std::span<const double> y) {
    Matrix m(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            m(i, j) = x[i] * y[j];
        }
    }
    return m;
}

Vector Matrix::column(std::size_t j) const {
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out[i] = (*this)(i, j);
    }
    return out;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, ErrorCode::DimMismatch,
            "matrix sum of different shapes");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, ErrorCode::DimMismatch,
            "matrix difference of different shapes");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
    for (double& v : data_) {
        v *= s;
    }
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), ErrorCode::DimMismatch, "matrix product of incompatible shapes");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    require(a.cols() == x.size(), ErrorCode::DimMismatch, "matrix-vector product of incompatible shapes");
    Vector out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        out[i] = dot(a.row(i), x);
    }
    return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), ErrorCode::DimMismatch, "dot product of different lengths");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    return s;
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double squared_distance(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), ErrorCode::DimMismatch, "distance between different lengths");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::DimMismatch,
            "Frobenius inner product of different shapes");
    return dot(a.values(), b.values());
}

double frobenius_norm(const Matrix& m) { return std::sqrt(dot(m.values(), m.values())); }

double max_abs(const Matrix& m) noexcept {
    double best = 0.0;
    for (double v : m.values()) {
        best = std::max(best, std::abs(v));
    }
    return best;
}

double trace(const Matrix& m) {
    require(m.is_square(), ErrorCode::DimMismatch, "trace of a non-square matrix");
    double t = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        t += m(i, i);
    }
    return t;
}

Matrix power(const Matrix& m, unsigned exponent) {
    require(m.is_square(), ErrorCode::DimMismatch, "power of a non-square matrix");
    Matrix result = Matrix::identity(m.rows());
    for (unsigned k = 0; k < exponent; ++k) {
        result = result * m;
    }
    return result;
}

bool is_symmetric(const Matrix& m, double rel_tol) {
    if (!m.is_square()) {
        return false;
    }
    const double scale = max_abs(m);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > rel_tol * scale) {
                return false;
            }
        }
    }
    return true;
}

namespace {

double off_diagonal_mass(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) {
                s += a(i, j) * a(i, j);
            }
        }
    }
    return std::sqrt(s);
}

}  // namespace

Spectrum eig_sym(const Matrix& m, double rel_tol) {
    if (!is_symmetric(m, rel_tol)) {
        throw Error(ErrorCode::NonSymmetric, "eig_sym requires a symmetric matrix");
    }
    const std::size_t n = m.rows();
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = 0.5 * (m(i, j) + m(j, i));
        }
    }
    Matrix v = Matrix::identity(n);
    const double stop = 1e-14 * frobenius_norm(a);
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_mass(a) > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                // Rotation angle chosen so that the (p, q) entry vanishes.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    Spectrum out{Vector(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

Matrix inverse(const Matrix& m, double pivot_rel_tol) {
    require(m.is_square(), ErrorCode::DimMismatch, "inverse of a non-square matrix");
    const std::size_t n = m.rows();
    const double threshold = pivot_rel_tol * max_abs(m);
    Matrix lu = m;
    Matrix inv = Matrix::identity(n);

    // Gauss-Jordan elimination with partial pivoting on [M | Id].
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) {
                pivot = r;
            }
        }
        const double pv = lu(pivot, col);
        if (!(std::abs(pv) >= threshold) || pv == 0.0) {
            std::ostringstream msg;
            msg << "pivot " << pv << " in column " << col << " is below " << threshold;
            throw Error(ErrorCode::Singular, msg.str());
        }
        if (pivot != col) {
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(lu(pivot, k), lu(col, k));
                std::swap(inv(pivot, k), inv(col, k));
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            lu(col, k) /= pv;
            inv(col, k) /= pv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) {
                continue;
            }
            const double f = lu(r, col);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t k = 0; k < n; ++k) {
                lu(r, k) -= f * lu(col, k);
                inv(r, k) -= f * inv(col, k);
            }
        }
    }
    return inv;
}

double spectral_norm(const Matrix& m) {
    if (m.empty()) {
        return 0.0;
    }
    const Matrix gram = m.transposed() * m;
    Matrix sym(gram.rows(), gram.cols());
    for (std::size_t i = 0; i < gram.rows(); ++i) {
        for (std::size_t j = 0; j < gram.cols(); ++j) {
            sym(i, j) = 0.5 * (gram(i, j) + gram(j, i));
        }
    }
    return std::sqrt(std::max(0.0, eig_sym(sym).max()));
}

Vector singular_values(const Matrix& m) {
    // One-sided Jacobi orthogonalises the columns of the thinner orientation.
    Matrix a = m.cols() > m.rows() ? m.transposed() : m;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    constexpr double kEps = 1e-15;
    constexpr int kMaxSweeps = 80;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                double gamma = 0.0;
                for (std::size_t i = 0; i < rows; ++i) {
                    alpha += a(i, p) * a(i, p);
                    beta += a(i, q) * a(i, q);
                    gamma += a(i, p) * a(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) {
                    continue;
                }
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < rows; ++i) {
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
            }
        }
        if (!rotated) {
            break;
        }
    }

    Vector sigma(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            s += a(i, j) * a(i, j);
        }
        sigma[j] = std::sqrt(s);
    }
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    return sigma;
}

std::size_t numeric_rank(const Matrix& m, std::optional<double> tol) {
    if (m.empty()) {
        return 0;
    }
    const Vector sigma = singular_values(m);
    if (sigma.front() == 0.0) {
        return 0;
    }
    const double threshold = tol.value_or(kRankTolerance * sigma.front());
    return static_cast<std::size_t>(
        std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s > threshold; }));
}

}  // namespace probframe
