#pragma once

// Dense linear algebra used throughout probframe. Everything here is sized for
// desk-scale problems (dimensions up to a few hundred) and is deterministic.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace probframe {

using Vector = std::vector<double>;

/// Row-major dense real matrix. Square instances carry frame operators,
/// mixed frame operators and pushforward maps; rectangular ones carry
/// synthesis operators and transport plans.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix outer(std::span<const double> x, std::span<const double> y);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<const double> values() const noexcept { return data_; }
    Vector column(std::size_t j) const;

    Matrix transposed() const;
    bool all_finite() const noexcept;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s) noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);
double squared_distance(std::span<const double> x, std::span<const double> y);

double frobenius_norm(const Matrix& m);
double frobenius_inner(const Matrix& a, const Matrix& b);
double max_abs(const Matrix& m) noexcept;
double trace(const Matrix& m);
Matrix power(const Matrix& m, unsigned exponent);

/// Eigen-decomposition of a symmetric matrix. Eigenvalues are ascending and
/// the eigenvector matrix holds the matching orthonormal vectors as columns.
struct Spectrum {
    Vector eigenvalues;
    Matrix eigenvectors;

    double min() const { return eigenvalues.front(); }
    double max() const { return eigenvalues.back(); }
};

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kSingularTolerance = 1e-12;
inline constexpr double kRankTolerance = 1e-10;

bool is_symmetric(const Matrix& m, double rel_tol = kSymmetryTolerance);

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops below
/// 1e-14 * ||M||_F. Throws NonSymmetric when M is not symmetric to rel_tol.
Spectrum eig_sym(const Matrix& m, double rel_tol = kSymmetryTolerance);

/// LU with partial pivoting. Throws Singular when a pivot falls below
/// pivot_rel_tol * max|M|.
Matrix inverse(const Matrix& m, double pivot_rel_tol = kSingularTolerance);

/// Largest singular value, sqrt(lambda_max(M^t M)).
double spectral_norm(const Matrix& m);

/// Singular values (descending) by one-sided Jacobi on the columns.
Vector singular_values(const Matrix& m);

/// Number of singular values above tol; the default is 1e-10 * sigma_max.
std::size_t numeric_rank(const Matrix& m, std::optional<double> tol = std::nullopt);

}  // namespace probframe
