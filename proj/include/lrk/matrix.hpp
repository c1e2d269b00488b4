#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lrk {

/// Dense real vector of finite doubles.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t len, double fill = 0.0);
    explicit Vector(std::vector<double> values);
    Vector(std::initializer_list<double> values);

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double operator[](std::size_t i) const noexcept { return data_[i]; }
    double& operator[](std::size_t i) noexcept { return data_[i]; }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }
    const std::vector<double>& to_std() const noexcept { return data_; }

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<double> data_;
};

/// Dense row-major matrix of finite doubles.
///
/// Either dimension may be zero; an m x 0 matrix stands for an empty set of
/// column vectors of length m.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    /// Takes `data` in row-major order; rejects a length mismatch or any
    /// non-finite entry.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix identity(std::size_t n);
    /// m x n matrix with the given values on the main diagonal.
    static Matrix diagonal(std::size_t rows, std::size_t cols, std::span<const double> diag);
    static Matrix from_columns(std::size_t rows, std::span<const Vector> columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

    Vector column(std::size_t j) const;
    void set_column(std::size_t j, const Vector& v);

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
/// Returns a^T a.
Matrix gram(const Matrix& a);
Matrix outer_product(const Vector& u, const Vector& v);

Vector matvec(const Matrix& a, const Vector& x);
/// Returns a^T x.
Vector matvec_transposed(const Matrix& a, const Vector& x);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

double dot(std::span<const double> x, std::span<const double> y);
double two_norm_vec(const Vector& x);
double two_norm_vec(std::span<const double> x);
double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
/// Largest |(a^T a - I)_ij|; measures how far the columns are from orthonormal.
double orthonormality_defect(const Matrix& a);

} // namespace lrk
