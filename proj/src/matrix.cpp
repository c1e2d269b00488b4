#include "lrk/matrix.hpp"

#include "lrk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lrk {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double x : values) {
        if (!std::isfinite(x)) {
            throw InvalidArgument(std::string(what) + ": non-finite entry");
        }
    }
}

std::string shape(const Matrix& a) {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

} // namespace

Vector::Vector(std::size_t len, double fill) : data_(len, fill) {
    require_finite(std::span<const double>(&fill, 1), "Vector");
}

Vector::Vector(std::vector<double> values) : data_(std::move(values)) {
    require_finite(data_, "Vector");
}

Vector::Vector(std::initializer_list<double> values) : data_(values) {
    require_finite(data_, "Vector");
}

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("Matrix: " + std::to_string(data_.size()) + " values for a " +
                             std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    }
    require_finite(data_, "Matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw DimensionError("Matrix: ragged initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
    require_finite(data_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix id(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        id(i, i) = 1.0;
    }
    return id;
}

Matrix Matrix::diagonal(std::size_t rows, std::size_t cols, std::span<const double> diag) {
    if (diag.size() > std::min(rows, cols)) {
        throw DimensionError("Matrix::diagonal: too many diagonal values");
    }
    require_finite(diag, "Matrix::diagonal");
    Matrix d(rows, cols);
    for (std::size_t i = 0; i < diag.size(); ++i) {
        d(i, i) = diag[i];
    }
    return d;
}

Matrix Matrix::from_columns(std::size_t rows, std::span<const Vector> columns) {
    Matrix a(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        a.set_column(j, columns[j]);
    }
    return a;
}

Vector Matrix::column(std::size_t j) const {
    if (j >= cols_) {
        throw DimensionError("Matrix::column: index " + std::to_string(j) + " out of range");
    }
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        v[i] = (*this)(i, j);
    }
    return v;
}

void Matrix::set_column(std::size_t j, const Vector& v) {
    if (j >= cols_ || v.size() != rows_) {
        throw DimensionError("Matrix::set_column: shape mismatch");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        (*this)(i, j) = v[i];
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: " + shape(a) + " times " + shape(b));
    }
    Matrix c(a.rows(), b.cols());
    // i-k-j order keeps the inner loop on contiguous rows of b and c.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            auto bk = b.row(k);
            for (std::size_t j = 0; j < ci.size(); ++j) {
                ci[j] += aik * bk[j];
            }
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            t(j, i) = a(i, j);
        }
    }
    return t;
}

Matrix gram(const Matrix& a) {
    const std::size_t n = a.cols();
    Matrix g(n, n);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto ar = a.row(r);
        for (std::size_t i = 0; i < n; ++i) {
            const double ari = ar[i];
            if (ari == 0.0) {
                continue;
            }
            auto gi = g.row(i);
            for (std::size_t j = i; j < n; ++j) {
                gi[j] += ari * ar[j];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            g(i, j) = g(j, i);
        }
    }
    return g;
}

Matrix outer_product(const Vector& u, const Vector& v) {
    Matrix a(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto ai = a.row(i);
        for (std::size_t j = 0; j < v.size(); ++j) {
            ai[j] = u[i] * v[j];
        }
    }
    return a;
}

Vector matvec(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) {
        throw DimensionError("matvec: " + shape(a) + " times vector of length " +
                             std::to_string(x.size()));
    }
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        y[i] = dot(a.row(i), x.values());
    }
    return y;
}

Vector matvec_transposed(const Matrix& a, const Vector& x) {
    if (a.rows() != x.size()) {
        throw DimensionError("matvec_transposed: " + shape(a) + "^T times vector of length " +
                             std::to_string(x.size()));
    }
    Vector y(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        auto ai = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            y[j] += xi * ai[j];
        }
    }
    return y;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("matrix sum: " + shape(a) + " plus " + shape(b));
    }
    Matrix c = a;
    auto cv = c.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < cv.size(); ++i) {
        cv[i] += bv[i];
    }
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("matrix difference: " + shape(a) + " minus " + shape(b));
    }
    Matrix c = a;
    auto cv = c.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < cv.size(); ++i) {
        cv[i] -= bv[i];
    }
    return c;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix c = a;
    for (double& x : c.values()) {
        x *= s;
    }
    return c;
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DimensionError("dot: length mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    return s;
}

double two_norm_vec(std::span<const double> x) {
    return std::sqrt(dot(x, x));
}

double two_norm_vec(const Vector& x) {
    return two_norm_vec(x.values());
}

double frobenius_norm(const Matrix& a) {
    return two_norm_vec(a.values());
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double x : a.values()) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double orthonormality_defect(const Matrix& a) {
    const Matrix g = gram(a);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

} // namespace lrk
