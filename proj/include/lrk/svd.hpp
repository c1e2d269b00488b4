#pragma once

#include "lrk/matrix.hpp"

#include <cstddef>

namespace lrk {

/// Thin factorization A = U diag(sigma) V^T with p = min(m, n) singular
/// triples, sigma sorted non-increasing.
struct SvdFactorization {
    Matrix u;     ///< m x p, orthonormal columns
    Vector sigma; ///< p values, non-increasing, non-negative
    Matrix v;     ///< n x p, orthonormal columns
    std::size_t rank = 0;

    std::size_t rows() const noexcept { return u.rows(); }
    std::size_t cols() const noexcept { return v.rows(); }
    std::size_t p() const noexcept { return sigma.size(); }
};

/// Upper-bidiagonal reduction A = left * B * right^T of an m x n matrix with
/// m >= n. `diag` holds B(j, j); `superdiag` holds B(j, j + 1).
struct Bidiagonal {
    Vector diag;
    Vector superdiag;
    Matrix left;  ///< m x n, orthonormal columns
    Matrix right; ///< n x n, orthogonal

    Matrix as_matrix() const;
};

/// Householder (Golub-Kahan) bidiagonalization. Requires rows >= cols.
Bidiagonal bidiagonalize(const Matrix& a);

/// Production SVD: Householder bidiagonalization followed by implicit
/// Wilkinson-shift / zero-shift QR on the bidiagonal. Wide inputs are
/// transposed internally.
///
/// Each singular pair is signed so that the largest-magnitude entry of v_j is
/// positive (first such entry on ties). Throws ConvergenceError when the QR
/// iteration exceeds 30 * p sweeps.
SvdFactorization svd(const Matrix& a);

/// Largest min(m, n) accepted by svd_via_gram_oracle.
inline constexpr std::size_t kGramOracleMaxDim = 64;

/// Reference SVD built the constructive way: cyclic Jacobi on the Gram matrix
/// gives lambda_j and v_j, sigma_j = sqrt(lambda_j), u_j = A v_j / sigma_j,
/// and Gram-Schmidt completes U where sigma_j is numerically zero.
///
/// Shares no code with svd() beyond matrix-core primitives. Squares the
/// condition number, so only min(m, n) <= kGramOracleMaxDim is accepted.
SvdFactorization svd_via_gram_oracle(const Matrix& a);

/// Extends q orthonormal columns of length m to an m x m orthogonal matrix.
/// The first q columns are copied unchanged; the complement is built by
/// Gram-Schmidt over the standard basis, so q = 0 yields the identity.
Matrix complete_basis(const Matrix& partial);

/// Singular values above max(m, n) * eps * sigma_1. Zero for a zero spectrum.
double rank_threshold(const Vector& sigma, std::size_t m, std::size_t n);
std::size_t numerical_rank(const Vector& sigma, std::size_t m, std::size_t n);

/// Applies the sign convention described on svd() in place.
void canonicalize_signs(SvdFactorization& f);

} // namespace lrk
