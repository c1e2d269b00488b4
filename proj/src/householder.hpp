#pragma once

// Internal to the svd engine: Householder bidiagonalization with the
// orthogonal factors kept transposed, so the QR phase rotates contiguous rows.

#include "lrk/matrix.hpp"

#include <vector>

namespace lrk::detail {

struct BidiagonalWork {
    std::vector<double> diag;      // n
    std::vector<double> superdiag; // n - 1 (empty when n == 0)
    Matrix left_t;                 // n x m, rows are the left basis vectors
    Matrix right_t;                // n x n, rows are the right basis vectors
};

/// Requires a.rows() >= a.cols().
BidiagonalWork householder_bidiagonalize(const Matrix& a);

} // namespace lrk::detail
