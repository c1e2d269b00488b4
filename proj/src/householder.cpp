#include "householder.hpp"

#include "lrk/errors.hpp"

#include <cmath>
#include <span>

namespace lrk::detail {

namespace {

/// Reflector H = I - tau v v^T with H x = alpha e_1. Returns tau = 0 (H = I)
/// when x is already a multiple of e_1.
struct Reflector {
    std::vector<double> v;
    double tau = 0.0;
    double alpha = 0.0;
};

Reflector make_reflector(std::vector<double> x) {
    Reflector h;
    double tail = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        tail += x[i] * x[i];
    }
    if (x.empty()) {
        return h;
    }
    if (tail == 0.0) {
        h.alpha = x[0];
        h.v = std::move(x);
        return h;
    }
    const double norm = std::sqrt(x[0] * x[0] + tail);
    h.alpha = x[0] >= 0.0 ? -norm : norm;
    x[0] -= h.alpha;
    // v^T v = x0'^2 + tail
    h.tau = 2.0 / (x[0] * x[0] + tail);
    h.v = std::move(x);
    return h;
}

/// rows[first..last) of `m`, columns [col0, col0 + v.size()): m <- m H.
void apply_right(Matrix& m, std::size_t first_row, std::size_t col0, const Reflector& h) {
    if (h.tau == 0.0) {
        return;
    }
    const std::size_t len = h.v.size();
    for (std::size_t i = first_row; i < m.rows(); ++i) {
        std::span<double> r = m.row(i).subspan(col0, len);
        double s = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
            s += r[j] * h.v[j];
        }
        s *= h.tau;
        if (s == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < len; ++j) {
            r[j] -= s * h.v[j];
        }
    }
}

/// Rows [row0, row0 + v.size()), columns [first_col, cols): m <- H m.
void apply_left(Matrix& m, std::size_t row0, std::size_t first_col, const Reflector& h,
                std::vector<double>& scratch) {
    if (h.tau == 0.0) {
        return;
    }
    const std::size_t width = m.cols() - first_col;
    scratch.assign(width, 0.0);
    for (std::size_t i = 0; i < h.v.size(); ++i) {
        const double vi = h.v[i];
        if (vi == 0.0) {
            continue;
        }
        std::span<const double> r = std::as_const(m).row(row0 + i).subspan(first_col, width);
        for (std::size_t j = 0; j < width; ++j) {
            scratch[j] += vi * r[j];
        }
    }
    for (std::size_t i = 0; i < h.v.size(); ++i) {
        const double c = h.tau * h.v[i];
        if (c == 0.0) {
            continue;
        }
        std::span<double> r = m.row(row0 + i).subspan(first_col, width);
        for (std::size_t j = 0; j < width; ++j) {
            r[j] -= c * scratch[j];
        }
    }
}

} // namespace

BidiagonalWork householder_bidiagonalize(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < n) {
        throw DimensionError("bidiagonalize: requires rows >= cols");
    }

    BidiagonalWork out;
    out.diag.assign(n, 0.0);
    out.superdiag.assign(n == 0 ? 0 : n - 1, 0.0);

    Matrix w = a;
    std::vector<Reflector> left(n);
    std::vector<Reflector> right(n > 2 ? n - 2 : 0);
    std::vector<double> scratch;

    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> x(m - k);
        for (std::size_t i = k; i < m; ++i) {
            x[i - k] = w(i, k);
        }
        left[k] = make_reflector(std::move(x));
        out.diag[k] = left[k].alpha;
        if (k + 1 < n) {
            apply_left(w, k, k + 1, left[k], scratch);
        }

        if (k + 2 < n) {
            std::span<const double> r = std::as_const(w).row(k).subspan(k + 1);
            right[k] = make_reflector(std::vector<double>(r.begin(), r.end()));
            out.superdiag[k] = right[k].alpha;
            apply_right(w, k + 1, k + 1, right[k]);
        } else if (k + 1 < n) {
            out.superdiag[k] = w(k, k + 1);
        }
    }

    // left_t = [I_n 0] H_{n-1} ... H_0; H_k only touches rows k.. of the result.
    out.left_t = Matrix(n, m);
    for (std::size_t j = 0; j < n; ++j) {
        out.left_t(j, j) = 1.0;
    }
    for (std::size_t k = n; k-- > 0;) {
        apply_right(out.left_t, k, k, left[k]);
    }

    // right_t = G_{n-3} ... G_0, with G_k acting on coordinates k+1..
    out.right_t = Matrix::identity(n);
    for (std::size_t k = right.size(); k-- > 0;) {
        apply_right(out.right_t, k + 1, k + 1, right[k]);
    }
    return out;
}

} // namespace lrk::detail
