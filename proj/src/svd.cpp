#include "lrk/svd.hpp"

#include "householder.hpp"
#include "lrk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <utility>

namespace lrk {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Rotation {
    double c;
    double s;
    double r;
};

/// c * f + s * g = r, -s * f + c * g = 0.
Rotation make_rotation(double f, double g) {
    if (g == 0.0) {
        return {1.0, 0.0, f};
    }
    if (f == 0.0) {
        return {0.0, 1.0, g};
    }
    const double r = std::hypot(f, g);
    return {f / r, g / r, r};
}

/// x <- c x + s y, y <- -s x + c y on two rows of equal length.
void rotate_rows(std::span<double> x, std::span<double> y, double c, double s) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi + s * yi;
        y[i] = -s * xi + c * yi;
    }
}

/// Diagonalizes the upper bidiagonal (d, e) in place, applying every left
/// rotation to the rows of ut and every right rotation to the rows of vt.
class BidiagonalQr {
public:
    BidiagonalQr(std::vector<double>& d, std::vector<double>& e, Matrix& ut, Matrix& vt)
        : d_(d), e_(e), ut_(ut), vt_(vt) {}

    void run() {
        const std::size_t n = d_.size();
        if (n <= 1) {
            return;
        }
        double bnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            bnorm = std::max(bnorm, std::abs(d_[i]));
            if (i + 1 < n) {
                bnorm = std::max(bnorm, std::abs(e_[i]));
            }
        }
        // Diagonal entries this small are set to zero; the perturbation is
        // below the backward error of the Householder stage.
        zero_floor_ = kEps * bnorm;

        const std::size_t max_sweeps = 30 * n;
        std::size_t sweeps = 0;
        std::size_t hi = n - 1;
        while (hi > 0) {
            if (negligible(hi - 1)) {
                e_[hi - 1] = 0.0;
                --hi;
                continue;
            }
            std::size_t lo = hi - 1;
            while (lo > 0 && !negligible(lo - 1)) {
                --lo;
            }
            if (lo > 0) {
                e_[lo - 1] = 0.0;
            }

            if (zero_diagonal(lo, hi)) {
                continue;
            }
            if (sweeps == max_sweeps) {
                throw ConvergenceError(hi - 1, sweeps);
            }
            ++sweeps;
            sweep(lo, hi);
        }
    }

private:
    bool negligible(std::size_t i) const {
        return std::abs(e_[i]) <= 0.5 * kEps * (std::abs(d_[i]) + std::abs(d_[i + 1])) ||
               std::abs(e_[i]) < std::numeric_limits<double>::min();
    }

    /// Handles a zero on the diagonal of block [lo, hi] by chasing its
    /// superdiagonal neighbour out of the block. Returns true if it acted.
    bool zero_diagonal(std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i <= hi; ++i) {
            if (std::abs(d_[i]) > zero_floor_) {
                continue;
            }
            d_[i] = 0.0;
            if (i < hi) {
                chase_row(i, hi);
            } else {
                chase_column(lo, hi);
            }
            return true;
        }
        return false;
    }

    /// d_i == 0, i < hi: left rotations on rows (j, i) zero row i.
    void chase_row(std::size_t i, std::size_t hi) {
        double f = e_[i];
        e_[i] = 0.0;
        for (std::size_t j = i + 1; j <= hi && f != 0.0; ++j) {
            const Rotation g = make_rotation(d_[j], f);
            d_[j] = g.r;
            if (j < hi) {
                f = -g.s * e_[j];
                e_[j] = g.c * e_[j];
            }
            rotate_rows(ut_.row(j), ut_.row(i), g.c, g.s);
        }
    }

    /// d_hi == 0: right rotations on columns (j, hi) zero column hi.
    void chase_column(std::size_t lo, std::size_t hi) {
        double f = e_[hi - 1];
        e_[hi - 1] = 0.0;
        for (std::size_t j = hi; j-- > lo && f != 0.0;) {
            const Rotation g = make_rotation(d_[j], f);
            d_[j] = g.r;
            if (j > lo) {
                f = -g.s * e_[j - 1];
                e_[j - 1] = g.c * e_[j - 1];
            }
            rotate_rows(vt_.row(j), vt_.row(hi), g.c, g.s);
        }
    }

    /// Eigenvalue of the trailing 2x2 of B^T B (block [lo, hi]) closer to its
    /// last diagonal entry, computed on entries scaled by the block maximum.
    double wilkinson_shift(std::size_t lo, std::size_t hi) const {
        double scale = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) {
            scale = std::max(scale, std::abs(d_[i]));
            if (i < hi) {
                scale = std::max(scale, std::abs(e_[i]));
            }
        }
        const double dm = d_[hi - 1] / scale;
        const double dn = d_[hi] / scale;
        const double em = e_[hi - 1] / scale;
        const double el = hi - 1 > lo ? e_[hi - 2] / scale : 0.0;

        const double t11 = dm * dm + el * el;
        const double t12 = dm * em;
        const double t22 = dn * dn + em * em;
        const double delta = 0.5 * (t11 - t22);
        const double denom = std::abs(delta) + std::hypot(delta, t12);
        const double shift =
            denom == 0.0 ? t22 : t22 - (delta >= 0.0 ? 1.0 : -1.0) * t12 * t12 / denom;
        return shift * scale * scale;
    }

    void sweep(std::size_t lo, std::size_t hi) {
        const double shift = wilkinson_shift(lo, hi);
        const double dl = std::abs(d_[lo]);
        if (shift <= 0.0 || (shift / (dl * dl)) < kEps) {
            zero_shift_sweep(lo, hi);
        } else {
            shifted_sweep(lo, hi, shift);
        }
    }

    void shifted_sweep(std::size_t lo, std::size_t hi, double shift) {
        double y = d_[lo] * d_[lo] - shift;
        double z = d_[lo] * e_[lo];
        for (std::size_t k = lo; k < hi; ++k) {
            Rotation g = make_rotation(y, z);
            if (k > lo) {
                e_[k - 1] = g.r;
            }
            y = g.c * d_[k] + g.s * e_[k];
            e_[k] = -g.s * d_[k] + g.c * e_[k];
            z = g.s * d_[k + 1];
            d_[k + 1] = g.c * d_[k + 1];
            rotate_rows(vt_.row(k), vt_.row(k + 1), g.c, g.s);

            g = make_rotation(y, z);
            d_[k] = g.r;
            y = g.c * e_[k] + g.s * d_[k + 1];
            d_[k + 1] = -g.s * e_[k] + g.c * d_[k + 1];
            e_[k] = y;
            if (k + 1 < hi) {
                z = g.s * e_[k + 1];
                e_[k + 1] = g.c * e_[k + 1];
            }
            rotate_rows(ut_.row(k), ut_.row(k + 1), g.c, g.s);
        }
    }

    // Demmel-Kahan zero-shift sweep; preserves relative accuracy of tiny
    // singular values.
    void zero_shift_sweep(std::size_t lo, std::size_t hi) {
        double c = 1.0;
        double oldc = 1.0;
        double olds = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            const Rotation g = make_rotation(d_[k] * c, e_[k]);
            c = g.c;
            if (k > lo) {
                e_[k - 1] = olds * g.r;
            }
            const Rotation h = make_rotation(oldc * g.r, d_[k + 1] * g.s);
            oldc = h.c;
            olds = h.s;
            d_[k] = h.r;
            rotate_rows(vt_.row(k), vt_.row(k + 1), g.c, g.s);
            rotate_rows(ut_.row(k), ut_.row(k + 1), h.c, h.s);
        }
        const double last = d_[hi] * c;
        e_[hi - 1] = last * olds;
        d_[hi] = last * oldc;
    }

    std::vector<double>& d_;
    std::vector<double>& e_;
    Matrix& ut_;
    Matrix& vt_;
    double zero_floor_ = 0.0;
};

void negate_row(std::span<double> r) {
    for (double& x : r) {
        x = -x;
    }
}

/// Makes d non-negative, sorts it descending, and permutes rows of ut, vt alike.
SvdFactorization finish(std::vector<double>& d, Matrix& ut, Matrix& vt) {
    const std::size_t p = d.size();
    for (std::size_t i = 0; i < p; ++i) {
        if (d[i] < 0.0) {
            d[i] = -d[i];
            negate_row(vt.row(i));
        }
    }
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

    SvdFactorization f;
    f.u = Matrix(ut.cols(), p);
    f.v = Matrix(vt.cols(), p);
    std::vector<double> sigma(p);
    for (std::size_t j = 0; j < p; ++j) {
        const std::size_t src = order[j];
        sigma[j] = d[src];
        auto ur = std::as_const(ut).row(src);
        for (std::size_t i = 0; i < ur.size(); ++i) {
            f.u(i, j) = ur[i];
        }
        auto vr = std::as_const(vt).row(src);
        for (std::size_t i = 0; i < vr.size(); ++i) {
            f.v(i, j) = vr[i];
        }
    }
    f.sigma = Vector(std::move(sigma));
    return f;
}

} // namespace

Matrix Bidiagonal::as_matrix() const {
    const std::size_t n = diag.size();
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        b(i, i) = diag[i];
        if (i + 1 < n) {
            b(i, i + 1) = superdiag[i];
        }
    }
    return b;
}

Bidiagonal bidiagonalize(const Matrix& a) {
    detail::BidiagonalWork w = detail::householder_bidiagonalize(a);
    Bidiagonal b;
    b.diag = Vector(std::move(w.diag));
    b.superdiag = Vector(std::move(w.superdiag));
    b.left = transpose(w.left_t);
    b.right = transpose(w.right_t);
    return b;
}

SvdFactorization svd(const Matrix& a) {
    const bool wide = a.rows() < a.cols();
    const Matrix tall = wide ? transpose(a) : a;

    detail::BidiagonalWork w = detail::householder_bidiagonalize(tall);
    BidiagonalQr(w.diag, w.superdiag, w.left_t, w.right_t).run();
    SvdFactorization f = finish(w.diag, w.left_t, w.right_t);
    if (wide) {
        std::swap(f.u, f.v);
    }
    f.rank = numerical_rank(f.sigma, a.rows(), a.cols());
    canonicalize_signs(f);
    return f;
}

double rank_threshold(const Vector& sigma, std::size_t m, std::size_t n) {
    if (sigma.empty()) {
        return 0.0;
    }
    return static_cast<double>(std::max(m, n)) * kEps * sigma[0];
}

std::size_t numerical_rank(const Vector& sigma, std::size_t m, std::size_t n) {
    const double threshold = rank_threshold(sigma, m, n);
    std::size_t r = 0;
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        if (sigma[j] > threshold) {
            ++r;
        }
    }
    return r;
}

void canonicalize_signs(SvdFactorization& f) {
    for (std::size_t j = 0; j < f.p(); ++j) {
        std::size_t best = 0;
        double best_abs = -1.0;
        for (std::size_t i = 0; i < f.v.rows(); ++i) {
            const double x = std::abs(f.v(i, j));
            if (x > best_abs) {
                best_abs = x;
                best = i;
            }
        }
        if (f.v.rows() > 0 && f.v(best, j) < 0.0) {
            for (std::size_t i = 0; i < f.v.rows(); ++i) {
                f.v(i, j) = -f.v(i, j);
            }
            for (std::size_t i = 0; i < f.u.rows(); ++i) {
                f.u(i, j) = -f.u(i, j);
            }
        }
    }
}

} // namespace lrk
