#include "lrk/errors.hpp"
#include "lrk/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace lrk {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxJacobiSweeps = 100;

double off_diagonal_norm(const Matrix& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            if (i != j) {
                s += g(i, j) * g(i, j);
            }
        }
    }
    return std::sqrt(s);
}

/// Cyclic Jacobi: on return g is (numerically) diagonal and g_in = V g V^T.
Matrix jacobi_eigen(Matrix& g) {
    const std::size_t n = g.rows();
    Matrix v = Matrix::identity(n);
    const double threshold = kEps * frobenius_norm(g);

    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        if (off_diagonal_norm(g) <= threshold) {
            return v;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double gpq = g(p, q);
                if (gpq == 0.0) {
                    continue;
                }
                const double tau = (g(q, q) - g(p, p)) / (2.0 * gpq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = t * c;

                // g <- J^T g J, J = [[c, s], [-s, c]] in the (p, q) plane.
                for (std::size_t k = 0; k < n; ++k) {
                    const double gkp = g(k, p);
                    const double gkq = g(k, q);
                    g(k, p) = c * gkp - s * gkq;
                    g(k, q) = s * gkp + c * gkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double gpk = g(p, k);
                    const double gqk = g(q, k);
                    g(p, k) = c * gpk - s * gqk;
                    g(q, k) = s * gpk + c * gqk;
                }
                g(p, q) = 0.0;
                g(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    throw Error("gram oracle: Jacobi eigensolver did not converge");
}

void subtract_projection(std::vector<double>& x, const std::vector<double>& q) {
    const double c = dot(x, q);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] -= c * q[i];
    }
}

void normalize(std::vector<double>& x) {
    const double norm = two_norm_vec(x);
    for (double& xi : x) {
        xi /= norm;
    }
}

SvdFactorization tall_oracle(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    Matrix g = gram(a);
    const Matrix eigvecs = jacobi_eigen(g);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return g(i, i) > g(j, j); });

    SvdFactorization f;
    f.v = Matrix(n, n);
    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        sigma[j] = std::sqrt(std::max(g(order[j], order[j]), 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            f.v(i, j) = eigvecs(i, order[j]);
        }
    }
    f.sigma = Vector(std::move(sigma));

    // u_j = A v_j / sigma_j for the numerically nonzero sigma_j, re-orthogonalized
    // against the earlier u's to absorb the rounding of the Gram route.
    const double threshold = rank_threshold(f.sigma, m, n);
    std::vector<std::vector<double>> us;
    for (std::size_t j = 0; j < n && f.sigma[j] > threshold; ++j) {
        const Vector av = matvec(a, f.v.column(j));
        std::vector<double> u(av.values().begin(), av.values().end());
        for (double& x : u) {
            x /= f.sigma[j];
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : us) {
                subtract_projection(u, q);
            }
        }
        normalize(u);
        us.push_back(std::move(u));
    }

    Matrix partial(m, us.size());
    for (std::size_t j = 0; j < us.size(); ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            partial(i, j) = us[j][i];
        }
    }
    const Matrix full = complete_basis(partial);
    f.u = Matrix(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            f.u(i, j) = full(i, j);
        }
    }
    return f;
}

} // namespace

SvdFactorization svd_via_gram_oracle(const Matrix& a) {
    const std::size_t p = std::min(a.rows(), a.cols());
    if (p > kGramOracleMaxDim) {
        throw DimensionError("gram oracle: min(m, n) = " + std::to_string(p) +
                             " exceeds the oracle limit of " + std::to_string(kGramOracleMaxDim));
    }
    const bool wide = a.rows() < a.cols();
    SvdFactorization f = tall_oracle(wide ? transpose(a) : a);
    if (wide) {
        std::swap(f.u, f.v);
    }
    f.rank = numerical_rank(f.sigma, a.rows(), a.cols());
    canonicalize_signs(f);
    return f;
}

Matrix complete_basis(const Matrix& partial) {
    const std::size_t m = partial.rows();
    const std::size_t q = partial.cols();
    if (q > m) {
        throw DimensionError("complete_basis: more columns than rows");
    }
    if (orthonormality_defect(partial) > 1e-8) {
        throw InvalidArgument("complete_basis: input columns are not orthonormal");
    }

    std::vector<std::vector<double>> cols;
    cols.reserve(m);
    for (std::size_t j = 0; j < q; ++j) {
        const Vector c = partial.column(j);
        cols.emplace_back(c.values().begin(), c.values().end());
    }

    // residual[i] = squared norm of e_i after projecting out the current basis.
    std::vector<double> residual(m, 1.0);
    for (const auto& c : cols) {
        for (std::size_t i = 0; i < m; ++i) {
            residual[i] -= c[i] * c[i];
        }
    }

    while (cols.size() < m) {
        const std::size_t pick = static_cast<std::size_t>(
            std::max_element(residual.begin(), residual.end()) - residual.begin());
        std::vector<double> x(m, 0.0);
        x[pick] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& c : cols) {
                subtract_projection(x, c);
            }
        }
        normalize(x);
        for (std::size_t i = 0; i < m; ++i) {
            residual[i] -= x[i] * x[i];
        }
        cols.push_back(std::move(x));
    }

    Matrix out(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            out(i, j) = cols[j][i];
        }
    }
    return out;
}

} // namespace lrk
