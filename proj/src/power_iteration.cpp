#include "lrk/power_iteration.hpp"

#include "lrk/errors.hpp"

#include <cmath>
#include <random>

namespace lrk {

namespace {

void scale_to_unit(Vector& x, double norm) {
    for (double& xi : x.values()) {
        xi /= norm;
    }
}

} // namespace

PowerIterationResult power_two_norm(const LinearOperator& op, const PowerIterationOptions& opts) {
    PowerIterationResult res;
    if (op.rows == 0 || op.cols == 0) {
        res.converged = true;
        return res;
    }

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    Vector x(op.cols);
    for (double& xi : x.values()) {
        xi = normal(rng);
    }
    scale_to_unit(x, two_norm_vec(x));

    double previous = 0.0;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        const Vector bx = op.apply(x);
        const double estimate = two_norm_vec(bx);
        res.norm = std::max(res.norm, estimate);
        res.iterations = it;
        if (estimate == 0.0) {
            // x landed in the null space of B; only possible for B = 0 from a
            // random start.
            res.converged = true;
            return res;
        }
        if (it > 1 && std::abs(estimate - previous) <= opts.tolerance * estimate) {
            res.converged = true;
            return res;
        }
        previous = estimate;

        x = op.apply_transposed(bx);
        const double xn = two_norm_vec(x);
        if (xn == 0.0) {
            res.converged = true;
            return res;
        }
        scale_to_unit(x, xn);
    }
    return res;
}

PowerIterationResult power_two_norm(const Matrix& a, const PowerIterationOptions& opts) {
    const LinearOperator op{
        a.rows(),
        a.cols(),
        [&a](const Vector& x) { return matvec(a, x); },
        [&a](const Vector& y) { return matvec_transposed(a, y); },
    };
    return power_two_norm(op, opts);
}

PowerIterationResult residual_two_norm(const Matrix& a, const TruncatedModel& t,
                                       const PowerIterationOptions& opts) {
    if (a.rows() != t.rows() || a.cols() != t.cols()) {
        throw DimensionError("residual_two_norm: model shape differs from the matrix");
    }
    const Matrix& u = t.u_cols();
    const Matrix& v = t.v_cols();
    const LinearOperator op{
        a.rows(),
        a.cols(),
        [&](const Vector& x) {
            // (A - U S V^T) x
            Vector y = matvec(a, x);
            const Vector c = matvec_transposed(v, x);
            for (std::size_t i = 0; i < u.rows(); ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < t.rank(); ++j) {
                    s += u(i, j) * t.sigma()[j] * c[j];
                }
                y[i] -= s;
            }
            return y;
        },
        [&](const Vector& y) {
            // (A - U S V^T)^T y
            Vector x = matvec_transposed(a, y);
            const Vector c = matvec_transposed(u, y);
            for (std::size_t i = 0; i < v.rows(); ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < t.rank(); ++j) {
                    s += v(i, j) * t.sigma()[j] * c[j];
                }
                x[i] -= s;
            }
            return x;
        },
    };
    return power_two_norm(op, opts);
}

} // namespace lrk
