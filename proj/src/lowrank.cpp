#include "lrk/lowrank.hpp"

#include "lrk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace lrk {

namespace {

constexpr double kOrthonormalTolerance = 1e-10;

Matrix leading_columns(const Matrix& a, std::size_t k) {
    Matrix out(a.rows(), k);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto src = a.row(i);
        std::copy_n(src.begin(), k, out.row(i).begin());
    }
    return out;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

TruncatedModel::TruncatedModel(std::size_t m, std::size_t n, Vector sigma, Matrix u_cols, Matrix v_cols)
    : m_(m), n_(n), sigma_(std::move(sigma)), u_(std::move(u_cols)), v_(std::move(v_cols)) {
    const std::size_t k = sigma_.size();
    if (k < 1 || k > std::min(m, n)) {
        throw DimensionError("TruncatedModel: rank " + std::to_string(k) + " outside [1, " +
                             std::to_string(std::min(m, n)) + "]");
    }
    if (u_.rows() != m || u_.cols() != k || v_.rows() != n || v_.cols() != k) {
        throw DimensionError("TruncatedModel: factor shapes do not match m, n, k");
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (!(sigma_[j] > 0.0) || (j > 0 && sigma_[j] > sigma_[j - 1])) {
            throw InvalidArgument("TruncatedModel: sigma must be positive and non-increasing");
        }
    }
    if (orthonormality_defect(u_) > kOrthonormalTolerance ||
        orthonormality_defect(v_) > kOrthonormalTolerance) {
        throw InvalidArgument("TruncatedModel: retained columns are not orthonormal");
    }
}

std::uint64_t TruncatedModel::stored_numbers() const noexcept {
    const std::uint64_t k = rank();
    return k * (static_cast<std::uint64_t>(m_) + n_) + k;
}

TruncatedModel truncate(const SvdFactorization& f, std::size_t k) {
    if (k < 1 || k > f.rank) {
        throw DimensionError("truncate: k = " + std::to_string(k) + " outside [1, " +
                             std::to_string(f.rank) + "]");
    }
    std::vector<double> sigma(f.sigma.values().begin(), f.sigma.values().begin() + k);
    return TruncatedModel(f.rows(), f.cols(), Vector(std::move(sigma)), leading_columns(f.u, k),
                          leading_columns(f.v, k));
}

Matrix reconstruct(const TruncatedModel& t) {
    const std::size_t k = t.rank();
    const Matrix vt = transpose(t.v_cols());
    Matrix out(t.rows(), t.cols());
    for (std::size_t i = 0; i < t.rows(); ++i) {
        auto oi = out.row(i);
        for (std::size_t j = 0; j < k; ++j) {
            const double scale = t.sigma()[j] * t.u_cols()(i, j);
            auto vj = vt.row(j);
            for (std::size_t col = 0; col < oi.size(); ++col) {
                oi[col] += scale * vj[col];
            }
        }
    }
    return out;
}

Matrix weight_term(const SvdFactorization& f, std::size_t j) {
    if (j < 1 || j > f.p()) {
        throw DimensionError("weight_term: index " + std::to_string(j) + " outside [1, " +
                             std::to_string(f.p()) + "]");
    }
    return outer_product(f.u.column(j - 1), f.v.column(j - 1));
}

Vector apply(const SvdFactorization& f, const Vector& x, std::size_t k) {
    if (x.size() != f.cols()) {
        throw DimensionError("apply: vector of length " + std::to_string(x.size()) +
                             " for a matrix with " + std::to_string(f.cols()) + " columns");
    }
    if (k > f.rank) {
        throw DimensionError("apply: k exceeds the numerical rank");
    }
    // c_j = sigma_j v_j^T x
    std::vector<double> coeff(k, 0.0);
    for (std::size_t i = 0; i < f.cols(); ++i) {
        const double xi = x[i];
        for (std::size_t j = 0; j < k; ++j) {
            coeff[j] += f.v(i, j) * xi;
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        coeff[j] *= f.sigma[j];
    }
    Vector y(f.rows());
    for (std::size_t i = 0; i < f.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            s += coeff[j] * f.u(i, j);
        }
        y[i] = s;
    }
    return y;
}

double two_norm_error(const SvdFactorization& f, std::size_t k) {
    if (k > f.p()) {
        throw DimensionError("two_norm_error: k exceeds min(m, n)");
    }
    return k < f.p() ? f.sigma[k] : 0.0;
}

double frobenius_error(const Vector& sigma, std::size_t k) {
    double tail = 0.0;
    for (std::size_t j = sigma.size(); j-- > k;) {
        tail += sigma[j] * sigma[j];
    }
    return std::sqrt(tail);
}

double compression_ratio(std::size_t m, std::size_t n, std::size_t k) {
    const double stored = static_cast<double>(k) * (static_cast<double>(m) + static_cast<double>(n) + 1.0);
    const double original = static_cast<double>(m) * static_cast<double>(n);
    return (1.0 - stored / original) * 100.0;
}

double energy_fraction(const Vector& sigma, std::size_t k) {
    double head = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        const double e = sigma[j] * sigma[j];
        total += e;
        if (j < k) {
            head += e;
        }
    }
    if (total == 0.0) {
        return 1.0;
    }
    return std::min(head / total, 1.0);
}

std::size_t select_rank(const Vector& sigma, std::size_t m, std::size_t n, const RankPolicy& policy) {
    const std::size_t r = numerical_rank(sigma, m, n);
    if (r == 0) {
        throw PolicyError("select_rank: the matrix is numerically zero");
    }
    return std::visit(
        Overloaded{
            [&](const policy::FixedRank& p) -> std::size_t {
                if (p.k < 1 || p.k > r) {
                    throw PolicyError("rank " + std::to_string(p.k) + " outside [1, " +
                                      std::to_string(r) + "]");
                }
                return p.k;
            },
            [&](const policy::TargetCr& p) -> std::size_t {
                if (!std::isfinite(p.percent) || compression_ratio(m, n, 1) < p.percent) {
                    throw PolicyError("target compression ratio unreachable: CR(1) = " +
                                      std::to_string(compression_ratio(m, n, 1)));
                }
                std::size_t k = 1;
                while (k < r && compression_ratio(m, n, k + 1) >= p.percent) {
                    ++k;
                }
                return k;
            },
            [&](const policy::Energy& p) -> std::size_t {
                if (!(p.threshold > 0.0 && p.threshold <= 1.0)) {
                    throw PolicyError("energy threshold must lie in (0, 1]");
                }
                double total = 0.0;
                for (std::size_t j = 0; j < r; ++j) {
                    total += sigma[j] * sigma[j];
                }
                double head = 0.0;
                for (std::size_t k = 1; k < r; ++k) {
                    head += sigma[k - 1] * sigma[k - 1];
                    if (head / total >= p.threshold) {
                        return k;
                    }
                }
                return r;
            },
            [&](const policy::RelativeError& p) -> std::size_t {
                if (!(p.relative >= 0.0) || !std::isfinite(p.relative)) {
                    throw PolicyError("relative error bound must be a finite value >= 0");
                }
                const double bound = p.relative * sigma[0];
                for (std::size_t k = 1; k < r; ++k) {
                    if (sigma[k] <= bound) {
                        return k;
                    }
                }
                return r;
            },
        },
        policy);
}

CompressionReport make_report(const SvdFactorization& f, std::size_t k) {
    if (k > f.p()) {
        throw DimensionError("make_report: k exceeds min(m, n)");
    }
    CompressionReport rep;
    rep.k = k;
    rep.cr_percent = compression_ratio(f.rows(), f.cols(), k);
    rep.stored_numbers = static_cast<std::uint64_t>(k) * (f.rows() + f.cols()) + k;
    rep.original_numbers = static_cast<std::uint64_t>(f.rows()) * f.cols();
    rep.two_norm_error = two_norm_error(f, k);
    rep.frobenius_error = frobenius_error(f.sigma, k);
    rep.energy_fraction = energy_fraction(f.sigma, k);
    return rep;
}

} // namespace lrk
