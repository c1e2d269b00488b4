#pragma once

#include "lrk/matrix.hpp"
#include "lrk/svd.hpp"

#include <cstddef>
#include <cstdint>
#include <variant>

namespace lrk {

/// The k singular triples kept from a factorization, plus the original shape.
///
/// Stores exactly k(m + n) + k numbers: the sigma_j, u_j and v_j of the
/// partial sum A_k = sum_j sigma_j u_j v_j^T.
class TruncatedModel {
public:
    /// Validates 1 <= k <= min(m, n), positive non-increasing sigma and
    /// orthonormal columns (1e-10). Throws InvalidArgument / DimensionError.
    TruncatedModel(std::size_t m, std::size_t n, Vector sigma, Matrix u_cols, Matrix v_cols);

    std::size_t rows() const noexcept { return m_; }
    std::size_t cols() const noexcept { return n_; }
    std::size_t rank() const noexcept { return sigma_.size(); }
    const Vector& sigma() const noexcept { return sigma_; }
    const Matrix& u_cols() const noexcept { return u_; }
    const Matrix& v_cols() const noexcept { return v_; }

    std::uint64_t stored_numbers() const noexcept;

    friend bool operator==(const TruncatedModel&, const TruncatedModel&) = default;

private:
    std::size_t m_;
    std::size_t n_;
    Vector sigma_;
    Matrix u_;
    Matrix v_;
};

/// Keeps the leading k triples; requires 1 <= k <= f.rank.
TruncatedModel truncate(const SvdFactorization& f, std::size_t k);

/// A_k = sum_{j<k} sigma_j u_j v_j^T as a dense m x n matrix.
Matrix reconstruct(const TruncatedModel& t);

/// Unit-Frobenius weight matrix u_j v_j^T, j counted from 1.
Matrix weight_term(const SvdFactorization& f, std::size_t j);

/// sum_{j<=k} sigma_j (v_j^T x) u_j, without forming A_k.
Vector apply(const SvdFactorization& f, const Vector& x, std::size_t k);

/// Best achievable 2-norm error of a rank-k approximation: sigma_{k+1}, or 0
/// when k = p.
double two_norm_error(const SvdFactorization& f, std::size_t k);

/// sqrt(sum_{j>k} sigma_j^2), the Frobenius norm of A - A_k.
double frobenius_error(const Vector& sigma, std::size_t k);

/// (1 - k(m + n + 1) / (m n)) * 100. Negative when the model stores more
/// numbers than the image; not clamped.
double compression_ratio(std::size_t m, std::size_t n, std::size_t k);

/// sum_{j<=k} sigma_j^2 / sum_j sigma_j^2, in [0, 1]. A zero spectrum gives 1.
double energy_fraction(const Vector& sigma, std::size_t k);

namespace policy {
struct FixedRank {
    std::size_t k;
};
/// Largest k whose compression ratio is still >= percent.
struct TargetCr {
    double percent;
};
/// Smallest k whose energy fraction is >= threshold, in (0, 1].
struct Energy {
    double threshold;
};
/// Smallest k with sigma_{k+1} <= relative * sigma_1.
struct RelativeError {
    double relative;
};
} // namespace policy

using RankPolicy =
    std::variant<policy::FixedRank, policy::TargetCr, policy::Energy, policy::RelativeError>;

/// Chooses k in [1, numerical rank]. Singular values below the rank
/// threshold count as zero for the energy and error policies. Throws
/// PolicyError when no k in range satisfies the policy.
std::size_t select_rank(const Vector& sigma, std::size_t m, std::size_t n, const RankPolicy& policy);

struct CompressionReport {
    std::size_t k = 0;
    double cr_percent = 0.0;
    std::uint64_t stored_numbers = 0;
    std::uint64_t original_numbers = 0;
    double two_norm_error = 0.0;
    double frobenius_error = 0.0;
    double energy_fraction = 0.0;
};

/// Metrics for keeping k of the triples in f, computed from the spectrum.
/// k may range over [0, p].
CompressionReport make_report(const SvdFactorization& f, std::size_t k);

} // namespace lrk
