#include "lrk/errors.hpp"
#include "lrk/power_iteration.hpp"
#include "lrk/svd.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace lrk {
namespace {

const Matrix kPlateExample{{0, 1}, {1, 0}, {1, 1}};

Matrix reassemble(const SvdFactorization& f) {
    return matmul(matmul(f.u, Matrix::diagonal(f.p(), f.p(), f.sigma.values())), transpose(f.v));
}

void expect_valid_factorization(const Matrix& a, const SvdFactorization& f) {
    const std::size_t p = std::min(a.rows(), a.cols());
    ASSERT_EQ(f.p(), p);
    ASSERT_EQ(f.u.rows(), a.rows());
    ASSERT_EQ(f.u.cols(), p);
    ASSERT_EQ(f.v.rows(), a.cols());
    ASSERT_EQ(f.v.cols(), p);
    for (std::size_t j = 0; j < p; ++j) {
        EXPECT_GE(f.sigma[j], 0.0);
        if (j > 0) {
            EXPECT_LE(f.sigma[j], f.sigma[j - 1]);
        }
    }
    EXPECT_LE(orthonormality_defect(f.u), 1e-10);
    EXPECT_LE(orthonormality_defect(f.v), 1e-10);
    EXPECT_LE(frobenius_norm(a - reassemble(f)), 1e-8 * frobenius_norm(a));
    EXPECT_LE(f.rank, p);
}

TEST(BidiagonalizeTest, AlreadyBidiagonalIsUnchanged) {
    const Matrix b{{4, 1, 0, 0}, {0, 3, 2, 0}, {0, 0, 2, 5}, {0, 0, 0, 1}, {0, 0, 0, 0}};
    const Bidiagonal r = bidiagonalize(b);
    const std::vector<double> diag{4, 3, 2, 1};
    const std::vector<double> super{1, 2, 5};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(std::abs(r.diag[i]), diag[i]);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(std::abs(r.superdiag[i]), super[i]);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_DOUBLE_EQ(std::abs(r.left(i, j)), i == j ? 1.0 : 0.0);
            EXPECT_DOUBLE_EQ(std::abs(r.right(i, j)), i == j ? 1.0 : 0.0);
        }
    }
}

TEST(BidiagonalizeTest, PlateExamplePreservesFrobeniusNorm) {
    const Bidiagonal r = bidiagonalize(kPlateExample);
    ASSERT_EQ(r.diag.size(), 2u);
    ASSERT_EQ(r.superdiag.size(), 1u);
    EXPECT_NEAR(frobenius_norm(r.as_matrix()), frobenius_norm(kPlateExample), 1e-14);
    EXPECT_NEAR(frobenius_norm(r.as_matrix()), 2.0, 1e-14);
}

TEST(BidiagonalizeTest, RandomReconstruction) {
    std::mt19937_64 rng(21);
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{6, 4}, {9, 9}, {30, 7}, {5, 1}}) {
        const Matrix a = testing::random_matrix(m, n, rng);
        const Bidiagonal r = bidiagonalize(a);
        EXPECT_LE(orthonormality_defect(r.left), 1e-10);
        EXPECT_LE(orthonormality_defect(r.right), 1e-10);
        const Matrix back = matmul(matmul(r.left, r.as_matrix()), transpose(r.right));
        EXPECT_LE(frobenius_norm(back - a), 1e-8 * frobenius_norm(a));
    }
}

TEST(BidiagonalizeTest, RejectsWideInput) {
    EXPECT_THROW(bidiagonalize(Matrix(2, 3)), DimensionError);
}

TEST(SvdTest, PlateExampleWorkedByHand) {
    const SvdFactorization f = svd(kPlateExample);
    expect_valid_factorization(kPlateExample, f);
    EXPECT_NEAR(f.sigma[0], std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(f.sigma[1], 1.0, 1e-12);
    EXPECT_EQ(f.rank, 2u);

    const double s2 = std::sqrt(2.0);
    const double s6 = std::sqrt(6.0);
    // v_1 has two equal entries; the sign convention makes them positive.
    EXPECT_NEAR(f.v(0, 0), 1 / s2, 1e-12);
    EXPECT_NEAR(f.v(1, 0), 1 / s2, 1e-12);
    EXPECT_NEAR(f.u(0, 0), 1 / s6, 1e-12);
    EXPECT_NEAR(f.u(1, 0), 1 / s6, 1e-12);
    EXPECT_NEAR(f.u(2, 0), 2 / s6, 1e-12);
    // v_2 = +-(1, -1)/sqrt(2) and u_2 = A v_2 / sigma_2 = +-(-1, 1, 0)/sqrt(2).
    EXPECT_NEAR(std::abs(f.v(0, 1)), 1 / s2, 1e-12);
    EXPECT_NEAR(f.v(0, 1), -f.v(1, 1), 1e-12);
    const double sign = f.v(0, 1) > 0 ? 1.0 : -1.0;
    EXPECT_NEAR(f.u(0, 1), -sign / s2, 1e-12);
    EXPECT_NEAR(f.u(1, 1), sign / s2, 1e-12);
    EXPECT_NEAR(f.u(2, 1), 0.0, 1e-12);
}

TEST(SvdTest, IdentityHasUnitSingularValues) {
    for (std::size_t n : {1u, 2u, 5u, 12u}) {
        const SvdFactorization f = svd(Matrix::identity(n));
        for (double s : f.sigma.values()) {
            EXPECT_NEAR(s, 1.0, 1e-15);
        }
        EXPECT_EQ(f.rank, n);
    }
}

TEST(SvdTest, PermutedDiagonal) {
    const Matrix a{{0, 3, 0}, {0, 0, 1}, {5, 0, 0}};
    const SvdFactorization f = svd(a);
    EXPECT_NEAR(f.sigma[0], 5.0, 1e-14);
    EXPECT_NEAR(f.sigma[1], 3.0, 1e-14);
    EXPECT_NEAR(f.sigma[2], 1.0, 1e-14);
    expect_valid_factorization(a, f);
}

TEST(SvdTest, ZeroMatrix) {
    const Matrix a(4, 3);
    const SvdFactorization f = svd(a);
    expect_valid_factorization(a, f);
    for (double s : f.sigma.values()) {
        EXPECT_EQ(s, 0.0);
    }
    EXPECT_EQ(f.rank, 0u);
}

TEST(SvdTest, WideMatrixSwapsFactors) {
    std::mt19937_64 rng(22);
    const Matrix a = testing::random_matrix(3, 8, rng);
    const SvdFactorization f = svd(a);
    expect_valid_factorization(a, f);
    const SvdFactorization t = svd(transpose(a));
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(f.sigma[j], t.sigma[j], 1e-13 * f.sigma[0]);
    }
}

TEST(SvdTest, SignConventionLargestEntryOfVPositive) {
    std::mt19937_64 rng(23);
    const SvdFactorization f = svd(testing::random_matrix(7, 5, rng));
    for (std::size_t j = 0; j < f.p(); ++j) {
        double best = 0.0;
        for (std::size_t i = 0; i < f.v.rows(); ++i) {
            if (std::abs(f.v(i, j)) > std::abs(best)) {
                best = f.v(i, j);
            }
        }
        EXPECT_GT(best, 0.0);
    }
}

TEST(SvdTest, DeterministicAcrossRuns) {
    std::mt19937_64 rng(24);
    const Matrix a = testing::random_matrix(40, 25, rng);
    const SvdFactorization f = svd(a);
    const SvdFactorization g = svd(a);
    EXPECT_EQ(f.u, g.u);
    EXPECT_EQ(f.v, g.v);
    EXPECT_EQ(f.sigma, g.sigma);
}

TEST(SvdTest, RankDeficientAndGradedInputs) {
    std::mt19937_64 rng(25);
    // rank 3 product of random factors
    const Matrix low = matmul(testing::random_matrix(20, 3, rng), testing::random_matrix(3, 12, rng));
    const SvdFactorization f = svd(low);
    expect_valid_factorization(low, f);
    EXPECT_EQ(f.rank, 3u);

    // singular values spanning 20 orders of magnitude
    const Matrix q = testing::random_orthonormal(10, 6, rng);
    const Matrix w = testing::random_orthonormal(6, 6, rng);
    const std::vector<double> spread{1e10, 1e6, 1e2, 1, 1e-4, 1e-10};
    const Matrix graded = matmul(matmul(q, Matrix::diagonal(6, 6, spread)), transpose(w));
    const SvdFactorization g = svd(graded);
    expect_valid_factorization(graded, g);
    // Absolute accuracy is ~eps * sigma_1, so only the top values are checked relatively.
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(g.sigma[j], spread[j], 1e-6 * spread[j]);
    }

    // repeated singular values
    const Matrix rep = matmul(matmul(q, Matrix::diagonal(6, 6, std::vector<double>{2, 2, 2, 1, 1, 0})),
                              transpose(w));
    const SvdFactorization h = svd(rep);
    expect_valid_factorization(rep, h);
    EXPECT_EQ(h.rank, 5u);
}

TEST(SvdTest, RandomShapesSatisfyInvariants) {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 40; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 30);
        const Matrix a = testing::random_matrix(dim(rng), dim(rng), rng);
        expect_valid_factorization(a, svd(a));
    }
}

TEST(SvdTest, ConvergenceErrorNamesSuperdiagonal) {
    const ConvergenceError e(7, 90);
    EXPECT_EQ(e.superdiag_index(), 7u);
    EXPECT_NE(std::string(e.what()).find("superdiagonal entry 7"), std::string::npos);
}

TEST(SvdTest, TwoNormIsLargestSingularValue) {
    std::mt19937_64 rng(27);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 5; ++trial) {
        // Two columns: 10^4 random directions come within ~3e-4 rad of v_1.
        const Matrix a = testing::random_matrix(5, 2, rng);
        const double sigma1 = svd(a).sigma[0];
        double best = 0.0;
        for (int s = 0; s < 10000; ++s) {
            Vector x{normal(rng), normal(rng)};
            const double nx = two_norm_vec(x);
            for (double& xi : x.values()) {
                xi /= nx;
            }
            best = std::max(best, two_norm_vec(matvec(a, x)));
        }
        EXPECT_LE(best, sigma1 * (1 + 1e-12));
        EXPECT_NEAR(best, sigma1, 1e-6 * sigma1);
    }
    // Wider matrices: random directions never exceed sigma_1.
    const Matrix b = testing::random_matrix(8, 6, rng);
    const double sigma1 = svd(b).sigma[0];
    for (int s = 0; s < 2000; ++s) {
        Vector x = testing::random_vector(6, rng);
        const double nx = two_norm_vec(x);
        EXPECT_LE(two_norm_vec(matvec(b, x)) / nx, sigma1 * (1 + 1e-12));
    }
}

TEST(SvdTest, UnitaryInvariance) {
    std::mt19937_64 rng(28);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = testing::random_matrix(7, 5, rng);
        const Matrix q = testing::random_orthonormal(7, 7, rng);
        const Matrix w = testing::random_orthonormal(5, 5, rng);
        const double lhs = svd(matmul(matmul(q, a), transpose(w))).sigma[0];
        const double rhs = svd(a).sigma[0];
        EXPECT_NEAR(lhs, rhs, 1e-10 * rhs);
    }
}

TEST(SvdTest, InverseNormIsReciprocalOfSmallestSingularValue) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = testing::random_matrix(5, 5, rng);
        const SvdFactorization f = svd(a);
        const double inv_norm = power_two_norm(testing::gauss_jordan_inverse(a)).norm;
        EXPECT_NEAR(1.0 / f.sigma[4], inv_norm, 1e-6 * inv_norm);
    }
}

TEST(NumericalRankTest, Examples) {
    EXPECT_EQ(numerical_rank(Vector{std::sqrt(3.0), 1.0}, 3, 2), 2u);
    EXPECT_EQ(numerical_rank(Vector{1.0, 0.0, 0.0}, 3, 3), 1u);
    EXPECT_EQ(numerical_rank(Vector{0.0, 0.0}, 2, 2), 0u);
    EXPECT_EQ(numerical_rank(Vector{}, 0, 0), 0u);
}

TEST(NumericalRankTest, PlateSpectrumTailIsZero) {
    // Leading and trailing values of the 9898 x 9897 plate spectrum.
    const Vector sigma{399935695, 36103983, 27223347, 19834987, 13977320, 12295017,
                       10881892,  10418273, 9556364,  9037119,  5.954,    1.832,
                       4.7e-11};
    EXPECT_EQ(numerical_rank(sigma, 9898, 9897), sigma.size() - 1);
}

TEST(CompleteBasisTest, EmptyInputGivesIdentity) {
    EXPECT_EQ(complete_basis(Matrix(3, 0)), Matrix::identity(3));
}

TEST(CompleteBasisTest, PlateExampleThirdVector) {
    const double s6 = std::sqrt(6.0);
    const double s2 = std::sqrt(2.0);
    const Matrix partial{{1 / s6, -1 / s2}, {1 / s6, 1 / s2}, {2 / s6, 0}};
    const Matrix full = complete_basis(partial);
    const double s3 = std::sqrt(3.0);
    const double sign = full(0, 2) > 0 ? 1.0 : -1.0;
    EXPECT_NEAR(full(0, 2), sign / s3, 1e-12);
    EXPECT_NEAR(full(1, 2), sign / s3, 1e-12);
    EXPECT_NEAR(full(2, 2), -sign / s3, 1e-12);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            EXPECT_EQ(full(i, j), partial(i, j));
        }
    }
}

TEST(CompleteBasisTest, RandomPartialBecomesOrthogonal) {
    std::mt19937_64 rng(30);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix partial = testing::random_orthonormal(5, 2, rng);
        const Matrix full = complete_basis(partial);
        ASSERT_EQ(full.rows(), 5u);
        ASSERT_EQ(full.cols(), 5u);
        EXPECT_LE(orthonormality_defect(full), 1e-10);
        EXPECT_LE(orthonormality_defect(transpose(full)), 1e-10);
    }
}

TEST(CompleteBasisTest, RejectsNonOrthonormalInput) {
    EXPECT_THROW(complete_basis(Matrix{{1, 1}, {0, 1}, {0, 0}}), InvalidArgument);
    EXPECT_THROW(complete_basis(Matrix(2, 3)), DimensionError);
}

TEST(GramOracleTest, PlateExample) {
    const SvdFactorization f = svd_via_gram_oracle(kPlateExample);
    expect_valid_factorization(kPlateExample, f);
    // lambda = (3, 1)
    EXPECT_NEAR(f.sigma[0] * f.sigma[0], 3.0, 1e-12);
    EXPECT_NEAR(f.sigma[1] * f.sigma[1], 1.0, 1e-12);
    EXPECT_NEAR(f.sigma[0], std::sqrt(3.0), 1e-12);
}

TEST(GramOracleTest, ZeroMatrixCompletesBasis) {
    const SvdFactorization f = svd_via_gram_oracle(Matrix(3, 3));
    EXPECT_EQ(f.sigma, Vector(3));
    EXPECT_EQ(f.u, Matrix::identity(3));
    EXPECT_EQ(f.v, Matrix::identity(3));
    EXPECT_EQ(f.rank, 0u);
}

TEST(GramOracleTest, RankDeficientStillOrthonormal) {
    std::mt19937_64 rng(31);
    const Matrix a = matmul(testing::random_matrix(8, 2, rng), testing::random_matrix(2, 5, rng));
    const SvdFactorization f = svd_via_gram_oracle(a);
    EXPECT_LE(orthonormality_defect(f.u), 1e-10);
    EXPECT_LE(orthonormality_defect(f.v), 1e-10);
    EXPECT_LE(frobenius_norm(a - reassemble(f)), 1e-7 * frobenius_norm(a));
}

TEST(GramOracleTest, AgreesWithProductionEngine) {
    std::mt19937_64 rng(32);
    const Matrix a = testing::random_matrix(5, 4, rng);
    const SvdFactorization f = svd(a);
    const SvdFactorization g = svd_via_gram_oracle(a);
    for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_NEAR(f.sigma[j], g.sigma[j], 1e-10);
    }
    EXPECT_LE(testing::max_projector_difference(f, g, 1e-6), 1e-8);
}

TEST(GramOracleTest, WideInput) {
    std::mt19937_64 rng(33);
    const Matrix a = testing::random_matrix(3, 7, rng);
    const SvdFactorization g = svd_via_gram_oracle(a);
    expect_valid_factorization(a, g);
}

TEST(GramOracleTest, RejectsLargeInput) {
    EXPECT_THROW(svd_via_gram_oracle(Matrix(65, 65)), DimensionError);
    EXPECT_NO_THROW(svd_via_gram_oracle(Matrix(200, 3)));
}

TEST(CrossEngineTest, RandomSmallMatrices) {
    std::mt19937_64 rng(34);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix a = testing::random_matrix(dim(rng), dim(rng), rng);
        const SvdFactorization f = svd(a);
        const SvdFactorization g = svd_via_gram_oracle(a);
        for (std::size_t j = 0; j < f.p(); ++j) {
            EXPECT_NEAR(f.sigma[j], g.sigma[j], 1e-9 * f.sigma[0]);
        }
        EXPECT_LE(testing::max_projector_difference(f, g, 1e-6), 1e-8);
    }
}

} // namespace
} // namespace lrk
