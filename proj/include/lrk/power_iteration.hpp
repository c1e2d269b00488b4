#pragma once

#include "lrk/lowrank.hpp"
#include "lrk/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>

namespace lrk {

struct PowerIterationOptions {
    /// Stop once the estimate changes by less than this, relative.
    double tolerance = 1e-14;
    std::size_t max_iterations = 20000;
    std::uint64_t seed = 0x5eed;
};

struct PowerIterationResult {
    double norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Linear operator of shape rows x cols given by its action and the action of
/// its transpose.
struct LinearOperator {
    std::size_t rows;
    std::size_t cols;
    std::function<Vector(const Vector&)> apply;
    std::function<Vector(const Vector&)> apply_transposed;
};

/// Estimates ||B||_2 by power iteration on B^T B from a seeded random start.
/// The estimate never exceeds the true norm (up to rounding).
PowerIterationResult power_two_norm(const LinearOperator& op, const PowerIterationOptions& opts = {});
PowerIterationResult power_two_norm(const Matrix& a, const PowerIterationOptions& opts = {});

/// ||A - A_k||_2 by power iteration on the residual operator; A_k is applied
/// through its factors and never formed.
PowerIterationResult residual_two_norm(const Matrix& a, const TruncatedModel& t,
                                       const PowerIterationOptions& opts = {});

} // namespace lrk
