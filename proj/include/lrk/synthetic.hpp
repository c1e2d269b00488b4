#pragma once

#include "lrk/image_io.hpp"

#include <cstddef>
#include <cstdint>

namespace lrk {

struct StarFieldOptions {
    std::size_t width = 256;
    std::size_t height = 256;
    std::size_t stars = 400;
    double sky_level = 9000.0;
    /// Linear vignetting across the plate, as a fraction of sky_level.
    double gradient = 0.15;
    double noise_sigma = 120.0;
    std::uint64_t seed = 1;
};

/// Plate-like 16-bit test image: sky background with a gradient, Gaussian
/// star profiles of random brightness, and additive Gaussian noise.
/// Deterministic for a given seed.
ImageBuffer synthetic_star_field(const StarFieldOptions& opts);

} // namespace lrk
