#include "lrk/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace lrk {

ImageBuffer synthetic_star_field(const StarFieldOptions& opts) {
    const std::size_t w = opts.width;
    const std::size_t h = opts.height;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, opts.noise_sigma);

    std::vector<double> field(w * h);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const double x = w > 1 ? static_cast<double>(c) / static_cast<double>(w - 1) : 0.0;
            const double y = h > 1 ? static_cast<double>(r) / static_cast<double>(h - 1) : 0.0;
            field[r * w + c] = opts.sky_level * (1.0 + opts.gradient * (0.6 * x + 0.4 * y - 0.5));
        }
    }

    for (std::size_t s = 0; s < opts.stars; ++s) {
        const double cx = unit(rng) * static_cast<double>(w);
        const double cy = unit(rng) * static_cast<double>(h);
        // Magnitude-like brightness distribution: many faint, few bright.
        const double peak = 40000.0 * std::pow(unit(rng), 4.0) + 500.0;
        const double width = 0.8 + 2.5 * unit(rng);
        const auto reach = static_cast<long>(std::ceil(4.0 * width));
        const long r0 = std::max(0L, static_cast<long>(cy) - reach);
        const long r1 = std::min(static_cast<long>(h) - 1, static_cast<long>(cy) + reach);
        const long c0 = std::max(0L, static_cast<long>(cx) - reach);
        const long c1 = std::min(static_cast<long>(w) - 1, static_cast<long>(cx) + reach);
        for (long r = r0; r <= r1; ++r) {
            for (long c = c0; c <= c1; ++c) {
                const double dx = static_cast<double>(c) + 0.5 - cx;
                const double dy = static_cast<double>(r) + 0.5 - cy;
                field[static_cast<std::size_t>(r) * w + static_cast<std::size_t>(c)] +=
                    peak * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
            }
        }
    }

    std::vector<std::uint16_t> pixels(w * h);
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double v = std::round(field[i] + noise(rng));
        pixels[i] = static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
    }
    return ImageBuffer(w, h, std::move(pixels), ImageSource::synthetic);
}

} // namespace lrk
