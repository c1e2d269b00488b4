#pragma once

#include "lrk/lowrank.hpp"
#include "lrk/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lrk {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

enum class ImageSource { fits, pgm, synthetic };

/// 16-bit grayscale pixel grid, row-major, row 0 first.
struct ImageBuffer {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint16_t> pixels;
    ImageSource source = ImageSource::synthetic;
    /// FITS scaling of the source file; physical = bzero + bscale * raw.
    double bzero = 0.0;
    double bscale = 1.0;

    ImageBuffer() = default;
    /// Throws InvalidArgument unless pixels.size() == width * height and bscale != 0.
    ImageBuffer(std::size_t width, std::size_t height, std::vector<std::uint16_t> pixels,
                ImageSource source = ImageSource::synthetic, double bzero = 0.0, double bscale = 1.0);

    std::uint16_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

// FITS: 2-D, BITPIX = 16 primary arrays only. Physical values must land in
// [0, 65535]; non-integral values are rounded to nearest.
ImageBuffer read_fits(ByteView bytes);

// Binary PGM (P5) with maxval 65535, samples big-endian.
Bytes write_pgm(const ImageBuffer& img);
ImageBuffer read_pgm(ByteView bytes);

/// height x width matrix of the raw pixel values.
Matrix image_to_matrix(const ImageBuffer& img);
/// Rounds half away from zero and clamps to [0, 65535].
ImageBuffer matrix_to_image(const Matrix& a);

// LRK1 model container, all integers and floats little-endian:
//   "LRK1" | m, n, k (u32) | sigma[k] | u columns (m*k) | v columns (n*k) | CRC-32
// Column j of U is stored as m consecutive doubles, then column j + 1, etc.
inline constexpr std::string_view kModelMagic = "LRK1";
std::uint64_t model_file_size(std::uint64_t m, std::uint64_t n, std::uint64_t k);
Bytes save_model(const TruncatedModel& t);
/// Throws IntegrityError with kind bad_magic, length_mismatch, bad_checksum, or
/// invalid_payload (intact file whose contents violate the model invariants).
TruncatedModel load_model(ByteView bytes);

/// "index,sigma" header plus one row per value (1-based index, 17 significant digits).
std::string spectrum_csv(const Vector& sigma);
Vector parse_spectrum_csv(std::string_view csv);

enum class FileFormat { fits, pgm, model, unknown };
/// Sniffs the leading magic bytes: "SIMPLE", "P<digit>", "LRK1".
FileFormat detect_format(ByteView bytes);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteView bytes);

/// Loads a FITS or PGM image, chosen by magic bytes.
ImageBuffer load_image(ByteView bytes);

} // namespace lrk
