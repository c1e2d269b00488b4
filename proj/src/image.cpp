#include "lrk/errors.hpp"
#include "lrk/image_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace lrk {

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height, std::vector<std::uint16_t> pixels,
                         ImageSource source, double bzero, double bscale)
    : width(width), height(height), pixels(std::move(pixels)), source(source), bzero(bzero),
      bscale(bscale) {
    if (this->pixels.size() != width * height) {
        throw InvalidArgument("ImageBuffer: pixel count does not match width * height");
    }
    if (bscale == 0.0) {
        throw InvalidArgument("ImageBuffer: bscale must be nonzero");
    }
}

Matrix image_to_matrix(const ImageBuffer& img) {
    std::vector<double> values(img.pixels.begin(), img.pixels.end());
    return Matrix(img.height, img.width, std::move(values));
}

ImageBuffer matrix_to_image(const Matrix& a) {
    std::vector<std::uint16_t> pixels(a.size());
    auto src = a.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
        // std::round rounds halfway cases away from zero.
        pixels[i] = static_cast<std::uint16_t>(std::clamp(std::round(src[i]), 0.0, 65535.0));
    }
    return ImageBuffer(a.cols(), a.rows(), std::move(pixels));
}

std::string spectrum_csv(const Vector& sigma) {
    std::string out = "index,sigma\n";
    char buf[64];
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        out += std::to_string(j + 1);
        out += ',';
        const auto res = std::to_chars(buf, buf + sizeof buf, sigma[j], std::chars_format::general, 17);
        out.append(buf, res.ptr);
        out += '\n';
    }
    return out;
}

Vector parse_spectrum_csv(std::string_view csv) {
    std::vector<double> values;
    std::size_t line_no = 0;
    while (!csv.empty()) {
        const auto nl = csv.find('\n');
        std::string_view line = csv.substr(0, nl);
        csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        ++line_no;
        if (line_no == 1) {
            if (line != "index,sigma") {
                throw FormatError("spectrum CSV: expected header 'index,sigma'");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) {
            throw FormatError("spectrum CSV: line " + std::to_string(line_no) + " has no comma");
        }
        const std::string_view field = line.substr(comma + 1);
        double x = 0.0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
            throw FormatError("spectrum CSV: bad value on line " + std::to_string(line_no));
        }
        values.push_back(x);
    }
    if (line_no == 0) {
        throw FormatError("spectrum CSV: empty input");
    }
    return Vector(std::move(values));
}

FileFormat detect_format(ByteView bytes) {
    auto starts_with = [&](std::string_view magic) {
        return bytes.size() >= magic.size() && std::equal(magic.begin(), magic.end(), bytes.begin());
    };
    if (starts_with("SIMPLE")) {
        return FileFormat::fits;
    }
    if (starts_with(kModelMagic)) {
        return FileFormat::model;
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '7') {
        return FileFormat::pgm;
    }
    return FileFormat::unknown;
}

ImageBuffer load_image(ByteView bytes) {
    switch (detect_format(bytes)) {
    case FileFormat::fits:
        return read_fits(bytes);
    case FileFormat::pgm:
        return read_pgm(bytes);
    case FileFormat::model:
        throw FormatError("expected an image, got an LRK1 model file");
    case FileFormat::unknown:
        break;
    }
    throw FormatError("unrecognized image format (expected FITS or binary PGM)");
}

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    Bytes out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error("error reading " + path.string());
    }
    return out;
}

void write_file(const std::filesystem::path& path, ByteView bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
        throw Error("error writing " + path.string());
    }
}

} // namespace lrk
