#include "lrk/errors.hpp"
#include "lrk/image_io.hpp"

#include <cctype>
#include <string>

namespace lrk {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(ByteView bytes) : bytes_(bytes) {}

    /// Next whitespace-delimited token, skipping '#' comments.
    std::string token() {
        for (;;) {
            while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) {
                ++pos_;
            }
            if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
                continue;
            }
            break;
        }
        std::string out;
        while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
            out.push_back(static_cast<char>(bytes_[pos_++]));
        }
        return out;
    }

    std::size_t positive(const char* what) {
        const std::string t = token();
        if (t.empty() || t.size() > 9 || t.find_first_not_of("0123456789") != std::string::npos) {
            throw FormatError(std::string("PGM: bad ") + what + " '" + t + "'");
        }
        const std::size_t v = std::stoul(t);
        if (v == 0) {
            throw FormatError(std::string("PGM: ") + what + " must be positive");
        }
        return v;
    }

    /// The single whitespace byte that ends the header.
    void end_of_header() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw FormatError("PGM: header not terminated by whitespace");
        }
        ++pos_;
    }

    std::size_t position() const { return pos_; }

private:
    ByteView bytes_;
    std::size_t pos_ = 0;
};

} // namespace

Bytes write_pgm(const ImageBuffer& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n65535\n";
    Bytes out(header.begin(), header.end());
    out.reserve(header.size() + 2 * img.pixels.size());
    for (std::uint16_t px : img.pixels) {
        out.push_back(static_cast<std::uint8_t>(px >> 8));
        out.push_back(static_cast<std::uint8_t>(px & 0xFF));
    }
    return out;
}

ImageBuffer read_pgm(ByteView bytes) {
    HeaderReader reader(bytes);
    const std::string magic = reader.token();
    if (magic != "P5") {
        throw FormatError("PGM: binary P5 only (got '" + magic + "')");
    }
    const std::size_t width = reader.positive("width");
    const std::size_t height = reader.positive("height");
    const std::size_t maxval = reader.positive("maxval");
    if (maxval != 65535) {
        throw FormatError("PGM: maxval must be 65535, got " + std::to_string(maxval));
    }
    reader.end_of_header();

    const std::size_t count = width * height;
    const std::size_t start = reader.position();
    if (bytes.size() - start < 2 * count) {
        throw FormatError("PGM: pixel data truncated");
    }
    std::vector<std::uint16_t> pixels(count);
    for (std::size_t i = 0; i < count; ++i) {
        pixels[i] = static_cast<std::uint16_t>((bytes[start + 2 * i] << 8) | bytes[start + 2 * i + 1]);
    }
    return ImageBuffer(width, height, std::move(pixels), ImageSource::pgm);
}

} // namespace lrk
