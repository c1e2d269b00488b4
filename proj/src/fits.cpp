#include "lrk/errors.hpp"
#include "lrk/image_io.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>

namespace lrk {

namespace {

constexpr std::size_t kCardSize = 80;
constexpr std::size_t kBlockSize = 2880;

struct Card {
    std::string keyword;
    std::string value; // text between "= " and any '/' comment, trimmed
    bool has_value = false;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(' ');
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(' ');
    return std::string(s.substr(first, last - first + 1));
}

Card parse_card(std::string_view raw) {
    Card card;
    card.keyword = trim(raw.substr(0, 8));
    if (raw.size() >= 10 && raw.substr(8, 2) == "= ") {
        std::string_view rest = raw.substr(10);
        if (const auto quote = rest.find('\''); quote != std::string_view::npos &&
                                                 rest.find_first_not_of(' ') == quote) {
            // String value; keep it whole, comments may follow the closing quote.
            const auto close = rest.find('\'', quote + 1);
            card.value = std::string(rest.substr(quote, close == std::string_view::npos
                                                            ? std::string_view::npos
                                                            : close - quote + 1));
        } else {
            card.value = trim(rest.substr(0, rest.find('/')));
        }
        card.has_value = true;
    }
    return card;
}

double number(const Card& card) {
    std::string text = card.value;
    for (char& c : text) {
        if (c == 'D' || c == 'd') {
            c = 'E';
        }
    }
    char* end = nullptr;
    const double x = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(x)) {
        throw FormatError("FITS: keyword " + card.keyword + " has non-numeric value '" +
                          card.value + "'");
    }
    return x;
}

long integer(const Card& card) {
    const double x = number(card);
    if (x != std::floor(x)) {
        throw FormatError("FITS: keyword " + card.keyword + " must be an integer");
    }
    return static_cast<long>(x);
}

} // namespace

ImageBuffer read_fits(ByteView bytes) {
    std::optional<long> bitpix;
    std::optional<long> naxis;
    std::optional<long> naxis1;
    std::optional<long> naxis2;
    double bzero = 0.0;
    double bscale = 1.0;

    std::size_t offset = 0;
    bool saw_end = false;
    for (; offset + kCardSize <= bytes.size(); offset += kCardSize) {
        const std::string_view raw(reinterpret_cast<const char*>(bytes.data() + offset), kCardSize);
        const Card card = parse_card(raw);
        if (offset == 0) {
            if (card.keyword != "SIMPLE" || card.value != "T") {
                throw FormatError("FITS: first card must be SIMPLE = T");
            }
            continue;
        }
        if (card.keyword == "END") {
            saw_end = true;
            offset += kCardSize;
            break;
        }
        if (!card.has_value) {
            continue;
        }
        if (card.keyword == "BITPIX") {
            bitpix = integer(card);
        } else if (card.keyword == "NAXIS") {
            naxis = integer(card);
        } else if (card.keyword == "NAXIS1") {
            naxis1 = integer(card);
        } else if (card.keyword == "NAXIS2") {
            naxis2 = integer(card);
        } else if (card.keyword == "BZERO") {
            bzero = number(card);
        } else if (card.keyword == "BSCALE") {
            bscale = number(card);
        }
    }
    if (offset == 0) {
        throw FormatError("FITS: file shorter than one header card");
    }
    if (!saw_end) {
        throw FormatError("FITS: header has no END card");
    }
    if (!bitpix || !naxis) {
        throw FormatError("FITS: missing BITPIX or NAXIS card");
    }
    if (*bitpix != 16) {
        throw FormatError("FITS: unsupported BITPIX " + std::to_string(*bitpix) + " (only 16)");
    }
    if (*naxis != 2) {
        throw FormatError("FITS: unsupported NAXIS " + std::to_string(*naxis) + " (only 2)");
    }
    if (!naxis1 || !naxis2 || *naxis1 <= 0 || *naxis2 <= 0) {
        throw FormatError("FITS: NAXIS1 and NAXIS2 must be positive");
    }
    if (bscale == 0.0) {
        throw FormatError("FITS: BSCALE must be nonzero");
    }

    const std::size_t data_start = (offset + kBlockSize - 1) / kBlockSize * kBlockSize;
    const auto width = static_cast<std::size_t>(*naxis1);
    const auto height = static_cast<std::size_t>(*naxis2);
    const std::size_t count = width * height;
    if (data_start > bytes.size() || bytes.size() - data_start < 2 * count) {
        throw FormatError("FITS: data unit truncated (need " + std::to_string(2 * count) +
                          " bytes)");
    }

    std::vector<std::uint16_t> pixels(count);
    const std::uint8_t* p = bytes.data() + data_start;
    for (std::size_t i = 0; i < count; ++i) {
        const auto raw = static_cast<std::int16_t>(static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]));
        const double physical = std::round(bzero + bscale * raw);
        if (!(physical >= 0.0 && physical <= 65535.0)) {
            throw FormatError("FITS: physical value " + std::to_string(physical) + " at pixel " +
                              std::to_string(i) + " outside [0, 65535]");
        }
        pixels[i] = static_cast<std::uint16_t>(physical);
    }
    return ImageBuffer(width, height, std::move(pixels), ImageSource::fits, bzero, bscale);
}

} // namespace lrk
