#include "lrk/cli.hpp"

#include "lrk/errors.hpp"
#include "lrk/image_io.hpp"
#include "lrk/lowrank.hpp"
#include "lrk/power_iteration.hpp"
#include "lrk/svd.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>

namespace lrk::cli {

namespace {

struct UsageError : Error {
    using Error::Error;
};

std::string fixed4(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

std::string full(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Caps internal parallelism. The engine runs single-threaded, so a valid
/// value is accepted and has no further effect.
void check_thread_env() {
    const char* raw = std::getenv("LRK_THREADS");
    if (raw == nullptr || *raw == '\0') {
        return;
    }
    unsigned long v = 0;
    const std::string_view s(raw);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v == 0) {
        throw UsageError("LRK_THREADS must be a positive integer, got '" + std::string(s) + "'");
    }
}

ImageBuffer load_image_as(const std::string& path, const std::string& format) {
    const Bytes bytes = read_file(path);
    if (format == "fits") {
        return read_fits(bytes);
    }
    if (format == "pgm") {
        return read_pgm(bytes);
    }
    return load_image(bytes);
}

struct Options {
    std::string input;
    std::string output;
    std::string model;
    std::string format = "auto";
    std::optional<long long> rank;
    std::optional<double> target_cr;
    std::optional<double> energy;
    std::optional<double> error;
    std::vector<long long> ranks;
    double verify_tolerance = 1e-6;
};

RankPolicy rank_policy(const Options& o) {
    const int given = o.rank.has_value() + o.target_cr.has_value() + o.energy.has_value() +
                      o.error.has_value();
    if (given != 1) {
        throw UsageError("compress needs exactly one of -k, --target-cr, --energy, --error");
    }
    if (o.rank) {
        if (*o.rank < 1) {
            throw UsageError("-k must be at least 1");
        }
        return policy::FixedRank{static_cast<std::size_t>(*o.rank)};
    }
    if (o.target_cr) {
        return policy::TargetCr{*o.target_cr};
    }
    if (o.energy) {
        return policy::Energy{*o.energy};
    }
    return policy::RelativeError{*o.error};
}

void print_report(std::ostream& out, const CompressionReport& r, std::size_t m, std::size_t n) {
    out << "rank-" << r.k << " approximation of a " << m << "x" << n << " image\n"
        << "  compression ratio   " << fixed4(r.cr_percent) << " %\n"
        << "  stored numbers      " << r.stored_numbers << " of " << r.original_numbers << "\n"
        << "  2-norm error        " << full(r.two_norm_error) << " (sigma_" << r.k + 1 << ")\n"
        << "  Frobenius error     " << full(r.frobenius_error) << "\n"
        << "  energy retained     " << full(r.energy_fraction) << "\n";
    out << "k=" << r.k << "\n"
        << "cr_percent=" << fixed4(r.cr_percent) << "\n"
        << "stored_numbers=" << r.stored_numbers << "\n"
        << "original_numbers=" << r.original_numbers << "\n"
        << "two_norm_error=" << full(r.two_norm_error) << "\n"
        << "frobenius_error=" << full(r.frobenius_error) << "\n"
        << "energy_fraction=" << full(r.energy_fraction) << "\n";
}

int cmd_compress(const Options& o, std::ostream& out) {
    const RankPolicy pol = rank_policy(o);
    const ImageBuffer img = load_image_as(o.input, o.format);
    const Matrix a = image_to_matrix(img);
    const SvdFactorization f = svd(a);
    const std::size_t k = select_rank(f.sigma, a.rows(), a.cols(), pol);
    const TruncatedModel model = truncate(f, k);
    const Bytes bytes = save_model(model);
    write_file(o.output, bytes);
    print_report(out, make_report(f, k), a.rows(), a.cols());
    out << "model_bytes=" << bytes.size() << "\n";
    return kExitOk;
}

int cmd_reconstruct(const Options& o, std::ostream& out) {
    const TruncatedModel model = load_model(read_file(o.input));
    const ImageBuffer img = matrix_to_image(reconstruct(model));
    write_file(o.output, write_pgm(img));
    out << "width=" << img.width << "\nheight=" << img.height << "\nk=" << model.rank() << "\n";
    return kExitOk;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
    const ImageBuffer img = load_image_as(o.input, o.format);
    const SvdFactorization f = svd(image_to_matrix(img));
    const std::string csv = spectrum_csv(f.sigma);
    if (o.output.empty()) {
        out << csv;
    } else {
        write_file(o.output, ByteView(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
    }
    return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const ImageBuffer img = load_image_as(o.input, o.format);
    const TruncatedModel model = load_model(read_file(o.model));
    const Matrix a = image_to_matrix(img);
    if (a.rows() != model.rows() || a.cols() != model.cols()) {
        out << "status=fail\nreason=model is " << model.rows() << "x" << model.cols() << ", image is "
            << a.rows() << "x" << a.cols() << "\n";
        return kExitVerify;
    }
    const SvdFactorization f = svd(a);
    const double expected = two_norm_error(f, model.rank());
    PowerIterationOptions opts;
    opts.tolerance = 1e-12;
    opts.max_iterations = 5000;
    const PowerIterationResult res = residual_two_norm(a, model, opts);
    const double sigma1 = f.p() > 0 ? f.sigma[0] : 0.0;
    const double allowed = o.verify_tolerance * sigma1;
    const bool pass = std::abs(res.norm - expected) <= allowed;
    out << "k=" << model.rank() << "\n"
        << "residual_two_norm=" << full(res.norm) << "\n"
        << "sigma_k_plus_1=" << full(expected) << "\n"
        << "allowed_deviation=" << full(allowed) << "\n"
        << "power_iterations=" << res.iterations << "\n"
        << "status=" << (pass ? "pass" : "fail") << "\n";
    return pass ? kExitOk : kExitVerify;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.ranks.empty()) {
        throw UsageError("sweep needs --ranks");
    }
    const ImageBuffer img = load_image_as(o.input, o.format);
    const SvdFactorization f = svd(image_to_matrix(img));
    std::ostringstream csv;
    csv << "rank,cr_percent,two_norm_error,frobenius_error,energy_fraction\n";
    for (long long k : o.ranks) {
        if (k < 0 || static_cast<std::size_t>(k) > f.p()) {
            err << "sweep: rank " << k << " outside [0, " << f.p() << "]\n";
            csv << k << ",error,error,error,error\n";
            continue;
        }
        const CompressionReport r = make_report(f, static_cast<std::size_t>(k));
        csv << k << "," << fixed4(r.cr_percent) << "," << full(r.two_norm_error) << ","
            << full(r.frobenius_error) << "," << full(r.energy_fraction) << "\n";
    }
    const std::string text = csv.str();
    if (o.output.empty()) {
        out << text;
    } else {
        write_file(o.output, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    }
    return kExitOk;
}

int cmd_info(const Options& o, std::ostream& out) {
    const Bytes bytes = read_file(o.input);
    switch (detect_format(bytes)) {
    case FileFormat::model: {
        const TruncatedModel t = load_model(bytes);
        out << "format=lrk1\n"
            << "m=" << t.rows() << "\nn=" << t.cols() << "\nk=" << t.rank() << "\n"
            << "file_bytes=" << bytes.size() << "\n"
            << "payload_bytes=" << 8 * t.stored_numbers() << "\n"
            << "stored_numbers=" << t.stored_numbers() << "\n"
            << "image_bytes_16bit=" << 2 * static_cast<std::uint64_t>(t.rows()) * t.cols() << "\n"
            << "cr_percent=" << fixed4(compression_ratio(t.rows(), t.cols(), t.rank())) << "\n";
        return kExitOk;
    }
    case FileFormat::pgm: {
        const ImageBuffer img = read_pgm(bytes);
        out << "format=pgm\nwidth=" << img.width << "\nheight=" << img.height << "\nmaxval=65535\n"
            << "file_bytes=" << bytes.size() << "\n";
        return kExitOk;
    }
    case FileFormat::fits: {
        const ImageBuffer img = read_fits(bytes);
        out << "format=fits\nwidth=" << img.width << "\nheight=" << img.height << "\nbitpix=16\n"
            << "bzero=" << full(img.bzero) << "\nbscale=" << full(img.bscale) << "\n"
            << "file_bytes=" << bytes.size() << "\n";
        return kExitOk;
    }
    case FileFormat::unknown:
        break;
    }
    throw FormatError("info: unrecognized file format in " + o.input);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Truncated-SVD compression of 16-bit grayscale images", "lrk"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::string> formats{"auto", "fits", "pgm"};

    auto* compress = app.add_subcommand("compress", "Compress an image into an LRK1 model");
    compress->add_option("input", o.input, "FITS or PGM image")->required();
    compress->add_option("-o,--output", o.output, "Model file to write")->required();
    compress->add_option("-k,--rank", o.rank, "Keep exactly this many singular triples");
    compress->add_option("--target-cr", o.target_cr, "Largest rank whose CR% is at least this");
    compress->add_option("--energy", o.energy, "Smallest rank retaining this energy fraction");
    compress->add_option("--error", o.error, "Smallest rank with sigma_{k+1} <= E * sigma_1");
    compress->add_option("--format", o.format, "Input format")->check(CLI::IsMember(formats));

    auto* recon = app.add_subcommand("reconstruct", "Rebuild a PGM image from an LRK1 model");
    recon->add_option("input", o.input, "Model file")->required();
    recon->add_option("-o,--output", o.output, "PGM file to write")->required();

    auto* spectrum = app.add_subcommand("spectrum", "Write the singular values as CSV");
    spectrum->add_option("input", o.input, "FITS or PGM image")->required();
    spectrum->add_option("-o,--output", o.output, "CSV file (default: stdout)");
    spectrum->add_option("--format", o.format, "Input format")->check(CLI::IsMember(formats));

    auto* info = app.add_subcommand("info", "Describe an image or model file");
    info->add_option("input", o.input, "File to inspect")->required();

    auto* verify = app.add_subcommand("verify", "Check ||A - A_k||_2 against sigma_{k+1}");
    verify->add_option("image", o.input, "Original image")->required();
    verify->add_option("model", o.model, "Model file")->required();
    verify->add_option("--tolerance", o.verify_tolerance, "Allowed deviation, relative to sigma_1");
    verify->add_option("--format", o.format, "Image format")->check(CLI::IsMember(formats));

    auto* sweep = app.add_subcommand("sweep", "Tabulate metrics over a list of ranks");
    sweep->add_option("input", o.input, "FITS or PGM image")->required();
    sweep->add_option("--ranks", o.ranks, "Comma-separated ranks")->delimiter(',')->required();
    sweep->add_option("-o,--output", o.output, "CSV file (default: stdout)");
    sweep->add_option("--format", o.format, "Input format")->check(CLI::IsMember(formats));

    std::vector<const char*> argv{"lrk"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        check_thread_env();
        if (compress->parsed()) {
            return cmd_compress(o, out);
        }
        if (recon->parsed()) {
            return cmd_reconstruct(o, out);
        }
        if (spectrum->parsed()) {
            return cmd_spectrum(o, out);
        }
        if (info->parsed()) {
            return cmd_info(o, out);
        }
        if (verify->parsed()) {
            return cmd_verify(o, out);
        }
        return cmd_sweep(o, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IntegrityError& e) {
        err << "integrity error: " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const PolicyError& e) {
        err << "rank policy error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace lrk::cli
