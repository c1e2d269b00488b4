#include "lrk/errors.hpp"
#include "lrk/image_io.hpp"
#include "lrk/lowrank.hpp"
#include "lrk/power_iteration.hpp"
#include "lrk/svd.hpp"
#include "lrk/synthetic.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>

namespace py = pybind11;
using namespace lrk;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using PixelArray = py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const DoubleArray& a) {
    if (a.ndim() != 2) {
        throw DimensionError("expected a 2-D array");
    }
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    std::vector<double> data(a.data(), a.data() + rows * cols);
    return Matrix(rows, cols, std::move(data));
}

Vector to_vector(const DoubleArray& a) {
    if (a.ndim() != 1) {
        throw DimensionError("expected a 1-D array");
    }
    return Vector(std::vector<double>(a.data(), a.data() + a.shape(0)));
}

py::array_t<double> to_numpy(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    if (m.size() > 0) {
        std::memcpy(out.mutable_data(), m.values().data(), m.size() * sizeof(double));
    }
    return out;
}

py::array_t<double> to_numpy(const Vector& v) {
    py::array_t<double> out(v.size());
    if (!v.empty()) {
        std::memcpy(out.mutable_data(), v.values().data(), v.size() * sizeof(double));
    }
    return out;
}

py::array_t<std::uint16_t> pixels_to_numpy(const ImageBuffer& img) {
    py::array_t<std::uint16_t> out({img.height, img.width});
    if (!img.pixels.empty()) {
        std::memcpy(out.mutable_data(), img.pixels.data(), img.pixels.size() * sizeof(std::uint16_t));
    }
    return out;
}

ImageBuffer numpy_to_image(const PixelArray& a) {
    if (a.ndim() != 2) {
        throw DimensionError("expected a 2-D uint16 array");
    }
    const auto h = static_cast<std::size_t>(a.shape(0));
    const auto w = static_cast<std::size_t>(a.shape(1));
    return ImageBuffer(w, h, std::vector<std::uint16_t>(a.data(), a.data() + w * h));
}

ByteView as_bytes(const py::bytes& b, std::string& keep) {
    keep = b;
    return ByteView(reinterpret_cast<const std::uint8_t*>(keep.data()), keep.size());
}

py::bytes to_bytes(const Bytes& b) {
    return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

} // namespace

PYBIND11_MODULE(_lrk, m) {
    m.doc() = "Truncated-SVD image compression";

    auto base = py::register_exception<Error>(m, "LrkError", PyExc_RuntimeError);
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<PolicyError>(m, "PolicyError", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<IntegrityError>(m, "IntegrityError", base.ptr());

    py::class_<SvdFactorization>(m, "SvdFactorization")
        .def_property_readonly("u", [](const SvdFactorization& f) { return to_numpy(f.u); })
        .def_property_readonly("sigma", [](const SvdFactorization& f) { return to_numpy(f.sigma); })
        .def_property_readonly("v", [](const SvdFactorization& f) { return to_numpy(f.v); })
        .def_readonly("rank", &SvdFactorization::rank)
        .def_property_readonly("shape", [](const SvdFactorization& f) {
            return py::make_tuple(f.rows(), f.cols());
        })
        .def("__repr__", [](const SvdFactorization& f) {
            return "<SvdFactorization " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                   " rank=" + std::to_string(f.rank) + ">";
        });

    py::class_<TruncatedModel>(m, "TruncatedModel")
        .def_property_readonly("shape", [](const TruncatedModel& t) { return py::make_tuple(t.rows(), t.cols()); })
        .def_property_readonly("rank", &TruncatedModel::rank)
        .def_property_readonly("sigma", [](const TruncatedModel& t) { return to_numpy(t.sigma()); })
        .def_property_readonly("u", [](const TruncatedModel& t) { return to_numpy(t.u_cols()); })
        .def_property_readonly("v", [](const TruncatedModel& t) { return to_numpy(t.v_cols()); })
        .def_property_readonly("stored_numbers", &TruncatedModel::stored_numbers)
        .def("__eq__", [](const TruncatedModel& a, const TruncatedModel& b) { return a == b; })
        .def("__repr__", [](const TruncatedModel& t) {
            return "<TruncatedModel " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) +
                   " k=" + std::to_string(t.rank()) + ">";
        });

    py::class_<CompressionReport>(m, "CompressionReport")
        .def_readonly("k", &CompressionReport::k)
        .def_readonly("cr_percent", &CompressionReport::cr_percent)
        .def_readonly("stored_numbers", &CompressionReport::stored_numbers)
        .def_readonly("original_numbers", &CompressionReport::original_numbers)
        .def_readonly("two_norm_error", &CompressionReport::two_norm_error)
        .def_readonly("frobenius_error", &CompressionReport::frobenius_error)
        .def_readonly("energy_fraction", &CompressionReport::energy_fraction);

    m.def("svd", [](const DoubleArray& a) { return svd(to_matrix(a)); }, py::arg("a"));
    m.def("svd_via_gram_oracle", [](const DoubleArray& a) { return svd_via_gram_oracle(to_matrix(a)); },
          py::arg("a"));
    m.def("complete_basis", [](const DoubleArray& q) { return to_numpy(complete_basis(to_matrix(q))); },
          py::arg("partial"));
    m.def("numerical_rank",
          [](const DoubleArray& s, std::size_t rows, std::size_t cols) {
              return numerical_rank(to_vector(s), rows, cols);
          },
          py::arg("sigma"), py::arg("m"), py::arg("n"));

    m.def("truncate", [](const SvdFactorization& f, std::size_t k) { return lrk::truncate(f, k); },
          py::arg("f"), py::arg("k"));
    m.def("reconstruct", [](const TruncatedModel& t) { return to_numpy(reconstruct(t)); }, py::arg("model"));
    m.def("weight_term", [](const SvdFactorization& f, std::size_t j) { return to_numpy(weight_term(f, j)); },
          py::arg("f"), py::arg("j"));
    m.def("two_norm_error", &two_norm_error, py::arg("f"), py::arg("k"));
    m.def("frobenius_error", [](const DoubleArray& s, std::size_t k) { return frobenius_error(to_vector(s), k); },
          py::arg("sigma"), py::arg("k"));
    m.def("energy_fraction", [](const DoubleArray& s, std::size_t k) { return energy_fraction(to_vector(s), k); },
          py::arg("sigma"), py::arg("k"));
    m.def("compression_ratio", &compression_ratio, py::arg("m"), py::arg("n"), py::arg("k"));
    m.def("make_report", &make_report, py::arg("f"), py::arg("k"));

    m.def(
        "select_rank",
        [](const DoubleArray& s, std::size_t rows, std::size_t cols, std::optional<std::size_t> k,
           std::optional<double> target_cr, std::optional<double> energy, std::optional<double> error) {
            const int chosen = int(k.has_value()) + int(target_cr.has_value()) + int(energy.has_value()) +
                               int(error.has_value());
            if (chosen != 1) {
                throw InvalidArgument("select_rank: give exactly one of k, target_cr, energy, error");
            }
            RankPolicy p = policy::FixedRank{0};
            if (k) {
                p = policy::FixedRank{*k};
            } else if (target_cr) {
                p = policy::TargetCr{*target_cr};
            } else if (energy) {
                p = policy::Energy{*energy};
            } else {
                p = policy::RelativeError{*error};
            }
            return select_rank(to_vector(s), rows, cols, p);
        },
        py::arg("sigma"), py::arg("m"), py::arg("n"), py::kw_only(), py::arg("k") = py::none(),
        py::arg("target_cr") = py::none(), py::arg("energy") = py::none(), py::arg("error") = py::none());

    m.def("power_two_norm",
          [](const DoubleArray& a, double tol, std::size_t iters, std::uint64_t seed) {
              return power_two_norm(to_matrix(a), PowerIterationOptions{tol, iters, seed}).norm;
          },
          py::arg("a"), py::arg("tolerance") = 1e-14, py::arg("max_iterations") = 20000,
          py::arg("seed") = 0x5eed);

    m.def("read_fits", [](const py::bytes& b) {
        std::string keep;
        return pixels_to_numpy(read_fits(as_bytes(b, keep)));
    });
    m.def("read_pgm", [](const py::bytes& b) {
        std::string keep;
        return pixels_to_numpy(read_pgm(as_bytes(b, keep)));
    });
    m.def("write_pgm", [](const PixelArray& a) { return to_bytes(write_pgm(numpy_to_image(a))); },
          py::arg("pixels"));
    m.def("to_pixels", [](const DoubleArray& a) { return pixels_to_numpy(matrix_to_image(to_matrix(a))); },
          py::arg("a"), "Round and clamp a float image to uint16.");

    m.def("save_model", [](const TruncatedModel& t) { return to_bytes(save_model(t)); }, py::arg("model"));
    m.def("load_model", [](const py::bytes& b) {
        std::string keep;
        return load_model(as_bytes(b, keep));
    });
    m.def("model_file_size", &model_file_size, py::arg("m"), py::arg("n"), py::arg("k"));
    m.def("spectrum_csv", [](const DoubleArray& s) { return spectrum_csv(to_vector(s)); }, py::arg("sigma"));
    m.def("parse_spectrum_csv", [](const std::string& csv) { return to_numpy(parse_spectrum_csv(csv)); },
          py::arg("csv"));

    m.def(
        "synthetic_star_field",
        [](std::size_t width, std::size_t height, std::size_t stars, std::uint64_t seed) {
            StarFieldOptions opts;
            opts.width = width;
            opts.height = height;
            opts.stars = stars;
            opts.seed = seed;
            return pixels_to_numpy(synthetic_star_field(opts));
        },
        py::arg("width") = 256, py::arg("height") = 256, py::arg("stars") = 400, py::arg("seed") = 1);
}
