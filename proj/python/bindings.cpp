#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstring>

#include "sarcoast/error.hpp"
#include "sarcoast/pipeline.hpp"
#include "sarcoast/special.hpp"

namespace py = pybind11;
using namespace sarcoast;

namespace {

using Array2d = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <typename T>
py::array_t<T> to_numpy(const Grid<T>& g) {
    py::array_t<T> out({g.height(), g.width()});
    std::copy(g.values().begin(), g.values().end(), out.mutable_data());
    return out;
}

py::array_t<std::uint8_t> mask_to_numpy(const BinaryMask& m) {
    py::array_t<std::uint8_t> out({m.height(), m.width()});
    auto* d = out.mutable_data();
    for (std::size_t i = 0; i < m.size(); ++i) d[i] = m[i] == LandClass::land ? 1 : 0;
    return out;
}

SarImage to_image(const Array2d& a) {
    if (a.ndim() != 2) throw py::value_error("image must be a 2-D array");
    const int h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
    SarImage img{Grid<double>(w, h, 0.0)};
    std::copy(a.data(), a.data() + a.size(), img.data.values().begin());
    for (double v : img.data.values()) {
        if (!(v > 0.0)) throw py::value_error("image values must be strictly positive");
    }
    return img;
}

std::vector<Pixel> to_pixels(const py::array_t<int, py::array::c_style | py::array::forcecast>& a) {
    if (a.size() == 0) return {};
    if (a.ndim() != 2 || a.shape(1) != 2) throw py::value_error("pixel lists must have shape (n, 2) as (row, col)");
    std::vector<Pixel> out(static_cast<std::size_t>(a.shape(0)));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {a.at(i, 0), a.at(i, 1)};
    return out;
}

py::array_t<int> chain_to_numpy(const Chain& ch) {
    py::array_t<int> out({static_cast<py::ssize_t>(ch.size()), py::ssize_t{2}});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < ch.size(); ++i) {
        m(i, 0) = ch[i].row;
        m(i, 1) = ch[i].col;
    }
    return out;
}

EngineConfig engine(int K, double alpha, int max_iters, double change_tol, std::size_t min_est_pixels,
                    std::uint64_t seed) {
    EngineConfig cfg{.K = K, .alpha = alpha, .max_iters = max_iters, .change_tol = change_tol,
                     .min_est_pixels = min_est_pixels, .seed = seed};
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "SAR coastline extraction with GGD superpixels";

    py::register_exception<EstimationFailed>(m, "EstimationFailed", PyExc_RuntimeError);
    py::register_exception<OneClassOnly>(m, "OneClassOnly", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const DomainError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const PreconditionError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<GgdParams>(m, "GgdParams")
        .def(py::init<double, double, double>(), py::arg("v") = 1.0, py::arg("kappa") = 1.0, py::arg("sigma") = 1.0)
        .def_readwrite("v", &GgdParams::v)
        .def_readwrite("kappa", &GgdParams::kappa)
        .def_readwrite("sigma", &GgdParams::sigma)
        .def("valid", &GgdParams::valid)
        .def("__eq__", [](const GgdParams& a, const GgdParams& b) { return a == b; })
        .def("__repr__", [](const GgdParams& p) {
            return "GgdParams(v=" + std::to_string(p.v) + ", kappa=" + std::to_string(p.kappa) +
                   ", sigma=" + std::to_string(p.sigma) + ")";
        });

    m.def("polygamma", &polygamma, py::arg("m"), py::arg("x"));
    m.def("ggd_pdf", &ggd_pdf, py::arg("a"), py::arg("params"));
    m.def("ggd_log_pdf", &ggd_log_pdf, py::arg("a"), py::arg("params"));
    m.def(
        "ggd_sample",
        [](const GgdParams& p, std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            const auto v = ggd_sample(p, n, rng);
            return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
        },
        py::arg("params"), py::arg("n"), py::arg("seed") = 0);
    m.def(
        "log_cumulants",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            const auto c = log_cumulants(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())));
            return py::make_tuple(c.c1, c.c2, c.c3);
        },
        py::arg("samples"));
    m.def(
        "estimate_ggd",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a, std::size_t min_samples) {
            EstimatorOptions opts;
            opts.min_samples = min_samples;
            return estimate_ggd(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())), opts);
        },
        py::arg("samples"), py::arg("min_samples") = 30);

    m.def(
        "segment",
        [](const Array2d& image, int K, double alpha, int max_iters, double change_tol, std::size_t min_est_pixels,
           std::uint64_t seed) {
            const SarImage img = to_image(image);
            SuperpixelMap spm;
            {
                py::gil_scoped_release release;
                spm = segment(img, engine(K, alpha, max_iters, change_tol, min_est_pixels, seed));
            }
            py::dict out;
            out["labels"] = to_numpy(spm.labels);
            out["iterations"] = spm.iterations_run;
            out["change_trace"] = spm.change_trace;
            out["omega"] = spm.omega;
            return out;
        },
        py::arg("image"), py::arg("superpixels") = 100, py::arg("alpha") = 1.5, py::arg("max_iters") = 20,
        py::arg("change_tol") = 1e-3, py::arg("min_est_pixels") = 30, py::arg("seed") = 0);

    m.def(
        "extract_coastline",
        [](const Array2d& image, std::optional<int> K, double alpha, int max_iters, double change_tol,
           std::size_t min_est_pixels, std::uint64_t seed, int bins) {
            const SarImage img = to_image(image);
            const int k = K.value_or(default_superpixel_count(img.data.size()));
            ExtractResult res;
            {
                py::gil_scoped_release release;
                res = extract_coastline(img, engine(k, alpha, max_iters, change_tol, min_est_pixels, seed), bins);
            }
            if (res.fill.one_class_only) throw OneClassOnly("input separates into a single land/water class");
            py::dict out;
            out["labels"] = to_numpy(res.spm.labels);
            out["mask_prefill"] = mask_to_numpy(res.prefill);
            out["mask"] = mask_to_numpy(res.fill.mask);
            out["border"] = to_numpy(res.coastline.border);
            py::list chains;
            for (const auto& ch : res.coastline.chains) chains.append(chain_to_numpy(ch));
            out["chains"] = chains;
            out["explained"] = res.classes.explained;
            out["components_before"] = res.fill.components_before();
            out["components_after"] = res.fill.components_after();
            out["iterations"] = res.spm.iterations_run;
            return out;
        },
        py::arg("image"), py::arg("superpixels") = py::none(), py::arg("alpha") = 1.5, py::arg("max_iters") = 20,
        py::arg("change_tol") = 1e-3, py::arg("min_est_pixels") = 30, py::arg("seed") = 0,
        py::arg("bins") = kDefaultEntropyBins);

    m.def(
        "gen_coast_scene",
        [](int width, int height, std::uint64_t seed, double roughness, int lakes, int islets, const GgdParams& land,
           const GgdParams& water) {
            const auto s = gen_coast_scene({.width = width, .height = height, .seed = seed, .land = land,
                                            .water = water, .roughness = roughness, .lakes = lakes, .islets = islets});
            py::dict out;
            out["image"] = to_numpy(s.image.data);
            out["truth_mask"] = mask_to_numpy(s.truth_mask);
            out["coast_mask"] = mask_to_numpy(s.coast_mask);
            const auto coast = truth_coast_pixels(s.truth_mask);
            out["truth_coast"] = chain_to_numpy(coast);
            out["interface"] = chain_to_numpy(interface_pixels(s.truth_mask));
            return out;
        },
        py::arg("width") = 256, py::arg("height") = 256, py::arg("seed") = 1, py::arg("roughness") = 0.0,
        py::arg("lakes") = 0, py::arg("islets") = 0, py::arg("land") = kDefaultLandParams,
        py::arg("water") = kDefaultWaterParams);

    m.def(
        "boundary_score",
        [](const py::array_t<int, py::array::c_style | py::array::forcecast>& extracted,
           const py::array_t<int, py::array::c_style | py::array::forcecast>& truth, double tol) {
            const auto s = boundary_score(to_pixels(extracted), to_pixels(truth), tol);
            py::dict out;
            out["precision"] = s.precision;
            out["recall"] = s.recall;
            out["f1"] = s.f1;
            out["mean_distance"] = s.mean_distance;
            out["hausdorff"] = s.hausdorff;
            return out;
        },
        py::arg("extracted"), py::arg("truth"), py::arg("tol") = 2.0);
}
