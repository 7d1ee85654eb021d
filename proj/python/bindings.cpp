#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gkeca/classify.hpp"
#include "gkeca/eval.hpp"
#include "gkeca/features.hpp"
#include "gkeca/gabor.hpp"
#include "gkeca/image.hpp"
#include "gkeca/keca.hpp"
#include "gkeca/kernels.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace gkeca;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const Array& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D (height, width) array");
    const auto h = static_cast<int>(a.shape(0));
    const auto w = static_cast<int>(a.shape(1));
    return GrayImage(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

Array from_raster(int width, int height, const std::vector<double>& values) {
    Array out({height, width});
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

Array from_vector(const std::vector<double>& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Array from_matrix(const Matrix& m) {
    Array out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

Matrix to_matrix(const Array& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data().begin());
    return m;
}

std::vector<Sample> to_samples(const Array& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D (samples, features) array");
    std::vector<Sample> out;
    const auto n = a.shape(0);
    const auto d = a.shape(1);
    for (py::ssize_t i = 0; i < n; ++i) out.emplace_back(a.data() + i * d, a.data() + (i + 1) * d);
    return out;
}

std::vector<double> to_vec(const Array& a) { return std::vector<double>(a.data(), a.data() + a.size()); }

py::array_t<std::complex<double>> kernel_grid(const GaborKernel& k) {
    py::array_t<std::complex<double>> out({k.window, k.window});
    std::copy(k.grid.begin(), k.grid.end(), out.mutable_data());
    return out;
}

std::vector<MagnitudeImage> magnitudes_of(const Array& image, const GaborParams& params) {
    const auto img = to_image(image);
    BankConvolver conv(make_bank(params), img.width(), img.height());
    return conv.magnitudes(img);
}

py::object optional_rate(const std::optional<Rate>& r) {
    if (!r) return py::none();
    return py::float_(r->value());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = R"pbdoc(
        Gabor filter-bank features, kernel entropy component analysis and
        nearest-class-mean classification.
    )pbdoc";

    // images
    m.def("load_pgm", [](const std::string& path) {
        auto img = load_pgm(path);
        return from_raster(img.width(), img.height(), img.data());
    }, py::arg("path"), "Read a P2/P5 PGM as a (height, width) float array");
    m.def("save_pgm", [](const Array& image, const std::string& path) { save_pgm(to_image(image), path); },
          py::arg("image"), py::arg("path"));
    m.def("resize_bilinear", [](const Array& image, int width, int height) {
        auto out = resize_bilinear(to_image(image), width, height);
        return from_raster(out.width(), out.height(), out.data());
    }, py::arg("image"), py::arg("width"), py::arg("height"));

    // gabor
    py::enum_<DcCompensation>(m, "DcCompensation")
        .value("sampled", DcCompensation::sampled)
        .value("analytic", DcCompensation::analytic);

    py::class_<GaborParams>(m, "GaborParams")
        .def(py::init<>())
        .def_readwrite("num_scales", &GaborParams::num_scales)
        .def_readwrite("num_orientations", &GaborParams::num_orientations)
        .def_readwrite("k_max", &GaborParams::k_max)
        .def_readwrite("f", &GaborParams::f)
        .def_readwrite("sigma", &GaborParams::sigma)
        .def_readwrite("window", &GaborParams::window)
        .def_readwrite("dc", &GaborParams::dc);

    m.def("wave_vector", &wave_vector, py::arg("mu"), py::arg("nu"), py::arg("params") = GaborParams{});
    m.def("make_kernel", [](int mu, int nu, const GaborParams& p) { return kernel_grid(make_kernel(mu, nu, p)); },
          py::arg("mu"), py::arg("nu"), py::arg("params") = GaborParams{},
          "Complex (window, window) kernel grid; row index is y, column index is x");
    m.def("make_bank", [](const GaborParams& p) {
        py::list out;
        for (const auto& k : make_bank(p)) out.append(kernel_grid(k));
        return out;
    }, py::arg("params") = GaborParams{});
    m.def("convolve_fft", [](const Array& image, int mu, int nu, const GaborParams& p) {
        const auto field = convolve_fft(to_image(image), make_kernel(mu, nu, p));
        py::array_t<std::complex<double>> out({field.height, field.width});
        std::copy(field.values.begin(), field.values.end(), out.mutable_data());
        return out;
    }, py::arg("image"), py::arg("mu"), py::arg("nu"), py::arg("params") = GaborParams{});
    m.def("gabor_magnitudes", [](const Array& image, const GaborParams& p) {
        const auto mags = magnitudes_of(image, p);
        Array out({static_cast<py::ssize_t>(mags.size()), static_cast<py::ssize_t>(mags.front().height),
                   static_cast<py::ssize_t>(mags.front().width)});
        auto* dst = out.mutable_data();
        for (const auto& mg : mags) dst = std::copy(mg.values.begin(), mg.values.end(), dst);
        return out;
    }, py::arg("image"), py::arg("params") = GaborParams{}, "(E, height, width) magnitudes in bank order");

    // features
    m.def("extract_chi", [](const Array& mags, int block_size) {
        if (mags.ndim() != 3) throw std::invalid_argument("expected an (E, height, width) array");
        std::vector<MagnitudeImage> images;
        const auto h = static_cast<int>(mags.shape(1));
        const auto w = static_cast<int>(mags.shape(2));
        const auto plane = static_cast<std::size_t>(h) * w;
        for (py::ssize_t e = 0; e < mags.shape(0); ++e) {
            MagnitudeImage mi{w, h, 0, 0, {}};
            mi.values.assign(mags.data() + e * plane, mags.data() + (e + 1) * plane);
            images.push_back(std::move(mi));
        }
        return from_vector(extract_chi(images, block_size).values);
    }, py::arg("magnitudes"), py::arg("block_size") = 7);
    m.def("extract_features", [](const Array& image, const GaborParams& p, int block_size) {
        const auto mags = magnitudes_of(image, p);
        return from_vector(extract_chi(mags, block_size).values);
    }, py::arg("image"), py::arg("params") = GaborParams{}, py::arg("block_size") = 7);

    // kernels
    py::enum_<KernelKind>(m, "KernelKind")
        .value("cosine", KernelKind::cosine)
        .value("gaussian", KernelKind::gaussian)
        .value("polynomial", KernelKind::polynomial);
    py::class_<KernelSpec>(m, "KernelSpec")
        .def_static("cosine", &KernelSpec::cosine, py::arg("normalize") = true)
        .def_static("gaussian", &KernelSpec::gaussian, py::arg("sigma"), py::arg("normalize") = true)
        .def_static("polynomial", &KernelSpec::polynomial, py::arg("degree"), py::arg("offset"),
                    py::arg("normalize") = true)
        .def_readonly("kind", &KernelSpec::kind)
        .def_readonly("sigma", &KernelSpec::sigma)
        .def_readonly("degree", &KernelSpec::degree)
        .def_readonly("offset", &KernelSpec::offset)
        .def_readonly("normalize_inputs", &KernelSpec::normalize_inputs);
    m.def("eval_kernel", [](const Array& x, const Array& y, const KernelSpec& s) {
        return eval_kernel(to_vec(x), to_vec(y), s);
    }, py::arg("x"), py::arg("y"), py::arg("spec"));
    m.def("kernel_matrix", [](const Array& x, const KernelSpec& s) { return from_matrix(kernel_matrix(to_samples(x), s)); },
          py::arg("samples"), py::arg("spec"));

    // keca
    m.def("eig_sym", [](const Array& a) {
        const auto dec = eig_sym(to_matrix(a));
        return py::make_tuple(from_vector(dec.values), from_matrix(dec.vectors));
    }, py::arg("matrix"), "Descending eigenvalues and matching eigenvector columns");
    m.def("renyi_estimate", [](const Array& k) {
        const auto r = renyi_estimate(to_matrix(k));
        return py::make_tuple(r.potential, r.entropy ? py::object(py::float_(*r.entropy)) : py::none());
    }, py::arg("kernel_matrix"));
    m.def("entropy_rank", [](const Array& k) {
        const auto dec = eig_sym(to_matrix(k));
        const auto r = entropy_rank(dec, dec.size());
        return py::make_tuple(from_vector(r.contributions), r.order);
    }, py::arg("kernel_matrix"), "Entropy contributions per eigen-axis and their descending order");

    py::class_<KecaModel>(m, "KecaModel")
        .def_readonly("k", &KecaModel::k)
        .def_readonly("axes", &KecaModel::axes)
        .def_property_readonly("eigenvalues", [](const KecaModel& km) { return from_vector(km.eigenvalues); })
        .def_property_readonly("contributions", [](const KecaModel& km) { return from_vector(km.ranking.contributions); })
        .def("project_train", [](const KecaModel& km) { return from_matrix(project_train(km)); })
        .def("project", [](const KecaModel& km, const Array& x) { return from_vector(project(km, to_vec(x))); },
             py::arg("x"));
    m.def("fit_keca", [](const Array& x, const KernelSpec& s, std::optional<std::size_t> k, double energy) {
        KecaOptions opts;
        opts.k = k;
        opts.energy_fraction = energy;
        return fit_keca(to_samples(x), s, opts);
    }, py::arg("samples"), py::arg("spec"), py::arg("k") = py::none(), py::arg("energy") = 0.95);

    // classify
    py::enum_<Measure>(m, "Measure")
        .value("l1", Measure::l1)
        .value("l2", Measure::l2)
        .value("mahalanobis", Measure::mahalanobis)
        .value("cosine", Measure::cosine);
    py::class_<ClassModel>(m, "ClassModel")
        .def_readonly("labels", &ClassModel::labels)
        .def_property_readonly("means", [](const ClassModel& c) { return from_matrix(c.means); })
        .def_property_readonly("covariance", [](const ClassModel& c) { return from_matrix(c.covariance); })
        .def("distance", [](const ClassModel& c, const Array& x, const Array& y, Measure mm) {
            return distance(to_vec(x), to_vec(y), mm, c);
        }, py::arg("x"), py::arg("y"), py::arg("measure"))
        .def("classify", [](const ClassModel& c, const Array& x, Measure mm) {
            const auto r = classify(to_vec(x), c, mm);
            return py::make_tuple(r.label, r.distance);
        }, py::arg("x"), py::arg("measure"));
    m.def("fit_classes", [](const Array& emb, const std::vector<std::string>& labels, double reg) {
        return fit_classes(to_matrix(emb), labels, reg);
    }, py::arg("embeddings"), py::arg("labels"), py::arg("reg_scale") = 1e-6);

    // eval
    m.def("compute_metrics", [](std::uint64_t tp, std::uint64_t fp, std::uint64_t tn, std::uint64_t fn) {
        const auto r = compute_metrics(ConfusionCounts{tp, fp, tn, fn});
        py::dict d;
        d["sensitivity"] = optional_rate(r.sensitivity);
        d["specificity"] = optional_rate(r.specificity);
        d["false_positive_rate"] = optional_rate(r.false_positive_rate);
        d["false_negative_rate"] = optional_rate(r.false_negative_rate);
        d["accuracy"] = r.accuracy.value();
        d["sensitivity_pct"] = r.sensitivity ? py::object(py::str(r.sensitivity->percent(2))) : py::none();
        d["specificity_pct"] = r.specificity ? py::object(py::str(r.specificity->percent(2))) : py::none();
        d["accuracy_pct"] = r.accuracy.percent(2);
        return d;
    }, py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"));

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
