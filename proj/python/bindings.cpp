#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cli.hpp"
#include "gujfont/classify.hpp"
#include "gujfont/compose.hpp"
#include "gujfont/error.hpp"
#include "gujfont/features.hpp"
#include "gujfont/fontio.hpp"
#include "gujfont/raster.hpp"
#include "gujfont/rules.hpp"
#include "gujfont/strokes.hpp"
#include "gujfont/synth.hpp"
#include "gujfont/thinning.hpp"

namespace py = pybind11;
using namespace gujfont;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

std::pair<int, int> shape2(const py::buffer_info& info) {
  if (info.ndim != 2) throw py::value_error("expected a 2-D array");
  return {static_cast<int>(info.shape[1]), static_cast<int>(info.shape[0])};
}

// Any nonzero value is ink.
BinaryRaster to_binary(const U8Array& a) {
  const auto info = a.request();
  const auto [w, h] = shape2(info);
  const auto* p = static_cast<const std::uint8_t*>(info.ptr);
  std::vector<std::uint8_t> bits(p, p + static_cast<std::size_t>(w) * h);
  for (auto& b : bits) b = b != 0;
  return BinaryRaster(w, h, std::move(bits));
}

GrayRaster to_gray(const U8Array& a) {
  const auto info = a.request();
  const auto [w, h] = shape2(info);
  const auto* p = static_cast<const std::uint8_t*>(info.ptr);
  return GrayRaster(w, h, std::vector<std::uint8_t>(p, p + static_cast<std::size_t>(w) * h));
}

py::array_t<std::uint8_t> to_numpy(const BinaryRaster& r) {
  py::array_t<std::uint8_t> out({r.height(), r.width()});
  auto m = out.mutable_unchecked<2>();
  for (int y = 0; y < r.height(); ++y)
    for (int x = 0; x < r.width(); ++x) m(y, x) = r.ink(x, y) ? 1 : 0;
  return out;
}

py::array_t<int> dataset_to_numpy(const Dataset& ds) {
  py::array_t<int> out({static_cast<py::ssize_t>(ds.size()), static_cast<py::ssize_t>(kRowLength)});
  auto m = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (int j = 0; j < kRowLength; ++j) m(i, j) = ds[i][j];
  return out;
}

Dataset dataset_from_numpy(const py::array_t<int, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(1) != kRowLength) throw py::value_error("dataset must have shape (n, 26)");
  auto m = a.unchecked<2>();
  Dataset ds(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (int j = 0; j < kRowLength; ++j) ds[i][j] = m(i, j);
  return ds;
}

FeatureVector features_from(const std::vector<int>& v) {
  if (v.size() != kFeatureLength) throw py::value_error("feature vector must have 25 entries");
  FeatureVector f{};
  std::copy(v.begin(), v.end(), f.begin());
  return f;
}

py::list contours_to_py(const std::vector<Contour>& cs) {
  py::list out;
  for (const auto& c : cs) {
    py::list pts;
    for (const auto& p : c.points) pts.append(py::make_tuple(p.x, p.y));
    out.append(py::dict(py::arg("points") = pts, py::arg("hole") = c.hole));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stroke extraction, classification, composition and outline export";
  py::register_exception<Error>(m, "GujfontError", PyExc_RuntimeError);

  m.def("binarize", [](const U8Array& gray) { return to_numpy(binarize_otsu(to_gray(gray))); },
        "Otsu threshold of an 8-bit grayscale image; returns 1 for ink.");
  m.def("thin", [](const U8Array& ink) { return to_numpy(adaptive_thin(zhang_suen(to_binary(ink))).raster); },
        "Zhang-Suen thinning followed by the unit-width pass.");
  m.def("is_unit_width", [](const U8Array& sk) { return is_unit_width(to_binary(sk)); });
  m.def(
      "extract_strokes",
      [](const U8Array& ink) {
        py::list out;
        for (const auto& s : extract_strokes(to_binary(ink))) {
          py::list ends;
          for (const auto& p : s.endpoints) ends.append(py::make_tuple(p.x, p.y));
          out.append(py::dict(py::arg("crop") = to_numpy(s.crop), py::arg("normalized") = to_numpy(s.normalized),
                              py::arg("origin") = py::make_tuple(s.origin.x, s.origin.y),
                              py::arg("endpoints") = ends));
        }
        return out;
      },
      "Splits a character image into strokes.");
  m.def(
      "stroke_features",
      [](const U8Array& stroke30) {
        const auto f = stroke_features(to_binary(stroke30));
        return std::vector<int>(f.begin(), f.end());
      },
      "25 zone codes of a 30x30 normalised stroke.");
  m.def("synthesize_dataset", [](int per_class, std::uint64_t seed) { return dataset_to_numpy(synthesize_dataset(per_class, seed)); },
        py::arg("per_class"), py::arg("seed"));
  m.def("render_reference", [](int cls) { return to_numpy(render_reference(cls)); });

  py::class_<Model>(m, "Model")
      .def_property_readonly("algo", [](const Model& mo) { return std::string(algo_name(mo.algo)); })
      .def("predict", [](const Model& mo, const std::vector<int>& v) { return predict(mo, features_from(v)); })
      .def("accuracy",
           [](const Model& mo, const py::array_t<int, py::array::c_style | py::array::forcecast>& ds) {
             return evaluate(mo, dataset_from_numpy(ds)).overall_accuracy;
           })
      .def("to_json", [](const Model& mo) { return model_to_json(mo).dump(); })
      .def_static("from_json", [](const std::string& text) { return model_from_json(nlohmann::json::parse(text)); });

  m.def(
      "train",
      [](const py::array_t<int, py::array::c_style | py::array::forcecast>& ds, const std::string& algo, int k,
         int trees, std::uint64_t seed) {
        Hyperparams hp;
        hp.k = k;
        hp.trees = trees;
        hp.seed = seed;
        return train(dataset_from_numpy(ds), parse_algo(algo), hp);
      },
      py::arg("dataset"), py::arg("algo") = "knn", py::arg("k") = 3, py::arg("trees") = 25, py::arg("seed") = 42);

  m.def(
      "load_ruleset",
      [](const std::string& path) {
        std::vector<std::string> chars;
        for (const auto& [cp, rule] : load_ruleset_file(path).rules) chars.push_back(codepoint_label(cp));
        return chars;
      },
      "Validates a ruleset file and lists its characters.");

  m.def(
      "generate_glyph",
      [](const std::filesystem::path& bank_dir, const std::string& rules_path, const std::string& ch, int variant) {
        const auto g = generate_character(parse_codepoint(ch), load_bank(bank_dir), load_ruleset_file(rules_path), variant);
        return to_numpy(g.raster);
      },
      py::arg("bank_dir"), py::arg("rules"), py::arg("char"), py::arg("variant") = 0);

  m.def("trace_contours", [](const U8Array& glyph, double epsilon) { return contours_to_py(simplify(trace_contours(to_binary(glyph)), epsilon)); },
        py::arg("glyph"), py::arg("epsilon") = 2.0, "Outlines of a 256x256 glyph in em units.");
  m.def(
      "export_svg",
      [](const std::string& ch, const U8Array& glyph, double epsilon) {
        return export_svg(parse_codepoint(ch), simplify(trace_contours(to_binary(glyph)), epsilon));
      },
      py::arg("char"), py::arg("glyph"), py::arg("epsilon") = 2.0);
  m.def(
      "export_sfd",
      [](const std::map<std::string, U8Array>& glyphs, const std::string& family, double epsilon) {
        FontProject fp;
        fp.family_name = family;
        for (const auto& [ch, a] : glyphs) fp.add_glyph(parse_codepoint(ch), simplify(trace_contours(to_binary(a)), epsilon));
        return export_sfd(fp);
      },
      py::arg("glyphs"), py::arg("family") = "Handwriting", py::arg("epsilon") = 2.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}
