#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "esample/bench.hpp"

namespace py = pybind11;
using namespace esample;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<Point> to_points(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw Error(ErrorCode::InvalidArgument, "points must have shape (n, 2)");
  auto r = a.unchecked<2>();
  std::vector<Point> out(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) out[static_cast<std::size_t>(i)] = {r(i, 0), r(i, 1)};
  return out;
}

Array to_array(const std::vector<Point>& pts) {
  Array out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    w(static_cast<py::ssize_t>(i), 0) = pts[i].x;
    w(static_cast<py::ssize_t>(i), 1) = pts[i].y;
  }
  return out;
}

WeightedSample to_sample(const Array& pts, const Array& weights) {
  WeightedSample s;
  s.points = to_points(pts);
  auto w = weights.unchecked<1>();
  for (py::ssize_t i = 0; i < weights.shape(0); ++i) s.weights.push_back(w(i));
  if (s.weights.size() != s.points.size()) throw Error(ErrorCode::InvalidArgument, "one weight per sample point");
  return s;
}

}  // namespace

PYBIND11_MODULE(_esample, m) {
  m.doc() = "Epsilon-samples for halfplanes";

  // Kept alive for the interpreter's lifetime; the module holds a reference too.
  static py::handle error_type = py::exception<Error>(m, "EsampleError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error_type(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def(
      "generate",
      [](const std::string& spec, std::size_t n, std::uint64_t seed) {
        return to_array(generate(parse_generator(spec), n, seed));
      },
      py::arg("spec"), py::arg("n"), py::arg("seed") = 1);

  m.def("sample_size_for_epsilon", &sample_size_for_epsilon, py::arg("eps"), py::arg("c") = 1.0);

  m.def(
      "epsilon_sample",
      [](const Array& pts, std::size_t k, const std::string& method, std::uint64_t seed,
         const std::string& presample, int ham_t) {
        SampleOptions opts;
        opts.presample = parse_presample(presample);
        opts.ham_t = ham_t;
        auto xs = to_points(pts);
        WeightedSample s;
        {
          py::gil_scoped_release release;
          s = epsilon_sample(xs, k, parse_sample_method(method), opts, seed);
        }
        py::dict out;
        out["points"] = to_array(s.points);
        out["weights"] = py::array_t<double>(static_cast<py::ssize_t>(s.weights.size()), s.weights.data());
        out["method"] = s.method;
        out["k_requested"] = s.k_requested;
        out["k_effective"] = s.k_effective;
        out["seconds"] = s.seconds;
        return out;
      },
      py::arg("points"), py::arg("k"), py::arg("method") = "ham", py::arg("seed") = 1,
      py::arg("presample") = "auto", py::arg("ham_t") = kDefaultHamT);

  m.def(
      "exact_error",
      [](const Array& x, const Array& sample, const Array& weights) {
        return exact_error(to_points(x), to_sample(sample, weights));
      },
      py::arg("points"), py::arg("sample"), py::arg("weights"));

  m.def(
      "approx_error",
      [](const Array& x, const Array& sample, const Array& weights, std::size_t budget, std::uint64_t seed) {
        return approx_error(to_points(x), to_sample(sample, weights), budget, seed);
      },
      py::arg("points"), py::arg("sample"), py::arg("weights"), py::arg("budget") = 400, py::arg("seed") = 1);

  m.def(
      "partition",
      [](const Array& pts, const std::string& method, std::size_t t, std::uint64_t seed) {
        auto xs = to_points(pts);
        RunConfig cfg;
        auto part = make_partition(xs, parse_sample_method(method), t, cfg, seed);
        std::vector<std::vector<std::size_t>> cells;
        for (auto& c : part.cells) cells.push_back(std::move(c.points));
        return cells;
      },
      py::arg("points"), py::arg("method"), py::arg("t"), py::arg("seed") = 1);

  m.def(
      "cutting",
      [](std::size_t n_lines, double r, const std::string& cell, std::uint64_t seed) {
        auto lines = random_lines(n_lines, seed);
        auto c = create_cutting(lines, r, CuttingOptions(CellKind::parse(cell)), seed);
        auto metrics = c.metrics();
        py::dict out;
        out["leaves"] = metrics.leaves;
        out["leaves_per_r2"] = metrics.leaves_per_r2;
        out["max_crossing_weight"] = metrics.max_crossing_weight;
        out["threshold"] = c.threshold;
        return out;
      },
      py::arg("n_lines"), py::arg("r"), py::arg("cell") = "poly8", py::arg("seed") = 1);
}
