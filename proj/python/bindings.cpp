#include <cmath>
#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zk/cli.hpp"
#include "zk/error.hpp"
#include "zk/kernel.hpp"
#include "zk/oracle.hpp"
#include "zk/verify.hpp"

namespace py = pybind11;
using namespace zk;

namespace {

HalfInt half(double v) {
  const double twice = 2 * v;
  if (std::nearbyint(twice) != twice) throw DomainError("not a half-integer: " + std::to_string(v));
  return HalfInt::from_twice(std::lround(twice));
}

std::vector<HalfInt> halves(const std::vector<double>& vs) {
  std::vector<HalfInt> out;
  for (double v : vs) out.push_back(half(v));
  return out;
}

py::dict corr_dict(const CorrResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["tail_bound"] = r.tail_bound;
  d["n_max"] = r.n_max_used;
  return d;
}

}  // namespace

PYBIND11_MODULE(_zkernel, m) {
  m.doc() = "z-measures on partitions and their correlation kernel";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<SizeLimitError>(m, "SizeLimitError", base.ptr());
  py::register_exception<InvalidParameters>(m, "InvalidParameters", base.ptr());
  py::register_exception<PoleError>(m, "PoleError", base.ptr());
  py::register_exception<ConfigurationError>(m, "ConfigurationError", base.ptr());
  py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());

  py::class_<ZParams>(m, "ZParams")
      .def_readonly("z", &ZParams::z)
      .def_readonly("zprime", &ZParams::zprime)
      .def_readonly("xi", &ZParams::xi)
      .def_readonly("zzprime", &ZParams::zzprime)
      .def_property_readonly("series", [](const ZParams& p) { return to_string(p.series); })
      .def("__repr__", [](const ZParams& p) {
        std::ostringstream s;
        s << "ZParams(z=" << p.z << ", zprime=" << p.zprime << ", xi=" << p.xi << ", series=" << to_string(p.series)
          << ")";
        return s.str();
      });

  m.def("classify", &classify, py::arg("z"), py::arg("zprime"), py::arg("xi"));

  m.def(
      "weight", [](const ZParams& p, const std::vector<int>& parts) { return weight(p, Partition(parts)); },
      py::arg("params"), py::arg("partition"));
  m.def(
      "total_mass",
      [](const ZParams& p, int n_max) {
        const auto r = total_mass(p, n_max);
        return py::make_tuple(r.partial_sum, r.tail_bound);
      },
      py::arg("params"), py::arg("n_max"), "(partial sum, tail bound) over diagrams with at most n_max boxes");

  m.def(
      "psi",
      [](const ZParams& p, double a, double x, const std::string& method) {
        if (method == "series") return psi(half(a), half(x), p);
        if (method == "contour") return psi_contour(half(a), half(x), p);
        throw DomainError("unknown psi method: " + method);
      },
      py::arg("params"), py::arg("a"), py::arg("x"), py::arg("method") = "series");

  m.def(
      "kernel_matrix",
      [](const ZParams& p, const std::vector<double>& points, const std::string& method, const std::string& gauge) {
        const KernelMatrix k = kernel_matrix(halves(points), p, parse_kernel_method(method), parse_gauge(gauge));
        std::vector<std::vector<Complex>> rows(k.dim());
        for (std::size_t i = 0; i < k.dim(); ++i) {
          for (std::size_t j = 0; j < k.dim(); ++j) rows[i].push_back(k.at(i, j));
        }
        return rows;
      },
      py::arg("params"), py::arg("points"), py::arg("method") = "series", py::arg("gauge") = "underlined");

  m.def(
      "kernel_json",
      [](const ZParams& p, const std::vector<double>& points, const std::string& method, const std::string& gauge) {
        return kernel_matrix(halves(points), p, parse_kernel_method(method), parse_gauge(gauge)).to_json();
      },
      py::arg("params"), py::arg("points"), py::arg("method") = "series", py::arg("gauge") = "underlined");

  m.def(
      "corr",
      [](const ZParams& p, const std::vector<double>& points, const std::string& method) {
        return corr_det(halves(points), p, parse_kernel_method(method));
      },
      py::arg("params"), py::arg("points"), py::arg("method") = "series");

  m.def(
      "brute_corr",
      [](const ZParams& p, const std::vector<double>& points, int n_max) {
        return corr_dict(brute_corr(halves(points), p, n_max));
      },
      py::arg("params"), py::arg("points"), py::arg("n_max"));

  m.def(
      "sample",
      [](const ZParams& p, int count, int n_max, std::uint64_t seed) {
        std::vector<std::vector<int>> out;
        for (const auto& r : sample(p, count, n_max, seed)) {
          out.emplace_back(r.partition.parts().begin(), r.partition.parts().end());
        }
        return out;
      },
      py::arg("params"), py::arg("count"), py::arg("n_max"), py::arg("seed"));

  m.def(
      "verify",
      [](const std::string& suite) {
        std::vector<py::dict> out;
        for (const auto& c : run_checks(suite)) {
          py::dict d;
          d["suite"] = c.suite;
          d["check"] = c.name;
          d["reference"] = c.reference;
          d["tolerance"] = c.tolerance;
          d["attained"] = c.attained;
          d["passed"] = c.passed;
          out.push_back(d);
        }
        return out;
      },
      py::arg("suite") = "all");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a command line; returns (exit code, stdout, stderr).");
}
