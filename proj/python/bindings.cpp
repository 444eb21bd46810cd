#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "singlab/cli.hpp"
#include "singlab/diophantine.hpp"
#include "singlab/exponents.hpp"
#include "singlab/ifs.hpp"
#include "singlab/report.hpp"

namespace py = pybind11;
using namespace singlab;

namespace {

IfsSystem resolve(const std::string& ifs) {
  const auto first = ifs.find_first_not_of(" \t\n");
  if (first != std::string::npos && ifs[first] == '{') return parse_ifs_json(ifs);
  return make_preset(ifs);
}

Vec to_vec(const std::vector<double>& xs) { return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size())); }

}  // namespace

PYBIND11_MODULE(_singlab, m) {
  py::register_exception<Error>(m, "SinglabError", PyExc_ValueError);

  m.def("preset_names", &preset_names);
  m.def("command_names", &command_names);

  m.def("ifs_json", [](const std::string& ifs) { return dump(to_json(resolve(ifs))); }, py::arg("ifs"));
  m.def("similarity_dimension", [](const std::string& ifs) { return resolve(ifs).sim_dim(); }, py::arg("ifs"));

  m.def(
      "alpha_estimate_json",
      [](const std::string& ifs, int ell, const std::vector<double>& ladder) {
        py::gil_scoped_release release;
        return dump(to_json(alpha_estimate(resolve(ifs), ell, ladder)));
      },
      py::arg("ifs"), py::arg("ell"), py::arg("eps_ladder"));

  m.def(
      "dimension_bound_json",
      [](double s, int d, const std::vector<double>& alphas) { return dump(to_json(dimension_bound(s, d, alphas))); },
      py::arg("s"), py::arg("d"), py::arg("alphas"));

  m.def(
      "dirichlet_test",
      [](const std::vector<double>& x, double eps, double N) -> py::object {
        const auto r = dirichlet_test({to_vec(x), eps, N});
        if (!r.solvable) return py::none();
        return py::make_tuple(r.witness->p, r.witness->q, r.witness->value);
      },
      py::arg("x"), py::arg("eps"), py::arg("N"),
      "Returns (p, q, |q.x + p|) for a solution, or None.");

  m.def(
      "dirichlet_ratio", [](const std::vector<double>& x, double N) { return dirichlet_ratio(to_vec(x), N); },
      py::arg("x"), py::arg("N"));

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> full = {"singlab"};
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : full) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int rc = 0;
        {
          py::gil_scoped_release release;
          rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(rc, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in-process; returns (exit_code, stdout, stderr).");
}
