#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tractlab/cli.hpp"
#include "tractlab/complexity.hpp"
#include "tractlab/criteria.hpp"
#include "tractlab/errors.hpp"
#include "tractlab/spectra.hpp"

namespace py = pybind11;
using namespace tractlab;

namespace {

UnivariateSpectrum::Tail parse_tail(const std::string& s) {
  if (s == "finite") return UnivariateSpectrum::Tail::Finite;
  if (s == "zero") return UnivariateSpectrum::Tail::Zero;
  if (s == "geometric") return UnivariateSpectrum::Tail::Geometric;
  if (s == "power") return UnivariateSpectrum::Tail::PowerLaw;
  throw InvalidParameter("tail must be finite, zero, geometric or power");
}

ErrorCriterion parse_criterion(const std::string& s) {
  if (s == "ABS") return ErrorCriterion::ABS;
  if (s == "NOR") return ErrorCriterion::NOR;
  throw InvalidParameter("criterion must be ABS or NOR");
}

py::dict verdict_dict(const CriterionVerdict& v) {
  py::dict r;
  r["criterion"] = v.criterion;
  r["status"] = to_string(v.status);
  r["violated_d"] = v.violated_d;
  r["sup_estimate"] = v.sup_estimate;
  r["certified_lower_bound"] = v.certified_lower_bound;
  r["growth_slope"] = v.growth_slope ? py::object(py::float_(*v.growth_slope)) : py::object(py::none());
  py::list per_d;
  for (const auto& p : v.per_d) per_d.append(py::make_tuple(p.d, p.value, p.tail_bound));
  r["per_d"] = per_d;
  r["basis"] = v.basis;
  r["caveat"] = v.caveat;
  return r;
}

CriterionParams make_params(double tau, std::uint64_t L, int d_max) {
  CriterionParams p;
  p.tau = tau;
  p.L = L;
  p.d_max = d_max;
  return p;
}

}  // namespace

PYBIND11_MODULE(_tractlab, m) {
  m.attr("__version__") = kVersion;

  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);
  py::register_exception<Divergence>(m, "Divergence", PyExc_ArithmeticError);
  py::register_exception<Inconclusive>(m, "Inconclusive", PyExc_RuntimeError);

  m.def("zeta", &zeta, py::arg("s"));
  m.def("hurwitz_zeta", &hurwitz_zeta, py::arg("s"), py::arg("q"));

  py::class_<UnivariateSpectrum>(m, "UnivariateSpectrum")
      .def_static(
          "from_values",
          [](std::vector<double> v, const std::string& tail, double scale, double param) {
            return UnivariateSpectrum::from_values(std::move(v), parse_tail(tail), scale, param);
          },
          py::arg("values"), py::arg("tail") = "finite", py::arg("scale") = 1.0, py::arg("param") = 0.0)
      .def_static("geometric", &UnivariateSpectrum::geometric, py::arg("scale"), py::arg("ratio"))
      .def_static("power_law", &UnivariateSpectrum::power_law, py::arg("scale"), py::arg("beta"))
      .def("at", &UnivariateSpectrum::at, py::arg("n"));

  py::class_<WeightSequence>(m, "WeightSequence")
      .def_static("power", &WeightSequence::power, py::arg("beta"), py::arg("scale") = 1.0)
      .def_static("geometric", &WeightSequence::geometric, py::arg("ratio"), py::arg("scale") = 1.0)
      .def_static("constant", &WeightSequence::constant, py::arg("c"))
      .def_static("explicit", &WeightSequence::explicit_list, py::arg("values"), py::arg("repeat_last") = false)
      .def("at", &WeightSequence::at, py::arg("j"));

  py::class_<SpectrumModel>(m, "SpectrumModel")
      .def_static("korobov", &SpectrumModel::korobov, py::arg("alpha"))
      .def_static("weighted_korobov", &SpectrumModel::weighted_korobov, py::arg("alpha"), py::arg("gamma"))
      .def_static("analytic_korobov", &SpectrumModel::analytic_korobov, py::arg("omega"), py::arg("a"), py::arg("b"))
      .def_static("tensor", &SpectrumModel::tensor, py::arg("univariate"))
      .def_static("explicit", &SpectrumModel::explicit_model, py::arg("per_d"))
      .def_property_readonly("kind", &SpectrumModel::kind_name);

  m.def(
      "n_worst",
      [](const SpectrumModel& model, int d, double eps, const std::string& crit) {
        return n_worst({model, d, eps, parse_criterion(crit), Setting::WORST});
      },
      py::arg("model"), py::arg("d"), py::arg("eps"), py::arg("criterion") = "ABS");
  m.def(
      "n_avg",
      [](const SpectrumModel& model, int d, double eps, const std::string& crit) {
        return n_avg(model, d, eps, parse_criterion(crit));
      },
      py::arg("model"), py::arg("d"), py::arg("eps"), py::arg("criterion") = "ABS");
  m.def(
      "avg_error", [](const SpectrumModel& model, int d, std::uint64_t n) { return avg_error(model, d, n); },
      py::arg("model"), py::arg("d"), py::arg("n"));

  m.def(
      "top_eigenvalues",
      [](const SpectrumModel& model, int d, std::uint64_t k) {
        py::list out;
        for (const auto& e : eigenvalue_stream(model, d, k).values) out.append(py::make_tuple(e.value(), e.witness));
        return out;
      },
      py::arg("model"), py::arg("d"), py::arg("k"));

  m.def(
      "alg_spt_check",
      [](const SpectrumModel& model, double tau, std::uint64_t L, int d_max) {
        return verdict_dict(alg_spt_check(model, make_params(tau, L, d_max)));
      },
      py::arg("model"), py::arg("tau") = 1.0, py::arg("L") = 1, py::arg("d_max") = 10);
  m.def(
      "alg_wt_check",
      [](const SpectrumModel& model, std::vector<double> c_grid, int d_max) {
        CriterionParams p = make_params(1.0, 1, d_max);
        p.c_grid = std::move(c_grid);
        return verdict_dict(alg_wt_check(model, p));
      },
      py::arg("model"), py::arg("c_grid") = std::vector<double>{0.5}, py::arg("d_max") = 10);

  m.def(
      "tensor_classify", [](const UnivariateSpectrum& u) { return std::string(to_string(tensor_classify(u).label)); },
      py::arg("univariate"));

  // Returns (exit code, stdout text, stderr text).
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream o, e;
        int code;
        {
          py::gil_scoped_release nogil;
          code = run_cli(args, o, e);
        }
        return py::make_tuple(code, o.str(), e.str());
      },
      py::arg("args"));
}
