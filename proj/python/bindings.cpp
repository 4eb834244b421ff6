#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bpmp/cim.hpp"
#include "bpmp/cli.hpp"
#include "bpmp/formulations.hpp"
#include "bpmp/instance.hpp"
#include "bpmp/lp.hpp"
#include "bpmp/measure.hpp"
#include "bpmp/model.hpp"
#include "bpmp/oracle.hpp"
#include "bpmp/report.hpp"
#include "bpmp/solve.hpp"

namespace py = pybind11;
using namespace bpmp;

namespace {

MipModel model_for(const std::string& instance_json, const std::string& formulation, const std::string& techniques) {
  const auto inst = from_json(instance_json);
  return build_model(inst, parse_formulation(formulation), parse_techniques(techniques));
}

py::dict stats_dict(const StatSummary& s) {
  py::dict d;
  d["min"] = s.min;
  d["mean"] = s.mean;
  d["median"] = s.median;
  d["max"] = s.max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "BPMP model suite and Composite Index Method";

  m.def("generate", [](int n, std::uint64_t seed) { return to_json(generate(n, seed)); }, py::arg("n"),
        py::arg("seed"), "Random instance as a JSON document.");

  m.def(
      "emit",
      [](const std::string& instance_json, const std::string& formulation, const std::string& techniques,
         const std::string& format) {
        const auto model = model_for(instance_json, formulation, techniques);
        if (format == "lp") return emit_lp(model);
        if (format == "mps") return emit_mps(model);
        throw std::invalid_argument("format must be 'lp' or 'mps'");
      },
      py::arg("instance"), py::arg("formulation"), py::arg("techniques") = "", py::arg("format") = "lp");

  m.def(
      "solve",
      [](const std::string& instance_json, const std::string& formulation, const std::string& techniques,
         const std::string& cuts) {
        const auto inst = from_json(instance_json);
        const auto model = build_model(inst, parse_formulation(formulation), parse_techniques(techniques));
        const auto families = cuts.empty() ? std::vector<CutFamily>{} : parse_cut_families(cuts);
        return to_json(model, solve(model, inst, families)).dump();
      },
      py::arg("instance"), py::arg("formulation"), py::arg("techniques") = "", py::arg("cuts") = "",
      "Branch-and-bound result as a JSON document.");

  m.def(
      "lp_relaxation",
      [](const std::string& instance_json, const std::string& formulation, const std::string& techniques) {
        const auto lp = solve_lp(model_for(instance_json, formulation, techniques));
        if (lp.status != LpStatus::kOptimal) throw std::runtime_error("LP status " + to_string(lp.status));
        return lp.objective;
      },
      py::arg("instance"), py::arg("formulation"), py::arg("techniques") = "");

  m.def(
      "solve_exact",
      [](const std::string& instance_json) {
        const auto inst = from_json(instance_json);
        return to_json(inst, solve_exact(inst)).dump();
      },
      py::arg("instance"), "Exhaustive optimum as a JSON document.");

  m.def("summarize", [](std::vector<double> v) { return stats_dict(summarize(std::move(v))); });

  m.def("size_index", [](double c, double t, double r) { return size_index(c, t, r, MetricWeights{}); });

  m.def("grand_composite", &grand_composite, py::arg("index_by_size"), py::arg("size_weights"));

  m.def(
      "run_table_speedups",
      [](const std::string& baseline_csv, const std::string& challenger_csv) {
        const auto s = speedups(load_run_table(baseline_csv), load_run_table(challenger_csv));
        py::dict d;
        d["cpu"] = stats_dict(s.cpu);
        d["ticks"] = stats_dict(s.ticks);
        d["real"] = stats_dict(s.real);
        const auto r = size_result(20, s, WeightScheme::node_arc());
        d["indices"] = py::make_tuple(r.indices.c, r.indices.t, r.indices.r, r.indices.i);
        return d;
      },
      py::arg("baseline"), py::arg("challenger"),
      "Speedup statistics and node-arc indices of two run tables.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in process; returns (exit code, stdout, stderr).");
}
