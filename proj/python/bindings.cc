// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Python bindings: instances in and out as text, selectability runs, the
// verify suites and the exact off-sample oracle.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crs/errors.h"
#include "crs/harness.h"
#include "crs/instance.h"
#include "crs/oracle.h"
#include "crs/ordering.h"

namespace py = pybind11;

namespace {

py::dict report_to_dict(const crs::SelectabilityReport& r) {
  py::list edges;
  for (const crs::EdgeEstimate& e : r.edges) {
    py::dict d;
    d["id"] = e.id;
    d["u"] = e.u;
    d["v"] = e.v;
    d["x"] = e.x.value();
    d["picks"] = e.picks;
    d["trials"] = e.trials;
    d["freq"] = e.freq;
    d["lower"] = e.lower;
    d["target"] = e.target;
    d["pass"] = e.pass;
    edges.append(d);
  }
  py::dict out;
  out["scheme"] = r.scheme;
  out["adversary"] = r.adversary;
  out["seed"] = r.seed;
  out["trials"] = r.trials;
  out["constant"] = r.constant;
  out["edges"] = edges;
  out["invariant_violations"] = r.violations.total();
  out["all_pass"] = r.all_pass();
  out["summary"] = crs::report_summary(r);
  out["csv"] = crs::report_to_csv(r);
  return out;
}

crs::EstimateOptions options_for(std::uint64_t trials, std::uint64_t seed, int workers,
                                 const std::optional<std::string>& adversary) {
  crs::EstimateOptions o;
  o.trials = trials;
  o.seed = seed;
  o.workers = workers;
  if (adversary) o.adversary = crs::parse_adversary(*adversary);
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Contention resolution schemes for graphic matroids";

  static py::exception<crs::CrsError> crs_error(m, "CrsError", PyExc_ValueError);
  static py::exception<crs::CapExceeded> cap_error(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const crs::CrsError& e) {
      const std::string message = std::string(crs::error_code_name(e.code())) + ": " + e.what();
      PyErr_SetString(crs_error.ptr(), message.c_str());
    } catch (const crs::CapExceeded& e) {
      PyErr_SetString(cap_error.ptr(), e.what());
    }
  });

  py::class_<crs::Instance>(m, "Instance")
      .def_static(
          "from_text",
          [](const std::string& text) {
            std::istringstream in(text);
            return crs::read_instance(in);
          },
          py::arg("text"))
      .def_static("from_file", &crs::read_instance_file, py::arg("path"))
      .def("to_text", &crs::instance_to_string)
      .def_property_readonly("vertex_count", &crs::Instance::vertex_count)
      .def_property_readonly("edge_count", &crs::Instance::edge_count)
      .def_property_readonly("edges",
                             [](const crs::Instance& g) {
                               std::vector<std::tuple<int, int, double>> out;
                               for (const crs::EdgeRecord& e : g.edges())
                                 out.emplace_back(e.u, e.v, e.x.value());
                               return out;
                             })
      .def("__repr__", [](const crs::Instance& g) {
        return "<Instance n=" + std::to_string(g.vertex_count()) +
               " m=" + std::to_string(g.edge_count()) + ">";
      });

  m.def("tie_flip_instance", &crs::tie_flip_instance);
  m.def("coupling_gap_instance", &crs::coupling_gap_instance);
  m.def(
      "generate",
      [](const std::string& family, int n, int k, int m_edges, int chords, int leaves,
         int handle, double x, double leaf_x, double handle_x, bool explicit_x,
         std::uint64_t seed) {
        crs::GeneratorSpec s;
        s.family = crs::parse_family(family);
        s.n = n;
        s.k = k;
        s.m = m_edges;
        s.chords = chords;
        s.leaves = leaves;
        s.handle = handle;
        s.x = x;
        s.leaf_x = leaf_x;
        s.handle_x = handle_x;
        s.mode = explicit_x ? crs::MarginalMode::kExplicit : crs::MarginalMode::kForestConvex;
        s.seed = seed;
        return crs::generate_instance(s);
      },
      py::arg("family"), py::kw_only(), py::arg("n") = 6, py::arg("k") = 2, py::arg("m") = 8,
      py::arg("chords") = 2, py::arg("leaves") = 5, py::arg("handle") = 0, py::arg("x") = 1.0,
      py::arg("leaf_x") = 0.6, py::arg("handle_x") = 1.0, py::arg("explicit") = false,
      py::arg("seed") = 0);

  m.def(
      "forest_union",
      [](int k, int n, std::uint64_t seed) {
        crs::ForestUnion fu = crs::generate_forest_union(k, n, seed);
        return py::make_tuple(fu.instance, fu.forests);
      },
      py::arg("k"), py::arg("n"), py::arg("seed") = 0,
      "Returns (instance, forests) for a union of k random spanning trees.");

  m.def(
      "simulate",
      [](const crs::Instance& g, const std::string& scheme, std::uint64_t trials,
         std::uint64_t seed, int workers, const std::optional<std::string>& adversary) {
        const crs::EstimateOptions o = options_for(trials, seed, workers, adversary);
        crs::SelectabilityReport r;
        {
          py::gil_scoped_release release;
          r = crs::estimate_selectability(crs::parse_scheme(scheme), g, o);
        }
        return report_to_dict(r);
      },
      py::arg("instance"), py::arg("scheme") = "rocrs", py::kw_only(),
      py::arg("trials") = 100000, py::arg("seed") = 0, py::arg("workers") = 1,
      py::arg("adversary") = py::none());

  m.def(
      "mofs",
      [](const crs::Instance& g, const std::vector<std::vector<crs::EdgeId>>& forests,
         std::uint64_t trials, std::uint64_t seed, int workers) {
        const crs::EstimateOptions o = options_for(trials, seed, workers, std::nullopt);
        crs::SelectabilityReport r;
        {
          py::gil_scoped_release release;
          r = crs::mofs_run(g, forests, o);
        }
        return report_to_dict(r);
      },
      py::arg("instance"), py::arg("forests"), py::kw_only(), py::arg("trials") = 100000,
      py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "verify",
      [](const std::string& suite, std::optional<crs::Instance> instance, std::uint64_t seed,
         int workers) {
        std::vector<crs::NamedInstance> battery;
        if (instance) {
          battery.push_back({"instance", *instance});
        } else {
          battery = crs::fixture_battery();
        }
        crs::SuiteOptions o;
        o.seed = seed;
        o.workers = workers;
        std::ostringstream out;
        crs::SuiteResult r;
        {
          py::gil_scoped_release release;
          r = crs::run_verify_suite(suite, battery, out, o);
        }
        py::dict d;
        d["checks"] = r.checks;
        d["failures"] = r.failures;
        d["spot_checks"] = r.spot_checks;
        d["lines"] = out.str();
        return d;
      },
      py::arg("suite"), py::arg("instance") = py::none(), py::kw_only(), py::arg("seed") = 0,
      py::arg("workers") = 1);

  m.def(
      "exact_offsample_expectation",
      [](const crs::Instance& g, std::vector<crs::VertexId> labeling, crs::VertexId v) {
        return crs::exact_offsample_expectation(g, crs::Labeling(std::move(labeling)), v).value();
      },
      py::arg("instance"), py::arg("labeling"), py::arg("v"),
      "E_S[x(E_v^S \\ S)] by enumerating every sample S.");

  m.def("coupling_gap_counts", [] {
    const crs::CouplingGapReport r = crs::verify_coupling_gap();
    const auto t = [](const crs::ClassCounts& c) {
      return py::make_tuple(c.fixed_v_first, c.dependent, c.fixed_u_first);
    };
    py::dict d;
    d["off_sample"] = t(r.off_sample);
    d["in_sample"] = t(r.in_sample);
    d["strict_labelings"] = r.strict_labelings;
    d["labelings"] = r.labelings;
    return d;
  });
}
