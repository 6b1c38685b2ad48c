#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hubbard_brg/errors.hpp"
#include "hubbard_brg/observables.hpp"
#include "hubbard_brg/rg.hpp"
#include "hubbard_brg/spectra.hpp"
#include "hubbard_brg/version.hpp"

namespace py = pybind11;
using namespace hbrg;

namespace {

BlockGeometry block(const std::string& name) { return make_block(parse_block_kind(name)); }

py::dict retained_dict(const RetainedSet& r) {
  py::dict d;
  d["e_minus"] = r.e_minus;
  d["e_zero"] = r.e_zero;
  d["e_zero_mirror"] = r.e_zero_mirror;
  d["e_plus"] = r.e_plus;
  d["lambda"] = r.lambda;
  d["lambda_per_border"] = r.lambda_per_border;
  d["ph_asymmetry"] = r.ph_asymmetry;
  d["gap"] = r.gap;
  d["multiplets"] = py::make_tuple(r.multiplet_minus, r.multiplet_zero, r.multiplet_plus);
  return d;
}

py::dict params_dict(const HubbardParams& p) {
  py::dict d;
  d["t"] = p.t;
  d["u"] = p.U;
  d["mu"] = p.mu;
  d["k"] = p.K;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Block renormalization group for the triangular-lattice Hubbard model";
  m.attr("__version__") = kVersion;

  auto numerical = py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception<DegenerateRetention>(m, "DegenerateRetention", numerical.ptr());
  py::register_exception<SymmetryViolation>(m, "SymmetryViolation", numerical.ptr());
  py::register_exception<BracketFailure>(m, "BracketFailure", PyExc_RuntimeError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);

  m.def("geometry", [](const std::string& name) {
    const BlockGeometry g = block(name);
    std::vector<std::pair<int, int>> bonds;
    for (const Bond& b : g.bonds) {
      bonds.emplace_back(b.a, b.b);
    }
    py::dict d;
    d["kind"] = std::string(to_string(g.kind));
    d["n_sites"] = g.n_sites;
    d["bonds"] = bonds;
    d["border_sites"] = g.border_sites;
    d["rotation"] = g.rotation;
    d["nu"] = g.nu;
    return d;
  }, py::arg("block") = "hex7");

  m.def("sector_ground_energy", [](const std::string& name, int n_up, int n_dn, double t, double u) {
    const std::array sec{Sector{n_up, n_dn}};
    return block_ground_energies({t, u, 0.0, 0.0}, block(name), sec, false)
        .at(sec[0]).energies.front();
  }, py::arg("block"), py::arg("n_up"), py::arg("n_dn"), py::arg("t") = 1.0, py::arg("u") = 0.0);

  m.def("retain_states", [](const std::string& name, double t, double u, double k) {
    return retained_dict(retain_states({t, u, u / 2, k}, block(name)));
  }, py::arg("block"), py::arg("t"), py::arg("u"), py::arg("k") = 0.0,
     "Retained block states at mu = U/2.");

  m.def("run_flow", [](const std::string& name, double u0, int levels, double t0) {
    const FlowResult f = run_flow(initial_params(t0, u0), block(name), levels);
    py::list out;
    for (const FlowLevel& l : f.levels) {
      py::dict d = params_dict(l.params);
      d["level"] = l.level;
      d["u_over_t"] = l.u_over_t;
      d["lambda"] = l.retained.lambda;
      out.append(d);
    }
    py::dict r;
    r["levels"] = out;
    r["classification"] = std::string(to_string(f.classification));
    r["gap"] = f.gap;
    return r;
  }, py::arg("block"), py::arg("u0"), py::arg("levels") = 6, py::arg("t0") = 1.0);

  m.def("find_critical", [](const std::string& name, double tol, double lower, double upper,
                            int max_levels) {
    CriticalResult r;
    {
      py::gil_scoped_release release;
      r = find_critical(block(name), tol, {lower, upper, max_levels});
    }
    return py::make_tuple(r.u_c_over_t, r.lower, r.upper);
  }, py::arg("block"), py::arg("tol") = 1e-3, py::arg("lower") = 1.0, py::arg("upper") = 50.0,
     py::arg("max_levels") = 50);

  m.def("charge_gap", [](const std::string& name, double t, double u) {
    return charge_gap({t, u, 0.0, 0.0}, block(name));
  }, py::arg("block"), py::arg("t"), py::arg("u"));

  m.def("sweep", [](const std::string& name, std::vector<double> u0_grid, std::vector<int> n_list,
                    int threads) {
    std::vector<std::tuple<double, int, double>> rows;
    for (const SweepRow& r : sweep_renormalized_coupling(u0_grid, n_list, block(name), threads)) {
      if (r.error) {
        throw NumericalFailure(*r.error);
      }
      rows.emplace_back(r.u0, r.n, r.u_over_t);
    }
    return rows;
  }, py::arg("block"), py::arg("u0_grid"), py::arg("n_list"), py::arg("threads") = 1);
}
