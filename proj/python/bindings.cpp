// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/enumerate.hpp"
#include "mph/experiment.hpp"
#include "mph/io.hpp"
#include "mph/reference_table.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mph;

namespace {

ParticleType type_of(const std::string& name) {
  switch (parse_statistics(name)) {
    case Statistics::boson: return ParticleType::boson();
    case Statistics::fermion: return ParticleType::fermion();
    case Statistics::distinguishable: return ParticleType::distinguishable();
  }
  fail(ErrorCode::invalid_argument, "unknown particle type '" + name + "'");
}

Subspace make_subspace(const std::vector<std::string>& states, const std::string& type, int modes) {
  require(!states.empty(), ErrorCode::invalid_argument, "a subspace needs at least one state");
  const auto pt = type_of(type);
  const int n = parse_state(states.front(), pt, modes).particle_count();
  return Subspace::parse(enumerate_basis(modes, n, pt), states);
}

Preparation prep_of(const std::string& name, double visibility) {
  if (name == "direct") return Preparation::direct();
  if (name == "dist" || name == "distinguishable") return Preparation::distinguishable();
  if (name == "hom") return Preparation::hom_bunched(visibility);
  fail(ErrorCode::invalid_argument, "unknown preparation '" + name + "'");
}

void raise(const char* name, const Error& e) {
  const py::object type = py::module_::import("mph._core").attr(name);
  py::object inst = type(e.what());
  inst.attr("code") = std::string(to_string(e.code()));
  PyErr_SetObject(type.ptr(), inst.ptr());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-photon holonomies in coupled waveguide arrays";

  auto base = py::exception<Error>(m, "MphError");
  py::exception<NotHolonomicError>(m, "NotHolonomicError", base);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NotHolonomicError& e) {
      raise("NotHolonomicError", e);
    } catch (const Error& e) {
      raise("MphError", e);
    }
  });

  py::class_<ParticleType>(m, "ParticleType")
      .def_static("boson", &ParticleType::boson)
      .def_static("fermion", &ParticleType::fermion)
      .def_static("distinguishable", [] { return ParticleType::distinguishable(); })
      .def_property_readonly("kind", [](const ParticleType& t) { return std::string(to_string(t.kind)); });

  py::class_<CoupledModeSystem>(m, "Structure")
      .def_property_readonly("length", &CoupledModeSystem::length)
      .def_property_readonly("mode_count", &CoupledModeSystem::mode_count)
      .def("hamiltonian", &CoupledModeSystem::hamiltonian, py::arg("z"))
      .def("phase", [](const CoupledModeSystem& s, double z) { return accumulated_phase(s, z); }, py::arg("z"));

  m.def("structure", [](double length_mm) { return paper_structure(length_mm); }, py::arg("length_mm") = 84.9,
        "Calibrated four-waveguide Jx structure of the given total length.");
  m.def("system_from_json", [](const std::string& text) { return system_from_json(Json::parse(text)); },
        py::arg("text"));

  py::class_<Subspace>(m, "Subspace")
      .def(py::init(&make_subspace), py::arg("states"), py::arg("type") = "boson", py::arg("modes") = 4)
      .def_property_readonly("dim", &Subspace::dim)
      .def_property_readonly("labels", &Subspace::labels)
      .def("__repr__", &Subspace::describe);

  m.def("basis_labels", [](int modes, int particles, const std::string& type) {
    const auto b = enumerate_basis(modes, particles, type_of(type));
    std::vector<std::string> out;
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b.label(i));
    return out;
  }, py::arg("modes"), py::arg("particles"), py::arg("type") = "boson");

  m.def("permanent", &permanent, py::arg("m"));
  m.def("lift_unitary", [](const Matrix& u, int particles, const std::string& type) {
    return lift_unitary(u, enumerate_basis(static_cast<int>(u.rows()), particles, type_of(type)));
  }, py::arg("u"), py::arg("particles"), py::arg("type") = "boson");

  m.def("evolve", [](const CoupledModeSystem& s, double z0, std::optional<double> z1) {
    return evolve(s, z0, z1.value_or(s.length())).u;
  }, py::arg("system"), py::arg("z0") = 0.0, py::arg("z1") = py::none());
  m.def("jx_propagator", [](double delta, int modes) { return propagator_at_phase(jx_pattern(modes), delta); },
        py::arg("delta"), py::arg("modes") = 4);

  m.def("is_cyclic", [](const Subspace& sub, const CoupledModeSystem& s) { return is_cyclic(sub, s).cyclic; },
        py::arg("subspace"), py::arg("system"));
  m.def("extract_holonomy", [](const Subspace& sub, const CoupledModeSystem& s) {
    const auto h = extract_holonomy(sub, s);
    py::dict d;
    d["u"] = h.u;
    d["class"] = std::string(to_string(h.cls));
    d["max_K"] = h.max_K;
    return d;
  }, py::arg("subspace"), py::arg("system"));

  m.def("count_subspaces", [](const CoupledModeSystem& s, int particles, const std::string& type) {
    const auto b = enumerate_basis(s.mode_count(), particles, type_of(type));
    const auto c = count_subspaces(b, decompose_orbits(s, b));
    return std::pair(c.total, c.cyclic);
  }, py::arg("system"), py::arg("particles"), py::arg("type") = "boson");

  m.def("enumerate_holonomic", [](const CoupledModeSystem& s, int particles, const std::string& type,
                                  std::size_t cap, unsigned jobs) {
    EnumerationOptions o;
    o.cap = cap;
    o.jobs = jobs;
    const auto r = enumerate_holonomic(s, enumerate_basis(s.mode_count(), particles, type_of(type)), o);
    py::list holonomic;
    for (const auto* rec : r.holonomic_records(1)) {
      py::dict d;
      d["states"] = rec->labels;
      d["class"] = rec->cls ? py::str(std::string(to_string(*rec->cls))) : py::str("");
      holonomic.append(d);
    }
    py::dict d;
    d["total"] = r.counts.total;
    d["cyclic"] = r.counts.cyclic;
    d["holonomic"] = r.holonomic;
    d["holonomic_multi"] = r.holonomic_multi;
    d["scalar"] = r.scalar;
    d["diagonal"] = r.diagonal;
    d["non_scalar"] = r.non_scalar;
    d["subspaces"] = holonomic;
    return d;
  }, py::arg("system"), py::arg("particles"), py::arg("type") = "boson", py::arg("cap") = 4096,
        py::arg("jobs") = 1);

  m.def("success_probability", [](const Subspace& sub, const std::string& input, double length_mm,
                                  const std::string& prep, double visibility) {
    const auto fam = fabricated_family();
    const InputSpec in{parse_state(input, sub.basis.particle_type(), sub.basis.mode_count()),
                       prep_of(prep, visibility)};
    return success_probability(sub, in, fam.propagator(length_mm), fam.propagator(fam.ideal_length_mm));
  }, py::arg("subspace"), py::arg("input"), py::arg("length_mm"), py::arg("prep") = "direct",
        py::arg("visibility") = 1.0);

  m.def("scan", [](const Subspace& sub, const std::vector<double>& lengths, const std::string& prep,
                   double visibility) {
    const auto r = scan(sub, member_inputs(sub, prep_of(prep, visibility)), fabricated_family(), lengths);
    py::dict d;
    for (const auto& c : r.curves) {
      std::vector<double> p;
      for (const auto& pt : c.points) p.push_back(pt.p);
      d[py::str(c.input)] = p;
    }
    return d;
  }, py::arg("subspace"), py::arg("lengths"), py::arg("prep") = "direct", py::arg("visibility") = 1.0,
        "Theory success probability per member input over the fabricated family.");

  m.def("plateau", [](const std::vector<double>& lengths, const std::vector<double>& p, const std::string& rule,
                      std::optional<std::pair<double, double>> clip, std::optional<double> anchor) {
    PlateauRule r;
    if (rule == "theory") {
      r = PlateauRule::theory(clip, anchor);
    } else if (rule == "experimental") {
      r = PlateauRule::experimental();
      r.clip = clip;
    } else {
      fail(ErrorCode::invalid_argument, "unknown plateau rule '" + rule + "'");
    }
    const auto pl = plateau_of(lengths, p, r);
    return py::make_tuple(pl.start, pl.end, pl.width);
  }, py::arg("lengths"), py::arg("p"), py::arg("rule") = "theory", py::arg("clip") = py::none(),
        py::arg("anchor") = py::none(), "Returns (start, end, width).");

  m.def("fidelity", &fidelity, py::arg("p_theory"), py::arg("p_exp"));
  m.def("hom_dip", &hom_dip, py::arg("delays"), py::arg("visibility"), py::arg("width") = 1.0);

  m.def("reference_rows", [](unsigned jobs) {
    WidthOptions o;
    o.jobs = jobs;
    py::list out;
    for (const auto& r : run_reference_rows({}, o)) {
      py::dict d;
      d["group"] = std::string(to_string(r.row.group));
      d["states"] = r.row.states;
      d["published_restricted_mm"] = r.row.restricted_mm;
      d["published_unrestricted_mm"] = r.row.unrestricted_mm;
      d["restricted_mm"] = r.restricted_mm;
      d["unrestricted_mm"] = r.unrestricted_mm;
      d["pass"] = r.pass_restricted && (r.calibration_anchor || r.pass_unrestricted);
      out.append(d);
    }
    return out;
  }, py::arg("jobs") = 1);
}
