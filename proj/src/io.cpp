// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/io.hpp"

#include "mph/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mph {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

bool is_flat(const Json& j) {
  if (j.is_object()) return false;
  if (!j.is_array()) return true;
  for (const auto& e : j)
    if (!is_flat(e)) return false;
  return true;
}

void dump_rec(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::null: out += "null"; return;
    case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; return;
    case Json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); return;
    case Json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); return;
    case Json::value_t::number_float: out += format_double(j.get<double>()); return;
    case Json::value_t::string: out += j.dump(); return;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool inline_array = indent <= 0 || is_flat(j);
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += inline_array ? ", " : ",";
        if (!inline_array) out += "\n" + pad;
        dump_rec(e, indent, depth + 1, out);
        first = false;
      }
      if (!inline_array) out += "\n" + close_pad;
      out += "]";
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",";
        if (indent > 0) out += "\n" + pad;
        out += Json(it.key()).dump() + (indent > 0 ? ": " : ":");
        dump_rec(it.value(), indent, depth + 1, out);
        first = false;
      }
      if (indent > 0) out += "\n" + close_pad;
      out += "}";
      return;
    }
    default: out += "null"; return;
  }
}

complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorCode::config, "expected a number or a [re, im] pair");
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::config, std::string("field '") + key + "' has the wrong type");
  }
}

Envelope envelope_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::config, "envelope must be a list of segments");
  std::vector<EnvelopeSegment> segs;
  for (const auto& s : j) {
    if (!s.is_object()) fail(ErrorCode::config, "envelope segment must be an object");
    EnvelopeSegment seg;
    seg.kind = parse_segment_kind(get_or<std::string>(s, "kind", "constant"));
    seg.length_mm = get_or<double>(s, "length_mm", -1.0);
    if (seg.length_mm < 0.0) fail(ErrorCode::config, "envelope segment needs length_mm >= 0");
    const double value = get_or<double>(s, "value_per_mm", 0.0);
    seg.start_per_mm = get_or<double>(s, "start_per_mm", value);
    seg.end_per_mm = get_or<double>(s, "end_per_mm", seg.kind == SegmentKind::constant ? seg.start_per_mm : value);
    seg.sharpness = get_or<double>(s, "sharpness", 0.0);
    segs.push_back(seg);
  }
  try {
    return Envelope(std::move(segs));
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("invalid envelope: ") + e.what());
  }
}

Json envelope_to_json(const Envelope& env) {
  Json arr = Json::array();
  for (const auto& s : env.segments()) {
    Json o;
    o["kind"] = std::string(to_string(s.kind));
    o["length_mm"] = s.length_mm;
    o["start_per_mm"] = s.start_per_mm;
    o["end_per_mm"] = s.end_per_mm;
    o["sharpness"] = s.sharpness;
    arr.push_back(o);
  }
  return arr;
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  if (indent > 0) out += "\n";
  return out;
}

Json complex_to_json(complex c) { return Json::array({c.real(), c.imag()}); }

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::config, "matrix must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
      fail(ErrorCode::config, "matrix rows must all have the same length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

StructureCalibration calibration_from_json(const Json& j) {
  StructureCalibration cal;
  cal.omega_flat_per_mm = get_or<double>(j, "omega_flat_per_mm", cal.omega_flat_per_mm);
  cal.ramp_sharpness = get_or<double>(j, "ramp_sharpness", cal.ramp_sharpness);
  cal.ramp_length_mm = get_or<double>(j, "ramp_length_mm", cal.ramp_length_mm);
  cal.ideal_length_mm = get_or<double>(j, "ideal_length_mm", cal.ideal_length_mm);
  return cal;
}

CoupledModeSystem system_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::config, "system definition must be a JSON object");
  try {
    if (j.contains("preset")) {
      const auto preset = get_or<std::string>(j, "preset", "");
      if (preset != "jx4-chain") fail(ErrorCode::config, "unknown preset '" + preset + "'");
      const auto cal = calibration_from_json(j);
      return paper_structure(get_or<double>(j, "length_mm", cal.ideal_length_mm), cal);
    }
    std::vector<HamiltonianTerm> terms;
    auto read_term = [&](const Json& t) {
      if (!t.contains("pattern")) fail(ErrorCode::config, "system needs a 'pattern'");
      if (!t.contains("envelope")) fail(ErrorCode::config, "system needs an 'envelope'");
      terms.push_back({CouplingPattern(matrix_from_json(t["pattern"])), envelope_from_json(t["envelope"])});
    };
    if (j.contains("terms")) {
      for (const auto& t : j["terms"]) read_term(t);
    } else {
      read_term(j);
    }
    CoupledModeSystem sys(std::move(terms));
    const int modes = get_or<int>(j, "modes", sys.mode_count());
    if (modes != sys.mode_count()) fail(ErrorCode::config, "'modes' does not match the pattern size");
    if (j.contains("length_mm") && std::abs(j["length_mm"].get<double>() - sys.length()) > 1e-9)
      fail(ErrorCode::config, "'length_mm' does not match the envelope");
    return sys;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    fail(ErrorCode::config, std::string("invalid system: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, std::string("invalid system: ") + e.what());
  }
}

Json system_to_json(const CoupledModeSystem& sys) {
  Json j;
  j["modes"] = sys.mode_count();
  j["length_mm"] = sys.length();
  if (sys.terms().size() == 1) {
    j["pattern"] = matrix_to_json(sys.pattern().matrix());
    j["envelope"] = envelope_to_json(sys.envelope());
  } else {
    Json terms = Json::array();
    for (const auto& t : sys.terms()) {
      Json o;
      o["pattern"] = matrix_to_json(t.pattern.matrix());
      o["envelope"] = envelope_to_json(t.envelope);
      terms.push_back(o);
    }
    j["terms"] = terms;
  }
  return j;
}

Subspace subspace_from_json(const Json& j, int mode_count) {
  if (!j.is_object()) fail(ErrorCode::config, "subspace definition must be a JSON object");
  try {
    const auto kind = parse_statistics(get_or<std::string>(j, "particle", "boson"));
    ParticleType type{kind, {}};
    if (kind == Statistics::distinguishable)
      type = ParticleType::distinguishable(
          get_or<std::vector<std::string>>(j, "labels", {"a", "b"}));
    if (!j.contains("states") || !j["states"].is_array() || j["states"].empty())
      fail(ErrorCode::config, "subspace needs a non-empty 'states' list");
    const int modes = get_or<int>(j, "modes", mode_count);
    std::vector<OccupationState> states;
    for (const auto& s : j["states"]) {
      if (s.is_string()) {
        states.push_back(parse_state(s.get<std::string>(), type, modes));
      } else if (s.is_array()) {
        if (kind == Statistics::distinguishable)
          fail(ErrorCode::config, "labeled states are written as objects like {\"a\": 1}");
        states.emplace_back(kind, modes, s.get<std::vector<int>>());
      } else if (s.is_object()) {
        if (kind != Statistics::distinguishable)
          fail(ErrorCode::config, "object states are only for distinguishable particles");
        std::vector<int> m;
        for (const auto& label : type.labels) {
          if (!s.contains(label)) fail(ErrorCode::config, "state lacks label '" + label + "'");
          m.push_back(s[label].get<int>() - 1);
        }
        if (s.size() != type.labels.size()) fail(ErrorCode::config, "state has unknown labels");
        states.push_back(OccupationState::labeled(modes, std::move(m)));
      } else {
        fail(ErrorCode::config, "unrecognized state entry");
      }
    }
    const int particles = states.front().particle_count();
    return Subspace::from_states(enumerate_basis(modes, particles, type), states);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    fail(ErrorCode::config, std::string("invalid subspace: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, std::string("invalid subspace: ") + e.what());
  }
}

Json subspace_to_json(const Subspace& sub) {
  Json j;
  j["particle"] = std::string(to_string(sub.basis.kind()));
  if (sub.basis.kind() == Statistics::distinguishable) j["labels"] = sub.basis.particle_type().labels;
  j["modes"] = sub.basis.mode_count();
  j["states"] = sub.labels();
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::config, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::config, "cannot write '" + path + "'");
  out << text;
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, "'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace mph
