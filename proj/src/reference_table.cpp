// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/reference_table.hpp"

#include "mph/io.hpp"
#include "mph/parallel.hpp"

#include <cmath>
#include <cstdio>

namespace mph {

std::string_view to_string(RowGroup g) {
  switch (g) {
    case RowGroup::single_photon: return "single";
    case RowGroup::indistinguishable: return "indist";
    case RowGroup::distinguishable: return "dist";
    case RowGroup::labeled: return "labeled";
  }
  return "unknown";
}

const std::vector<ReferenceRow>& reference_rows() {
  using G = RowGroup;
  static const std::vector<ReferenceRow> rows = {
      {G::single_photon, {"1000", "0001"}, 13, 16.7, 23.7},
      {G::indistinguishable, {"2000", "0002"}, 15, 19.4, 28.9},
      {G::distinguishable, {"2000", "0002"}, 15, 19.4, 28.9},
      {G::indistinguishable, {"0200", "0020"}, 10, 7.7, 7.7},
      {G::distinguishable, {"0200", "0020"}, 10, 7.7, 7.7},
      {G::indistinguishable, {"1010", "0101"}, 10, 9.5, 9.5},
      {G::distinguishable, {"1010", "0101"}, 10, 9.2, 9.2},
      {G::indistinguishable, {"1100", "0011"}, 10, 12.1, 14.3},
      {G::distinguishable, {"1100", "0011"}, 10, 14.3, 18.9},
      {G::indistinguishable, {"2000", "0002", "0200", "0020"}, 8, 8.3, 8.3},
      {G::distinguishable, {"2000", "0002", "0200", "0020"}, 8, 8.3, 8.3},
      {G::indistinguishable, {"2000", "0002", "1010", "0101"}, 6, 9.3, 9.6},
      {G::distinguishable, {"2000", "0002", "1010", "0101"}, 7, 9.9, 10.8},
      {G::indistinguishable, {"2000", "0002", "0110"}, 11, 11.4, 12.9},
      {G::distinguishable, {"2000", "0002", "0110"}, 11, 12.3, 14.6},
      {G::indistinguishable, {"2000", "0002", "1001"}, 13, 15.1, 20.2},
      {G::distinguishable, {"2000", "0002", "1001"}, 13, 15.9, 21.9},
      {G::indistinguishable, {"0200", "0020", "1010", "0101"}, 4, 5.8, 5.8},
      {G::distinguishable, {"0200", "0020", "1010", "0101"}, 4, 6.2, 6.2},
      {G::indistinguishable, {"0200", "0020", "1001"}, 10, 8.7, 9.2},
      {G::distinguishable, {"0200", "0020", "1001"}, 9, 8.8, 9.2},
      {G::indistinguishable, {"0110", "1001"}, 10, 9.1, 9.1},
      {G::distinguishable, {"0110", "1001"}, 8, 9.3, 9.4},
      {G::indistinguishable, {"0110", "1100", "0011"}, 4, 6.0, 6.0},
      {G::distinguishable, {"0110", "1100", "0011"}, 4, 7.6, 7.6},
      {G::indistinguishable, {"1001", "1100", "0011"}, 8, 10.5, 11.2},
      {G::distinguishable, {"1001", "1100", "0011"}, 7, 10.9, 12.0},
      {G::indistinguishable, {"2000", "0002", "0110", "1001"}, 8, 10.5, 11.5},
      {G::distinguishable, {"2000", "0002", "0110", "1001"}, 10, 11.0, 12.5},
      {G::indistinguishable, {"2000", "0002", "0200", "0020", "1001"}, 8, 8.8, 9.0},
      {G::distinguishable, {"2000", "0002", "0200", "0020", "1001"}, 8, 8.8, 9.1},
      {G::indistinguishable, {"2000", "0002", "0200", "0020", "1010", "0101"}, 4, 6.5, 6.5},
      {G::distinguishable, {"2000", "0002", "0200", "0020", "1010", "0101"}, 4, 6.9, 6.9},
      {G::labeled, {"a1b3", "a4b2", "a2b1", "a3b4"}, 10, 11.5, 13.1},
  };
  return rows;
}

const std::vector<NonHolonomicExample>& non_holonomic_examples() {
  using G = RowGroup;
  static const std::vector<NonHolonomicExample> rows = {
      {"single-photon inner pair", G::single_photon, {"0100", "0010"}},
      {"inner pair with 0110", G::indistinguishable, {"0200", "0020", "0110"}},
      {"adjacent-hop quartet", G::indistinguishable, {"1100", "1010", "0101", "0011"}},
      {"labeled octet", G::labeled, {"a1b3", "a3b1", "a2b4", "a4b2", "a1b2", "a2b1", "a3b4", "a4b3"}},
  };
  return rows;
}

Subspace row_subspace(RowGroup group, const std::vector<std::string>& states) {
  const ParticleType type =
      group == RowGroup::labeled ? ParticleType::distinguishable() : ParticleType::boson();
  const int particles = group == RowGroup::single_photon ? 1 : 2;
  return Subspace::parse(enumerate_basis(4, particles, type), states);
}

Preparation row_preparation(RowGroup group) {
  return group == RowGroup::distinguishable ? Preparation::distinguishable() : Preparation::direct();
}

double width_tolerance(double published_mm) { return std::max(0.15 * published_mm, 1.5); }

std::pair<double, double> theory_widths(const Subspace& sub, Preparation prep,
                                        const StructureFamily& family, const WidthOptions& options) {
  ScanOptions so;
  so.jobs = options.jobs;
  const auto grid = length_grid(options.grid_start_mm, options.grid_end_mm, options.grid_step_mm);
  const auto curves = scan(sub, member_inputs(sub, prep), family, grid, so);
  const double ideal = family.ideal_length_mm;
  const double full = plateau_width(curves, PlateauRule::theory(std::nullopt, ideal)).mean_width;
  const double clipped = plateau_width(curves, PlateauRule::theory(options.restricted, ideal)).mean_width;
  return {full, clipped};
}

std::vector<RowResult> run_reference_rows(const StructureCalibration& cal, const WidthOptions& options) {
  const auto family = fabricated_family(cal);
  const auto& rows = reference_rows();
  std::vector<RowResult> out(rows.size());
  WidthOptions inner = options;
  inner.jobs = 1;
  parallel_for(rows.size(), options.jobs, [&](std::size_t i) {
    const auto& row = rows[i];
    RowResult r;
    r.row = row;
    const auto sub = row_subspace(row.group, row.states);
    const auto prep = row_preparation(row.group);
    const auto [full, clipped] = theory_widths(sub, prep, family, inner);
    r.unrestricted_mm = full;
    r.restricted_mm = clipped;
    r.unrestricted_phase = full * cal.omega_flat_per_mm;
    r.restricted_phase = clipped * cal.omega_flat_per_mm;
    const auto seven = scan(sub, member_inputs(sub, prep), family, fabricated_lengths());
    r.seven_point_mm = plateau_width(seven, PlateauRule::experimental()).mean_width;
    r.calibration_anchor = i == 0;
    r.pass_restricted = std::abs(r.restricted_mm - row.restricted_mm) <= width_tolerance(row.restricted_mm);
    r.pass_unrestricted =
        std::abs(r.unrestricted_mm - row.unrestricted_mm) <= width_tolerance(row.unrestricted_mm);
    out[i] = std::move(r);
  });
  return out;
}

std::string reference_table_text(const std::vector<RowResult>& results) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-8s %-34s %9s %9s %5s %9s %9s %5s %7s\n", "group", "states",
                "restr", "publ", "ok", "unrestr", "publ", "ok", "7-pt");
  out += buf;
  for (const auto& r : results) {
    std::string states;
    for (std::size_t i = 0; i < r.row.states.size(); ++i) states += (i ? " " : "") + r.row.states[i];
    std::snprintf(buf, sizeof buf, "%-8s %-34s %9.2f %9.1f %5s %9.2f %9.1f %5s %7.2f\n",
                  std::string(to_string(r.row.group)).c_str(), states.c_str(), r.restricted_mm,
                  r.row.restricted_mm, r.pass_restricted ? "PASS" : "FAIL", r.unrestricted_mm,
                  r.row.unrestricted_mm,
                  r.calibration_anchor ? "CAL" : (r.pass_unrestricted ? "PASS" : "FAIL"),
                  r.seven_point_mm);
    out += buf;
  }
  return out;
}

std::string reference_table_json(const std::vector<RowResult>& results, const StructureCalibration& cal) {
  Json j;
  j["omega_flat_per_mm"] = cal.omega_flat_per_mm;
  j["ramp_sharpness"] = cal.ramp_sharpness;
  j["ideal_length_mm"] = cal.ideal_length_mm;
  Json rows = Json::array();
  for (const auto& r : results) {
    Json o;
    o["group"] = std::string(to_string(r.row.group));
    o["states"] = r.row.states;
    o["restricted_mm"] = r.restricted_mm;
    o["published_restricted_mm"] = r.row.restricted_mm;
    o["pass_restricted"] = r.pass_restricted;
    o["unrestricted_mm"] = r.unrestricted_mm;
    o["published_unrestricted_mm"] = r.row.unrestricted_mm;
    o["pass_unrestricted"] = r.pass_unrestricted;
    o["calibration_anchor"] = r.calibration_anchor;
    o["restricted_phase_rad"] = r.restricted_phase;
    o["unrestricted_phase_rad"] = r.unrestricted_phase;
    o["seven_point_mm"] = r.seven_point_mm;
    o["published_experiment_mm"] = r.row.experiment_mm;
    rows.push_back(o);
  }
  j["rows"] = rows;
  return dump_json(j);
}

}  // namespace mph
