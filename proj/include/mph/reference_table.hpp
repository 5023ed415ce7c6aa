// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

// Published plateau widths of the four-waveguide holonomies and a runner
// that recomputes them with the calibrated structure family.

#pragma once

#include "mph/experiment.hpp"

#include <string>
#include <vector>

namespace mph {

enum class RowGroup { single_photon, indistinguishable, distinguishable, labeled };
std::string_view to_string(RowGroup g);

struct ReferenceRow {
  RowGroup group = RowGroup::indistinguishable;
  std::vector<std::string> states;
  double experiment_mm = 0.0;
  double restricted_mm = 0.0;
  double unrestricted_mm = 0.0;
};

/// All rows, in published order; indist/dist variants are separate rows.
const std::vector<ReferenceRow>& reference_rows();

/// Cyclic subspaces that the published discussion calls non-holonomic.
struct NonHolonomicExample {
  std::string name;
  RowGroup group;
  std::vector<std::string> states;
};
const std::vector<NonHolonomicExample>& non_holonomic_examples();

Subspace row_subspace(RowGroup group, const std::vector<std::string>& states);
Preparation row_preparation(RowGroup group);

/// Widths within max(15 %, 1.5 mm) of the published value pass.
double width_tolerance(double published_mm);

struct RowResult {
  ReferenceRow row;
  double restricted_mm = 0.0;
  double unrestricted_mm = 0.0;
  /// Same widths times the flat coupling, in rad of accumulated phase.
  double restricted_phase = 0.0;
  double unrestricted_phase = 0.0;
  /// Experimental rule applied to the theory at the seven lengths.
  double seven_point_mm = 0.0;
  bool pass_restricted = false;
  bool pass_unrestricted = false;
  /// Row 1 unrestricted fixes the flat coupling; it is not a prediction.
  bool calibration_anchor = false;
};

struct WidthOptions {
  double grid_step_mm = 0.01;
  double grid_start_mm = 60.0;
  double grid_end_mm = 120.0;
  std::pair<double, double> restricted{80.0, 100.0};
  unsigned jobs = 1;
};

/// Mean theory plateau over member inputs, unrestricted and clipped.
std::pair<double, double> theory_widths(const Subspace& sub, Preparation prep,
                                        const StructureFamily& family, const WidthOptions& options = {});

std::vector<RowResult> run_reference_rows(const StructureCalibration& cal = {},
                                          const WidthOptions& options = {});

/// Fixed-width comparison table, one line per row.
std::string reference_table_text(const std::vector<RowResult>& results);
std::string reference_table_json(const std::vector<RowResult>& results, const StructureCalibration& cal);

}  // namespace mph
