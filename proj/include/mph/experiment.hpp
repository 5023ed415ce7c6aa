// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

// Simulation and analysis of the length-scan experiment: post-selected
// success probabilities, detection through fibre beam splitters, synthetic
// counts, plateau widths and fidelities.

#pragma once

#include "mph/coupledmode.hpp"
#include "mph/holonomy.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mph {

inline constexpr std::uint64_t kDefaultSeed = 20260101;

enum class PreparationKind { direct, hom_bunched, distinguishable };

/// direct: the member ket itself. hom_bunched: a bunched pair made by
/// two-photon interference with visibility v, modelled as the mixture
/// v * indistinguishable + (1 - v) * distinguishable outcome statistics.
/// distinguishable: the same occupations carried by mutually distinguishable
/// particles, detected without resolving which particle is which.
struct Preparation {
  PreparationKind kind = PreparationKind::direct;
  double visibility = 1.0;

  static Preparation direct() { return {}; }
  static Preparation hom_bunched(double v) { return {PreparationKind::hom_bunched, v}; }
  static Preparation distinguishable() { return {PreparationKind::distinguishable, 0.0}; }
};

struct InputSpec {
  OccupationState state;
  Preparation prep;
};

/// Inputs for every member of the subspace with the same preparation.
std::vector<InputSpec> member_inputs(const Subspace& sub, Preparation prep = Preparation::direct());

/// Outcome probabilities over the whole basis of `sub` for one input, before
/// any post-selection.
std::vector<double> outcome_distribution(const Subspace& sub, const InputSpec& input, const Matrix& u);

/// Member the ideal cycle carries the input to (checked up to phase).
std::size_t target_member(const Subspace& sub, const InputSpec& input, const Matrix& u_ideal);

/// P(target | outcome in subspace) for single-particle propagators at the
/// scanned length and at the ideal length.
double success_probability(const Subspace& sub, const InputSpec& input, const Matrix& u_length,
                           const Matrix& u_ideal);
double success_probability(const Subspace& sub, const InputSpec& input,
                           const CoupledModeSystem& sys, const CoupledModeSystem& ideal);

/// A family of structures indexed by total length.
struct StructureFamily {
  std::function<CoupledModeSystem(double)> at_length;
  double ideal_length_mm = 0.0;
  double min_length_mm = 0.0;

  Matrix propagator(double length_mm) const;
};

StructureFamily fabricated_family(const StructureCalibration& cal = {});
/// Every length gets the same fixed system; useful for dummy checks.
StructureFamily constant_family(CoupledModeSystem sys, double ideal_length_mm);

/// Ratios are the output-1 fractions of each port's two-way splitter.
struct DetectionModel {
  std::vector<double> ratios;
  /// Mean spurious coincidences added to every channel; default none.
  double dark_counts = 0.0;

  static DetectionModel ideal(int ports);
  /// The calibrated splitters of the four output ports.
  static DetectionModel calibrated();
  void validate(int ports) const;
};

/// One detector-pair (or detector) channel and the basis state it reveals.
struct Channel {
  std::string name;
  std::size_t state = 0;
  double probability = 0.0;  // P(channel | state)
};

/// Channels are named by port and splitter output, e.g. "1a|1b" for a pair
/// on port 1, "1a|4b" for ports 1 and 4, "2a" for a single photon. Labeled
/// states are resolved directly: "a1|b3".
std::vector<Channel> detection_channels(const FockBasis& basis, const DetectionModel& model);

/// Per-channel probabilities for a distribution over basis states.
std::vector<double> detect(const std::vector<double>& state_probabilities, const FockBasis& basis,
                           const DetectionModel& model);

/// Inverse of detect: per-state estimate sum(counts) / sum(P(channel | state)).
std::vector<double> estimate_states(const std::vector<double>& channel_counts,
                                    const FockBasis& basis, const DetectionModel& model);

/// Counts per channel for each (input, length) point.
struct CountTable {
  struct Point {
    std::string structure_id;
    double length_mm = 0.0;
    std::string input;
    std::vector<double> counts;  // indexed like detection_channels
  };
  std::vector<std::string> channel_names;
  std::vector<Point> points;
};

struct ScanPoint {
  double length_mm = 0.0;
  double p = 0.0;
  double sigma = 0.0;
  bool defined = true;
};

struct InputCurve {
  std::string input;
  std::vector<ScanPoint> points;
};

enum class ScanMode { theory, synthetic, ingested };
std::string_view to_string(ScanMode m);

struct ScanResult {
  ScanMode mode = ScanMode::theory;
  std::string subspace;
  std::vector<InputCurve> curves;
  std::vector<std::string> warnings;
};

struct ScanOptions {
  ScanMode mode = ScanMode::theory;
  DetectionModel detection;
  std::uint64_t trials = 100000;
  std::uint64_t seed = kDefaultSeed;
  unsigned jobs = 1;
};

/// Evenly spaced lengths including both ends.
std::vector<double> length_grid(double start_mm, double end_mm, double step_mm);

ScanResult scan(const Subspace& sub, const std::vector<InputSpec>& inputs,
                const StructureFamily& family, const std::vector<double>& lengths,
                const ScanOptions& options = {});

/// Poisson counts with mean trials * P(channel); every (input, length) point
/// draws from its own stream derived from the master seed.
CountTable simulate_counts(const Subspace& sub, const std::vector<InputSpec>& inputs,
                           const StructureFamily& family, const std::vector<double>& lengths,
                           const DetectionModel& model, std::uint64_t trials, std::uint64_t seed,
                           unsigned jobs = 1);

/// Post-selected success probabilities with Poisson error propagation.
ScanResult estimate_from_counts(const CountTable& counts, const Subspace& sub,
                                const DetectionModel& model, const Matrix& u_ideal,
                                ScanMode mode = ScanMode::ingested);

/// CSV with header structure_id,length_mm,input_state,detector_pair,counts.
std::string export_counts_csv(const CountTable& counts);
/// Parse errors name the offending line. Channels that belong to states
/// outside the subspace are kept; they are removed by post-selection.
CountTable parse_counts_csv(const std::string& text, const Subspace& sub, const DetectionModel& model,
                            std::vector<std::string>* warnings = nullptr);
ScanResult ingest_counts(const std::string& path, const Subspace& sub, const DetectionModel& model,
                         const Matrix& u_ideal);

/// Two-column-plus-sigma curve export for plotting.
std::string curves_csv(const ScanResult& result);

enum class PlateauRuleKind { theory_slope, experimental_step };

struct PlateauRule {
  PlateauRuleKind kind = PlateauRuleKind::theory_slope;
  /// |dp/dL| bound per mm (theory) or bound on consecutive differences.
  double threshold = 0.015;
  /// Refine the theory boundaries by interpolating the threshold crossing.
  bool interpolate = true;
  std::optional<std::pair<double, double>> clip;
  /// Curves with several local maxima within 1e-6 of the top use the one
  /// nearest this length; otherwise the first maximum.
  std::optional<double> anchor;

  static PlateauRule theory(std::optional<std::pair<double, double>> clip = std::nullopt,
                            std::optional<double> anchor = std::nullopt) {
    return {PlateauRuleKind::theory_slope, 0.015, true, clip, anchor};
  }
  static PlateauRule experimental() { return {PlateauRuleKind::experimental_step, 0.05, false, {}, {}}; }
  std::string name() const;
};

struct Plateau {
  double start = 0.0;
  double end = 0.0;
  double width = 0.0;
  double peak_length = 0.0;
};

Plateau plateau_of(const std::vector<double>& lengths, const std::vector<double>& p,
                   const PlateauRule& rule);

struct PlateauReport {
  std::vector<std::string> inputs;
  std::vector<Plateau> plateaus;
  double mean_width = 0.0;
  std::string rule;
};

/// Plateau per input curve and the mean over inputs.
PlateauReport plateau_width(const ScanResult& result, const PlateauRule& rule);

/// Normalized coincidence rate 1 - v exp(-(tau / width)^2).
std::vector<double> hom_dip(const std::vector<double>& delays, double visibility, double width = 1.0);

/// (sum sqrt(p q))^2 / (sum p * sum q).
double fidelity(const std::vector<double>& p_theory, const std::vector<double>& p_exp);

/// Derives the flat coupling from the single-photon plateau target and then
/// the ramp sharpness that puts the cycle end at the ideal length.
StructureCalibration calibrate_structure(double target_width_mm = 23.7,
                                               double ideal_length_mm = 84.9,
                                               double ramp_length_mm = 30.0);

/// Plateau width in accumulated-phase units of the single-photon outer
/// curve for a slope bound given per rad.
double single_photon_plateau_phase_width(double threshold_per_rad);

}  // namespace mph
