// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

// Coupled-mode Hamiltonians H(z) = sum_t Omega_t(z) * kappa_t over a set of
// waveguide modes, their envelopes and single-particle propagators.
//
// Positions are in mm and couplings in rad/mm. The propagator over [z0, z1]
// solves i d/dz psi = H(z) psi for amplitude vectors psi.

#pragma once

#include "mph/linalg.hpp"

#include <string_view>
#include <vector>

namespace mph {

class CouplingPattern {
 public:
  CouplingPattern() = default;
  /// Validates Hermiticity within 1e-12; the diagonal holds detunings.
  explicit CouplingPattern(Matrix kappa);

  int mode_count() const { return static_cast<int>(kappa_.rows()); }
  const Matrix& matrix() const { return kappa_; }
  double max_abs() const { return mph::max_abs(kappa_); }

 private:
  Matrix kappa_;
};

/// Nearest-neighbour chain with couplings sqrt(k (M - k)) / 2, k = 1..M-1.
CouplingPattern jx_pattern(int mode_count);

enum class SegmentKind { constant, cosine_ramp, exp_cosine_ramp };

std::string_view to_string(SegmentKind k);
SegmentKind parse_segment_kind(std::string_view name);

/// One piece of an envelope. A rising ramp goes start -> end as
/// start + (end - start) f(x / length); a falling ramp is the mirror image,
/// end + (start - end) f(1 - x / length). The cosine ramp uses
/// f(u) = (1 - cos(pi u)) / 2; the exp-cosine ramp uses
/// f(u) = (exp(-s (1 + cos(pi u))) - exp(-2 s)) / (1 - exp(-2 s)) with
/// s = sharpness, which stays near zero longer and rises more steeply.
struct EnvelopeSegment {
  SegmentKind kind = SegmentKind::constant;
  double length_mm = 0.0;
  double start_per_mm = 0.0;
  double end_per_mm = 0.0;
  double sharpness = 0.0;

  static EnvelopeSegment constant(double value, double length);
  static EnvelopeSegment cosine_ramp(double from, double to, double length);
  static EnvelopeSegment exp_cosine_ramp(double from, double to, double length, double sharpness);

  double value(double x) const;
  /// Integral of the envelope over [0, x] within the segment, in closed form.
  double integral(double x) const;
};

class Envelope {
 public:
  Envelope() = default;
  explicit Envelope(std::vector<EnvelopeSegment> segments);

  const std::vector<EnvelopeSegment>& segments() const { return segments_; }
  double length() const { return ends_.empty() ? 0.0 : ends_.back(); }
  double value(double z) const;
  /// Integral over [0, z]; z is clamped to [0, length].
  double integral(double z) const;
  double max_value() const;

 private:
  std::size_t segment_at(double z) const;

  std::vector<EnvelopeSegment> segments_;
  std::vector<double> ends_;
  std::vector<double> start_integrals_;
};

struct HamiltonianTerm {
  CouplingPattern pattern;
  Envelope envelope;
};

class CoupledModeSystem {
 public:
  CoupledModeSystem() = default;
  CoupledModeSystem(CouplingPattern pattern, Envelope envelope);
  /// Sum of several terms; all envelopes must share the same length.
  explicit CoupledModeSystem(std::vector<HamiltonianTerm> terms);

  int mode_count() const { return terms_.front().pattern.mode_count(); }
  double length() const { return length_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const CouplingPattern& pattern() const { return terms_.front().pattern; }
  const Envelope& envelope() const { return terms_.front().envelope; }

  /// True when H(z) = Omega(z) * kappa for one fixed kappa (checked on two
  /// samples for multi-term systems).
  bool commuting_family() const { return commuting_; }

  Matrix hamiltonian(double z) const;
  /// Largest |kappa| times largest Omega, the natural scale of H.
  double energy_scale() const;

 private:
  std::vector<HamiltonianTerm> terms_;
  double length_ = 0.0;
  bool commuting_ = true;
};

/// Integral of the (single-term) envelope over [0, z].
double accumulated_phase(const CoupledModeSystem& sys, double z);

/// Smallest z with accumulated_phase(sys, z) = delta, by bisection.
double position_at_phase(const CoupledModeSystem& sys, double delta);

struct EvolutionOperator {
  Matrix u;
  /// Accumulated phase over the interval; NaN for non-commuting systems.
  double phase = 0.0;
};

struct EvolveOptions {
  double max_step_mm = 1e-3;
  /// Use the step integrator even for commuting families.
  bool force_stepper = false;
};

EvolutionOperator evolve(const CoupledModeSystem& sys, double z0, double z1,
                         const EvolveOptions& options = {});

/// exp(-i phase * kappa) for the commuting case.
Matrix propagator_at_phase(const CouplingPattern& pattern, double phase);

/// Envelope parameters of the four-waveguide test structure. The defaults are
/// the output of calibrate_structure() and are re-derived in the tests.
struct StructureCalibration {
  double omega_flat_per_mm = 0.084248714174034012;
  double ramp_sharpness = 4.0088184035194754;
  double ramp_length_mm = 30.0;
  double ideal_length_mm = 84.9;
};

/// Jx(4) with an exp-cosine ramp in, a flat section of L - 2 * ramp and a
/// mirrored ramp out. L must be at least 60 mm.
CoupledModeSystem paper_structure(double length_mm, const StructureCalibration& cal = {});

/// The seven fabricated lengths, 80 mm to 100 mm in steps of 10/3 mm.
std::vector<double> fabricated_lengths();

}  // namespace mph
