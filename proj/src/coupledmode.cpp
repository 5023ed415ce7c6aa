// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/coupledmode.hpp"

#include "mph/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mph {

CouplingPattern::CouplingPattern(Matrix kappa) : kappa_(std::move(kappa)) {
  require(kappa_.rows() >= 1 && kappa_.rows() == kappa_.cols(), ErrorCode::precondition,
          "coupling pattern must be a non-empty square matrix");
  require(is_hermitian(kappa_, 1e-12), ErrorCode::precondition,
          "coupling pattern is not Hermitian within 1e-12");
}

CouplingPattern jx_pattern(int mode_count) {
  require(mode_count >= 2, ErrorCode::invalid_argument, "Jx pattern needs at least two modes");
  Matrix k = Matrix::Zero(mode_count, mode_count);
  for (int j = 1; j < mode_count; ++j) {
    const double c = 0.5 * std::sqrt(static_cast<double>(j * (mode_count - j)));
    k(j - 1, j) = c;
    k(j, j - 1) = c;
  }
  return CouplingPattern(std::move(k));
}

std::string_view to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::constant: return "constant";
    case SegmentKind::cosine_ramp: return "cosine_ramp";
    case SegmentKind::exp_cosine_ramp: return "exp_cosine_ramp";
  }
  return "unknown";
}

SegmentKind parse_segment_kind(std::string_view name) {
  if (name == "constant") return SegmentKind::constant;
  if (name == "cosine_ramp") return SegmentKind::cosine_ramp;
  if (name == "exp_cosine_ramp") return SegmentKind::exp_cosine_ramp;
  fail(ErrorCode::config, "unknown envelope segment kind '" + std::string(name) + "'");
}

EnvelopeSegment EnvelopeSegment::constant(double value, double length) {
  return {SegmentKind::constant, length, value, value, 0.0};
}

EnvelopeSegment EnvelopeSegment::cosine_ramp(double from, double to, double length) {
  return {SegmentKind::cosine_ramp, length, from, to, 0.0};
}

EnvelopeSegment EnvelopeSegment::exp_cosine_ramp(double from, double to, double length,
                                                 double sharpness) {
  return {SegmentKind::exp_cosine_ramp, length, from, to, sharpness};
}

namespace {

// Shape f on [0, 1] and its integral F(u) = int_0^u f.
double shape(SegmentKind kind, double s, double u) {
  switch (kind) {
    case SegmentKind::constant: return 0.0;
    case SegmentKind::cosine_ramp: return 0.5 * (1.0 - std::cos(kPi * u));
    case SegmentKind::exp_cosine_ramp: {
      const double floor = std::exp(-2.0 * s);
      return (std::exp(-s * (1.0 + std::cos(kPi * u))) - floor) / (1.0 - floor);
    }
  }
  return 0.0;
}

// int_0^theta exp(-s cos t) dt = I0(s) theta + 2 sum_k (-1)^k I_k(s) sin(k theta) / k
double exp_cos_integral(double s, double theta) {
  double sum = std::cyl_bessel_i(0.0, s) * theta;
  for (int k = 1; k < 400; ++k) {
    const double ik = std::cyl_bessel_i(static_cast<double>(k), s);
    const double term = 2.0 * ik * std::sin(k * theta) / k;
    sum += (k % 2 == 0) ? term : -term;
    if (ik < 1e-18 * std::cyl_bessel_i(0.0, s)) break;
  }
  return sum;
}

double shape_integral(SegmentKind kind, double s, double u) {
  switch (kind) {
    case SegmentKind::constant: return 0.0;
    case SegmentKind::cosine_ramp: return 0.5 * (u - std::sin(kPi * u) / kPi);
    case SegmentKind::exp_cosine_ramp: {
      const double floor = std::exp(-2.0 * s);
      const double raw = std::exp(-s) / kPi * exp_cos_integral(s, kPi * u);
      return (raw - floor * u) / (1.0 - floor);
    }
  }
  return 0.0;
}

}  // namespace

double EnvelopeSegment::value(double x) const {
  if (kind == SegmentKind::constant) return start_per_mm;
  const double u = std::clamp(x / length_mm, 0.0, 1.0);
  if (end_per_mm >= start_per_mm)
    return start_per_mm + (end_per_mm - start_per_mm) * shape(kind, sharpness, u);
  return end_per_mm + (start_per_mm - end_per_mm) * shape(kind, sharpness, 1.0 - u);
}

double EnvelopeSegment::integral(double x) const {
  x = std::clamp(x, 0.0, length_mm);
  if (kind == SegmentKind::constant) return start_per_mm * x;
  const double u = x / length_mm;
  if (end_per_mm >= start_per_mm)
    return start_per_mm * x +
           (end_per_mm - start_per_mm) * length_mm * shape_integral(kind, sharpness, u);
  const double full = shape_integral(kind, sharpness, 1.0);
  const double mirrored = full - shape_integral(kind, sharpness, 1.0 - u);
  return end_per_mm * x + (start_per_mm - end_per_mm) * length_mm * mirrored;
}

Envelope::Envelope(std::vector<EnvelopeSegment> segments) {
  double end = 0.0;
  double acc = 0.0;
  for (auto& seg : segments) {
    require(seg.length_mm >= 0.0 && std::isfinite(seg.length_mm), ErrorCode::invalid_argument,
            "envelope segment length must be finite and non-negative");
    require(seg.start_per_mm >= 0.0 && seg.end_per_mm >= 0.0, ErrorCode::invalid_argument,
            "envelope values must be non-negative");
    if (seg.kind == SegmentKind::exp_cosine_ramp)
      require(seg.sharpness > 0.0, ErrorCode::invalid_argument,
              "exp-cosine ramp needs a positive sharpness");
    if (seg.kind == SegmentKind::constant) seg.end_per_mm = seg.start_per_mm;
    if (seg.length_mm == 0.0) continue;
    start_integrals_.push_back(acc);
    acc += seg.integral(seg.length_mm);
    end += seg.length_mm;
    ends_.push_back(end);
    segments_.push_back(seg);
  }
  require(!segments_.empty(), ErrorCode::invalid_argument, "envelope has zero length");
}

std::size_t Envelope::segment_at(double z) const {
  auto it = std::lower_bound(ends_.begin(), ends_.end(), z);
  if (it == ends_.end()) return ends_.size() - 1;
  return static_cast<std::size_t>(it - ends_.begin());
}

double Envelope::value(double z) const {
  if (z < 0.0 || z > length()) return 0.0;
  const std::size_t i = segment_at(z);
  const double start = ends_[i] - segments_[i].length_mm;
  return segments_[i].value(z - start);
}

double Envelope::integral(double z) const {
  if (z <= 0.0) return 0.0;
  if (z >= length()) return start_integrals_.back() + segments_.back().integral(segments_.back().length_mm);
  const std::size_t i = segment_at(z);
  const double start = ends_[i] - segments_[i].length_mm;
  return start_integrals_[i] + segments_[i].integral(z - start);
}

double Envelope::max_value() const {
  double m = 0.0;
  for (const auto& s : segments_) m = std::max({m, s.start_per_mm, s.end_per_mm});
  return m;
}

CoupledModeSystem::CoupledModeSystem(CouplingPattern pattern, Envelope envelope)
    : CoupledModeSystem(std::vector<HamiltonianTerm>{{std::move(pattern), std::move(envelope)}}) {}

CoupledModeSystem::CoupledModeSystem(std::vector<HamiltonianTerm> terms) : terms_(std::move(terms)) {
  require(!terms_.empty(), ErrorCode::invalid_argument, "system needs at least one term");
  length_ = terms_.front().envelope.length();
  const int m = terms_.front().pattern.mode_count();
  for (const auto& t : terms_) {
    require(t.pattern.mode_count() == m, ErrorCode::invalid_argument,
            "all terms must act on the same modes");
    require(std::abs(t.envelope.length() - length_) < 1e-9, ErrorCode::invalid_argument,
            "all envelopes must have the same length");
    require(t.pattern.mode_count() > 0, ErrorCode::precondition, "empty coupling pattern");
  }
  commuting_ = true;
  const double tol = 1e-12 * std::max(1.0, energy_scale() * energy_scale());
  for (std::size_t a = 0; a < terms_.size() && commuting_; ++a) {
    for (std::size_t b = a + 1; b < terms_.size(); ++b) {
      const Matrix& ka = terms_[a].pattern.matrix();
      const Matrix& kb = terms_[b].pattern.matrix();
      if (max_abs(ka * kb - kb * ka) > tol) {
        commuting_ = false;
        break;
      }
    }
  }
  if (commuting_ && terms_.size() > 1) {
    const Matrix h1 = hamiltonian(0.3 * length_);
    const Matrix h2 = hamiltonian(0.7 * length_);
    commuting_ = max_abs(h1 * h2 - h2 * h1) <= tol;
  }
}

Matrix CoupledModeSystem::hamiltonian(double z) const {
  Matrix h = Matrix::Zero(mode_count(), mode_count());
  for (const auto& t : terms_) h += t.envelope.value(z) * t.pattern.matrix();
  return h;
}

double CoupledModeSystem::energy_scale() const {
  double s = 0.0;
  for (const auto& t : terms_) s = std::max(s, t.pattern.max_abs() * t.envelope.max_value());
  return s;
}

double accumulated_phase(const CoupledModeSystem& sys, double z) {
  require(z >= -1e-12 && z <= sys.length() + 1e-9, ErrorCode::invalid_argument,
          "position " + std::to_string(z) + " mm outside [0, L]");
  return sys.envelope().integral(z);
}

double position_at_phase(const CoupledModeSystem& sys, double delta) {
  const double total = sys.envelope().integral(sys.length());
  require(delta >= 0.0 && delta <= total * (1.0 + 1e-12), ErrorCode::invalid_argument,
          "phase outside the range reached by the structure");
  double lo = 0.0;
  double hi = sys.length();
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sys.envelope().integral(mid) >= delta)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

Matrix propagator_at_phase(const CouplingPattern& pattern, double phase) {
  return expm_hermitian(pattern.matrix(), phase);
}

EvolutionOperator evolve(const CoupledModeSystem& sys, double z0, double z1,
                         const EvolveOptions& options) {
  require(z0 >= -1e-12 && z0 <= z1 && z1 <= sys.length() + 1e-9, ErrorCode::invalid_argument,
          "evolve needs 0 <= z0 <= z1 <= L");
  require(options.max_step_mm > 0.0, ErrorCode::invalid_argument, "step must be positive");
  EvolutionOperator out;
  const bool single = sys.terms().size() == 1;
  out.phase = single ? sys.envelope().integral(z1) - sys.envelope().integral(z0)
                     : std::numeric_limits<double>::quiet_NaN();
  const int m = sys.mode_count();
  if (sys.commuting_family() && !options.force_stepper) {
    out.u = Matrix::Identity(m, m);
    for (const auto& t : sys.terms()) {
      const double d = t.envelope.integral(z1) - t.envelope.integral(z0);
      out.u = propagator_at_phase(t.pattern, d) * out.u;
    }
    return out;
  }
  const double span = z1 - z0;
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(span / options.max_step_mm)));
  const double h = span / static_cast<double>(steps);
  out.u = Matrix::Identity(m, m);
  for (long s = 0; s < steps; ++s) {
    const double mid = z0 + (static_cast<double>(s) + 0.5) * h;
    out.u = expm_hermitian(sys.hamiltonian(mid), h) * out.u;
  }
  return out;
}

CoupledModeSystem paper_structure(double length_mm, const StructureCalibration& cal) {
  require(length_mm >= 2.0 * cal.ramp_length_mm, ErrorCode::invalid_argument,
          "structure length must be at least " + std::to_string(2.0 * cal.ramp_length_mm) + " mm");
  require(cal.omega_flat_per_mm > 0.0, ErrorCode::invalid_argument,
          "flat coupling must be positive");
  const double omega = cal.omega_flat_per_mm;
  Envelope env({
      EnvelopeSegment::exp_cosine_ramp(0.0, omega, cal.ramp_length_mm, cal.ramp_sharpness),
      EnvelopeSegment::constant(omega, length_mm - 2.0 * cal.ramp_length_mm),
      EnvelopeSegment::exp_cosine_ramp(omega, 0.0, cal.ramp_length_mm, cal.ramp_sharpness),
  });
  return CoupledModeSystem(jx_pattern(4), std::move(env));
}

std::vector<double> fabricated_lengths() {
  std::vector<double> out;
  for (int k = 0; k <= 6; ++k) out.push_back(80.0 + k * 20.0 / 6.0);
  return out;
}

}  // namespace mph
