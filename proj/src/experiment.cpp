// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/experiment.hpp"

#include "mph/io.hpp"
#include "mph/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mph {

std::vector<InputSpec> member_inputs(const Subspace& sub, Preparation prep) {
  std::vector<InputSpec> out;
  for (std::size_t i = 0; i < sub.dim(); ++i) out.push_back({sub.state(i), prep});
  return out;
}

namespace {

void check_input(const Subspace& sub, const InputSpec& input) {
  require(sub.basis.index_of(input.state).has_value(), ErrorCode::invalid_argument,
          "input state is not in the subspace basis");
  const auto idx = *sub.basis.index_of(input.state);
  require(std::find(sub.members.begin(), sub.members.end(), idx) != sub.members.end(),
          ErrorCode::invalid_argument,
          "input " + sub.basis.label(idx) + " is not a member of " + sub.describe());
  if (input.prep.kind == PreparationKind::hom_bunched) {
    const auto counts = input.state.counts();
    require(input.state.kind() == Statistics::boson && input.state.particle_count() == 2 &&
                std::find(counts.begin(), counts.end(), 2) != counts.end(),
            ErrorCode::invalid_argument, "HOM preparation needs a bunched two-boson state");
    require(input.prep.visibility >= 0.0 && input.prep.visibility <= 1.0,
            ErrorCode::invalid_argument, "visibility must lie in [0, 1]");
  }
}

double outcome_probability(const OccupationState& out, const InputSpec& input, const Matrix& u) {
  const bool labeled = input.state.kind() == Statistics::distinguishable;
  switch (input.prep.kind) {
    case PreparationKind::direct: return std::norm(lifted_amplitude(u, out, input.state));
    case PreparationKind::distinguishable:
      if (labeled) return std::norm(lifted_amplitude(u, out, input.state));
      return classical_transition_probability(u, out, input.state);
    case PreparationKind::hom_bunched: {
      const double v = input.prep.visibility;
      return v * std::norm(lifted_amplitude(u, out, input.state)) +
             (1.0 - v) * classical_transition_probability(u, out, input.state);
    }
  }
  return 0.0;
}

}  // namespace

std::vector<double> outcome_distribution(const Subspace& sub, const InputSpec& input, const Matrix& u) {
  check_input(sub, input);
  std::vector<double> out(sub.basis.size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = outcome_probability(sub.basis[s], input, u);
  return out;
}

std::size_t target_member(const Subspace& sub, const InputSpec& input, const Matrix& u_ideal) {
  check_input(sub, input);
  for (std::size_t m = 0; m < sub.dim(); ++m) {
    if (std::abs(lifted_amplitude(u_ideal, sub.state(m), input.state)) > 1.0 - 1e-6) return m;
  }
  fail(ErrorCode::invalid_argument, "the ideal cycle does not carry " +
                                        input.state.to_string(sub.basis.particle_type().labels) +
                                        " onto a single member of " + sub.describe());
}

double success_probability(const Subspace& sub, const InputSpec& input, const Matrix& u_length,
                           const Matrix& u_ideal) {
  const std::size_t t = target_member(sub, input, u_ideal);
  double total = 0.0;
  double hit = 0.0;
  for (std::size_t m = 0; m < sub.dim(); ++m) {
    const double q = outcome_probability(sub.state(m), input, u_length);
    total += q;
    if (m == t) hit = q;
  }
  if (total <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return hit / total;
}

double success_probability(const Subspace& sub, const InputSpec& input,
                           const CoupledModeSystem& sys, const CoupledModeSystem& ideal) {
  return success_probability(sub, input, evolve(sys, 0.0, sys.length()).u,
                             evolve(ideal, 0.0, ideal.length()).u);
}

Matrix StructureFamily::propagator(double length_mm) const {
  require(length_mm >= min_length_mm, ErrorCode::invalid_argument,
          "length below the family minimum");
  const auto sys = at_length(length_mm);
  return evolve(sys, 0.0, sys.length()).u;
}

StructureFamily fabricated_family(const StructureCalibration& cal) {
  StructureFamily f;
  f.at_length = [cal](double L) { return paper_structure(L, cal); };
  f.ideal_length_mm = cal.ideal_length_mm;
  f.min_length_mm = 2.0 * cal.ramp_length_mm;
  return f;
}

StructureFamily constant_family(CoupledModeSystem sys, double ideal_length_mm) {
  StructureFamily f;
  f.at_length = [sys = std::move(sys)](double) { return sys; };
  f.ideal_length_mm = ideal_length_mm;
  return f;
}

std::string_view to_string(ScanMode m) {
  switch (m) {
    case ScanMode::theory: return "theory";
    case ScanMode::synthetic: return "synthetic";
    case ScanMode::ingested: return "ingested";
  }
  return "unknown";
}

std::vector<double> length_grid(double start_mm, double end_mm, double step_mm) {
  require(step_mm > 0.0 && end_mm >= start_mm, ErrorCode::invalid_argument,
          "length grid needs start <= end and a positive step");
  const auto n = static_cast<std::size_t>(std::llround((end_mm - start_mm) / step_mm));
  std::vector<double> out;
  for (std::size_t i = 0; i <= n; ++i) out.push_back(start_mm + static_cast<double>(i) * step_mm);
  if (n > 0) out.back() = end_mm;
  return out;
}

ScanResult scan(const Subspace& sub, const std::vector<InputSpec>& inputs,
                const StructureFamily& family, const std::vector<double>& lengths,
                const ScanOptions& options) {
  require(!lengths.empty(), ErrorCode::invalid_argument, "scan needs at least one length");
  require(std::is_sorted(lengths.begin(), lengths.end()), ErrorCode::invalid_argument,
          "scan lengths must be ascending");
  require(!inputs.empty(), ErrorCode::invalid_argument, "scan needs at least one input");
  const Matrix u_ideal = family.propagator(family.ideal_length_mm);
  if (options.mode != ScanMode::theory) {
    require(options.trials > 0, ErrorCode::invalid_argument, "synthetic scans need trials > 0");
    const auto counts = simulate_counts(sub, inputs, family, lengths, options.detection,
                                        options.trials, options.seed, options.jobs);
    return estimate_from_counts(counts, sub, options.detection, u_ideal, ScanMode::synthetic);
  }
  ScanResult result;
  result.mode = ScanMode::theory;
  result.subspace = sub.describe();
  std::vector<std::size_t> targets;
  for (const auto& in : inputs) {
    targets.push_back(target_member(sub, in, u_ideal));
    result.curves.push_back({in.state.to_string(sub.basis.particle_type().labels), {}});
    result.curves.back().points.resize(lengths.size());
  }
  parallel_for(lengths.size(), options.jobs, [&](std::size_t li) {
    const Matrix u = family.propagator(lengths[li]);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      double total = 0.0;
      double hit = 0.0;
      for (std::size_t m = 0; m < sub.dim(); ++m) {
        const double q = outcome_probability(sub.state(m), inputs[i], u);
        total += q;
        if (m == targets[i]) hit = q;
      }
      ScanPoint& pt = result.curves[i].points[li];
      pt.length_mm = lengths[li];
      pt.defined = total > 0.0;
      pt.p = pt.defined ? hit / total : std::numeric_limits<double>::quiet_NaN();
      pt.sigma = 0.0;
    }
  });
  return result;
}

std::string curves_csv(const ScanResult& result) {
  std::string out = "input_state,length_mm,probability,sigma\n";
  for (const auto& c : result.curves)
    for (const auto& p : c.points)
      out += c.input + "," + format_double(p.length_mm) + "," +
             (p.defined ? format_double(p.p) : std::string("nan")) + "," + format_double(p.sigma) +
             "\n";
  return out;
}

std::string PlateauRule::name() const {
  return kind == PlateauRuleKind::theory_slope ? "theory_1p5pct_per_mm" : "experimental_5pct_step";
}

namespace {

Plateau theory_plateau(const std::vector<double>& L, const std::vector<double>& p,
                       const PlateauRule& rule) {
  const std::size_t n = L.size();
  require(n >= 2, ErrorCode::invalid_argument, "theory plateau needs a dense curve");
  std::vector<double> slope(n);
  slope[0] = (p[1] - p[0]) / (L[1] - L[0]);
  slope[n - 1] = (p[n - 1] - p[n - 2]) / (L[n - 1] - L[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) slope[i] = (p[i + 1] - p[i - 1]) / (L[i + 1] - L[i - 1]);
  auto peak = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  if (rule.anchor) {
    const double top = p[peak];
    for (std::size_t i = 0; i < n; ++i) {
      const bool local = (i == 0 || p[i] >= p[i - 1]) && (i + 1 == n || p[i] >= p[i + 1]);
      if (local && p[i] > top - 1e-6 && std::abs(L[i] - *rule.anchor) < std::abs(L[peak] - *rule.anchor)) peak = i;
    }
  }
  Plateau out;
  out.peak_length = L[peak];
  const double thr = rule.threshold;
  auto ok = [&](std::size_t i) { return std::abs(slope[i]) < thr; };
  if (!ok(peak)) {
    out.start = out.end = L[peak];
  } else {
    std::size_t i = peak;
    while (i > 0 && ok(i - 1)) --i;
    std::size_t j = peak;
    while (j + 1 < n && ok(j + 1)) ++j;
    out.start = L[i];
    out.end = L[j];
    if (rule.interpolate) {
      auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double a = std::abs(slope[inside]);
        const double b = std::abs(slope[outside]);
        const double t = (b > a) ? (thr - a) / (b - a) : 0.0;
        return L[inside] + t * (L[outside] - L[inside]);
      };
      if (i > 0) out.start = crossing(i, i - 1);
      if (j + 1 < n) out.end = crossing(j, j + 1);
    }
  }
  if (rule.clip) {
    out.start = std::max(out.start, rule.clip->first);
    out.end = std::min(out.end, rule.clip->second);
    if (out.end < out.start) out.end = out.start;
  }
  out.width = out.end - out.start;
  return out;
}

Plateau experimental_plateau(const std::vector<double>& L, const std::vector<double>& p,
                             const PlateauRule& rule) {
  require(L.size() >= 3, ErrorCode::invalid_argument,
          "experimental plateau needs at least three points");
  const auto peak = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  std::size_t i = peak;
  while (i > 0 && std::abs(p[i] - p[i - 1]) < rule.threshold) --i;
  std::size_t j = peak;
  while (j + 1 < L.size() && std::abs(p[j + 1] - p[j]) < rule.threshold) ++j;
  Plateau out;
  out.peak_length = L[peak];
  out.start = L[i];
  out.end = L[j];
  if (rule.clip) {
    out.start = std::max(out.start, rule.clip->first);
    out.end = std::max(out.start, std::min(out.end, rule.clip->second));
  }
  out.width = out.end - out.start;
  return out;
}

}  // namespace

Plateau plateau_of(const std::vector<double>& lengths, const std::vector<double>& p,
                   const PlateauRule& rule) {
  require(lengths.size() == p.size(), ErrorCode::invalid_argument,
          "lengths and probabilities differ in size");
  std::vector<double> L, q;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (std::isfinite(p[i])) {
      L.push_back(lengths[i]);
      q.push_back(p[i]);
    }
  if (rule.kind == PlateauRuleKind::experimental_step) return experimental_plateau(L, q, rule);
  return theory_plateau(L, q, rule);
}

PlateauReport plateau_width(const ScanResult& result, const PlateauRule& rule) {
  require(!result.curves.empty(), ErrorCode::invalid_argument, "no curves to analyze");
  PlateauReport report;
  report.rule = rule.name();
  double sum = 0.0;
  for (const auto& c : result.curves) {
    std::vector<double> L, p;
    for (const auto& pt : c.points) {
      L.push_back(pt.length_mm);
      p.push_back(pt.defined ? pt.p : std::numeric_limits<double>::quiet_NaN());
    }
    report.inputs.push_back(c.input);
    report.plateaus.push_back(plateau_of(L, p, rule));
    sum += report.plateaus.back().width;
  }
  report.mean_width = sum / static_cast<double>(report.plateaus.size());
  return report;
}

std::vector<double> hom_dip(const std::vector<double>& delays, double visibility, double width) {
  require(visibility >= 0.0 && visibility <= 1.0, ErrorCode::invalid_argument,
          "visibility must lie in [0, 1]");
  require(width > 0.0, ErrorCode::invalid_argument, "dip width must be positive");
  std::vector<double> out;
  for (double t : delays) out.push_back(1.0 - visibility * std::exp(-(t / width) * (t / width)));
  return out;
}

double fidelity(const std::vector<double>& p_theory, const std::vector<double>& p_exp) {
  require(p_theory.size() == p_exp.size() && !p_theory.empty(), ErrorCode::invalid_argument,
          "distributions must share one non-empty outcome set");
  double sp = 0.0, sq = 0.0, overlap = 0.0;
  for (std::size_t i = 0; i < p_theory.size(); ++i) {
    require(p_theory[i] >= 0.0 && p_exp[i] >= 0.0, ErrorCode::invalid_argument,
            "probabilities must be non-negative");
    sp += p_theory[i];
    sq += p_exp[i];
    overlap += std::sqrt(p_theory[i] * p_exp[i]);
  }
  require(std::abs(sp - 1.0) < 1e-6 && std::abs(sq - 1.0) < 1e-6, ErrorCode::invalid_argument,
          "distributions must sum to 1 within 1e-6");
  return overlap * overlap / (sp * sq);
}

double single_photon_plateau_phase_width(double threshold_per_rad) {
  // p(delta) = S / (S + C), S = sin^6(delta/2), C = cos^6(delta/2).
  auto slope = [](double d) {
    const double s = std::sin(0.5 * d), c = std::cos(0.5 * d);
    const double S = std::pow(s, 6), C = std::pow(c, 6);
    const double dS = 3.0 * std::pow(s, 5) * c, dC = -3.0 * std::pow(c, 5) * s;
    return (dS * C - S * dC) / ((S + C) * (S + C));
  };
  const double step = 1e-4;
  double lo = kPi;
  double hi = kPi;
  while (hi < 2.0 * kPi && std::abs(slope(hi)) < threshold_per_rad) {
    lo = hi;
    hi += step;
  }
  if (hi >= 2.0 * kPi) return 2.0 * kPi;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::abs(slope(mid)) < threshold_per_rad)
      lo = mid;
    else
      hi = mid;
  }
  return 2.0 * (0.5 * (lo + hi) - kPi);
}

StructureCalibration calibrate_structure(double target_width_mm, double ideal_length_mm,
                                               double ramp_length_mm) {
  require(target_width_mm > 0.0 && ideal_length_mm > 2.0 * ramp_length_mm && ramp_length_mm > 0.0,
          ErrorCode::invalid_argument, "inconsistent calibration targets");
  // In the flat section dp/dL = Omega dp/ddelta, so the mm width is the
  // phase width at threshold 0.015 / Omega divided by Omega.
  auto width_mm = [](double omega) {
    return single_photon_plateau_phase_width(0.015 / omega) / omega;
  };
  double lo = 1e-3, hi = 1.0;
  require(width_mm(lo) > target_width_mm && width_mm(hi) < target_width_mm,
          ErrorCode::invalid_argument, "plateau target outside the calibratable range");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (width_mm(mid) > target_width_mm)
      lo = mid;
    else
      hi = mid;
  }
  StructureCalibration cal;
  cal.omega_flat_per_mm = 0.5 * (lo + hi);
  cal.ramp_length_mm = ramp_length_mm;
  cal.ideal_length_mm = ideal_length_mm;
  const double omega = cal.omega_flat_per_mm;
  // Each ramp must contribute (pi - Omega (L_id - 2 ramp)) / 2.
  const double per_ramp = 0.5 * (kPi - omega * (ideal_length_mm - 2.0 * ramp_length_mm));
  const double mean_target = per_ramp / (omega * ramp_length_mm);
  require(mean_target > 0.0 && mean_target < 0.5, ErrorCode::invalid_argument,
          "no exp-cosine ramp reaches the ideal length with this coupling");
  auto mean_shape = [&](double s) {
    return EnvelopeSegment::exp_cosine_ramp(0.0, 1.0, 1.0, s).integral(1.0);
  };
  double slo = 1e-6, shi = 60.0;
  for (int it = 0; it < 200 && shi - slo > 1e-14; ++it) {
    const double mid = 0.5 * (slo + shi);
    if (mean_shape(mid) > mean_target)
      slo = mid;
    else
      shi = mid;
  }
  cal.ramp_sharpness = 0.5 * (slo + shi);
  return cal;
}

}  // namespace mph
