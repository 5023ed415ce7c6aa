// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mph {

Subspace::Subspace(FockBasis b, std::vector<std::size_t> m) : basis(std::move(b)), members(std::move(m)) {
  require(!members.empty(), ErrorCode::invalid_argument, "subspace has no members");
  for (std::size_t i = 0; i < members.size(); ++i) {
    require(members[i] < basis.size(), ErrorCode::invalid_argument,
            "subspace member index outside the basis");
    for (std::size_t j = 0; j < i; ++j)
      require(members[i] != members[j], ErrorCode::invalid_argument,
              "subspace member " + basis.label(members[i]) + " listed twice");
  }
}

Subspace Subspace::from_states(FockBasis basis, const std::vector<OccupationState>& states) {
  std::vector<std::size_t> idx;
  for (const auto& s : states) idx.push_back(basis.require_index(s));
  return Subspace(std::move(basis), std::move(idx));
}

Subspace Subspace::parse(FockBasis basis, const std::vector<std::string>& states) {
  std::vector<OccupationState> parsed;
  for (const auto& s : states)
    parsed.push_back(parse_state(s, basis.particle_type(), basis.mode_count()));
  return from_states(std::move(basis), parsed);
}

std::vector<std::string> Subspace::labels() const {
  std::vector<std::string> out;
  for (auto m : members) out.push_back(basis.label(m));
  return out;
}

std::string Subspace::describe() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out += ",";
    out += basis.label(members[i]);
  }
  return out + "}";
}

Matrix mode_vectors(const CoupledModeSystem& sys, double z, const ModeBasisFamily& family) {
  if (family.kind == ModeFamilyKind::custom) {
    require(static_cast<bool>(family.custom), ErrorCode::invalid_argument,
            "custom mode family has no function");
    Matrix phi = family.custom(z);
    require(phi.rows() == sys.mode_count() && is_unitary(phi, 1e-10), ErrorCode::precondition,
            "custom mode family is not orthonormal within 1e-10");
    return phi;
  }
  const double zc = std::clamp(z, 0.0, sys.length());
  Matrix phi = evolve(sys, 0.0, zc).u;
  if (family.kind == ModeFamilyKind::phase_adjusted)
    phi *= std::exp(-kI * (0.5 * sys.envelope().integral(zc)));
  return phi;
}

Matrix mode_coupling_J(const CoupledModeSystem& sys, double z, const ModeBasisFamily& family) {
  const Matrix phi = mode_vectors(sys, z, family);
  return phi.adjoint() * sys.hamiltonian(z) * phi;
}

CyclicityResult is_cyclic(const Subspace& sub, const Matrix& lifted_cycle) {
  const auto dim = static_cast<Eigen::Index>(sub.basis.size());
  require(lifted_cycle.rows() == dim && lifted_cycle.cols() == dim, ErrorCode::invalid_argument,
          "lifted evolution does not match the subspace basis");
  Matrix p = Matrix::Zero(dim, dim);
  for (auto m : sub.members) p(m, m) = 1.0;
  CyclicityResult r;
  r.residual = max_abs(p - lifted_cycle * p * lifted_cycle.adjoint());
  r.cyclic = r.residual < 1e-8;
  if (!r.cyclic) return r;

  SignedPermutation perm;
  for (auto a : sub.members) {
    std::optional<std::size_t> target;
    for (std::size_t j = 0; j < sub.members.size(); ++j) {
      if (std::abs(lifted_cycle(sub.members[j], a)) > 1.0 - 1e-8) target = j;
    }
    if (!target) return r;
    perm.image.push_back(*target);
    perm.phase.push_back(lifted_cycle(sub.members[*target], a));
  }
  r.permutation = std::move(perm);
  return r;
}

CyclicityResult is_cyclic(const Subspace& sub, const CoupledModeSystem& sys) {
  return is_cyclic(sub, lift_unitary(evolve(sys, 0.0, sys.length()).u, sub.basis));
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double multiplicity_norm(std::span<const int> modes) {
  std::vector<int> sorted(modes.begin(), modes.end());
  std::sort(sorted.begin(), sorted.end());
  double norm = 1.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    norm *= factorial(static_cast<int>(j - i));
    i = j;
  }
  return norm;
}

void check_pair_states(const OccupationState& bra, const OccupationState& ket,
                       const ParticleType& type, const Matrix& J) {
  for (const auto* s : {&bra, &ket}) {
    if (type.kind == Statistics::fermion) {
      for (int n : s->counts())
        require(n <= 1, ErrorCode::invalid_state,
                "two fermions cannot occupy the same mode (" + s->to_string() + ")");
    }
    require(s->kind() == type.kind, ErrorCode::invalid_argument,
            "state statistics do not match the particle type");
    require(s->particle_count() == 2, ErrorCode::invalid_argument,
            "two-particle formula needs two-particle states");
    require(s->mode_count() == J.rows(), ErrorCode::invalid_argument,
            "coupling matrix does not match the mode count");
  }
}

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

Matrix overlap_without(std::span<const int> bra, std::span<const int> ket, std::size_t skip_row,
                       std::size_t skip_col) {
  const auto n = static_cast<Eigen::Index>(bra.size() - 1);
  Matrix m(n, n);
  Eigen::Index r = 0;
  for (std::size_t a = 0; a < bra.size(); ++a) {
    if (a == skip_row) continue;
    Eigen::Index c = 0;
    for (std::size_t b = 0; b < ket.size(); ++b) {
      if (b == skip_col) continue;
      m(r, c++) = delta(bra[a], ket[b]);
    }
    ++r;
  }
  return m;
}

complex det_or_one(const Matrix& m) { return m.rows() == 0 ? complex(1.0) : m.determinant(); }

}  // namespace

complex K_two_particle(const OccupationState& bra, const OccupationState& ket, const Matrix& J,
                       const ParticleType& type) {
  check_pair_states(bra, ket, type, J);
  // ket = phi_C^dag phi_D^dag |0>, bra = <0| phi_A phi_B.
  if (type.kind == Statistics::distinguishable) {
    const int B = bra.values()[0], A = bra.values()[1];
    const int C = ket.values()[0], D = ket.values()[1];
    return delta(A, D) * J(B, C) + delta(B, C) * J(A, D);
  }
  const auto bm = bra.mode_list();
  const auto km = ket.mode_list();
  const int A = bm[1], B = bm[0], C = km[0], D = km[1];
  if (type.kind == Statistics::fermion)
    return delta(A, D) * J(B, C) - delta(A, C) * J(B, D) - delta(B, D) * J(A, C) +
           delta(B, C) * J(A, D);
  const double norm = 1.0 / std::sqrt(multiplicity_norm(bm) * multiplicity_norm(km));
  return norm * (delta(A, D) * J(B, C) + delta(A, C) * J(B, D) + delta(B, D) * J(A, C) +
                 delta(B, C) * J(A, D));
}

complex K_n_particle(const OccupationState& bra, const OccupationState& ket, const Matrix& J) {
  require(bra.kind() == ket.kind() && bra.particle_count() == ket.particle_count(),
          ErrorCode::invalid_argument, "states belong to different bases");
  const auto k = bra.mode_list();
  const auto l = ket.mode_list();
  const std::size_t n = k.size();
  if (n == 0) return 0.0;
  switch (bra.kind()) {
    case Statistics::boson: return K_n_boson(k, l, J, 0.0);
    case Statistics::fermion: {
      complex sum = 0.0;
      for (std::size_t nu = 0; nu < n; ++nu)
        for (std::size_t mu = 0; mu < n; ++mu) {
          const complex j = J(k[nu], l[mu]);
          if (j == 0.0) continue;
          const double sign = ((nu + mu) % 2 == 0) ? 1.0 : -1.0;
          sum += sign * j * det_or_one(overlap_without(k, l, nu, mu));
        }
      return sum;
    }
    case Statistics::distinguishable: {
      complex sum = 0.0;
      for (std::size_t nu = 0; nu < n; ++nu) {
        double rest = 1.0;
        for (std::size_t a = 0; a < n; ++a)
          if (a != nu) rest *= delta(k[a], l[a]);
        sum += J(k[nu], l[nu]) * rest;
      }
      return sum;
    }
  }
  return 0.0;
}

complex K_n_boson(std::span<const int> bra_modes, std::span<const int> ket_modes, const Matrix& J,
                  complex h_vac) {
  require(bra_modes.size() == ket_modes.size(), ErrorCode::invalid_argument,
          "bra and ket need the same number of particles");
  const std::size_t n = bra_modes.size();
  require(n >= 1 && n <= static_cast<std::size_t>(kMaxPermanentSize), ErrorCode::invalid_argument,
          "particle number outside [1, 12]");
  for (auto m : bra_modes)
    require(m >= 0 && m < J.rows(), ErrorCode::invalid_argument, "mode index out of range");
  for (auto m : ket_modes)
    require(m >= 0 && m < J.rows(), ErrorCode::invalid_argument, "mode index out of range");
  complex sum = 0.0;
  for (std::size_t nu = 0; nu < n; ++nu)
    for (std::size_t mu = 0; mu < n; ++mu) {
      const complex j = J(bra_modes[nu], ket_modes[mu]);
      if (j == 0.0) continue;
      sum += j * permanent(overlap_without(bra_modes, ket_modes, nu, mu));
    }
  if (h_vac != 0.0) {
    Matrix d(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) d(a, b) = delta(bra_modes[a], ket_modes[b]);
    sum -= static_cast<double>(n - 1) * h_vac * permanent(d);
  }
  return sum / std::sqrt(multiplicity_norm(bra_modes) * multiplicity_norm(ket_modes));
}

std::vector<double> uniform_grid(double z0, double z1, std::size_t points) {
  require(points >= 2, ErrorCode::invalid_argument, "grid needs at least two points");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = z0 + (z1 - z0) * static_cast<double>(i) / static_cast<double>(points - 1);
  g.back() = z1;
  return g;
}

namespace {

Matrix member_columns(const Matrix& lifted, const Subspace& sub) {
  Matrix out(lifted.rows(), static_cast<Eigen::Index>(sub.dim()));
  for (std::size_t j = 0; j < sub.dim(); ++j) out.col(j) = lifted.col(sub.members[j]);
  return out;
}

Matrix member_block(const Matrix& m, const Subspace& sub) {
  Matrix out(static_cast<Eigen::Index>(sub.dim()), static_cast<Eigen::Index>(sub.dim()));
  for (std::size_t i = 0; i < sub.dim(); ++i)
    for (std::size_t j = 0; j < sub.dim(); ++j) out(i, j) = m(sub.members[i], sub.members[j]);
  return out;
}

}  // namespace

DynamicalContribution K_matrix(const Subspace& sub, const CoupledModeSystem& sys,
                               const std::vector<double>& grid, const ModeBasisFamily& family) {
  DynamicalContribution out;
  out.z = grid;
  const auto n = static_cast<Eigen::Index>(sub.dim());
  const int particles = sub.basis.particle_count();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double z = grid[g];
    const Matrix phi = mode_vectors(sys, z, family);
    const Matrix h = (z < 0.0 || z > sys.length()) ? Matrix::Zero(sys.mode_count(), sys.mode_count())
                                                   : sys.hamiltonian(z);
    const Matrix J = phi.adjoint() * h * phi;
    Matrix K(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) {
        const auto& bra = sub.state(a);
        const auto& ket = sub.state(b);
        K(a, b) = particles == 2 ? K_two_particle(bra, ket, J, sub.basis.particle_type())
                                 : K_n_particle(bra, ket, J);
      }
    // Oracle: sandwich the lifted Hamiltonian between evolved member kets.
    const Matrix psi = member_columns(lift_unitary(phi, sub.basis), sub);
    const Matrix oracle = psi.adjoint() * lift_hamiltonian(h, sub.basis) * psi;
    out.oracle_deviation = std::max(out.oracle_deviation, max_abs(K - oracle));
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b)
        if (std::abs(K(a, b)) > out.max_abs) {
          out.max_abs = std::abs(K(a, b));
          out.worst_z = g;
          out.worst_row = static_cast<std::size_t>(a);
          out.worst_col = static_cast<std::size_t>(b);
        }
    out.K.push_back(std::move(K));
  }
  require(out.oracle_deviation < 1e-8, ErrorCode::internal,
          "closed-form K disagrees with the lifted-Hamiltonian oracle");
  return out;
}

double holonomic_tolerance(const CoupledModeSystem& sys) {
  return 1e-8 * std::max(sys.energy_scale(), 1e-300);
}

namespace {

template <class F>
Matrix central_derivative(F&& f, double z, double h, bool richardson) {
  const Matrix d1 = (f(z + h) - f(z - h)) / (2.0 * h);
  if (!richardson) return d1;
  const Matrix d2 = (f(z + 0.5 * h) - f(z - 0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

GaugeField gauge_field(const Subspace& sub, const CoupledModeSystem& sys,
                       const ModeBasisFamily& family, const std::vector<double>& grid,
                       const GaugeOptions& options) {
  require(options.step_fraction > 0.0, ErrorCode::invalid_argument, "step must be positive");
  const double h = options.step_fraction * sys.length();
  auto kets = [&](double z) {
    return member_columns(lift_unitary(mode_vectors(sys, z, family), sub.basis), sub);
  };
  GaugeField out;
  out.z = grid;
  for (double z : grid) {
    const Matrix psi = kets(z);
    Matrix A = kI * psi.adjoint() * central_derivative(kets, z, h, options.richardson);
    out.hermiticity_residual = std::max(out.hermiticity_residual, hermiticity_residual(A));
    out.A.push_back(std::move(A));
  }
  return out;
}

Matrix single_particle_gauge_field(const CoupledModeSystem& sys, const ModeBasisFamily& family,
                                   double z, const GaugeOptions& options) {
  const double h = options.step_fraction * sys.length();
  auto phi = [&](double x) { return mode_vectors(sys, x, family); };
  return kI * phi(z).adjoint() * central_derivative(phi, z, h, options.richardson);
}

complex gauge_field_two_particle_relation(const Matrix& single_A, const OccupationState& bra,
                                          const OccupationState& ket, const ParticleType& type) {
  // d/dz of a product of modes is a one-body operator, so the contraction
  // pattern is the one of K with A in place of J.
  return K_two_particle(bra, ket, single_A, type);
}

std::string_view to_string(HolonomyClass c) {
  switch (c) {
    case HolonomyClass::scalar: return "scalar";
    case HolonomyClass::diagonal: return "diagonal";
    case HolonomyClass::non_scalar: return "non_scalar";
  }
  return "unknown";
}

HolonomyClass classify(const Matrix& u, double tol) {
  const auto n = u.rows();
  if (n == 0) return HolonomyClass::scalar;
  if (max_abs(u - u(0, 0) * Matrix::Identity(n, n)) < tol) return HolonomyClass::scalar;
  Matrix off = u;
  off.diagonal().setZero();
  if (max_abs(off) < tol) return HolonomyClass::diagonal;
  return HolonomyClass::non_scalar;
}

namespace {

std::string format_complex(complex c) {
  std::ostringstream os;
  os.precision(6);
  os << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
  return os.str();
}

}  // namespace

Holonomy extract_holonomy(const Subspace& sub, const CoupledModeSystem& sys,
                          const HolonomyOptions& options) {
  const Matrix v = lift_unitary(evolve(sys, 0.0, sys.length()).u, sub.basis);
  auto cyc = is_cyclic(sub, v);
  if (!cyc.cyclic) {
    std::ostringstream os;
    os << "subspace " << sub.describe() << " is not cyclic (projector residual " << cyc.residual
       << ")";
    fail(ErrorCode::not_cyclic, os.str());
  }
  const auto K = K_matrix(sub, sys, uniform_grid(0.0, sys.length(), options.grid_points));
  if (K.max_abs >= holonomic_tolerance(sys)) {
    const complex value = K.K[K.worst_z](K.worst_row, K.worst_col);
    const auto row = sub.basis.label(sub.members[K.worst_row]);
    const auto col = sub.basis.label(sub.members[K.worst_col]);
    std::ostringstream os;
    os << "subspace " << sub.describe() << " is cyclic but not holonomic: max|K| = " << K.max_abs
       << ", K(" << row << "," << col << ") = " << format_complex(value)
       << " at z = " << K.z[K.worst_z] << " mm";
    throw NotHolonomicError(os.str(), K.max_abs, K.z[K.worst_z], row, col, value);
  }
  Holonomy out;
  out.u = member_block(v, sub);
  out.cls = classify(out.u);
  out.max_K = K.max_abs;
  out.permutation = std::move(cyc.permutation);
  return out;
}

Matrix path_ordered_holonomy(const Subspace& sub, const CoupledModeSystem& sys,
                             const PathOrderedOptions& options) {
  require(options.steps >= 1, ErrorCode::invalid_argument, "need at least one step");
  const double total = sys.envelope().integral(sys.length());
  const bool single = sys.terms().size() == 1;
  const auto n = static_cast<Eigen::Index>(sub.dim());
  Matrix c = Matrix::Identity(n, n);
  double z_prev = 0.0;
  for (std::size_t i = 0; i < options.steps; ++i) {
    const double d0 = total * static_cast<double>(i) / static_cast<double>(options.steps);
    const double d1 = total * static_cast<double>(i + 1) / static_cast<double>(options.steps);
    const double z_next = (i + 1 == options.steps) ? sys.length() : position_at_phase(sys, d1);
    const double z_mid = position_at_phase(sys, 0.5 * (d0 + d1));
    const std::vector<double> at{z_mid};
    const Matrix A = gauge_field(sub, sys, options.family, at, options.gauge).A.front();
    const Matrix K = K_matrix(sub, sys, at, options.family).K.front();
    Matrix gen = A - K;
    // Step in the accumulated phase when the generator scales with Omega.
    const double omega = sys.envelope().value(z_mid);
    if (single && omega > 0.0)
      gen *= (d1 - d0) / omega;
    else
      gen *= (z_next - z_prev);
    const Matrix herm = 0.5 * (gen + gen.adjoint());
    c = expm_hermitian(herm, -1.0) * c;
    z_prev = z_next;
  }
  const Matrix w = member_block(lift_unitary(mode_vectors(sys, sys.length(), options.family), sub.basis), sub);
  return w * c;
}

HeisenbergCheck heisenberg_condition(const std::vector<Vector>& modes,
                                     const CouplingPattern& pattern) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  HeisenbergCheck out;
  out.couplings = Matrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    require(modes[a].size() == pattern.mode_count(), ErrorCode::invalid_argument,
            "mode vector does not match the pattern");
    for (Eigen::Index b = 0; b < n; ++b) {
      const complex overlap = modes[a].dot(modes[b]);
      require(std::abs(overlap - (a == b ? 1.0 : 0.0)) < 1e-10, ErrorCode::precondition,
              "mode vectors are not orthonormal within 1e-10");
      out.couplings(a, b) = modes[a].dot(pattern.matrix() * modes[b]);
    }
  }
  out.max_abs = max_abs(out.couplings);
  out.holds = out.max_abs < 1e-10;
  return out;
}

}  // namespace mph
