// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

// Cyclic subspaces of a lifted evolution, the dynamical matrix K between
// evolved member kets, gauge fields and the geometric holonomy.
//
// The cycle always ends at the end of the structure, z = L.

#pragma once

#include "mph/coupledmode.hpp"
#include "mph/error.hpp"
#include "mph/fock.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mph {

/// Members are indices into `basis`, kept in the given order.
struct Subspace {
  FockBasis basis;
  std::vector<std::size_t> members;

  Subspace() = default;
  Subspace(FockBasis b, std::vector<std::size_t> m);
  static Subspace from_states(FockBasis basis, const std::vector<OccupationState>& states);
  /// States in compact text form, e.g. {"2000", "0002"}.
  static Subspace parse(FockBasis basis, const std::vector<std::string>& states);

  std::size_t dim() const { return members.size(); }
  const OccupationState& state(std::size_t i) const { return basis[members[i]]; }
  std::vector<std::string> labels() const;
  std::string describe() const;
};

enum class ModeFamilyKind { heisenberg, phase_adjusted, custom };

/// Rule giving the single-particle mode vectors at each z, as the columns of
/// an M x M matrix. heisenberg uses U(0, z); phase_adjusted multiplies by
/// exp(-i delta(z) / 2).
struct ModeBasisFamily {
  ModeFamilyKind kind = ModeFamilyKind::heisenberg;
  std::function<Matrix(double)> custom;

  static ModeBasisFamily heisenberg() { return {}; }
  static ModeBasisFamily phase_adjusted() { return {ModeFamilyKind::phase_adjusted, {}}; }
  static ModeBasisFamily from_function(std::function<Matrix(double)> f) {
    return {ModeFamilyKind::custom, std::move(f)};
  }
};

/// Mode vectors at z. Outside [0, L] the structure is uncoupled, so the
/// family is frozen at its boundary value; this lets finite differences
/// straddle the facets.
Matrix mode_vectors(const CoupledModeSystem& sys, double z, const ModeBasisFamily& family);

/// J(z) = Phi(z)^dag H(z) Phi(z), with Phi the family's mode vectors.
Matrix mode_coupling_J(const CoupledModeSystem& sys, double z, const ModeBasisFamily& family);

/// Member a is carried onto member image[a] with the given phase.
struct SignedPermutation {
  std::vector<std::size_t> image;
  std::vector<complex> phase;
};

struct CyclicityResult {
  bool cyclic = false;
  double residual = 0.0;
  std::optional<SignedPermutation> permutation;
};

/// Projector test ||P - V P V^dag||_max < 1e-8 with V the lifted U(0, L).
CyclicityResult is_cyclic(const Subspace& sub, const CoupledModeSystem& sys);
CyclicityResult is_cyclic(const Subspace& sub, const Matrix& lifted_cycle);

/// <AB|H|CD> between normalized two-particle kets, evaluated from the mode
/// couplings J with the delta-contraction formulas.
complex K_two_particle(const OccupationState& bra, const OccupationState& ket, const Matrix& J,
                       const ParticleType& type);

/// N-particle generalization: the sum over one contraction J_{k_nu l_mu}
/// times the cofactor of the overlap matrix delta_{k_alpha l_beta}
/// (permanent for bosons, signed determinant for fermions, label-diagonal
/// for distinguishable particles), on normalized kets.
complex K_n_particle(const OccupationState& bra, const OccupationState& ket, const Matrix& J);

/// Boson formula on raw mode lists. J includes the vacuum energy on its
/// diagonal, as <0|phi_k H phi_l^dag|0> does, and (N - 1) h_vac per(delta)
/// is subtracted. Normalization follows the multiplicities of the lists.
complex K_n_boson(std::span<const int> bra_modes, std::span<const int> ket_modes, const Matrix& J,
                  complex h_vac = 0.0);

struct DynamicalContribution {
  std::vector<double> z;
  std::vector<Matrix> K;
  double max_abs = 0.0;
  /// Location of the largest element: grid index, row, column.
  std::size_t worst_z = 0, worst_row = 0, worst_col = 0;
  /// Largest disagreement between closed form and lifted-Hamiltonian oracle.
  double oracle_deviation = 0.0;
};

std::vector<double> uniform_grid(double z0, double z1, std::size_t points);

/// K on each grid point from the closed forms; also evaluates the oracle
/// and throws internal if the two differ by more than 1e-8.
DynamicalContribution K_matrix(const Subspace& sub, const CoupledModeSystem& sys,
                               const std::vector<double>& grid,
                               const ModeBasisFamily& family = ModeBasisFamily::heisenberg());

/// Tolerance used to call a subspace holonomic: 1e-8 times |kappa|max Omega.
double holonomic_tolerance(const CoupledModeSystem& sys);

struct GaugeOptions {
  /// Finite-difference step as a fraction of L.
  double step_fraction = 1e-3;
  /// Combine steps h and h/2 to cancel the leading error term.
  bool richardson = true;
};

struct GaugeField {
  std::vector<double> z;
  std::vector<Matrix> A;
  double hermiticity_residual = 0.0;
};

/// A_ab = i <Psi_a | d/dz Psi_b> for the lifted member kets of the family.
GaugeField gauge_field(const Subspace& sub, const CoupledModeSystem& sys,
                       const ModeBasisFamily& family, const std::vector<double>& grid,
                       const GaugeOptions& options = {});

/// Single-particle field on the family, M x M.
Matrix single_particle_gauge_field(const CoupledModeSystem& sys, const ModeBasisFamily& family,
                                   double z, const GaugeOptions& options = {});

/// Two-particle element from the single-particle field, same contraction
/// structure as K_two_particle.
complex gauge_field_two_particle_relation(const Matrix& single_A, const OccupationState& bra,
                                          const OccupationState& ket, const ParticleType& type);

enum class HolonomyClass { scalar, diagonal, non_scalar };
std::string_view to_string(HolonomyClass c);
HolonomyClass classify(const Matrix& u, double tol = 1e-8);

struct Holonomy {
  Matrix u;
  HolonomyClass cls = HolonomyClass::scalar;
  double max_K = 0.0;
  std::optional<SignedPermutation> permutation;
};

struct HolonomyOptions {
  std::size_t grid_points = 201;
};

/// Raises not_cyclic or not_holonomic (the latter via NotHolonomicError).
Holonomy extract_holonomy(const Subspace& sub, const CoupledModeSystem& sys,
                          const HolonomyOptions& options = {});

class NotHolonomicError : public Error {
 public:
  NotHolonomicError(const std::string& msg, double max_K, double z, std::string row,
                    std::string col, complex value)
      : Error(ErrorCode::not_holonomic, msg), max_K_(max_K), z_(z), row_(std::move(row)),
        col_(std::move(col)), value_(value) {}
  double max_K() const { return max_K_; }
  double z() const { return z_; }
  const std::string& row() const { return row_; }
  const std::string& col() const { return col_; }
  complex value() const { return value_; }

 private:
  double max_K_, z_;
  std::string row_, col_;
  complex value_;
};

struct PathOrderedOptions {
  std::size_t steps = 1000;
  GaugeOptions gauge;
  ModeBasisFamily family = ModeBasisFamily::phase_adjusted();
};

/// Path-ordered exp of i (A - K) over the cycle, stepped uniformly in the
/// accumulated phase, mapped back to the waveguide basis.
Matrix path_ordered_holonomy(const Subspace& sub, const CoupledModeSystem& sys,
                             const PathOrderedOptions& options = {});

struct HeisenbergCheck {
  bool holds = false;
  double max_abs = 0.0;
  /// Reduced scalars c^dag kappa b for every pair.
  Matrix couplings;
};

/// [phi_c, [H, phi_b^dag]] for linear H is the number c^dag kappa b; the
/// condition holds when it vanishes within 1e-10 for every pair in the set.
HeisenbergCheck heisenberg_condition(const std::vector<Vector>& modes,
                                     const CouplingPattern& pattern);

}  // namespace mph
