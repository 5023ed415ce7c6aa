// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock.hpp
 * @brief Multi-particle state spaces over a fixed set of modes.
 *
 * Kets are always unit-norm: a bosonic occupation |n_1 ... n_M> is
 * prod_k (a_k^dag)^{n_k} / sqrt(n_k!) |0>, a fermionic one applies the
 * creation operators in increasing mode order, and a distinguishable ket
 * applies one creation operator per label in label order.
 *
 * Single-particle matrices act on amplitude vectors: h(k, j) = <k|h|j>, so the
 * second-quantized operator is sum_{j,k} h(k, j) a_k^dag a_j.
 */

#pragma once

#include "mph/linalg.hpp"

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mph {

enum class Statistics { boson, fermion, distinguishable };

std::string_view to_string(Statistics s);
Statistics parse_statistics(std::string_view name);

struct ParticleType {
  Statistics kind = Statistics::boson;
  /// Only meaningful for distinguishable particles; one label per particle.
  std::vector<std::string> labels;

  static ParticleType boson() { return {Statistics::boson, {}}; }
  static ParticleType fermion() { return {Statistics::fermion, {}}; }
  static ParticleType distinguishable(std::vector<std::string> labels = {"a", "b"});

  bool operator==(const ParticleType&) const = default;
};

/// One basis ket. For bosons and fermions `values` holds per-mode counts; for
/// distinguishable particles it holds the (0-based) mode of each label.
class OccupationState {
 public:
  OccupationState() = default;
  OccupationState(Statistics kind, int mode_count, std::vector<int> values);

  static OccupationState from_counts(Statistics kind, std::vector<int> counts);
  static OccupationState labeled(int mode_count, std::vector<int> modes);

  Statistics kind() const { return kind_; }
  int mode_count() const { return mode_count_; }
  const std::vector<int>& values() const { return values_; }
  int particle_count() const;

  /// Mode occupied by each particle: ascending for bosons and fermions,
  /// label order for distinguishable particles.
  std::vector<int> mode_list() const;
  /// Per-mode occupation counts regardless of statistics.
  std::vector<int> counts() const;

  /// Compact text form: "2000" for counts, "a1b3" (1-based modes) for labels.
  std::string to_string(std::span<const std::string> labels = {}) const;

  auto operator<=>(const OccupationState&) const = default;

 private:
  Statistics kind_ = Statistics::boson;
  int mode_count_ = 0;
  std::vector<int> values_;
};

/// Parses the compact text form produced by OccupationState::to_string.
OccupationState parse_state(std::string_view text, const ParticleType& type, int mode_count);

/// Ordered basis of all N-particle kets over M modes.
///
/// Ordering: bosons and fermions are sorted lexicographically descending on
/// the occupation vector (|2000> first); distinguishable kets are sorted
/// ascending on the per-label mode tuple, i.e. descending on the concatenated
/// per-label occupation vectors (a1b1 first).
class FockBasis {
 public:
  FockBasis() = default;
  FockBasis(ParticleType type, int mode_count, int particle_count,
            std::vector<OccupationState> states);

  const ParticleType& particle_type() const { return type_; }
  Statistics kind() const { return type_.kind; }
  int mode_count() const { return modes_; }
  int particle_count() const { return particles_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<OccupationState>& states() const { return states_; }
  const OccupationState& operator[](std::size_t i) const { return states_[i]; }

  std::optional<std::size_t> index_of(const OccupationState& s) const;
  std::size_t require_index(const OccupationState& s) const;
  std::string label(std::size_t i) const { return states_[i].to_string(type_.labels); }

 private:
  ParticleType type_;
  int modes_ = 0;
  int particles_ = 0;
  std::vector<OccupationState> states_;
  std::map<std::vector<int>, std::size_t> index_;
};

FockBasis enumerate_basis(int mode_count, int particle_count, const ParticleType& type);

inline constexpr int kMaxPermanentSize = 12;

/// Permanent by Ryser's inclusion-exclusion formula with Gray-code ordering.
complex permanent(const Matrix& m);

/// m restricted to the listed rows and columns (repetitions allowed).
Matrix restrict(const Matrix& m, std::span<const int> rows, std::span<const int> cols);

/// Lifts a single-particle unitary onto the N-particle basis.
Matrix lift_unitary(const Matrix& u, const FockBasis& basis);
/// Distinguishable lifting with one unitary per label.
Matrix lift_unitary(std::span<const Matrix> per_label, const FockBasis& basis);

/// Single entry <out|lift(u)|in> without building the whole matrix. No
/// unitarity check; callers that need one use lift_unitary.
complex lifted_amplitude(const Matrix& u, const OccupationState& out, const OccupationState& in);

/// Probability of detecting occupation `out` when the particles of `in` are
/// sent through u one by one without interfering:
/// per(|u|^2 restricted to out, in) / prod_k out_k!.
double classical_transition_probability(const Matrix& u, const OccupationState& out,
                                        const OccupationState& in);

/// Represents sum_{j,k} h(k, j) a_k^dag a_j on the N-particle basis.
Matrix lift_hamiltonian(const Matrix& h, const FockBasis& basis);

/// One factor of an operator product for the vacuum-expectation oracle. With
/// dagger set it is sum_m v_m a_m^dag; otherwise sum_m conj(v_m) a_m, the
/// adjoint of the same mode. `label` selects the particle species for
/// distinguishable particles and is ignored otherwise.
struct LadderFactor {
  Vector mode;
  bool dagger = false;
  int label = 0;
};

/// <0| f_1 f_2 ... f_n |0>, evaluated by repeatedly moving annihilators to
/// the right with a_k a_j^dag = delta_kj +/- a_j^dag a_k.
complex vacuum_expectation(std::span<const LadderFactor> factors, Statistics kind);

}  // namespace mph
