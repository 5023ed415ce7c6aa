// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mph/holonomy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mph {

/// Orbits of the signed permutation that the end-of-cycle evolution induces
/// on the basis. image[s] is the state s is carried to, with phase[s].
struct OrbitDecomposition {
  std::vector<std::vector<std::size_t>> orbits;
  std::vector<std::size_t> image;
  std::vector<complex> phase;
};

/// Fails with unsupported_structure when the lifted cycle is not a
/// permutation with phases within 1e-8.
OrbitDecomposition decompose_orbits(const Matrix& lifted_cycle, const FockBasis& basis);
OrbitDecomposition decompose_orbits(const CoupledModeSystem& sys, const FockBasis& basis);

struct SubspaceCounts {
  std::uint64_t total = 0;
  std::uint64_t cyclic = 0;
};

/// Non-empty proper subsets of the basis, and those that are unions of orbits.
SubspaceCounts count_subspaces(const FockBasis& basis, const OrbitDecomposition& orbits);

struct SubspaceRecord {
  std::vector<std::size_t> members;
  std::vector<std::string> labels;
  bool cyclic = true;
  bool holonomic = false;
  double max_K = 0.0;
  std::optional<HolonomyClass> cls;
  std::optional<double> plateau_width_mm;
};

struct EnumerationReport {
  ParticleType type;
  int modes = 0;
  int particles = 0;
  SubspaceCounts counts;
  std::size_t holonomic = 0;
  std::size_t holonomic_multi = 0;  // dimension >= 2
  std::size_t scalar = 0, diagonal = 0, non_scalar = 0;  // among dimension >= 2
  std::vector<SubspaceRecord> records;  // every cyclic subspace checked
  bool partial = false;
  std::uint64_t resume_token = 0;

  std::vector<const SubspaceRecord*> holonomic_records(std::size_t min_dim = 1) const;
};

struct EnumerationOptions {
  std::size_t cap = 4096;
  /// Orbit-union mask to start from, as returned in a partial report.
  std::uint64_t resume_token = 1;
  std::size_t grid_points = 201;
  unsigned jobs = 1;
};

class CapExceededError : public Error {
 public:
  CapExceededError(const std::string& msg, EnumerationReport partial)
      : Error(ErrorCode::cap_exceeded, msg), partial_(std::move(partial)) {}
  const EnumerationReport& partial_report() const { return partial_; }
  std::uint64_t resume_token() const { return partial_.resume_token; }

 private:
  EnumerationReport partial_;
};

/// Checks every cyclic subspace (union of orbits) for a vanishing K and
/// classifies the holonomy of the holonomic ones. When more than `cap`
/// subspaces remain, the first `cap` are checked and CapExceededError
/// carries that partial report.
EnumerationReport enumerate_holonomic(const CoupledModeSystem& sys, const FockBasis& basis,
                                      const EnumerationOptions& options = {});

/// Records sorted by (dimension, member indices).
void sort_records(std::vector<SubspaceRecord>& records);

std::string report_json(const EnumerationReport& report);
std::string report_csv(const EnumerationReport& report);

}  // namespace mph
