// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/holonomy.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

using namespace mph;

namespace {

const CoupledModeSystem& chain() {
  static const CoupledModeSystem sys = paper_structure(84.9);
  return sys;
}

Subspace boson_sub(int particles, const std::vector<std::string>& states) {
  return Subspace::parse(enumerate_basis(4, particles, ParticleType::boson()), states);
}

Matrix antidiag(int n, complex v) {
  Matrix m = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, n - 1 - k) = v;
  return m;
}

complex lifted_element(const Matrix& J, const OccupationState& bra, const OccupationState& ket,
                       const ParticleType& type) {
  const auto basis = enumerate_basis(J.rows(), bra.particle_count(), type);
  const Matrix h = lift_hamiltonian(J, basis);
  return h(basis.require_index(bra), basis.require_index(ket));
}

}  // namespace

TEST_SUITE("holonomy") {

TEST_CASE("cyclicity") {
  CHECK(is_cyclic(boson_sub(1, {"1000", "0001"}), chain()).cyclic);
  const auto no = is_cyclic(boson_sub(1, {"1000", "0100"}), chain());
  CHECK_FALSE(no.cyclic);
  CHECK(no.residual > 0.5);
  CHECK(is_cyclic(boson_sub(2, {"2000", "1100", "1010", "1001", "0200", "0110", "0101", "0020", "0011", "0002"}),
                  chain())
            .cyclic);
  const auto perm = is_cyclic(boson_sub(2, {"2000", "0002", "1001"}), chain()).permutation;
  REQUIRE(perm.has_value());
  CHECK(perm->image == std::vector<std::size_t>{1, 0, 2});
  CHECK(std::abs(perm->phase[2] + 1.0) < 1e-10);
}

TEST_CASE("mode couplings") {
  const auto& sys = chain();
  for (double z : {0.0, 7.5, 31.0, 60.2, 84.9}) {
    const Matrix J = mode_coupling_J(sys, z, ModeBasisFamily::heisenberg());
    CHECK(max_abs(J - sys.envelope().value(z) * oracle::jx4()) < 1e-12);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(J(k, k)) < 1e-12);
  }
  CHECK(max_abs(mode_coupling_J(sys, 0.0, ModeBasisFamily::phase_adjusted())) < 1e-15);
}

TEST_CASE("two-particle K closed form") {
  std::mt19937_64 rng(21);
  const Matrix J = oracle::random_hermitian(4, rng);
  const auto B = ParticleType::boson();
  const auto s0200 = parse_state("0200", B, 4), s0110 = parse_state("0110", B, 4), s0020 = parse_state("0020", B, 4);
  CHECK(std::abs(K_two_particle(s0200, s0110, J, B) - std::sqrt(2.0) * J(1, 2)) < 1e-12);

  Matrix Jz = J;
  Jz(1, 1) = Jz(2, 2) = 0.0;
  CHECK(std::abs(K_two_particle(s0200, s0020, Jz, B)) < 1e-15);

  Matrix sparse = Matrix::Zero(4, 4);
  sparse(0, 1) = sparse(1, 0) = 0.7;
  CHECK(std::abs(K_two_particle(parse_state("0011", B, 4), s0110, sparse, B)) < 1e-15);

  const auto D = ParticleType::distinguishable();
  CHECK(std::abs(K_two_particle(parse_state("a1b3", D, 4), parse_state("a2b1", D, 4), J, D)) < 1e-15);

  for (const auto& type : {B, ParticleType::fermion(), D}) {
    const auto basis = enumerate_basis(4, 2, type);
    for (int trial = 0; trial < 40; ++trial) {
      const Matrix h = oracle::random_hermitian(4, rng);
      const auto& bra = basis[rng() % basis.size()];
      const auto& ket = basis[rng() % basis.size()];
      const complex want = lifted_element(h, bra, ket, type);
      CHECK(std::abs(K_two_particle(bra, ket, h, type) - want) < 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
  CHECK_THROWS_AS(OccupationState(Statistics::fermion, 4, {0, 2, 0, 0}), Error);
}

TEST_CASE("N-boson K closed form") {
  std::mt19937_64 rng(23);
  const Matrix J = oracle::random_hermitian(4, rng);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) {
      const int a[1] = {k}, b[1] = {l};
      CHECK(std::abs(K_n_boson(a, b, J) - J(k, l)) < 1e-15);
    }
  const double hvac = 0.37;
  Matrix Jv = J;
  Jv.diagonal().array() += hvac;
  for (int n = 1; n <= 3; ++n) {
    const auto basis = enumerate_basis(4, n, ParticleType::boson());
    const Matrix h = lift_hamiltonian(J, basis);
    for (std::size_t r = 0; r < basis.size(); ++r)
      for (std::size_t c = 0; c < basis.size(); ++c) {
        const auto bra = basis[r].mode_list(), ket = basis[c].mode_list();
        const complex want = h(r, c) + (r == c ? hvac : 0.0);
        CHECK(std::abs(K_n_boson(bra, ket, Jv, hvac) - want) < 1e-12);
      }
  }
  // N = 2 without vacuum energy is the two-particle formula.
  const auto b2 = enumerate_basis(4, 2, ParticleType::boson());
  for (std::size_t r = 0; r < b2.size(); ++r)
    for (std::size_t c = 0; c < b2.size(); ++c)
      CHECK(std::abs(K_n_boson(b2[r].mode_list(), b2[c].mode_list(), J) -
                     K_two_particle(b2[r], b2[c], J, ParticleType::boson())) < 1e-13);
  const int one[1] = {0}, two[2] = {0, 1};
  CHECK_THROWS_AS(K_n_boson(one, two, J), Error);

  const auto b3 = enumerate_basis(4, 3, ParticleType::fermion());
  const Matrix hf = lift_hamiltonian(J, b3);
  for (std::size_t r = 0; r < b3.size(); ++r)
    for (std::size_t c = 0; c < b3.size(); ++c)
      CHECK(std::abs(K_n_particle(b3[r], b3[c], J) - hf(r, c)) < 1e-12);
}

TEST_CASE("dynamical contribution on the chain") {
  const auto grid = uniform_grid(0.0, chain().length(), 101);
  CHECK(K_matrix(boson_sub(1, {"1000", "0001"}), chain(), grid).max_abs < 1e-14);
  const auto k23 = K_matrix(boson_sub(1, {"0100", "0010"}), chain(), grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(k23.K[i](0, 1) - chain().envelope().value(grid[i])) < 1e-12);
  CHECK(k23.max_abs == doctest::Approx(StructureCalibration{}.omega_flat_per_mm));
  CHECK(K_matrix(boson_sub(2, {"0200", "0020"}), chain(), grid).max_abs < 1e-14);
  CHECK(K_matrix(boson_sub(2, {"0200", "0020", "0110"}), chain(), grid).oracle_deviation < 1e-12);
}

TEST_CASE("gauge fields") {
  const double omega = StructureCalibration{}.omega_flat_per_mm;
  const auto& sys = chain();
  const std::vector<double> flat = {32.0, 40.0, 50.0};
  const auto single = gauge_field(boson_sub(1, {"1000", "0001"}), sys, ModeBasisFamily::phase_adjusted(), flat);
  for (const auto& A : single.A) CHECK(max_abs(A - 0.5 * omega * Matrix::Identity(2, 2)) < 1e-6);

  const auto ramp = gauge_field(boson_sub(1, {"1000", "0001"}), sys, ModeBasisFamily::phase_adjusted(), {12.0, 70.0});
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(max_abs(ramp.A[i] - 0.5 * sys.envelope().value(ramp.z[i]) * Matrix::Identity(2, 2)) < 1e-6);

  const auto two = gauge_field(boson_sub(2, {"2000", "1001", "0002"}), sys, ModeBasisFamily::phase_adjusted(), flat);
  for (const auto& A : two.A) CHECK(max_abs(A - omega * Matrix::Identity(3, 3)) < 1e-6);

  const auto heis = gauge_field(boson_sub(2, {"2000", "0002"}), sys, ModeBasisFamily::heisenberg(), flat);
  CHECK(heis.hermiticity_residual < 1e-8);

  Matrix As = Matrix::Zero(4, 4);
  As(0, 0) = As(3, 3) = 0.5 * omega;
  const auto B = ParticleType::boson();
  const auto s2000 = parse_state("2000", B, 4);
  CHECK(std::abs(gauge_field_two_particle_relation(As, s2000, s2000, B) - omega) < 1e-15);
  CHECK(std::abs(gauge_field_two_particle_relation(As, parse_state("1100", B, 4), parse_state("0011", B, 4), B)) ==
        0.0);
}

TEST_CASE("two-particle gauge relation on a random family") {
  std::mt19937_64 rng(31);
  const Matrix g1 = oracle::random_hermitian(4, rng), g2 = oracle::random_hermitian(4, rng);
  const Matrix v0 = oracle::random_unitary(4, rng);
  const auto family = ModeBasisFamily::from_function([&](double z) {
    return Matrix(oracle::expm_eig(g1, 0.03 * z) * oracle::expm_eig(g2, 0.01 * z * z / 84.9) * v0);
  });
  const auto& sys = chain();
  for (const auto& type : {ParticleType::boson(), ParticleType::fermion(), ParticleType::distinguishable()}) {
    const auto basis = enumerate_basis(4, 2, type);
    std::vector<std::size_t> all(basis.size());
    std::iota(all.begin(), all.end(), 0);
    const Subspace full(basis, all);
    const double z = 41.3;
    const auto direct = gauge_field(full, sys, family, {z});
    const Matrix As = single_particle_gauge_field(sys, family, z);
    double worst = 0.0;
    for (std::size_t r = 0; r < basis.size(); ++r)
      for (std::size_t c = 0; c < basis.size(); ++c)
        worst = std::max(worst, std::abs(direct.A[0](r, c) -
                                         gauge_field_two_particle_relation(As, basis[r], basis[c], type)));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("holonomies of the reference subspaces") {
  const auto& sys = chain();
  const auto h1 = extract_holonomy(boson_sub(1, {"1000", "0001"}), sys);
  CHECK(max_abs(h1.u - antidiag(2, oracle::I)) < 1e-8);
  CHECK(h1.cls == HolonomyClass::non_scalar);

  const auto h3 = extract_holonomy(boson_sub(2, {"2000", "1001", "0002"}), sys);
  CHECK(max_abs(h3.u - antidiag(3, -1.0)) < 1e-8);

  const auto D = ParticleType::distinguishable();
  const auto h4 = extract_holonomy(Subspace::parse(enumerate_basis(4, 2, D), {"a1b3", "a2b1", "a3b4", "a4b2"}), sys);
  CHECK(max_abs(h4.u - antidiag(4, -1.0)) < 1e-8);

  const auto hs = extract_holonomy(boson_sub(2, {"1001", "0110"}), sys);
  CHECK(max_abs(hs.u + Matrix::Identity(2, 2)) < 1e-8);
  CHECK(hs.cls == HolonomyClass::scalar);

  const auto h1d = extract_holonomy(boson_sub(2, {"1001"}), sys);
  CHECK(h1d.cls == HolonomyClass::scalar);

  Matrix d = Matrix::Identity(2, 2);
  d(1, 1) = -1.0;
  CHECK(classify(d) == HolonomyClass::diagonal);
  CHECK(classify(antidiag(2, 1.0)) == HolonomyClass::non_scalar);
}

TEST_CASE("holonomy errors") {
  const auto& sys = chain();
  try {
    extract_holonomy(boson_sub(2, {"2000", "0200"}), sys);
    FAIL("expected not-cyclic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_cyclic);
  }
  try {
    extract_holonomy(boson_sub(2, {"0200", "0020", "0110"}), sys);
    FAIL("expected not-holonomic");
  } catch (const NotHolonomicError& e) {
    const double omega = StructureCalibration{}.omega_flat_per_mm;
    CHECK(e.max_K() == doctest::Approx(std::sqrt(2.0) * omega));
    CHECK(((e.row() == "0200" && e.col() == "0110") || (e.row() == "0110" && e.col() == "0200") ||
           (e.row() == "0020" && e.col() == "0110") || (e.row() == "0110" && e.col() == "0020")));
  }
}

TEST_CASE("path-ordered reconstruction") {
  const auto& sys = chain();
  for (const auto& states : std::vector<std::vector<std::string>>{{"2000", "0002", "1001"}, {"0200", "0020"}}) {
    const auto sub = boson_sub(2, states);
    CHECK(max_abs(path_ordered_holonomy(sub, sys) - extract_holonomy(sub, sys).u) < 1e-5);
  }
  const auto single = boson_sub(1, {"1000", "0001"});
  CHECK(max_abs(path_ordered_holonomy(single, sys) - extract_holonomy(single, sys).u) < 1e-5);
}

TEST_CASE("heisenberg condition") {
  auto e = [](int k) {
    Vector v = Vector::Zero(4);
    v(k) = 1.0;
    return v;
  };
  const auto p = jx_pattern(4);
  CHECK(heisenberg_condition({e(0), e(3)}, p).holds);
  CHECK_FALSE(heisenberg_condition({e(1), e(2)}, p).holds);
  for (int k = 0; k < 4; ++k) CHECK(heisenberg_condition({e(k)}, p).holds);

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix u = oracle::random_unitary(4, rng);
    const Vector c = u.col(0), b = u.col(1);
    const auto chk = heisenberg_condition({c, b}, p);
    complex via_vacuum = 0.0;
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) {
        const std::vector<LadderFactor> f{{c, false, 0}, {e(k), true, 0}, {e(j), false, 0}, {b, true, 0}};
        via_vacuum += p.matrix()(k, j) * vacuum_expectation(f, Statistics::boson);
      }
    CHECK(std::abs(chk.couplings(0, 1) - via_vacuum) < 1e-12);
  }
  Vector bad = e(0) + e(1);
  CHECK_THROWS_AS(heisenberg_condition({bad, e(3)}, p), Error);
}

}  // TEST_SUITE
