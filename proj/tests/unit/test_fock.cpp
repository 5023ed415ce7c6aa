// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/error.hpp"
#include "mph/fock.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

using namespace mph;

TEST_SUITE("fock") {

TEST_CASE("basis dimensions") {
  CHECK(enumerate_basis(4, 2, ParticleType::boson()).size() == 10);
  CHECK(enumerate_basis(4, 1, ParticleType::boson()).size() == 4);
  CHECK(enumerate_basis(4, 2, ParticleType::distinguishable()).size() == 16);
  CHECK(enumerate_basis(4, 2, ParticleType::fermion()).size() == 6);
  CHECK(enumerate_basis(5, 3, ParticleType::boson()).size() == 35);
  CHECK(enumerate_basis(3, 0, ParticleType::boson()).size() == 1);
  CHECK_THROWS_AS(enumerate_basis(3, 4, ParticleType::fermion()), Error);
}

TEST_CASE("basis ordering") {
  const auto b = enumerate_basis(4, 2, ParticleType::boson());
  const std::vector<std::string> expect = {"2000", "1100", "1010", "1001", "0200",
                                           "0110", "0101", "0020", "0011", "0002"};
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(b.label(i) == expect[i]);

  const auto d = enumerate_basis(4, 2, ParticleType::distinguishable());
  CHECK(d.label(0) == "a1b1");
  CHECK(d.label(1) == "a1b2");
  CHECK(d.label(4) == "a2b1");
  CHECK(d.label(15) == "a4b4");

  const auto f = enumerate_basis(4, 2, ParticleType::fermion());
  CHECK(f.label(0) == "1100");
  CHECK(f.label(5) == "0011");
}

TEST_CASE("state parsing") {
  const auto s = parse_state("1001", ParticleType::boson(), 4);
  CHECK(s.counts() == std::vector<int>{1, 0, 0, 1});
  CHECK(s.mode_list() == std::vector<int>{0, 3});
  const auto l = parse_state("a3b1", ParticleType::distinguishable(), 4);
  CHECK(l.values() == std::vector<int>{2, 0});
  CHECK(l.to_string(std::vector<std::string>{"a", "b"}) == "a3b1");
  CHECK_THROWS_AS(parse_state("0200", ParticleType::fermion(), 4), Error);
  CHECK_THROWS_AS(parse_state("20x0", ParticleType::boson(), 4), Error);
  CHECK_THROWS_AS(parse_state("200", ParticleType::boson(), 4), Error);
  CHECK_THROWS_AS(parse_state("a5b1", ParticleType::distinguishable(), 4), Error);
  try {
    parse_state("0200", ParticleType::fermion(), 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_state);
  }
}

TEST_CASE("permanent") {
  CHECK(std::abs(permanent(Matrix::Identity(3, 3)) - 1.0) < 1e-14);
  CHECK(std::abs(permanent(Matrix::Ones(3, 3)) - 6.0) < 1e-13);
  CHECK(std::abs(permanent(Matrix(0, 0)) - 1.0) < 1e-14);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int n = 1; n <= 7; ++n) {
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = complex(g(rng), g(rng));
    const complex ref = oracle::permanent(m);
    CHECK(std::abs(permanent(m) - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
  }
  CHECK_THROWS_AS(permanent(Matrix::Ones(2, 3)), Error);
  CHECK_THROWS_AS(permanent(Matrix::Ones(13, 13)), Error);
}

TEST_CASE("lift of identity and double flip") {
  const auto b = enumerate_basis(4, 2, ParticleType::boson());
  CHECK(max_abs(lift_unitary(Matrix::Identity(4, 4), b) - Matrix::Identity(10, 10)) < 1e-14);

  Matrix flip = Matrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) flip(k, 3 - k) = oracle::I;
  const Matrix lifted = lift_unitary(flip, b);
  const auto i2000 = b.require_index(parse_state("2000", b.particle_type(), 4));
  const auto i0002 = b.require_index(parse_state("0002", b.particle_type(), 4));
  const auto i1001 = b.require_index(parse_state("1001", b.particle_type(), 4));
  CHECK(std::abs(lifted(i0002, i2000) + 1.0) < 1e-14);
  CHECK(std::abs(lifted(i1001, i1001) + 1.0) < 1e-14);
}

TEST_CASE("balanced splitter suppresses coincidences") {
  Matrix bs(2, 2);
  bs << 1.0, oracle::I, oracle::I, 1.0;
  bs /= std::sqrt(2.0);
  const auto b = enumerate_basis(2, 2, ParticleType::boson());
  const auto s11 = parse_state("11", b.particle_type(), 2);
  CHECK(std::abs(lifted_amplitude(bs, s11, s11)) < 1e-15);
  const Matrix l = lift_unitary(bs, b);
  CHECK(std::norm(l(0, 1)) == doctest::Approx(0.5));
}

TEST_CASE("lift is a unitary homomorphism") {
  std::mt19937_64 rng(11);
  for (const auto& type : {ParticleType::boson(), ParticleType::fermion(), ParticleType::distinguishable()}) {
    const auto b = enumerate_basis(4, 2, type);
    const Matrix u = oracle::random_unitary(4, rng), v = oracle::random_unitary(4, rng);
    const Matrix lu = lift_unitary(u, b), lv = lift_unitary(v, b);
    CHECK(is_unitary(lu, 1e-12));
    CHECK(max_abs(lift_unitary(Matrix(u * v), b) - lu * lv) < 1e-12);
  }
  const auto b3 = enumerate_basis(4, 3, ParticleType::boson());
  const Matrix u = oracle::random_unitary(4, rng), v = oracle::random_unitary(4, rng);
  CHECK(max_abs(lift_unitary(Matrix(u * v), b3) - lift_unitary(u, b3) * lift_unitary(v, b3)) < 1e-12);
  CHECK_THROWS_AS(lift_unitary(Matrix(2.0 * u), b3), Error);
}

TEST_CASE("two-particle amplitudes against explicit formulas") {
  std::mt19937_64 rng(3);
  const Matrix u = oracle::random_unitary(4, rng);
  const auto b = enumerate_basis(4, 2, ParticleType::boson());
  const Matrix l = lift_unitary(u, b);
  for (std::size_t r = 0; r < b.size(); ++r)
    for (std::size_t c = 0; c < b.size(); ++c) {
      const auto out = b[r].mode_list(), in = b[c].mode_list();
      CHECK(std::abs(l(r, c) - oracle::two_boson_amplitude(u, out[0], out[1], in[0], in[1])) < 1e-13);
      CHECK(classical_transition_probability(u, b[r], b[c]) ==
            doctest::Approx(oracle::two_classical_probability(u, out[0], out[1], in[0], in[1])).epsilon(1e-12));
    }
  const auto f = enumerate_basis(4, 2, ParticleType::fermion());
  const Matrix lf = lift_unitary(u, f);
  for (std::size_t r = 0; r < f.size(); ++r)
    for (std::size_t c = 0; c < f.size(); ++c) {
      const auto out = f[r].mode_list(), in = f[c].mode_list();
      const complex det = u(out[0], in[0]) * u(out[1], in[1]) - u(out[0], in[1]) * u(out[1], in[0]);
      CHECK(std::abs(lf(r, c) - det) < 1e-13);
    }
}

TEST_CASE("per-label lift") {
  std::mt19937_64 rng(5);
  const Matrix ua = oracle::random_unitary(3, rng), ub = oracle::random_unitary(3, rng);
  const auto d = enumerate_basis(3, 2, ParticleType::distinguishable());
  const std::vector<Matrix> per{ua, ub};
  const Matrix l = lift_unitary(per, d);
  for (std::size_t r = 0; r < d.size(); ++r)
    for (std::size_t c = 0; c < d.size(); ++c) {
      const auto& o = d[r].values();
      const auto& i = d[c].values();
      CHECK(std::abs(l(r, c) - ua(o[0], i[0]) * ub(o[1], i[1])) < 1e-14);
    }
}

TEST_CASE("lifted hamiltonian") {
  Matrix h = Matrix::Zero(4, 4);
  h.diagonal() << 0.3, -1.2, 0.7, 2.0;
  const auto b = enumerate_basis(4, 2, ParticleType::boson());
  const Matrix lh = lift_hamiltonian(h, b);
  CHECK(std::abs(lh(0, 0) - 0.6) < 1e-15);

  const auto b1 = enumerate_basis(4, 1, ParticleType::boson());
  const Matrix jx = oracle::jx4();
  CHECK(max_abs(lift_hamiltonian(jx, b1) - jx) < 1e-15);

  // Generator of the lifted evolution.
  std::mt19937_64 rng(9);
  for (const auto& type : {ParticleType::boson(), ParticleType::fermion(), ParticleType::distinguishable()}) {
    const auto basis = enumerate_basis(3, 2, type);
    const Matrix hr = oracle::random_hermitian(3, rng);
    const Matrix direct = lift_unitary(oracle::expm_eig(hr, 0.37), basis);
    const Matrix via_generator = oracle::expm_eig(lift_hamiltonian(hr, basis), 0.37);
    CHECK(max_abs(direct - via_generator) < 1e-12);
  }
}

TEST_CASE("vacuum expectation") {
  auto e = [](int k) {
    Vector v = Vector::Zero(4);
    v(k) = 1.0;
    return v;
  };
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j) {
      const std::vector<LadderFactor> f{{e(k), false, 0}, {e(j), true, 0}};
      CHECK(std::abs(vacuum_expectation(f, Statistics::boson) - (k == j ? 1.0 : 0.0)) < 1e-15);
    }
  // <0| a_n a_p^dag a_l a_q^dag |0> = delta_np delta_lq
  for (int n = 0; n < 3; ++n)
    for (int p = 0; p < 3; ++p)
      for (int l = 0; l < 3; ++l)
        for (int q = 0; q < 3; ++q) {
          const std::vector<LadderFactor> f{{e(n), false, 0}, {e(p), true, 0}, {e(l), false, 0}, {e(q), true, 0}};
          CHECK(std::abs(vacuum_expectation(f, Statistics::boson) - double(n == p && l == q)) < 1e-15);
        }
  // <0| a_n a_k^dag a_m a_p^dag a_l a_q^dag |0> = delta_nk delta_mp delta_lq
  int mismatches = 0;
  for (int n = 0; n < 3; ++n)
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m)
        for (int p = 0; p < 3; ++p)
          for (int l = 0; l < 3; ++l)
            for (int q = 0; q < 3; ++q) {
              const std::vector<LadderFactor> f{{e(n), false, 0}, {e(k), true, 0}, {e(m), false, 0},
                                                {e(p), true, 0},  {e(l), false, 0}, {e(q), true, 0}};
              const double want = (n == k && m == p && l == q) ? 1.0 : 0.0;
              mismatches += std::abs(vacuum_expectation(f, Statistics::boson) - want) > 1e-15;
            }
  CHECK(mismatches == 0);
  // Two creators, two annihilators: bosons symmetric, fermions antisymmetric.
  const std::vector<LadderFactor> swap{{e(0), false, 0}, {e(1), false, 0}, {e(0), true, 0}, {e(1), true, 0}};
  CHECK(std::abs(vacuum_expectation(swap, Statistics::boson) - 1.0) < 1e-15);
  CHECK(std::abs(vacuum_expectation(swap, Statistics::fermion) + 1.0) < 1e-15);
  // Labels never contract across species.
  const std::vector<LadderFactor> cross{{e(0), false, 0}, {e(0), true, 1}};
  CHECK(std::abs(vacuum_expectation(cross, Statistics::distinguishable)) < 1e-15);
}

TEST_CASE("lifted hamiltonian matches the vacuum-expectation oracle") {
  std::mt19937_64 rng(13);
  const Matrix h = oracle::random_hermitian(3, rng);
  const auto b = enumerate_basis(3, 2, ParticleType::boson());
  const Matrix lh = lift_hamiltonian(h, b);
  auto e = [](int k) {
    Vector v = Vector::Zero(3);
    v(k) = 1.0;
    return v;
  };
  for (std::size_t r = 0; r < b.size(); ++r)
    for (std::size_t c = 0; c < b.size(); ++c) {
      const auto out = b[r].mode_list(), in = b[c].mode_list();
      complex sum = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) {
          const std::vector<LadderFactor> f{{e(out[1]), false, 0}, {e(out[0]), false, 0}, {e(k), true, 0},
                                            {e(j), false, 0},      {e(in[0]), true, 0},   {e(in[1]), true, 0}};
          sum += h(k, j) * vacuum_expectation(f, Statistics::boson);
        }
      const double norm = std::sqrt(oracle::factorial(b[r].counts()[out[0]]) *
                                    (out[0] == out[1] ? 1.0 : oracle::factorial(b[r].counts()[out[1]])) *
                                    oracle::factorial(b[c].counts()[in[0]]) *
                                    (in[0] == in[1] ? 1.0 : oracle::factorial(b[c].counts()[in[1]])));
      CHECK(std::abs(lh(r, c) - sum / norm) < 1e-12);
    }
}

}  // TEST_SUITE
