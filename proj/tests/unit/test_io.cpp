// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/io.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace mph;

TEST_SUITE("io") {

TEST_CASE("deterministic number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  Json j;
  j["x"] = std::numeric_limits<double>::quiet_NaN();
  j["v"] = {1.5, 2.5};
  const auto text = dump_json(j);
  CHECK(text.find("null") != std::string::npos);
  CHECK(text.find("[1.5, 2.5]") != std::string::npos);
  CHECK(dump_json(j) == text);
}

TEST_CASE("complex matrices") {
  Matrix m(2, 2);
  m << complex(1, 2), complex(0.25, -1), complex(-3, 0), complex(0, 1e-17);
  CHECK(max_abs(matrix_from_json(matrix_to_json(m)) - m) == 0.0);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1, 2], [3]]")), Error);
}

TEST_CASE("system documents") {
  const auto preset = system_from_json(Json::parse(R"({"preset": "jx4-chain", "length_mm": 90})"));
  CHECK(preset.length() == doctest::Approx(90.0));
  const auto back = system_from_json(system_to_json(preset));
  for (double z : {0.0, 12.3, 45.0, 77.7, 90.0})
    CHECK(max_abs(back.hamiltonian(z) - preset.hamiltonian(z)) < 1e-15);

  const auto explicit_sys = system_from_json(Json::parse(R"({
    "modes": 2, "pattern": [[0, 0.5], [0.5, 0]],
    "envelope": [{"kind": "constant", "length_mm": 10, "start_per_mm": 0.1, "end_per_mm": 0.1}]})"));
  CHECK(explicit_sys.mode_count() == 2);
  CHECK(accumulated_phase(explicit_sys, 10.0) == doctest::Approx(1.0));

  auto code_of = [](const char* text) {
    try {
      system_from_json(Json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::internal;
  };
  CHECK(code_of(R"({"preset": "other"})") == ErrorCode::config);
  CHECK(code_of(R"({"pattern": [[0, 1], [0, 0]], "envelope": [{"kind": "constant", "length_mm": 1}]})") ==
        ErrorCode::config);
  CHECK(code_of(R"({"pattern": [[0, 1], [1, 0]]})") == ErrorCode::config);
  CHECK(code_of(R"({"pattern": [[0, 1], [1, 0]], "envelope": [{"kind": "zigzag", "length_mm": 1}]})") ==
        ErrorCode::config);
  CHECK(code_of(R"({"preset": "jx4-chain", "length_mm": 30})") == ErrorCode::config);
  CHECK(code_of("[]") == ErrorCode::config);
}

TEST_CASE("subspace documents") {
  const auto a = subspace_from_json(Json::parse(R"({"particle": "boson", "states": [[2,0,0,0], "0002"]})"), 4);
  CHECK(a.labels() == std::vector<std::string>{"2000", "0002"});
  const auto d = subspace_from_json(
      Json::parse(R"({"particle": "distinguishable", "states": [{"a": 1, "b": 3}, "a4b2"]})"), 4);
  CHECK(d.labels() == std::vector<std::string>{"a1b3", "a4b2"});
  const auto again = subspace_from_json(subspace_to_json(d), 4);
  CHECK(again.members == d.members);
  CHECK_THROWS_AS(subspace_from_json(Json::parse(R"({"states": []})"), 4), Error);
  CHECK_THROWS_AS(subspace_from_json(Json::parse(R"({"states": [[2,0,0]]})"), 4), Error);
  CHECK_THROWS_AS(subspace_from_json(Json::parse(R"({"states": [[1,1,0,0],[0,0,1,1]], "particle": "anyon"})"), 4),
                  Error);
  CHECK_THROWS_AS(subspace_from_json(Json::parse(R"({"particle": "fermion", "states": ["0200"]})"), 4), Error);
}

}  // TEST_SUITE
