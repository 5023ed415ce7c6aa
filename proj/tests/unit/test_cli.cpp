// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

// Runs the installed command-line tool and checks exit codes and outputs.

#include "mph/io.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

#ifndef MPH_CLI_PATH
#error "MPH_CLI_PATH must name the mph executable"
#endif

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MPH_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("mph_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

mph::Matrix u_of(const std::string& text) {
  const auto j = mph::Json::parse(text);
  return mph::matrix_from_json(j["u"]);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("evolve") {
  const auto pi = run("evolve --delta 3.14159265358979");
  REQUIRE(pi.code == 0);
  mph::Matrix flip = mph::Matrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) flip(k, 3 - k) = mph::complex(0, 1);
  CHECK(mph::max_abs(u_of(pi.out) - flip) < 1e-8);

  const auto zero = run("evolve --delta 0");
  CHECK(mph::max_abs(u_of(zero.out) - mph::Matrix::Identity(4, 4)) < 1e-15);

  const auto len = run("evolve --length 84.9");
  REQUIRE(len.code == 0);
  CHECK(mph::max_abs(u_of(len.out) - u_of(pi.out)) < 1e-8);

  CHECK(run("evolve --delta 1 --length 80").code == 2);
  CHECK(run("evolve --length 20").code == 2);
}

TEST_CASE("enumerate") {
  const auto dir = scratch("enum");
  const auto one = run("--out-dir " + dir.string() + " enumerate --particles 1 --type boson");
  CHECK(one.code == 0);
  CHECK(one.out.find("14 total, 2 cyclic") != std::string::npos);
  const auto two = run("--out-dir " + dir.string() + " enumerate --particles 2 --type boson");
  CHECK(two.code == 0);
  CHECK(two.out.find("1022 total, 62 cyclic") != std::string::npos);
  CHECK(fs::exists(dir / "enumeration_report.json"));
  CHECK(fs::exists(dir / "enumeration_summary.csv"));
  const auto dist = run("--out-dir " + dir.string() + " enumerate --particles 2 --type distinguishable");
  CHECK(dist.out.find("65534 total, 254 cyclic") != std::string::npos);
  const auto cap = run("--out-dir " + dir.string() + " enumerate --particles 2 --cap 3");
  CHECK(cap.code == 3);
  CHECK(cap.out.find("error[cap-exceeded]") != std::string::npos);
  const auto partial = mph::read_json_file((dir / "enumeration_report.json").string());
  CHECK(partial["partial"] == true);
  CHECK(partial.contains("resume_token"));
  fs::remove_all(dir);
}

TEST_CASE("check") {
  const auto dir = scratch("check");
  const auto file = (dir / "sub.json").string();
  mph::write_text_file(file, R"({"particle": "boson", "states": ["2000", "0002", "1001"]})");
  const auto ok = run("--out-dir " + dir.string() + " check --subspace " + file);
  CHECK(ok.code == 0);
  CHECK(ok.out.find("holonomic: yes") != std::string::npos);
  CHECK(ok.out.find("class: non_scalar") != std::string::npos);
  const auto report = mph::read_json_file((dir / "check.json").string());
  CHECK(report["holonomic"] == true);

  const auto bad = run("check --states 0200,0020,0110");
  CHECK(bad.code == 5);
  CHECK(bad.out.find("error[not-holonomic]") != std::string::npos);
  CHECK(bad.out.find("0110") != std::string::npos);

  CHECK(run("check --states 2000,0200").code == 4);
  const auto single = run("check --states 1001");
  CHECK(single.code == 0);
  CHECK(single.out.find("class: scalar") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("configuration errors") {
  const auto missing = run("--config /nonexistent/run.json check --states 2000,0002");
  CHECK(missing.code == 2);
  CHECK(missing.out.find("error[config]") != std::string::npos);
  const auto dir = scratch("cfg");
  const auto cfg = (dir / "run.json").string();
  mph::write_text_file(cfg, R"({"system": {"preset": "nope"}})");
  CHECK(run("--config " + cfg + " check --states 2000,0002").code == 2);
  mph::write_text_file(cfg, "{ not json");
  CHECK(run("--config " + cfg + " check --states 2000,0002").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("check --states 2000,00x2").code == 2);
  fs::remove_all(dir);
}

TEST_CASE("scan, counts and ingest") {
  const auto dir = scratch("scan");
  const auto d = dir.string();
  CHECK(run("--out-dir " + d + " scan --states 1000,0001 --step 1 --start 80 --end 100").code == 0);
  CHECK(fs::exists(dir / "scan_curves.csv"));
  CHECK(run("--out-dir " + d + " --seed 5 simulate-counts --states 2000,0002 --trials 1000").code == 0);
  const auto ing = run("--out-dir " + d + " ingest --states 2000,0002 --counts " + (dir / "counts.csv").string());
  CHECK(ing.code == 0);
  CHECK(ing.out.find("input_state,length_mm,probability,sigma") != std::string::npos);
  mph::write_text_file((dir / "bad.csv").string(),
                       "structure_id,length_mm,input_state,detector_pair,counts\nS1,80,2000,1a|1b,x\n");
  const auto bad = run("ingest --states 2000,0002 --counts " + (dir / "bad.csv").string());
  CHECK(bad.code == 2);
  CHECK(bad.out.find("line 2") != std::string::npos);
  const auto plat = run("--out-dir " + d + " plateau --states 1000,0001");
  CHECK(plat.code == 0);
  CHECK(plat.out.find("mean plateau width: 23.7") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("fidelity") {
  const auto f = run("fidelity --theory 1,0 --exp 0.9,0.1");
  CHECK(f.code == 0);
  CHECK(std::stod(f.out) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(run("fidelity --theory 1,0 --exp 0.9").code == 2);
}

}  // TEST_SUITE
