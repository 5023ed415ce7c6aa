// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

// mph: command-line front end. Run `mph --help` or `mph <command> --help`.
//
// Exit codes: 0 ok, 1 internal failure, 2 configuration or argument error,
// 3 enumeration cap exceeded, 4 subspace not cyclic, 5 cyclic but not
// holonomic. Every failure prints one line "error[<code>]: <message>" to
// standard error.

#include "mph/enumerate.hpp"
#include "mph/experiment.hpp"
#include "mph/io.hpp"
#include "mph/reference_table.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace {

using namespace mph;

struct Globals {
  std::string config_path;
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  std::string out_dir;
  unsigned jobs = 1;
};

struct RunConfig {
  Json doc = Json::object();
  CoupledModeSystem system;
  bool preset = true;
  StructureCalibration calibration;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir = ".";
};

Json section(const Json& doc, const std::string& key, const std::string& file_key) {
  if (doc.contains(key)) return doc[key];
  if (doc.contains(file_key)) return read_json_file(doc[file_key].get<std::string>());
  return nullptr;
}

RunConfig load_config(const Globals& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) {
    if (!std::filesystem::exists(g.config_path))
      fail(ErrorCode::config, "config file '" + g.config_path + "' does not exist");
    cfg.doc = read_json_file(g.config_path);
    if (!cfg.doc.is_object()) fail(ErrorCode::config, "config must be a JSON object");
  }
  Json sys = section(cfg.doc, "system", "system_file");
  if (sys.is_null()) sys = Json{{"preset", "jx4-chain"}};
  cfg.preset = sys.contains("preset");
  if (cfg.preset) cfg.calibration = calibration_from_json(sys);
  cfg.system = system_from_json(sys);
  if (cfg.doc.contains("seed")) cfg.seed = cfg.doc["seed"].get<std::uint64_t>();
  if (g.seed_given) cfg.seed = g.seed;
  if (cfg.doc.contains("out_dir")) cfg.out_dir = cfg.doc["out_dir"].get<std::string>();
  if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

StructureFamily family_of(const RunConfig& cfg) {
  if (cfg.preset) return fabricated_family(cfg.calibration);
  return constant_family(cfg.system, cfg.system.length());
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct SubspaceArgs {
  std::string file;
  std::string states;
  std::string type = "boson";
};

void add_subspace_options(CLI::App* cmd, SubspaceArgs& a) {
  cmd->add_option("--subspace", a.file, "Subspace JSON file");
  cmd->add_option("--states", a.states, "Comma-separated states, e.g. 2000,0002");
  cmd->add_option("--type", a.type, "boson, fermion or distinguishable");
}

Subspace load_subspace(const RunConfig& cfg, const SubspaceArgs& a) {
  const int modes = cfg.system.mode_count();
  if (!a.file.empty()) return subspace_from_json(read_json_file(a.file), modes);
  if (!a.states.empty()) {
    Json j{{"particle", a.type}, {"states", split_list(a.states)}};
    return subspace_from_json(j, modes);
  }
  Json s = section(cfg.doc, "subspace", "subspace_file");
  if (s.is_null()) fail(ErrorCode::config, "no subspace given (use --subspace or --states)");
  return subspace_from_json(s, modes);
}

DetectionModel load_detection(const RunConfig& cfg, int ports, const std::string& flag) {
  std::string name = flag;
  if (name.empty() && cfg.doc.contains("detection")) {
    const Json& d = cfg.doc["detection"];
    if (d.contains("preset")) {
      name = d["preset"].get<std::string>();
    } else {
      DetectionModel m;
      for (const auto& r : d.at("ratios")) {
        if (r.is_number()) {
          m.ratios.push_back(r.get<double>());
        } else {
          const double a = r.at(0).get<double>(), b = r.at(1).get<double>();
          if (std::abs(a + b - 1.0) > 1e-6)
            fail(ErrorCode::config, "splitter ratios of one port must sum to 1 within 1e-6");
          m.ratios.push_back(a);
        }
      }
      m.dark_counts = d.value("dark_counts", 0.0);
      m.validate(ports);
      return m;
    }
  }
  if (name.empty() || name == "calibrated") return ports == 4 ? DetectionModel::calibrated() : DetectionModel::ideal(ports);
  if (name == "ideal") return DetectionModel::ideal(ports);
  fail(ErrorCode::config, "unknown detection model '" + name + "'");
}

Preparation parse_preparation(const std::string& s) {
  if (s == "direct") return Preparation::direct();
  if (s == "dist" || s == "distinguishable") return Preparation::distinguishable();
  if (s.rfind("hom", 0) == 0) {
    const auto pos = s.find(':');
    return Preparation::hom_bunched(pos == std::string::npos ? 0.986 : std::stod(s.substr(pos + 1)));
  }
  fail(ErrorCode::config, "unknown preparation '" + s + "' (direct, dist, hom[:v])");
}

struct LengthArgs {
  double start = 0, end = 0, step = 0;
  bool fabricated = false;
};

std::vector<double> load_lengths(const RunConfig& cfg, const LengthArgs& a) {
  if (a.step > 0.0) return length_grid(a.start, a.end, a.step);
  if (!a.fabricated && cfg.doc.contains("scan")) {
    const Json& s = cfg.doc["scan"];
    if (s.contains("lengths_mm")) return s["lengths_mm"].get<std::vector<double>>();
    return length_grid(s.at("start_mm").get<double>(), s.at("end_mm").get<double>(),
                       s.at("step_mm").get<double>());
  }
  return fabricated_lengths();
}

void add_length_options(CLI::App* cmd, LengthArgs& a) {
  cmd->add_option("--start", a.start, "First length in mm");
  cmd->add_option("--end", a.end, "Last length in mm");
  cmd->add_option("--step", a.step, "Length step in mm (enables the grid)");
  cmd->add_flag("--fabricated-lengths", a.fabricated, "Use the seven fabricated lengths (default)");
}

std::vector<InputSpec> inputs_for(const Subspace& sub, const std::string& prep, const std::string& only) {
  const Preparation p = parse_preparation(prep);
  if (only.empty()) return member_inputs(sub, p);
  std::vector<InputSpec> out;
  for (const auto& s : split_list(only))
    out.push_back({parse_state(s, sub.basis.particle_type(), sub.basis.mode_count()), p});
  return out;
}

Json scan_json(const ScanResult& r) {
  Json j;
  j["mode"] = std::string(to_string(r.mode));
  j["subspace"] = r.subspace;
  Json curves = Json::array();
  for (const auto& c : r.curves) {
    Json o;
    o["input"] = c.input;
    Json pts = Json::array();
    for (const auto& p : c.points)
      pts.push_back(Json{{"length_mm", p.length_mm},
                         {"p", p.defined ? Json(p.p) : Json(nullptr)},
                         {"sigma", p.defined ? Json(p.sigma) : Json(nullptr)},
                         {"defined", p.defined}});
    o["points"] = pts;
    curves.push_back(o);
  }
  j["curves"] = curves;
  j["warnings"] = r.warnings;
  return j;
}

Json plateau_json(const PlateauReport& r) {
  Json j;
  j["rule"] = r.rule;
  j["mean_width_mm"] = r.mean_width;
  Json per = Json::array();
  for (std::size_t i = 0; i < r.inputs.size(); ++i)
    per.push_back(Json{{"input", r.inputs[i]},
                       {"start_mm", r.plateaus[i].start},
                       {"end_mm", r.plateaus[i].end},
                       {"width_mm", r.plateaus[i].width}});
  j["inputs"] = per;
  return j;
}

void print_matrix(const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::string line = "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      char buf[64];
      const double re = std::abs(m(r, c).real()) < 5e-13 ? 0.0 : m(r, c).real();
      const double im = std::abs(m(r, c).imag()) < 5e-13 ? 0.0 : m(r, c).imag();
      std::snprintf(buf, sizeof buf, "%+.6f%+.6fi  ", re, im);
      line += buf;
    }
    std::cout << line << "\n";
  }
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::config:
    case ErrorCode::parse:
    case ErrorCode::invalid_argument:
    case ErrorCode::precondition:
    case ErrorCode::invalid_state: return 2;
    case ErrorCode::cap_exceeded: return 3;
    case ErrorCode::not_cyclic: return 4;
    case ErrorCode::not_holonomic: return 5;
    default: return 1;
  }
}

void report_error(std::string_view code, const std::string& msg) {
  std::string one_line = msg;
  for (auto& ch : one_line)
    if (ch == '\n') ch = ' ';
  std::cerr << "error[" << code << "]: " << one_line << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-particle holonomies in coupled-mode waveguide systems"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Run configuration (JSON)");
  app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { g.seed = s; g.seed_given = true; },
                                         "Master random seed (default 20260101)");
  app.add_option("--out-dir", g.out_dir, "Directory for reports (default .)");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1u, 256u));

  // evolve
  auto* evolve_cmd = app.add_subcommand("evolve", "Single-particle propagator as JSON");
  double delta = 0.0, length = 0.0;
  auto* delta_opt = evolve_cmd->add_option("--delta", delta, "Accumulated phase in rad");
  auto* length_opt = evolve_cmd->add_option("--length", length,
                                            "Structure length in mm (preset) or end position (explicit system)");
  delta_opt->excludes(length_opt);

  // enumerate
  auto* enum_cmd = app.add_subcommand("enumerate", "Count and check all cyclic subspaces");
  int particles = 2;
  std::string enum_type = "boson";
  std::size_t cap = 4096;
  std::uint64_t resume = 1;
  enum_cmd->add_option("--particles", particles, "Particle number")->check(CLI::Range(0, 12));
  enum_cmd->add_option("--type", enum_type, "boson, fermion or distinguishable");
  enum_cmd->add_option("--cap", cap, "Maximum number of cyclic subspaces to check");
  enum_cmd->add_option("--resume", resume, "Resume token from a partial report");

  // check
  auto* check_cmd = app.add_subcommand("check", "Cyclicity, K and holonomy of one subspace");
  SubspaceArgs check_sub;
  add_subspace_options(check_cmd, check_sub);

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "Success probability against structure length");
  SubspaceArgs scan_sub;
  LengthArgs scan_len;
  std::string scan_mode = "theory", prep = "direct", only_inputs, detection_name;
  std::uint64_t trials = 100000;
  add_subspace_options(scan_cmd, scan_sub);
  add_length_options(scan_cmd, scan_len);
  scan_cmd->add_option("--mode", scan_mode, "theory or synthetic");
  scan_cmd->add_option("--prep", prep, "direct, dist or hom[:visibility]");
  scan_cmd->add_option("--inputs", only_inputs, "Comma-separated input states (default: all members)");
  scan_cmd->add_option("--trials", trials, "Events per point for synthetic scans");
  scan_cmd->add_option("--detection", detection_name, "calibrated (default) or ideal");

  // plateau
  auto* plateau_cmd = app.add_subcommand("plateau", "Plateau widths of a scan or of the reference table");
  SubspaceArgs plat_sub;
  LengthArgs plat_len;
  std::string rule = "theory", plat_prep = "direct";
  bool table = false, restrict_80_100 = false;
  add_subspace_options(plateau_cmd, plat_sub);
  add_length_options(plateau_cmd, plat_len);
  plateau_cmd->add_option("--rule", rule, "theory or experimental");
  plateau_cmd->add_option("--prep", plat_prep, "direct, dist or hom[:visibility]");
  plateau_cmd->add_flag("--restricted", restrict_80_100, "Clip theory plateaus to 80-100 mm");
  plateau_cmd->add_flag("--table-s2", table, "Recompute every reference row and compare");

  // simulate-counts
  auto* sim_cmd = app.add_subcommand("simulate-counts", "Synthetic detector counts as CSV");
  SubspaceArgs sim_sub;
  LengthArgs sim_len;
  std::string sim_prep = "direct", sim_inputs, sim_detection;
  std::uint64_t sim_trials = 100000;
  add_subspace_options(sim_cmd, sim_sub);
  add_length_options(sim_cmd, sim_len);
  sim_cmd->add_option("--prep", sim_prep, "direct, dist or hom[:visibility]");
  sim_cmd->add_option("--inputs", sim_inputs, "Comma-separated input states");
  sim_cmd->add_option("--trials", sim_trials, "Events per point");
  sim_cmd->add_option("--detection", sim_detection, "calibrated (default) or ideal");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Post-selected probabilities from a counts CSV");
  SubspaceArgs ing_sub;
  std::string counts_file, ing_detection;
  add_subspace_options(ingest_cmd, ing_sub);
  ingest_cmd->add_option("--counts", counts_file, "Counts CSV")->required();
  ingest_cmd->add_option("--detection", ing_detection, "calibrated (default) or ideal");

  // fidelity
  auto* fid_cmd = app.add_subcommand("fidelity", "Bhattacharyya fidelity of two distributions");
  std::string p_theory, p_exp;
  fid_cmd->add_option("--theory", p_theory, "Comma-separated probabilities")->required();
  fid_cmd->add_option("--exp", p_exp, "Comma-separated probabilities")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("config", e.what());
    return 2;
  }

  try {
    const RunConfig cfg = load_config(g);

    if (*evolve_cmd) {
      EvolutionOperator op;
      if (*delta_opt) {
        require(cfg.system.commuting_family(), ErrorCode::config,
                "--delta needs a commuting system; use --length");
        op.u = Matrix::Identity(cfg.system.mode_count(), cfg.system.mode_count());
        for (const auto& t : cfg.system.terms()) op.u = propagator_at_phase(t.pattern, delta) * op.u;
        op.phase = delta;
      } else if (cfg.preset) {
        const auto sys = paper_structure(*length_opt ? length : cfg.calibration.ideal_length_mm, cfg.calibration);
        op = evolve(sys, 0.0, sys.length());
      } else {
        op = evolve(cfg.system, 0.0, *length_opt ? length : cfg.system.length());
      }
      Json j{{"phase_rad", op.phase}, {"u", matrix_to_json(op.u)}};
      const auto text = dump_json(j);
      std::cout << text;
      if (!g.out_dir.empty()) write_text_file(out_path(cfg, "evolution.json"), text);
      return 0;
    }

    if (*enum_cmd) {
      const auto type = parse_statistics(enum_type) == Statistics::distinguishable
                            ? ParticleType::distinguishable([&] {
                                std::vector<std::string> l;
                                for (int i = 0; i < particles; ++i) l.emplace_back(1, static_cast<char>('a' + i));
                                return l;
                              }())
                            : ParticleType{parse_statistics(enum_type), {}};
      const auto basis = enumerate_basis(cfg.system.mode_count(), particles, type);
      EnumerationOptions opts;
      opts.cap = cap;
      opts.resume_token = resume;
      opts.jobs = g.jobs;
      auto write = [&](const EnumerationReport& r) {
        write_text_file(out_path(cfg, "enumeration_report.json"), report_json(r));
        write_text_file(out_path(cfg, "enumeration_summary.csv"), report_csv(r));
      };
      try {
        const auto r = enumerate_holonomic(cfg.system, basis, opts);
        write(r);
        std::cout << r.counts.total << " total, " << r.counts.cyclic << " cyclic, " << r.holonomic
                  << " holonomic (" << r.holonomic_multi << " with dim >= 2: " << r.scalar << " scalar, "
                  << r.diagonal << " diagonal, " << r.non_scalar << " non_scalar)\n";
      } catch (const CapExceededError& e) {
        write(e.partial_report());
        throw;
      }
      return 0;
    }

    if (*check_cmd) {
      const auto sub = load_subspace(cfg, check_sub);
      Json j;
      j["subspace"] = subspace_to_json(sub);
      const auto cyc = is_cyclic(sub, cfg.system);
      j["cyclic"] = cyc.cyclic;
      j["projector_residual"] = cyc.residual;
      std::cout << "subspace " << sub.describe() << "\ncyclic: " << (cyc.cyclic ? "yes" : "no") << "\n";
      auto finish = [&](Json& doc) {
        if (!g.out_dir.empty() || cfg.doc.contains("out_dir"))
          write_text_file(out_path(cfg, "check.json"), dump_json(doc));
      };
      try {
        const auto h = extract_holonomy(sub, cfg.system);
        j["holonomic"] = true;
        j["max_K"] = h.max_K;
        j["holonomy"] = matrix_to_json(h.u);
        j["class"] = std::string(to_string(h.cls));
        std::cout << "max|K|: " << h.max_K << "\nholonomic: yes\nclass: " << to_string(h.cls)
                  << "\nholonomy:\n";
        print_matrix(h.u);
        finish(j);
        return 0;
      } catch (const NotHolonomicError& e) {
        j["holonomic"] = false;
        j["max_K"] = e.max_K();
        j["offending"] = Json{{"row", e.row()}, {"col", e.col()}, {"z_mm", e.z()},
                              {"value", complex_to_json(e.value())}};
        std::cout << "max|K|: " << e.max_K() << "\nholonomic: no\n";
        finish(j);
        throw;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::not_cyclic) finish(j);
        throw;
      }
    }

    if (*scan_cmd) {
      const auto sub = load_subspace(cfg, scan_sub);
      ScanOptions so;
      if (scan_mode == "synthetic")
        so.mode = ScanMode::synthetic;
      else if (scan_mode != "theory")
        fail(ErrorCode::config, "unknown scan mode '" + scan_mode + "'");
      if (cfg.doc.contains("trials") && trials == 100000) trials = cfg.doc["trials"].get<std::uint64_t>();
      so.trials = trials;
      so.seed = cfg.seed;
      so.jobs = g.jobs;
      if (so.mode == ScanMode::synthetic) so.detection = load_detection(cfg, sub.basis.mode_count(), detection_name);
      const auto r = scan(sub, inputs_for(sub, prep, only_inputs), family_of(cfg), load_lengths(cfg, scan_len), so);
      write_text_file(out_path(cfg, "scan_curves.csv"), curves_csv(r));
      write_text_file(out_path(cfg, "scan.json"), dump_json(scan_json(r)));
      std::cout << curves_csv(r);
      return 0;
    }

    if (*plateau_cmd) {
      if (table) {
        WidthOptions wo;
        wo.jobs = g.jobs;
        const auto rows = run_reference_rows(cfg.calibration, wo);
        std::cout << reference_table_text(rows);
        std::size_t ok = 0, total = 0;
        for (const auto& r : rows) {
          ok += r.pass_restricted + (r.calibration_anchor ? 0 : r.pass_unrestricted);
          total += r.calibration_anchor ? 1 : 2;
        }
        std::cout << ok << "/" << total << " theory widths within max(15%, 1.5 mm)\n";
        write_text_file(out_path(cfg, "reference_table.json"), reference_table_json(rows, cfg.calibration));
        return 0;
      }
      const auto sub = load_subspace(cfg, plat_sub);
      PlateauRule pr;
      std::vector<double> lengths;
      if (rule == "theory") {
        pr = PlateauRule::theory(restrict_80_100 ? std::optional(std::pair(80.0, 100.0)) : std::nullopt,
                                 family_of(cfg).ideal_length_mm);
        lengths = plat_len.step > 0 ? load_lengths(cfg, plat_len) : length_grid(60.0, 120.0, 0.01);
      } else if (rule == "experimental") {
        pr = PlateauRule::experimental();
        lengths = load_lengths(cfg, plat_len);
      } else {
        fail(ErrorCode::config, "unknown plateau rule '" + rule + "'");
      }
      ScanOptions so;
      so.jobs = g.jobs;
      const auto r = scan(sub, inputs_for(sub, plat_prep, ""), family_of(cfg), lengths, so);
      const auto rep = plateau_width(r, pr);
      write_text_file(out_path(cfg, "plateau.json"), dump_json(plateau_json(rep)));
      for (std::size_t i = 0; i < rep.inputs.size(); ++i)
        std::printf("%s: %.3f mm [%.3f, %.3f]\n", rep.inputs[i].c_str(), rep.plateaus[i].width,
                    rep.plateaus[i].start, rep.plateaus[i].end);
      std::printf("mean plateau width: %.3f mm (%s)\n", rep.mean_width, rep.rule.c_str());
      return 0;
    }

    if (*sim_cmd) {
      const auto sub = load_subspace(cfg, sim_sub);
      const auto model = load_detection(cfg, sub.basis.mode_count(), sim_detection);
      const auto table_out = simulate_counts(sub, inputs_for(sub, sim_prep, sim_inputs), family_of(cfg),
                                             load_lengths(cfg, sim_len), model, sim_trials, cfg.seed, g.jobs);
      const auto csv = export_counts_csv(table_out);
      write_text_file(out_path(cfg, "counts.csv"), csv);
      std::cout << "wrote " << table_out.points.size() << " points to " << out_path(cfg, "counts.csv") << "\n";
      return 0;
    }

    if (*ingest_cmd) {
      const auto sub = load_subspace(cfg, ing_sub);
      const auto model = load_detection(cfg, sub.basis.mode_count(), ing_detection);
      const auto fam = family_of(cfg);
      const auto r = ingest_counts(counts_file, sub, model, fam.propagator(fam.ideal_length_mm));
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      write_text_file(out_path(cfg, "ingested.json"), dump_json(scan_json(r)));
      std::cout << curves_csv(r);
      return 0;
    }

    if (*fid_cmd) {
      auto parse = [](const std::string& s) {
        std::vector<double> v;
        for (const auto& x : split_list(s)) {
          std::size_t used = 0;
          double d = 0;
          try {
            d = std::stod(x, &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used != x.size() || x.empty()) fail(ErrorCode::config, "cannot read probability '" + x + "'");
          v.push_back(d);
        }
        return v;
      };
      std::cout << format_double(fidelity(parse(p_theory), parse(p_exp))) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    report_error(to_string(e.code()), e.what());
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    report_error("config", e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 1;
  }
  return 0;
}
