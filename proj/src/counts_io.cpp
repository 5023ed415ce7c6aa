// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/experiment.hpp"

#include "mph/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

namespace mph {

namespace {

constexpr const char* kHeader = "structure_id,length_mm,input_state,detector_pair,counts";

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void row_error(std::size_t line, const std::string& why) {
  fail(ErrorCode::parse, "counts line " + std::to_string(line) + ": " + why);
}

double parse_number(const std::string& text, std::size_t line, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    row_error(line, std::string("cannot read ") + what + " '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v))
    row_error(line, std::string("cannot read ") + what + " '" + text + "'");
  return v;
}

}  // namespace

std::string export_counts_csv(const CountTable& counts) {
  std::string out = std::string(kHeader) + "\n";
  for (const auto& pt : counts.points)
    for (std::size_t c = 0; c < counts.channel_names.size(); ++c)
      out += pt.structure_id + "," + format_double(pt.length_mm) + "," + pt.input + "," +
             counts.channel_names[c] + "," + format_double(pt.counts[c]) + "\n";
  return out;
}

CountTable parse_counts_csv(const std::string& text, const Subspace& sub, const DetectionModel& model,
                            std::vector<std::string>* warnings) {
  const auto channels = detection_channels(sub.basis, model);
  CountTable table;
  std::map<std::string, std::size_t> channel_index;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    table.channel_names.push_back(channels[c].name);
    channel_index[channels[c].name] = c;
  }
  std::map<std::tuple<std::string, double, std::string>, std::size_t> point_index;
  std::vector<std::vector<bool>> seen;

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!header_seen) {
      auto fields = split_fields(line);
      std::string joined;
      for (std::size_t i = 0; i < fields.size(); ++i) joined += (i ? "," : "") + fields[i];
      if (joined != kHeader) row_error(lineno, std::string("expected header '") + kHeader + "'");
      header_seen = true;
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != 5) row_error(lineno, "expected 5 fields, found " + std::to_string(f.size()));
    if (f[0].empty()) row_error(lineno, "empty structure_id");
    const double length = parse_number(f[1], lineno, "length_mm");
    std::optional<OccupationState> state;
    try {
      state = parse_state(f[2], sub.basis.particle_type(), sub.basis.mode_count());
    } catch (const Error& e) {
      row_error(lineno, e.what());
    }
    if (!sub.basis.index_of(*state)) row_error(lineno, "input state '" + f[2] + "' not in the basis");
    auto ch = channel_index.find(f[3]);
    if (ch == channel_index.end()) row_error(lineno, "unknown detector pair '" + f[3] + "'");
    const double n = parse_number(f[4], lineno, "counts");
    if (n < 0.0) row_error(lineno, "negative counts");

    auto key = std::make_tuple(f[0], length, f[2]);
    auto [it, fresh] = point_index.emplace(key, table.points.size());
    if (fresh) {
      table.points.push_back({f[0], length, f[2], std::vector<double>(channels.size(), 0.0)});
      seen.emplace_back(channels.size(), false);
    }
    if (seen[it->second][ch->second]) row_error(lineno, "duplicate detector pair for this point");
    seen[it->second][ch->second] = true;
    table.points[it->second].counts[ch->second] = n;
  }
  if (table.points.empty() && warnings) warnings->push_back("no count rows found");
  return table;
}

ScanResult ingest_counts(const std::string& path, const Subspace& sub, const DetectionModel& model,
                         const Matrix& u_ideal) {
  std::vector<std::string> warnings;
  const auto table = parse_counts_csv(read_text_file(path), sub, model, &warnings);
  auto result = estimate_from_counts(table, sub, model, u_ideal, ScanMode::ingested);
  result.warnings = std::move(warnings);
  return result;
}

}  // namespace mph
