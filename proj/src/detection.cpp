// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/experiment.hpp"

#include "mph/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace mph {

DetectionModel DetectionModel::ideal(int ports) {
  return {std::vector<double>(static_cast<std::size_t>(ports), 0.5), 0.0};
}

DetectionModel DetectionModel::calibrated() { return {{0.5130, 0.5736, 0.4419, 0.4751}, 0.0}; }

void DetectionModel::validate(int ports) const {
  require(static_cast<int>(ratios.size()) == ports, ErrorCode::invalid_argument,
          "invalid detection model: need one splitter ratio per output port");
  for (double r : ratios)
    require(r > 0.0 && r < 1.0, ErrorCode::invalid_argument,
            "invalid detection model: splitter ratios must lie strictly inside (0, 1)");
  require(dark_counts >= 0.0, ErrorCode::invalid_argument,
          "invalid detection model: dark counts must be non-negative");
}

std::vector<Channel> detection_channels(const FockBasis& basis, const DetectionModel& model) {
  std::vector<Channel> out;
  const int n = basis.particle_count();
  if (basis.kind() == Statistics::distinguishable) {
    const auto& labels = basis.particle_type().labels;
    for (std::size_t s = 0; s < basis.size(); ++s) {
      std::string name;
      for (std::size_t l = 0; l < labels.size(); ++l)
        name += (l ? "|" : "") + labels[l] + std::to_string(basis[s].values()[l] + 1);
      out.push_back({name, s, 1.0});
    }
    return out;
  }
  model.validate(basis.mode_count());
  const auto& r = model.ratios;
  auto det = [](int port, bool first) { return std::to_string(port + 1) + (first ? "a" : "b"); };
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const auto modes = basis[s].mode_list();
    if (n == 1) {
      const int k = modes[0];
      out.push_back({det(k, true), s, r[k]});
      out.push_back({det(k, false), s, 1.0 - r[k]});
    } else if (n == 2 && modes[0] == modes[1]) {
      const int k = modes[0];
      out.push_back({det(k, true) + "|" + det(k, false), s, 2.0 * r[k] * (1.0 - r[k])});
    } else if (n == 2) {
      const int j = modes[0], k = modes[1];
      for (bool fj : {true, false})
        for (bool fk : {true, false})
          out.push_back({det(j, fj) + "|" + det(k, fk), s,
                         (fj ? r[j] : 1.0 - r[j]) * (fk ? r[k] : 1.0 - r[k])});
    } else {
      fail(ErrorCode::unsupported_structure,
           "detection is modelled for one or two particles only");
    }
  }
  return out;
}

std::vector<double> detect(const std::vector<double>& state_probabilities, const FockBasis& basis,
                           const DetectionModel& model) {
  require(state_probabilities.size() == basis.size(), ErrorCode::invalid_argument,
          "distribution does not match the basis");
  double total = 0.0;
  for (double p : state_probabilities) {
    require(p >= -1e-12, ErrorCode::invalid_argument, "negative probability");
    total += p;
  }
  require(std::abs(total - 1.0) < 1e-9, ErrorCode::invalid_argument,
          "distribution is not normalized within 1e-9");
  const auto channels = detection_channels(basis, model);
  std::vector<double> out;
  for (const auto& c : channels) out.push_back(state_probabilities[c.state] * c.probability);
  return out;
}

std::vector<double> estimate_states(const std::vector<double>& channel_counts,
                                    const FockBasis& basis, const DetectionModel& model) {
  const auto channels = detection_channels(basis, model);
  require(channel_counts.size() == channels.size(), ErrorCode::invalid_argument,
          "counts do not match the detection channels");
  std::vector<double> sum(basis.size(), 0.0), eff(basis.size(), 0.0);
  for (std::size_t c = 0; c < channels.size(); ++c) {
    sum[channels[c].state] += channel_counts[c];
    eff[channels[c].state] += channels[c].probability;
  }
  for (std::size_t s = 0; s < sum.size(); ++s) sum[s] /= eff[s];
  return sum;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::size_t input, std::size_t length) {
  return splitmix64(splitmix64(master ^ splitmix64(input + 1)) + length);
}

}  // namespace

CountTable simulate_counts(const Subspace& sub, const std::vector<InputSpec>& inputs,
                           const StructureFamily& family, const std::vector<double>& lengths,
                           const DetectionModel& model, std::uint64_t trials, std::uint64_t seed,
                           unsigned jobs) {
  require(trials > 0, ErrorCode::invalid_argument, "synthetic counts need trials > 0");
  require(!lengths.empty() && !inputs.empty(), ErrorCode::invalid_argument,
          "need at least one input and one length");
  const auto channels = detection_channels(sub.basis, model);
  CountTable table;
  for (const auto& c : channels) table.channel_names.push_back(c.name);
  table.points.resize(inputs.size() * lengths.size());
  parallel_for(lengths.size(), jobs, [&](std::size_t li) {
    const Matrix u = family.propagator(lengths[li]);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const auto dist = outcome_distribution(sub, inputs[i], u);
      const auto probs = detect(dist, sub.basis, model);
      std::mt19937_64 rng(stream_seed(seed, i, li));
      auto& pt = table.points[i * lengths.size() + li];
      pt.structure_id = "S" + std::to_string(li + 1);
      pt.length_mm = lengths[li];
      pt.input = inputs[i].state.to_string(sub.basis.particle_type().labels);
      pt.counts.resize(channels.size());
      for (std::size_t c = 0; c < channels.size(); ++c) {
        const double mean = static_cast<double>(trials) * std::max(probs[c], 0.0) + model.dark_counts;
        if (mean <= 0.0) {
          pt.counts[c] = 0.0;
          continue;
        }
        std::poisson_distribution<long long> poisson(mean);
        pt.counts[c] = static_cast<double>(poisson(rng));
      }
    }
  });
  return table;
}

ScanResult estimate_from_counts(const CountTable& counts, const Subspace& sub,
                                const DetectionModel& model, const Matrix& u_ideal, ScanMode mode) {
  const auto channels = detection_channels(sub.basis, model);
  require(counts.channel_names.size() == channels.size(), ErrorCode::invalid_argument,
          "count table does not match the detection channels");
  for (std::size_t c = 0; c < channels.size(); ++c)
    require(counts.channel_names[c] == channels[c].name, ErrorCode::invalid_argument,
            "count table channel order does not match the detection model");
  std::vector<double> eff(sub.basis.size(), 0.0);
  for (const auto& c : channels) eff[c.state] += c.probability;

  ScanResult result;
  result.mode = mode;
  result.subspace = sub.describe();
  std::map<std::string, std::size_t> curve_of;
  for (const auto& pt : counts.points) {
    InputSpec in{parse_state(pt.input, sub.basis.particle_type(), sub.basis.mode_count()), {}};
    const std::size_t target = sub.members[target_member(sub, in, u_ideal)];
    std::vector<bool> member(sub.basis.size(), false);
    for (auto m : sub.members) member[m] = true;
    double S = 0.0, F = 0.0, varS = 0.0, varF = 0.0;
    for (std::size_t c = 0; c < channels.size(); ++c) {
      const std::size_t s = channels[c].state;
      if (!member[s]) continue;
      const double n = pt.counts[c];
      const double e = eff[s];
      if (s == target) {
        S += n / e;
        varS += n / (e * e);
      } else {
        F += n / e;
        varF += n / (e * e);
      }
    }
    ScanPoint sp;
    sp.length_mm = pt.length_mm;
    const double T = S + F;
    if (T > 0.0) {
      sp.p = S / T;
      const double dS = F / (T * T), dF = S / (T * T);
      sp.sigma = std::sqrt(dS * dS * varS + dF * dF * varF);
    } else {
      sp.defined = false;
      sp.p = std::numeric_limits<double>::quiet_NaN();
      sp.sigma = std::numeric_limits<double>::quiet_NaN();
    }
    auto [it, fresh] = curve_of.emplace(pt.input, result.curves.size());
    if (fresh) result.curves.push_back({pt.input, {}});
    result.curves[it->second].points.push_back(sp);
  }
  for (auto& c : result.curves)
    std::stable_sort(c.points.begin(), c.points.end(),
                     [](const ScanPoint& a, const ScanPoint& b) { return a.length_mm < b.length_mm; });
  return result;
}

}  // namespace mph
