// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/fock.hpp"

#include "mph/error.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <numeric>

namespace mph {

std::string_view to_string(Statistics s) {
  switch (s) {
    case Statistics::boson: return "boson";
    case Statistics::fermion: return "fermion";
    case Statistics::distinguishable: return "distinguishable";
  }
  return "unknown";
}

Statistics parse_statistics(std::string_view name) {
  if (name == "boson" || name == "bosons") return Statistics::boson;
  if (name == "fermion" || name == "fermions") return Statistics::fermion;
  if (name == "distinguishable" || name == "dist") return Statistics::distinguishable;
  fail(ErrorCode::invalid_argument, "unknown particle type '" + std::string(name) + "'");
}

ParticleType ParticleType::distinguishable(std::vector<std::string> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(!labels[i].empty(), ErrorCode::invalid_argument, "empty particle label");
    for (std::size_t j = 0; j < i; ++j)
      require(labels[i] != labels[j], ErrorCode::invalid_argument,
              "duplicate particle label '" + labels[i] + "'");
  }
  return {Statistics::distinguishable, std::move(labels)};
}

namespace {

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.emplace_back(1, static_cast<char>('a' + i));
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double occupation_norm(const OccupationState& s) {
  if (s.kind() != Statistics::boson) return 1.0;
  double f = 1.0;
  for (int n : s.values()) f *= factorial(n);
  return f;
}

}  // namespace

OccupationState::OccupationState(Statistics kind, int mode_count, std::vector<int> values)
    : kind_(kind), mode_count_(mode_count), values_(std::move(values)) {
  require(mode_count_ >= 1, ErrorCode::invalid_argument, "mode count must be positive");
  if (kind_ == Statistics::distinguishable) {
    for (int m : values_)
      require(m >= 0 && m < mode_count_, ErrorCode::invalid_argument,
              "labeled particle mode out of range");
    return;
  }
  require(static_cast<int>(values_.size()) == mode_count_, ErrorCode::invalid_argument,
          "occupation vector length must equal the mode count");
  for (int n : values_) {
    require(n >= 0, ErrorCode::invalid_argument, "negative occupation");
    if (kind_ == Statistics::fermion)
      require(n <= 1, ErrorCode::invalid_state, "fermionic occupation above one");
  }
}

OccupationState OccupationState::from_counts(Statistics kind, std::vector<int> counts) {
  const int m = static_cast<int>(counts.size());
  return OccupationState(kind, m, std::move(counts));
}

OccupationState OccupationState::labeled(int mode_count, std::vector<int> modes) {
  return OccupationState(Statistics::distinguishable, mode_count, std::move(modes));
}

int OccupationState::particle_count() const {
  if (kind_ == Statistics::distinguishable) return static_cast<int>(values_.size());
  return std::accumulate(values_.begin(), values_.end(), 0);
}

std::vector<int> OccupationState::mode_list() const {
  if (kind_ == Statistics::distinguishable) return values_;
  std::vector<int> modes;
  for (int k = 0; k < mode_count_; ++k)
    for (int c = 0; c < values_[k]; ++c) modes.push_back(k);
  return modes;
}

std::vector<int> OccupationState::counts() const {
  if (kind_ != Statistics::distinguishable) return values_;
  std::vector<int> c(mode_count_, 0);
  for (int m : values_) ++c[m];
  return c;
}

std::string OccupationState::to_string(std::span<const std::string> labels) const {
  std::string out;
  if (kind_ != Statistics::distinguishable) {
    for (int n : values_) out += std::to_string(n);
    return out;
  }
  const auto names = labels.empty() ? default_labels(static_cast<int>(values_.size()))
                                    : std::vector<std::string>(labels.begin(), labels.end());
  for (std::size_t l = 0; l < values_.size(); ++l)
    out += names.at(l) + std::to_string(values_[l] + 1);
  return out;
}

OccupationState parse_state(std::string_view text, const ParticleType& type, int mode_count) {
  auto bad = [&](const std::string& why) {
    fail(ErrorCode::parse, "cannot parse state '" + std::string(text) + "': " + why);
  };
  if (type.kind != Statistics::distinguishable) {
    std::vector<int> counts;
    for (char c : text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) bad("expected one digit per mode");
      counts.push_back(c - '0');
    }
    if (static_cast<int>(counts.size()) != mode_count) bad("wrong number of modes");
    return OccupationState(type.kind, mode_count, std::move(counts));
  }
  const auto labels = type.labels;
  std::vector<int> modes(labels.size(), -1);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t start = pos;
    while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
    std::string name(text.substr(start, pos - start));
    start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (name.empty() || start == pos) bad("expected <label><mode> pairs");
    const int mode = std::stoi(std::string(text.substr(start, pos - start)));
    auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end()) bad("unknown label '" + name + "'");
    auto& slot = modes[static_cast<std::size_t>(it - labels.begin())];
    if (slot != -1) bad("label '" + name + "' given twice");
    if (mode < 1 || mode > mode_count) bad("mode out of range");
    slot = mode - 1;
  }
  for (int m : modes)
    if (m < 0) bad("every label needs a mode");
  return OccupationState::labeled(mode_count, std::move(modes));
}

FockBasis::FockBasis(ParticleType type, int mode_count, int particle_count,
                     std::vector<OccupationState> states)
    : type_(std::move(type)), modes_(mode_count), particles_(particle_count),
      states_(std::move(states)) {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    require(states_[i].kind() == type_.kind && states_[i].mode_count() == modes_ &&
                states_[i].particle_count() == particles_,
            ErrorCode::invalid_argument, "basis state does not match the basis");
    const bool fresh = index_.emplace(states_[i].values(), i).second;
    require(fresh, ErrorCode::invalid_argument, "duplicate basis state");
  }
}

std::optional<std::size_t> FockBasis::index_of(const OccupationState& s) const {
  if (s.kind() != type_.kind || s.mode_count() != modes_) return std::nullopt;
  auto it = index_.find(s.values());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FockBasis::require_index(const OccupationState& s) const {
  auto idx = index_of(s);
  require(idx.has_value(), ErrorCode::invalid_argument,
          "state " + s.to_string(type_.labels) + " is not in the basis");
  return *idx;
}

namespace {

void compositions(int mode, int remaining, int cap, std::vector<int>& cur,
                  std::vector<OccupationState>& out, Statistics kind) {
  const int m = static_cast<int>(cur.size());
  if (mode == m - 1) {
    if (remaining <= cap) {
      cur[mode] = remaining;
      out.emplace_back(kind, m, cur);
    }
    return;
  }
  for (int n = std::min(remaining, cap); n >= 0; --n) {
    cur[mode] = n;
    compositions(mode + 1, remaining - n, cap, cur, out, kind);
  }
}

}  // namespace

FockBasis enumerate_basis(int mode_count, int particle_count, const ParticleType& type) {
  require(mode_count >= 1, ErrorCode::invalid_argument, "mode count must be at least 1");
  require(particle_count >= 0, ErrorCode::invalid_argument, "particle count must be non-negative");
  std::vector<OccupationState> states;
  ParticleType t = type;
  switch (type.kind) {
    case Statistics::boson:
    case Statistics::fermion: {
      const bool fermion = type.kind == Statistics::fermion;
      require(!fermion || particle_count <= mode_count, ErrorCode::invalid_argument,
              "fermions need at least as many modes as particles");
      std::vector<int> cur(mode_count, 0);
      compositions(0, particle_count, fermion ? 1 : particle_count, cur, states, type.kind);
      break;
    }
    case Statistics::distinguishable: {
      if (t.labels.empty()) t.labels = default_labels(particle_count);
      require(static_cast<int>(t.labels.size()) == particle_count, ErrorCode::invalid_argument,
              "distinguishable particles need one label per particle");
      double total = 1.0;
      for (int i = 0; i < particle_count; ++i) total *= mode_count;
      require(total <= 1 << 20, ErrorCode::invalid_argument, "distinguishable basis too large");
      std::vector<int> cur(particle_count, 0);
      while (true) {
        states.push_back(OccupationState::labeled(mode_count, cur));
        int p = particle_count - 1;
        while (p >= 0 && ++cur[p] == mode_count) cur[p--] = 0;
        if (p < 0) break;
      }
      break;
    }
  }
  return FockBasis(std::move(t), mode_count, particle_count, std::move(states));
}

complex permanent(const Matrix& m) {
  require(m.rows() == m.cols(), ErrorCode::invalid_argument, "permanent needs a square matrix");
  const int n = static_cast<int>(m.rows());
  require(n <= kMaxPermanentSize, ErrorCode::invalid_argument,
          "permanent size " + std::to_string(n) + " exceeds the cap of " +
              std::to_string(kMaxPermanentSize));
  if (n == 0) return 1.0;
  std::vector<complex> row_sums(n, 0.0);
  complex total = 0.0;
  std::uint64_t prev = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t diff = gray ^ prev;
    const int col = std::countr_zero(diff);
    const bool added = (gray & diff) != 0;
    for (int i = 0; i < n; ++i) row_sums[i] += added ? m(i, col) : -m(i, col);
    complex prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= row_sums[i];
    total += (std::popcount(gray) & 1) ? -prod : prod;
    prev = gray;
  }
  return (n & 1) ? -total : total;
}

Matrix restrict(const Matrix& m, std::span<const int> rows, std::span<const int> cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
  return out;
}

namespace {

void check_single_particle_unitary(const Matrix& u, const FockBasis& basis) {
  require(u.rows() == basis.mode_count() && u.cols() == basis.mode_count(),
          ErrorCode::precondition, "single-particle matrix does not match the mode count");
  require(is_unitary(u, 1e-10), ErrorCode::precondition,
          "single-particle matrix is not unitary within 1e-10");
}

complex determinant(const Matrix& m) {
  if (m.rows() == 0) return 1.0;
  return m.determinant();
}

}  // namespace

complex lifted_amplitude(const Matrix& u, const OccupationState& out, const OccupationState& in) {
  require(out.kind() == in.kind() && out.particle_count() == in.particle_count(),
          ErrorCode::invalid_argument, "states belong to different bases");
  if (in.kind() == Statistics::distinguishable) {
    complex amp = 1.0;
    for (std::size_t l = 0; l < in.values().size(); ++l)
      amp *= u(out.values()[l], in.values()[l]);
    return amp;
  }
  const auto rows = out.mode_list();
  const auto cols = in.mode_list();
  Matrix sub = restrict(u, rows, cols);
  if (in.kind() == Statistics::fermion) return determinant(sub);
  return permanent(sub) / std::sqrt(occupation_norm(out) * occupation_norm(in));
}

double classical_transition_probability(const Matrix& u, const OccupationState& out,
                                        const OccupationState& in) {
  require(out.particle_count() == in.particle_count(), ErrorCode::invalid_argument,
          "states have different particle numbers");
  const auto rows = out.mode_list();
  std::vector<int> sorted_rows = rows;
  std::sort(sorted_rows.begin(), sorted_rows.end());
  Matrix sub = restrict(u, sorted_rows, in.mode_list());
  Matrix weights = sub.cwiseAbs2().cast<complex>();
  double norm = 1.0;
  for (int n : out.counts()) norm *= factorial(n);
  return permanent(weights).real() / norm;
}

Matrix lift_unitary(const Matrix& u, const FockBasis& basis) {
  if (basis.kind() == Statistics::distinguishable) {
    std::vector<Matrix> same(static_cast<std::size_t>(basis.particle_count()), u);
    return lift_unitary(same, basis);
  }
  check_single_particle_unitary(u, basis);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Matrix v(dim, dim);
  std::vector<std::vector<int>> modes;
  std::vector<double> norms;
  for (const auto& s : basis.states()) {
    modes.push_back(s.mode_list());
    norms.push_back(occupation_norm(s));
  }
  const bool fermion = basis.kind() == Statistics::fermion;
  for (Eigen::Index in = 0; in < dim; ++in) {
    for (Eigen::Index out = 0; out < dim; ++out) {
      Matrix sub = restrict(u, modes[out], modes[in]);
      v(out, in) = fermion ? determinant(sub)
                           : permanent(sub) / std::sqrt(norms[out] * norms[in]);
    }
  }
  return v;
}

Matrix lift_unitary(std::span<const Matrix> per_label, const FockBasis& basis) {
  require(basis.kind() == Statistics::distinguishable, ErrorCode::invalid_argument,
          "per-label lifting needs a distinguishable basis");
  require(static_cast<int>(per_label.size()) == basis.particle_count(),
          ErrorCode::invalid_argument, "one unitary per label is required");
  for (const auto& u : per_label) check_single_particle_unitary(u, basis);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Matrix v(dim, dim);
  for (Eigen::Index in = 0; in < dim; ++in) {
    const auto& src = basis[in].values();
    for (Eigen::Index out = 0; out < dim; ++out) {
      const auto& dst = basis[out].values();
      complex amp = 1.0;
      for (std::size_t l = 0; l < src.size(); ++l) amp *= per_label[l](dst[l], src[l]);
      v(out, in) = amp;
    }
  }
  return v;
}

Matrix lift_hamiltonian(const Matrix& h, const FockBasis& basis) {
  const int m = basis.mode_count();
  require(h.rows() == m && h.cols() == m, ErrorCode::precondition,
          "single-particle matrix does not match the mode count");
  require(is_hermitian(h, 1e-12), ErrorCode::precondition,
          "single-particle matrix is not Hermitian within 1e-12");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto& src = basis[col];
    switch (basis.kind()) {
      case Statistics::boson: {
        for (int j = 0; j < m; ++j) {
          if (src.values()[j] == 0) continue;
          for (int k = 0; k < m; ++k) {
            if (h(k, j) == 0.0) continue;
            std::vector<int> n = src.values();
            double amp = std::sqrt(static_cast<double>(n[j]));
            --n[j];
            amp *= std::sqrt(static_cast<double>(n[k] + 1));
            ++n[k];
            out(basis.require_index(OccupationState(Statistics::boson, m, std::move(n))), col) +=
                h(k, j) * amp;
          }
        }
        break;
      }
      case Statistics::fermion: {
        for (int j = 0; j < m; ++j) {
          if (src.values()[j] == 0) continue;
          for (int k = 0; k < m; ++k) {
            if (h(k, j) == 0.0) continue;
            std::vector<int> n = src.values();
            int sign = (std::accumulate(n.begin(), n.begin() + j, 0) & 1) ? -1 : 1;
            n[j] = 0;
            if (n[k] == 1) continue;
            sign *= (std::accumulate(n.begin(), n.begin() + k, 0) & 1) ? -1 : 1;
            n[k] = 1;
            out(basis.require_index(OccupationState(Statistics::fermion, m, std::move(n))), col) +=
                static_cast<double>(sign) * h(k, j);
          }
        }
        break;
      }
      case Statistics::distinguishable: {
        for (std::size_t l = 0; l < src.values().size(); ++l) {
          const int j = src.values()[l];
          for (int k = 0; k < m; ++k) {
            if (h(k, j) == 0.0) continue;
            std::vector<int> modes = src.values();
            modes[l] = k;
            out(basis.require_index(OccupationState::labeled(m, std::move(modes))), col) += h(k, j);
          }
        }
        break;
      }
    }
  }
  return out;
}

namespace {

complex vacuum_expectation_rec(std::vector<const LadderFactor*> seq, Statistics kind) {
  if (seq.empty()) return 1.0;
  if (!seq.back()->dagger) return 0.0;
  if (seq.front()->dagger) return 0.0;
  // Rightmost annihilator; everything after it is a creator.
  std::size_t i = seq.size() - 1;
  while (seq[i]->dagger) --i;
  const LadderFactor& ann = *seq[i];
  const LadderFactor& cre = *seq[i + 1];
  const bool same_species = kind != Statistics::distinguishable || ann.label == cre.label;
  const double swap_sign = (kind == Statistics::fermion) ? -1.0 : 1.0;

  complex result = 0.0;
  if (same_species) {
    const complex contraction = ann.mode.dot(cre.mode);  // sum conj(v) w
    if (contraction != 0.0) {
      auto reduced = seq;
      reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(i),
                    reduced.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      result += contraction * vacuum_expectation_rec(std::move(reduced), kind);
    }
  }
  std::swap(seq[i], seq[i + 1]);
  result += (same_species ? swap_sign : 1.0) * vacuum_expectation_rec(std::move(seq), kind);
  return result;
}

}  // namespace

complex vacuum_expectation(std::span<const LadderFactor> factors, Statistics kind) {
  require(factors.size() <= 12, ErrorCode::invalid_argument,
          "vacuum expectation supports at most 12 factors");
  if (!factors.empty()) {
    const auto dim = factors.front().mode.size();
    for (const auto& f : factors)
      require(f.mode.size() == dim, ErrorCode::invalid_argument,
              "all ladder factors need the same mode dimension");
  }
  const auto creators = std::count_if(factors.begin(), factors.end(),
                                      [](const LadderFactor& f) { return f.dagger; });
  if (2 * static_cast<std::size_t>(creators) != factors.size()) return 0.0;
  std::vector<const LadderFactor*> seq;
  for (const auto& f : factors) seq.push_back(&f);
  return vacuum_expectation_rec(std::move(seq), kind);
}

}  // namespace mph
