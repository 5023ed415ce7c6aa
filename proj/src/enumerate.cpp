// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#include "mph/enumerate.hpp"

#include "mph/io.hpp"
#include "mph/parallel.hpp"

#include <algorithm>
#include <sstream>

namespace mph {

OrbitDecomposition decompose_orbits(const Matrix& v, const FockBasis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  require(v.rows() == dim && v.cols() == dim, ErrorCode::invalid_argument,
          "lifted evolution does not match the basis");
  OrbitDecomposition out;
  out.image.resize(basis.size());
  out.phase.resize(basis.size());
  std::vector<bool> hit(basis.size(), false);
  for (Eigen::Index s = 0; s < dim; ++s) {
    Eigen::Index t = 0;
    v.col(s).cwiseAbs().maxCoeff(&t);
    const double leak = v.col(s).squaredNorm() - std::norm(v(t, s));
    if (std::abs(v(t, s)) < 1.0 - 1e-8 || leak > 1e-8 || hit[t])
      fail(ErrorCode::unsupported_structure,
           "end-of-cycle evolution does not permute the basis states (state " + basis.label(s) +
               "); use the projector test per subspace");
    hit[t] = true;
    out.image[s] = static_cast<std::size_t>(t);
    out.phase[s] = v(t, s);
  }
  std::vector<bool> seen(basis.size(), false);
  for (std::size_t s = 0; s < basis.size(); ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> orbit;
    for (std::size_t x = s; !seen[x]; x = out.image[x]) {
      seen[x] = true;
      orbit.push_back(x);
    }
    std::sort(orbit.begin(), orbit.end());
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

OrbitDecomposition decompose_orbits(const CoupledModeSystem& sys, const FockBasis& basis) {
  return decompose_orbits(lift_unitary(evolve(sys, 0.0, sys.length()).u, basis), basis);
}

SubspaceCounts count_subspaces(const FockBasis& basis, const OrbitDecomposition& orbits) {
  require(basis.size() >= 2, ErrorCode::invalid_argument,
          "subspace counting needs a basis of at least two states");
  require(basis.size() <= 63, ErrorCode::invalid_argument, "basis too large to count subsets");
  SubspaceCounts c;
  c.total = (std::uint64_t{1} << basis.size()) - 2;
  c.cyclic = (std::uint64_t{1} << orbits.orbits.size()) - 2;
  return c;
}

std::vector<const SubspaceRecord*> EnumerationReport::holonomic_records(std::size_t min_dim) const {
  std::vector<const SubspaceRecord*> out;
  for (const auto& r : records)
    if (r.holonomic && r.members.size() >= min_dim) out.push_back(&r);
  return out;
}

void sort_records(std::vector<SubspaceRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const SubspaceRecord& a, const SubspaceRecord& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });
}

EnumerationReport enumerate_holonomic(const CoupledModeSystem& sys, const FockBasis& basis,
                                      const EnumerationOptions& options) {
  const Matrix v = lift_unitary(evolve(sys, 0.0, sys.length()).u, basis);
  const auto orbits = decompose_orbits(v, basis);
  EnumerationReport report;
  report.type = basis.particle_type();
  report.modes = basis.mode_count();
  report.particles = basis.particle_count();
  report.counts = count_subspaces(basis, orbits);

  std::vector<std::size_t> all(basis.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const Subspace full(basis, all);
  const auto K = K_matrix(full, sys, uniform_grid(0.0, sys.length(), options.grid_points));
  const double tol = holonomic_tolerance(sys);

  const std::uint64_t last = report.counts.cyclic;  // masks 1 .. 2^k - 2
  const std::uint64_t first = std::max<std::uint64_t>(1, options.resume_token);
  const std::uint64_t remaining = first > last ? 0 : last - first + 1;
  const std::uint64_t todo = std::min<std::uint64_t>(remaining, options.cap);

  std::vector<SubspaceRecord> records(static_cast<std::size_t>(todo));
  parallel_for(records.size(), options.jobs, [&](std::size_t i) {
    const std::uint64_t mask = first + i;
    SubspaceRecord rec;
    for (std::size_t o = 0; o < orbits.orbits.size(); ++o)
      if (mask >> o & 1u)
        rec.members.insert(rec.members.end(), orbits.orbits[o].begin(), orbits.orbits[o].end());
    std::sort(rec.members.begin(), rec.members.end());
    for (auto m : rec.members) rec.labels.push_back(basis.label(m));
    for (const auto& k : K.K)
      for (auto a : rec.members)
        for (auto b : rec.members) rec.max_K = std::max(rec.max_K, std::abs(k(a, b)));
    rec.holonomic = rec.max_K < tol;
    if (rec.holonomic) {
      Matrix block(static_cast<Eigen::Index>(rec.members.size()),
                   static_cast<Eigen::Index>(rec.members.size()));
      for (std::size_t a = 0; a < rec.members.size(); ++a)
        for (std::size_t b = 0; b < rec.members.size(); ++b)
          block(a, b) = v(rec.members[a], rec.members[b]);
      rec.cls = classify(block);
    }
    records[i] = std::move(rec);
  });

  for (const auto& r : records) {
    if (!r.holonomic) continue;
    ++report.holonomic;
    if (r.members.size() < 2) continue;
    ++report.holonomic_multi;
    switch (*r.cls) {
      case HolonomyClass::scalar: ++report.scalar; break;
      case HolonomyClass::diagonal: ++report.diagonal; break;
      case HolonomyClass::non_scalar: ++report.non_scalar; break;
    }
  }
  sort_records(records);
  report.records = std::move(records);
  if (todo < remaining) {
    report.partial = true;
    report.resume_token = first + todo;
    std::ostringstream os;
    os << remaining << " cyclic subspaces exceed the cap of " << options.cap
       << "; resume with token " << report.resume_token;
    throw CapExceededError(os.str(), std::move(report));
  }
  return report;
}

std::string report_json(const EnumerationReport& report) {
  Json j;
  j["particle"] = std::string(to_string(report.type.kind));
  if (report.type.kind == Statistics::distinguishable) j["labels"] = report.type.labels;
  j["modes"] = report.modes;
  j["particles"] = report.particles;
  Json totals;
  totals["subspaces"] = report.counts.total;
  totals["cyclic"] = report.counts.cyclic;
  totals["holonomic"] = report.holonomic;
  totals["holonomic_dim_ge_2"] = report.holonomic_multi;
  totals["scalar"] = report.scalar;
  totals["diagonal"] = report.diagonal;
  totals["non_scalar"] = report.non_scalar;
  j["totals"] = totals;
  j["non_abelian_rule"] = "non_scalar";
  j["partial"] = report.partial;
  if (report.partial) j["resume_token"] = report.resume_token;
  Json recs = Json::array();
  for (const auto& r : report.records) {
    Json o;
    o["members"] = r.labels;
    o["dim"] = r.members.size();
    o["cyclic"] = r.cyclic;
    o["holonomic"] = r.holonomic;
    o["max_K"] = r.max_K;
    o["class"] = r.cls ? Json(std::string(to_string(*r.cls))) : Json(nullptr);
    if (r.plateau_width_mm) o["plateau_width_mm"] = *r.plateau_width_mm;
    recs.push_back(o);
  }
  j["records"] = recs;
  return dump_json(j);
}

std::string report_csv(const EnumerationReport& report) {
  std::string out = "members,cyclic,holonomic,class,max_K\n";
  for (const auto& r : report.records) {
    std::string members;
    for (std::size_t i = 0; i < r.labels.size(); ++i) members += (i ? " " : "") + r.labels[i];
    out += members + "," + (r.cyclic ? "true" : "false") + "," + (r.holonomic ? "true" : "false") +
           "," + (r.cls ? std::string(to_string(*r.cls)) : std::string()) + "," +
           format_double(r.max_K) + "\n";
  }
  return out;
}

}  // namespace mph
