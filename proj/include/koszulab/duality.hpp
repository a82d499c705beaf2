#pragma once

#include <map>
#include <string>
#include <vector>

#include "koszulab/localcoh.hpp"

namespace koszulab {

struct DualityEntry {
  int index = 0;        // i
  Degree degree = 0;    // d: lhs probes H^i_m(M)_{-d}, rhs probes Ext^{n-i}(M, omega)_d
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  bool pass() const { return lhs == rhs; }
};

struct DualityTable {
  std::size_t num_variables = 0;
  Degree canonical_shift = 0;  // omega = R(-canonical_shift); n for the standard grading
  Degree lo = 0, hi = 0;
  std::uint32_t stage_max = 0;
  std::vector<DualityEntry> entries;  // index-major, degree-minor
  std::map<Degree, bool> euler;        // alternating sums agree at d

  std::size_t lhs(int i, Degree d) const { return find(i, d).lhs; }
  std::size_t rhs(int i, Degree d) const { return find(i, d).rhs; }

  bool passed() const {
    for (const auto& e : entries) {
      if (!e.pass()) return false;
    }
    for (const auto& [d, ok] : euler) {
      if (!ok) return false;
    }
    return true;
  }

 private:
  const DualityEntry& find(int i, Degree d) const {
    for (const auto& e : entries) {
      if (e.index == i && e.degree == d) return e;
    }
    throw BadBounds("no duality entry at i = " + std::to_string(i) + ", d = " + std::to_string(d));
  }
};

/// Sum of the variable degrees: the graded canonical module of k[x_1..x_n] is R(-a).
template <FieldElement K>
Degree canonical_shift(const Ring<K>& ring) {
  Degree a = 0;
  for (std::size_t v = 0; v < ring.num_variables(); ++v) a += ring.variable(v).max_degree();
  return a;
}

/// Least i with H^i(K(x_1..x_n) (x) M) != 0, or n+1 when M = 0.
template <FieldElement K>
std::size_t koszul_depth(const FpModule<K>& m) {
  const Ring<K>& ring = m.ring();
  std::vector<Poly<K>> vars;
  for (std::size_t v = 0; v < ring.num_variables(); ++v) vars.push_back(ring.variable(v));
  const FreeComplex<K> k = koszul_complex(ring, vars, 1, m);
  for (std::size_t i = 0; i <= vars.size(); ++i) {
    if (!homology(k, static_cast<int>(i)).module.is_zero()) return i;
  }
  return vars.size() + 1;
}

/// Compares dim H^i_m(M)_{-d} (Koszul colimit over the variables) with dim Ext^{n-i}(M, omega)_d
/// for 0 <= i <= n and lo <= d <= hi. Throws UnstableWindow when some probed local cohomology
/// degree has not stabilized by stage_max.
template <FieldElement K>
DualityTable graded_local_duality_check(const FpModule<K>& m, Degree lo, Degree hi, std::uint32_t stage_max) {
  const Ring<K>& ring = m.ring();
  if (!m.is_graded()) throw NotGraded("duality needs a graded module");
  if (ring.has_quotient()) throw InvalidArgument("duality needs a polynomial ring without quotient");
  if (ring.num_variables() == 0) throw InvalidArgument("duality needs at least one variable");
  if (lo > hi) throw BadBounds("empty degree window");
  const std::size_t n = ring.num_variables();
  std::vector<Poly<K>> vars;
  for (std::size_t v = 0; v < n; ++v) vars.push_back(ring.variable(v));
  const Degree a = canonical_shift(ring);
  const FpModule<K> omega = FpModule<K>::free(ring, {a});

  std::vector<LocalCohomologyTable> lc(n + 1);
  std::vector<FpModule<K>> ext(n + 1);
  parallel_for(2 * (n + 1), [&](std::size_t job) {
    const std::size_t i = job % (n + 1);
    if (job <= n) {
      lc[i] = local_cohomology_graded(m, vars, static_cast<int>(i), -hi, -lo, stage_max, LcMethod::KoszulColim);
    } else {
      ext[i] = ext_module(m, omega, static_cast<int>(n - i));
    }
  });

  std::string unstable;
  for (std::size_t i = 0; i <= n; ++i) {
    for (const auto& [d, ok] : lc[i].stable) {
      if (!ok) unstable += " (i=" + std::to_string(i) + ", degree " + std::to_string(d) + ")";
    }
  }
  if (!unstable.empty()) throw UnstableWindow("local cohomology not stable by stage " + std::to_string(stage_max) + ":" + unstable);

  DualityTable t;
  t.num_variables = n;
  t.canonical_shift = a;
  t.lo = lo;
  t.hi = hi;
  t.stage_max = stage_max;
  for (std::size_t i = 0; i <= n; ++i) {
    for (Degree d = lo; d <= hi; ++d) {
      t.entries.push_back({static_cast<int>(i), d, *lc[i].stable_dim(-d), ext[i].dimension(d)});
    }
  }
  for (Degree d = lo; d <= hi; ++d) {
    long l = 0, r = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      const long sign = i % 2 == 0 ? 1 : -1;
      l += sign * static_cast<long>(t.lhs(static_cast<int>(i), d));
      r += sign * static_cast<long>(t.rhs(static_cast<int>(i), d));
    }
    t.euler[d] = l == r;
  }
  return t;
}

}  // namespace koszulab
