#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "koszulab/koszul.hpp"
#include "koszulab/parallel.hpp"
#include "koszulab/resolution.hpp"

namespace koszulab {

// ---------------------------------------------------------------------------
// Torsion.

template <FieldElement K>
struct TorsionResult {
  FpModule<K> module;
  ModuleMap<K> inclusion;
  std::uint32_t exponent = 0;  // least n with (0 :_M I^n) = (0 :_M I^{n+1})
};

/// (0 :_M I^n) as a submodule of M, via the kernel of m |-> (f_1 m, ..., f_k m).
template <FieldElement K>
KernelResult<K> annihilator_submodule(const FpModule<K>& m, const Ideal<K>& ideal) {
  const Ring<K>& ring = m.ring();
  const auto& gens = ideal.generators();
  if (gens.empty()) return {m, ModuleMap<K>::identity(m)};
  FpModule<K> target = FpModule<K>::free(ring, {});
  Matrix<K> mat(ring, {}, m.degrees());
  bool first = true;
  for (const auto& f : gens) {
    const Degree e = f.is_homogeneous() ? f.max_degree() : 0;
    target = first ? m.shifted(-e) : FpModule<K>::direct_sum(target, m.shifted(-e));
    first = false;
    Matrix<K> block(ring, m.shifted(-e).degrees(), m.degrees());
    for (std::size_t i = 0; i < m.rank(); ++i) block.set(i, i, f);
    Matrix<K> stacked(ring, target.degrees(), m.degrees());
    for (std::size_t i = 0; i < mat.rows(); ++i) {
      for (std::size_t j = 0; j < mat.cols(); ++j) stacked.set(i, j, mat.at(i, j));
    }
    for (std::size_t i = 0; i < block.rows(); ++i) {
      for (std::size_t j = 0; j < block.cols(); ++j) stacked.set(mat.rows() + i, j, block.at(i, j));
    }
    mat = std::move(stacked);
  }
  return kernel(ModuleMap<K>(m, target, mat, false));
}

/// Gamma_I(M) = union of (0 :_M I^n), found by ascending the chain until it stalls.
template <FieldElement K>
TorsionResult<K> torsion_submodule(const FpModule<K>& m, const Ideal<K>& ideal) {
  require_same_ring(m.ring(), ideal.ring(), "torsion of a module by an ideal of another ring");
  auto contained = [&](const Matrix<K>& small, const Matrix<K>& big) {
    const FpModule<K> sub(Matrix<K>::hcat(m.relations(), big));
    for (std::size_t j = 0; j < small.cols(); ++j) {
      if (!sub.is_zero_element(small.column(j))) return false;
    }
    return true;
  };
  KernelResult<K> prev = annihilator_submodule(m, ideal);
  Ideal<K> power = ideal;
  for (std::uint32_t n = 1; n < kMaxExponent; ++n) {
    power = ideal_product(power, ideal);
    power = Ideal<K>(ideal.ring(), power.groebner_basis());
    KernelResult<K> next = annihilator_submodule(m, power);
    if (contained(next.inclusion.matrix(), prev.inclusion.matrix())) return {prev.module, prev.inclusion, n};
    prev = std::move(next);
  }
  throw DegreeOverflow("torsion chain did not stabilize below exponent 65535");
}

// ---------------------------------------------------------------------------
// Graded local cohomology tables.

enum class LcMethod { KoszulColim, ExtColim };

inline std::string to_string(LcMethod m) { return m == LcMethod::KoszulColim ? "koszul-colim" : "ext-colim"; }

struct LcEntry {
  Degree degree;
  std::uint32_t stage;
  std::size_t dim;
};

struct LocalCohomologyTable {
  int index = 0;
  Degree lo = 0, hi = 0;
  std::uint32_t stage_max = 0;
  LcMethod method = LcMethod::KoszulColim;
  std::vector<LcEntry> entries;        // degree-major, stage-minor
  std::map<Degree, bool> stable;       // last transition an isomorphism on the degree piece

  std::size_t dim(Degree d, std::uint32_t stage) const {
    for (const auto& e : entries) {
      if (e.degree == d && e.stage == stage) return e.dim;
    }
    throw BadBounds("no table entry at degree " + std::to_string(d) + ", stage " + std::to_string(stage));
  }

  /// Colimit dimension when the degree is flagged stable.
  std::optional<std::size_t> stable_dim(Degree d) const {
    auto it = stable.find(d);
    if (it == stable.end() || !it->second) return std::nullopt;
    return dim(d, stage_max);
  }

  bool all_stable() const {
    for (const auto& [d, s] : stable) {
      if (!s) return false;
    }
    return true;
  }
};

namespace detail {

/// Homology of each stage plus the induced transitions stage r -> r+1.
template <FieldElement K>
struct DirectSystem {
  std::vector<FpModule<K>> stages;         // index r-1
  std::vector<ModuleMap<K>> transitions;   // index r-1 : stage r -> stage r+1
};

template <FieldElement K>
LocalCohomologyTable tabulate(const DirectSystem<K>& sys, int i, Degree lo, Degree hi, LcMethod method) {
  LocalCohomologyTable t;
  t.index = i;
  t.lo = lo;
  t.hi = hi;
  t.stage_max = static_cast<std::uint32_t>(sys.stages.size());
  t.method = method;
  std::vector<Degree> degrees;
  for (Degree d = lo; d <= hi; ++d) degrees.push_back(d);
  std::vector<std::vector<std::size_t>> dims(degrees.size());
  std::vector<bool> stable(degrees.size());
  parallel_for(degrees.size(), [&](std::size_t k) {
    const Degree d = degrees[k];
    for (const auto& s : sys.stages) dims[k].push_back(s.dimension(d));
    const std::size_t n = dims[k].size();
    const std::size_t a = dims[k][n - 2], b = dims[k][n - 1];
    stable[k] = a == b && (a == 0 || dense_rank(sys.transitions.back().degree_piece(d)) == a);
  });
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    for (std::size_t r = 0; r < dims[k].size(); ++r) {
      t.entries.push_back({degrees[k], static_cast<std::uint32_t>(r + 1), dims[k][r]});
    }
    t.stable[degrees[k]] = stable[k];
  }
  return t;
}

template <FieldElement K>
DirectSystem<K> koszul_system(const FpModule<K>& m, const std::vector<Poly<K>>& t, int i, std::uint32_t stage_max) {
  const KoszulTower<K> tower(m.ring(), t, stage_max, TowerDirection::Direct, m);
  DirectSystem<K> sys;
  std::vector<Homology<K>> hs(stage_max);
  parallel_for(stage_max, [&](std::size_t r) { hs[r] = homology(tower.stage(static_cast<std::uint32_t>(r + 1)), i); });
  for (const auto& h : hs) sys.stages.push_back(h.module);
  sys.transitions.resize(stage_max - 1);
  parallel_for(stage_max - 1, [&](std::size_t r) {
    const auto a = static_cast<std::uint32_t>(r + 1);
    sys.transitions[r] = induced_homology_map(tower.transition(a, a + 1), i, hs[r], hs[r + 1]);
  });
  return sys;
}

template <FieldElement K>
DirectSystem<K> ext_system(const FpModule<K>& m, const std::vector<Poly<K>>& t, int i, std::uint32_t stage_max) {
  const Ring<K>& ring = m.ring();
  const Ideal<K> ideal(ring, t);
  const FreeComplex<K> mc = FreeComplex<K>::concentrated(m, 0);
  std::vector<Resolution<K>> res(stage_max);
  std::vector<FreeComplex<K>> homs(stage_max);
  std::vector<Homology<K>> hs(stage_max);
  parallel_for(stage_max, [&](std::size_t k) {
    const FpModule<K> q = FpModule<K>::cyclic(ideal_power(ideal, static_cast<std::uint32_t>(k + 1)));
    res[k] = free_resolution(q, static_cast<std::size_t>(i) + 1);
    homs[k] = hom(res[k].as_complex(), mc);
    hs[k] = homology(homs[k], i);
  });
  DirectSystem<K> sys;
  for (const auto& h : hs) sys.stages.push_back(h.module);
  sys.transitions.resize(stage_max - 1);
  parallel_for(stage_max - 1, [&](std::size_t k) {
    // R/I^{n+1} -> R/I^n on the original cyclic generators, lifted to resolutions.
    const ModuleMap<K> proj(FpModule<K>::cyclic(ideal_power(ideal, static_cast<std::uint32_t>(k + 2))),
                            FpModule<K>::cyclic(ideal_power(ideal, static_cast<std::uint32_t>(k + 1))),
                            Matrix<K>::identity(ring, {0}));
    const ComplexMap<K> lift = lift_to_resolutions(proj, res[k + 1], res[k]);
    const ComplexMap<K> on_hom = hom_precompose(lift, mc, homs[k], homs[k + 1]);
    sys.transitions[k] = induced_homology_map(on_hom, i, hs[k], hs[k + 1]);
  });
  return sys;
}

}  // namespace detail

/// Degreewise dimensions of the stages of a direct system computing H^i_t(M):
/// H^i(K(t^r) (x) M) (koszul-colim) or Ext^i(R/(t)^n, M) (ext-colim), stages 1..stage_max.
template <FieldElement K>
LocalCohomologyTable local_cohomology_graded(const FpModule<K>& m, const std::vector<Poly<K>>& t, int i, Degree lo,
                                             Degree hi, std::uint32_t stage_max, LcMethod method) {
  detail::require_sequence(t);
  if (!m.is_graded()) throw NotGraded("local cohomology tables need a graded module");
  for (const auto& f : t) {
    if (!f.is_homogeneous()) throw NotGraded("sequence entries must be homogeneous");
  }
  if (lo > hi) throw BadBounds("empty degree window");
  if (stage_max < 2) throw BadBounds("stage_max must be at least 2");
  if (i < 0) throw BadBounds("cohomological index must be nonnegative");
  const detail::DirectSystem<K> sys = method == LcMethod::KoszulColim ? detail::koszul_system(m, t, i, stage_max)
                                                                       : detail::ext_system(m, t, i, stage_max);
  return detail::tabulate(sys, i, lo, hi, method);
}

// ---------------------------------------------------------------------------
// Proregularity.

enum class Verdict { Certified, Undecided };

inline std::string to_string(Verdict v) { return v == Verdict::Certified ? "certified" : "undecided"; }

struct WitnessKey {
  std::size_t i;  // 1-based position in t
  std::uint32_t r;
  auto operator<=>(const WitnessKey&) const = default;
};

template <FieldElement K>
struct ProregularityCertificate {
  Ring<K> ring;
  std::vector<Poly<K>> t;
  std::uint32_t r_max = 0, s_max = 0;
  std::map<WitnessKey, std::uint32_t> witnesses;
  std::vector<WitnessKey> exhausted;
  Verdict verdict = Verdict::Undecided;
};

/// (t_1^s..t_{i-1}^s) : t_i^s inside (t_1^r..t_{i-1}^r) : t_i^{s-r}.
template <FieldElement K>
bool proregularity_condition(const Ring<K>& ring, const std::vector<Poly<K>>& t, std::size_t i, std::uint32_t r,
                             std::uint32_t s) {
  std::vector<Poly<K>> gs, gr;
  for (std::size_t j = 0; j + 1 < i; ++j) {
    gs.push_back(t[j].pow(s));
    gr.push_back(t[j].pow(r));
  }
  const Ideal<K> lhs = ideal_quotient(Ideal<K>(ring, gs), t[i - 1], s);
  const Ideal<K> rhs = ideal_quotient(Ideal<K>(ring, gr), t[i - 1], s - r);
  return rhs.contains(lhs);
}

template <FieldElement K>
ProregularityCertificate<K> proregularity_check(const Ring<K>& ring, const std::vector<Poly<K>>& t, std::uint32_t r_max,
                                                std::uint32_t s_max) {
  detail::require_sequence(t);
  if (r_max < 1 || s_max < 1) throw BadBounds("bounds must be at least 1");
  ProregularityCertificate<K> cert{ring, t, r_max, s_max, {}, {}, Verdict::Undecided};
  std::vector<WitnessKey> keys;
  for (std::size_t i = 1; i <= t.size(); ++i) {
    for (std::uint32_t r = 1; r <= r_max; ++r) keys.push_back({i, r});
  }
  std::vector<std::uint32_t> found(keys.size(), 0);
  parallel_for(keys.size(), [&](std::size_t k) {
    for (std::uint32_t s = keys[k].r + 1; s <= s_max; ++s) {
      if (proregularity_condition(ring, t, keys[k].i, keys[k].r, s)) {
        found[k] = s;
        return;
      }
    }
  });
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (found[k] != 0) cert.witnesses[keys[k]] = found[k];
    else cert.exhausted.push_back(keys[k]);
  }
  cert.verdict = cert.exhausted.empty() ? Verdict::Certified : Verdict::Undecided;
  return cert;
}

/// Re-checks every recorded witness and its minimality; the search is not repeated.
template <FieldElement K>
bool verify_proregularity(const ProregularityCertificate<K>& cert) {
  for (const auto& [key, s] : cert.witnesses) {
    if (key.i < 1 || key.i > cert.t.size() || s <= key.r || s > cert.s_max) return false;
    if (!proregularity_condition(cert.ring, cert.t, key.i, key.r, s)) return false;
    // Recorded witnesses are minimal.
    for (std::uint32_t u = key.r + 1; u < s; ++u) {
      if (proregularity_condition(cert.ring, cert.t, key.i, key.r, u)) return false;
    }
  }
  if (cert.verdict == Verdict::Certified) {
    if (!cert.exhausted.empty()) return false;
    for (std::size_t i = 1; i <= cert.t.size(); ++i) {
      for (std::uint32_t r = 1; r <= cert.r_max; ++r) {
        if (!cert.witnesses.contains({i, r})) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Essential nullity of H_i(t^r, P) = H^{-i} Hom(K(t^r), P).

template <FieldElement K>
struct EssentialNullityCertificate {
  Ring<K> ring;
  std::vector<Poly<K>> t;
  FpModule<K> module;
  int index = 1;
  std::uint32_t r_max = 0, s_max = 0;
  std::map<std::uint32_t, std::uint32_t> witnesses;
  std::vector<std::uint32_t> exhausted;
  Verdict verdict = Verdict::Undecided;
};

template <FieldElement K>
bool transition_kills_homology(const KoszulTower<K>& tower, int i, std::uint32_t r, std::uint32_t s) {
  return induced_homology_map(tower.transition(r, s), -i).is_zero();
}

template <FieldElement K>
EssentialNullityCertificate<K> essential_nullity_check(const Ring<K>& ring, const std::vector<Poly<K>>& t,
                                                       const FpModule<K>& p, int i, std::uint32_t r_max,
                                                       std::uint32_t s_max) {
  detail::require_sequence(t);
  if (i == 0) throw InvalidArgument("homological index must be nonzero");
  if (r_max < 1 || s_max < 1) throw BadBounds("bounds must be at least 1");
  EssentialNullityCertificate<K> cert{ring, t, p, i, r_max, s_max, {}, {}, Verdict::Undecided};
  const KoszulTower<K> tower = dual_koszul_tower(ring, t, p, std::max(r_max, s_max));
  std::vector<std::uint32_t> found(r_max, 0);
  parallel_for(r_max, [&](std::size_t k) {
    const auto r = static_cast<std::uint32_t>(k + 1);
    for (std::uint32_t s = r + 1; s <= s_max; ++s) {
      if (transition_kills_homology(tower, i, r, s)) {
        found[k] = s;
        return;
      }
    }
  });
  for (std::uint32_t r = 1; r <= r_max; ++r) {
    if (found[r - 1] != 0) cert.witnesses[r] = found[r - 1];
    else cert.exhausted.push_back(r);
  }
  cert.verdict = cert.exhausted.empty() ? Verdict::Certified : Verdict::Undecided;
  return cert;
}

template <FieldElement K>
bool verify_essential_nullity(const EssentialNullityCertificate<K>& cert) {
  if (cert.index == 0) return false;
  std::uint32_t top = 1;
  for (const auto& [r, s] : cert.witnesses) top = std::max(top, s);
  const KoszulTower<K> tower = dual_koszul_tower(cert.ring, cert.t, cert.module, top);
  for (const auto& [r, s] : cert.witnesses) {
    if (r < 1 || s <= r || s > cert.s_max) return false;
    if (!transition_kills_homology(tower, cert.index, r, s)) return false;
    for (std::uint32_t u = r + 1; u < s; ++u) {
      if (transition_kills_homology(tower, cert.index, r, u)) return false;
    }
  }
  if (cert.verdict == Verdict::Certified) {
    for (std::uint32_t r = 1; r <= cert.r_max; ++r) {
      if (!cert.witnesses.contains(r)) return false;
    }
  }
  return true;
}

}  // namespace koszulab
