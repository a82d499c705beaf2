#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "koszulab/localcoh.hpp"

namespace koszulab {

// ---------------------------------------------------------------------------
// Adic towers.

template <FieldElement K>
struct AdicTower {
  FpModule<K> module;
  Ideal<K> ideal;
  std::uint32_t n_max = 0;
  std::vector<FpModule<K>> stages;        // index n-1 : M / I^n M
  std::vector<ModuleMap<K>> transitions;  // index n-1 : M / I^{n+1} M -> M / I^n M
  bool surjective = false;

  const FpModule<K>& stage(std::uint32_t n) const {
    if (n < 1 || n > n_max) throw BadBounds("adic stage out of range");
    return stages[n - 1];
  }
};

template <FieldElement K>
AdicTower<K> adic_tower(const FpModule<K>& m, const Ideal<K>& ideal, std::uint32_t n_max) {
  require_same_ring(m.ring(), ideal.ring(), "adic tower over another ring");
  if (n_max < 1) throw BadBounds("n_max must be at least 1");
  if (n_max >= kMaxExponent) throw DegreeOverflow("adic exponent exceeds 65535");
  AdicTower<K> tower{m, ideal, n_max, {}, {}, true};
  tower.stages.resize(n_max);
  parallel_for(n_max, [&](std::size_t k) {
    tower.stages[k] = m.quotient_by_ideal(ideal_power(ideal, static_cast<std::uint32_t>(k + 1)));
  });
  const Matrix<K> id = Matrix<K>::identity(m.ring(), m.degrees());
  for (std::uint32_t n = 1; n < n_max; ++n) {
    ModuleMap<K> f(tower.stages[n], tower.stages[n - 1], id);
    tower.surjective = tower.surjective && cokernel(f).is_zero();
    tower.transitions.push_back(std::move(f));
  }
  return tower;
}

// ---------------------------------------------------------------------------
// Mittag-Leffler reports on raw Hom towers.

struct MLIndexReport {
  std::uint32_t r = 0;
  bool exhausted = false;
  std::uint32_t s = 0;  // images from stages >= s agree with the image from s, on every probed degree
  std::map<Degree, std::vector<std::size_t>> image_dims;  // degree -> dims for s = r..s_max
};

struct MLReport {
  int index = 0;     // cohomological degree -i of the Hom complexes
  Degree width = 0;  // probed degrees: lowest generator degree of stage r, plus 0..width
  std::uint32_t s_max = 0;
  std::vector<MLIndexReport> per_stage;
  bool holds() const {
    for (const auto& p : per_stage) {
      if (p.exhausted) return false;
    }
    return true;
  }
};

/// Degreewise image chains im(stage s -> stage r) of the n-th terms of a dual Koszul tower.
template <FieldElement K>
MLReport mittag_leffler_report(const KoszulTower<K>& tower, int n, std::uint32_t r_max, std::uint32_t s_max,
                               Degree width) {
  if (r_max < 1 || s_max < r_max || s_max > tower.r_max()) throw BadBounds("need 1 <= r_max <= s_max <= tower bound");
  MLReport rep;
  if (width < 0) throw BadBounds("negative degree width");
  rep.index = n;
  rep.width = width;
  rep.s_max = s_max;
  rep.per_stage.resize(r_max);
  parallel_for(r_max, [&](std::size_t k) {
    const auto r = static_cast<std::uint32_t>(k + 1);
    MLIndexReport& out = rep.per_stage[k];
    out.r = r;
    const FpModule<K> target = tower.stage(r).term(n);
    if (target.rank() == 0) return;
    const auto& gd = target.degrees();
    const Degree lo = *std::min_element(gd.begin(), gd.end());
    const Degree hi = lo + width;
    for (std::uint32_t s = r; s <= s_max; ++s) {
      const FpModule<K> source = tower.stage(s).term(n);
      const ModuleMap<K> f(source, target, tower.transition(r, s).component(n), false);
      for (Degree d = lo; d <= hi; ++d) out.image_dims[d].push_back(dense_rank(f.degree_piece(d)));
    }
    // Least s from which every probed chain is constant through s_max; the last stage alone proves nothing.
    std::uint32_t from = r;
    for (const auto& [d, dims] : out.image_dims) {
      std::size_t j = dims.size() - 1;
      while (j > 0 && dims[j - 1] == dims[j]) --j;
      from = std::max(from, r + static_cast<std::uint32_t>(j));
    }
    out.exhausted = from >= s_max;
    out.s = out.exhausted ? 0 : from;
  });
  return rep;
}

/// Recorded chains must be monotone (images shrink as s grows) and stationary from s.
inline bool verify_ml_report(const MLReport& rep) {
  for (const auto& p : rep.per_stage) {
    for (const auto& [d, dims] : p.image_dims) {
      for (std::size_t j = 1; j < dims.size(); ++j) {
        if (dims[j] > dims[j - 1]) return false;
      }
      if (!p.exhausted) {
        if (p.s < p.r) return false;
        for (std::size_t j = p.s - p.r; j < dims.size(); ++j) {
          if (dims[j] != dims[p.s - p.r]) return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Local homology towers.

template <FieldElement K>
struct LocalHomologyReport {
  std::uint32_t r_max = 0, s_max = 0;
  std::vector<bool> h0_iso;         // P / t^r P -> H^0 Hom(K(t^r), P) verified isomorphism, r = 1..r_max
  std::vector<bool> h0_compatible;  // commutes with the transitions P / t^{r+1} P -> P / t^r P
  bool adic_compatible = false;     // (t)^{mu(r-1)+1} P in t^r P in (t)^r P, as well-defined maps of towers
  std::vector<EssentialNullityCertificate<K>> nullity;  // i = 1..mu
  std::vector<MLReport> ml;                             // Hom^{-i} terms, i = 0..mu
  std::map<int, std::vector<std::vector<std::size_t>>> homology_dims;  // -i -> stage -> probed degrees

  bool h0_holds() const {
    for (bool b : h0_iso) {
      if (!b) return false;
    }
    for (bool b : h0_compatible) {
      if (!b) return false;
    }
    return adic_compatible;
  }
  bool pro_zero() const {
    for (const auto& c : nullity) {
      if (c.verdict != Verdict::Certified) return false;
    }
    return true;
  }
  bool ml_holds() const {
    for (const auto& m : ml) {
      if (!m.holds()) return false;
    }
    return true;
  }
  bool consistent() const { return h0_holds() && pro_zero(); }
};

template <FieldElement K>
LocalHomologyReport<K> local_homology_tower(const Ring<K>& ring, const std::vector<Poly<K>>& t, const FpModule<K>& p,
                                            std::uint32_t r_max, std::uint32_t s_max = 0, Degree width = 2,
                                            Degree lo = 0, Degree hi = 6) {
  detail::require_sequence(t);
  if (r_max < 2) throw BadBounds("r_max must be at least 2");
  if (s_max == 0) s_max = r_max + 4;
  if (s_max < r_max) throw BadBounds("s_max must be at least r_max");
  if (p.relations().cols() != 0) throw InvalidArgument("local homology towers need a free module P");
  const std::size_t mu = t.size();
  const KoszulTower<K> tower = dual_koszul_tower(ring, t, p, s_max);
  LocalHomologyReport<K> rep;
  rep.r_max = r_max;
  rep.s_max = s_max;

  // (a) H^0 of stage r is P / t^r P.
  std::vector<Homology<K>> h0(r_max);
  std::vector<FpModule<K>> quot(r_max);
  rep.h0_iso.assign(r_max, false);
  const Matrix<K> id = Matrix<K>::identity(ring, p.degrees());
  parallel_for(r_max, [&](std::size_t k) {
    const auto r = static_cast<std::uint32_t>(k + 1);
    std::vector<Poly<K>> powers;
    for (const auto& f : t) powers.push_back(f.pow(r));
    quot[k] = p.quotient_by_ideal(Ideal<K>(ring, powers));
    h0[k] = homology(tower.stage(r), 0);
    // The cycles of degree 0 are all of Hom(R, P) = P, on the same generators.
    const ModuleMap<K> f(quot[k], h0[k].module, id, false);
    rep.h0_iso[k] = h0[k].cycles == id && f.is_well_defined() && verify_isomorphism(f).iso;
  });
  rep.h0_compatible.assign(r_max - 1, false);
  for (std::uint32_t r = 1; r < r_max; ++r) {
    const ModuleMap<K> induced = induced_homology_map(tower.transition(r, r + 1), 0, h0[r], h0[r - 1]);
    const ModuleMap<K> natural(quot[r], quot[r - 1], id, false);
    // Square: quot_{r+1} -> H0_{r+1} -> H0_r equals quot_{r+1} -> quot_r -> H0_r.
    const Matrix<K> diff = induced.matrix() - natural.matrix();
    bool ok = natural.is_well_defined();
    for (std::size_t j = 0; ok && j < diff.cols(); ++j) ok = h0[r - 1].module.is_zero_element(diff.column(j));
    rep.h0_compatible[r - 1] = ok;
  }

  // Cofinality with the (t)-adic tower: I^{mu(r-1)+1} P -> P / t^r P -> P / I^r P.
  const Ideal<K> ideal(ring, t);
  const std::uint32_t n_top = static_cast<std::uint32_t>(mu) * (r_max - 1) + 1;
  const AdicTower<K> adic = adic_tower(p, ideal, n_top);
  bool cof = adic.surjective;
  for (std::uint32_t r = 1; r <= r_max && cof; ++r) {
    const std::uint32_t n = static_cast<std::uint32_t>(mu) * (r - 1) + 1;
    cof = ModuleMap<K>(adic.stage(n), quot[r - 1], id, false).is_well_defined() &&
          ModuleMap<K>(quot[r - 1], adic.stage(r), id, false).is_well_defined();
  }
  rep.adic_compatible = cof;

  // (b) H^{-i} towers are pro-zero.
  rep.nullity.resize(mu);
  for (std::size_t i = 1; i <= mu; ++i) {
    rep.nullity[i - 1] = essential_nullity_check(ring, t, p, static_cast<int>(i), r_max, s_max);
  }

  // (c) Mittag-Leffler for the raw Hom terms.
  for (std::size_t i = 0; i <= mu; ++i) {
    rep.ml.push_back(mittag_leffler_report(tower, -static_cast<int>(i), r_max, s_max, width));
  }

  for (std::size_t i = 0; i <= mu; ++i) {
    auto& rows = rep.homology_dims[-static_cast<int>(i)];
    for (std::uint32_t r = 1; r <= r_max; ++r) {
      const FpModule<K> h = homology(tower.stage(r), -static_cast<int>(i)).module;
      std::vector<std::size_t> row;
      for (Degree d = lo; d <= hi; ++d) row.push_back(h.dimension(d));
      rows.push_back(std::move(row));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Hom-tensor adjunction at finite Koszul stages.

/// Phi : Hom(K (x) E, F) -> Hom(E, Hom(K, F)), Phi(f)(e)(k) = (-1)^{|k||e|} f(k (x) e).
template <FieldElement K>
ComplexMap<K> adjunction_map(const FreeComplex<K>& kc, const FreeComplex<K>& e, const FreeComplex<K>& f) {
  const FreeComplex<K> ke = tensor(kc, e);
  const FreeComplex<K> lhs = hom(ke, f);
  const FreeComplex<K> inner = hom(kc, f);
  const FreeComplex<K> rhs = hom(e, inner);
  const Ring<K>& ring = kc.ring();
  std::map<int, Matrix<K>> comps;
  for (int n = lhs.lo(); n <= lhs.hi(); ++n) {
    const auto lb = hom_basis(ke, f, n);
    std::map<HomIndex, std::size_t> rpos;
    const auto rb = hom_basis(e, inner, n);
    for (std::size_t k = 0; k < rb.size(); ++k) rpos[rb[k]] = k;
    std::map<int, std::map<HomIndex, std::size_t>> inner_pos;
    Matrix<K> m(ring, rhs.degrees(n), lhs.degrees(n));
    std::map<int, std::vector<TensorIndex>> tbases;
    for (std::size_t col = 0; col < lb.size(); ++col) {
      const auto [p, idx, k] = lb[col];
      auto tb = tbases.find(p);
      if (tb == tbases.end()) tb = tbases.emplace(p, tensor_basis(kc, e, p)).first;
      const auto [a, i, b, j] = tb->second[idx];
      const int m_inner = b + n;
      auto ip = inner_pos.find(m_inner);
      if (ip == inner_pos.end()) {
        std::map<HomIndex, std::size_t> pos;
        const auto ib = hom_basis(kc, f, m_inner);
        for (std::size_t q = 0; q < ib.size(); ++q) pos[ib[q]] = q;
        ip = inner_pos.emplace(m_inner, std::move(pos)).first;
      }
      const std::size_t l = ip->second.at({a, i, k});
      const std::size_t row = rpos.at({b, j, l});
      m.set(row, col, (a * b) % 2 == 0 ? ring.one() : -ring.one());
    }
    comps[n] = std::move(m);
  }
  return ComplexMap<K>(lhs, rhs, std::move(comps), false);
}

struct AdjunctionStage {
  std::uint32_t r = 0;
  bool chain_map = false;
  bool invertible = false;
  std::vector<std::size_t> lhs_ranks, rhs_ranks;
  bool iso() const { return chain_map && invertible; }
};

template <FieldElement K>
struct DualityReport {
  std::uint32_t r_lo = 0, r_hi = 0;
  std::vector<AdjunctionStage> stages;
  std::vector<ComplexMap<K>> maps;            // Phi_r, stored for re-verification
  std::vector<bool> naturality;                // square for r -> r+1
  bool passed() const {
    for (const auto& s : stages) {
      if (!s.iso()) return false;
    }
    for (bool b : naturality) {
      if (!b) return false;
    }
    return !stages.empty();
  }
};

template <FieldElement K>
DualityReport<K> gm_adjunction_check(const FreeComplex<K>& e, const FreeComplex<K>& f, const std::vector<Poly<K>>& t,
                                     std::uint32_t r_lo, std::uint32_t r_hi) {
  require_same_ring(e.ring(), f.ring(), "adjunction inputs over different rings");
  detail::require_sequence(t);
  if (r_lo < 1 || r_hi < r_lo) throw BadBounds("need 1 <= r_lo <= r_hi");
  const Ring<K>& ring = e.ring();
  for (const auto& g : t) {
    if (!same_ring(g.ring(), ring.descriptor())) throw MixedRings("sequence from another ring");
  }
  DualityReport<K> rep;
  rep.r_lo = r_lo;
  rep.r_hi = r_hi;
  const std::size_t count = r_hi - r_lo + 1;
  rep.stages.resize(count);
  rep.maps.resize(count);
  parallel_for(count, [&](std::size_t k) {
    const auto r = static_cast<std::uint32_t>(r_lo + k);
    const FreeComplex<K> kc = koszul_complex(ring, t, r);
    ComplexMap<K> phi = adjunction_map(kc, e, f);
    AdjunctionStage& st = rep.stages[k];
    st.r = r;
    st.chain_map = phi.is_chain_map();
    st.invertible = phi.inverse().has_value();
    for (int n = phi.source().lo(); n <= phi.source().hi(); ++n) st.lhs_ranks.push_back(phi.source().rank(n));
    for (int n = phi.target().lo(); n <= phi.target().hi(); ++n) st.rhs_ranks.push_back(phi.target().rank(n));
    rep.maps[k] = std::move(phi);
  });
  rep.naturality.assign(count - 1, false);
  parallel_for(count - 1, [&](std::size_t k) {
    const auto r = static_cast<std::uint32_t>(r_lo + k);
    const ComplexMap<K> tr = koszul_transition(ring, t, r, r + 1);
    const ComplexMap<K>& phi_r = rep.maps[k];
    const ComplexMap<K>& phi_s = rep.maps[k + 1];
    // Hom(T (x) E, F) followed by Phi_r equals Phi_{r+1} followed by Hom(E, Hom(T, F)).
    const ComplexMap<K> te = tensor_maps(tr, ComplexMap<K>::identity(e), tensor(tr.source(), e), tensor(tr.target(), e));
    const ComplexMap<K> left = hom_precompose(te, f, phi_s.source(), phi_r.source());
    const ComplexMap<K> ht = hom_precompose(tr, f, hom(tr.target(), f), hom(tr.source(), f));
    const ComplexMap<K> right = hom_postcompose(e, ht, phi_s.target(), phi_r.target());
    rep.naturality[k] = phi_r.after(left) == right.after(phi_s);
  });
  return rep;
}

/// Re-checks the stored maps: chain maps, invertible, with the expected source and target.
template <FieldElement K>
bool verify_duality_report(const DualityReport<K>& rep) {
  for (const auto& phi : rep.maps) {
    if (!phi.is_chain_map() || !phi.inverse().has_value()) return false;
  }
  return true;
}

}  // namespace koszulab
