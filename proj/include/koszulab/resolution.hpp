#pragma once

#include <vector>

#include "koszulab/complex.hpp"

namespace koszulab {

/// F_len -> ... -> F_1 -> F_0 -> M with maps[k-1] = d_k : F_k -> F_{k-1}.
template <FieldElement K>
struct Resolution {
  FpModule<K> module;  // presentation resolved (pruned when graded)
  std::vector<Degree> degrees0;
  std::vector<Matrix<K>> maps;
  Matrix<K> from_original;  // original generators in terms of F_0
  Matrix<K> to_original;    // F_0 generators in terms of the original ones

  std::size_t length() const { return maps.size(); }

  std::vector<Degree> degrees(std::size_t k) const { return k == 0 ? degrees0 : maps[k - 1].col_degrees(); }

  /// The resolution as a cohomological complex with F_k in degree -k.
  FreeComplex<K> as_complex() const {
    const Ring<K>& ring = module.ring();
    std::vector<FpModule<K>> terms;
    std::vector<Matrix<K>> diffs;
    for (std::size_t k = length() + 1; k-- > 0;) {
      terms.push_back(FpModule<K>::free(ring, degrees(k)));
      if (k > 0) diffs.push_back(maps[k - 1]);
    }
    return FreeComplex<K>(ring, -static_cast<int>(length()), std::move(terms), std::move(diffs), {}, false);
  }
};

namespace detail {

template <FieldElement K>
Matrix<K> drop_zero_columns(const Matrix<K>& m) {
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (!m.at(i, j).is_zero()) {
        keep.push_back(j);
        break;
      }
    }
  }
  return m.select_columns(keep);
}

template <FieldElement K>
Matrix<K> reduce_columns_mod_quotient(const Matrix<K>& m) {
  if (!m.ring().has_quotient()) return drop_zero_columns(m);
  const FpModule<K> ambient = FpModule<K>::free(m.ring(), m.row_degrees());
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (!ambient.is_zero_element(m.column(j))) keep.push_back(j);
  }
  return m.select_columns(keep);
}

}  // namespace detail

/// Free resolution of M up to `length` maps (stopping early at a zero syzygy module).
/// Graded input yields the minimal resolution of the pruned presentation.
template <FieldElement K>
Resolution<K> free_resolution(const FpModule<K>& m, std::size_t length) {
  const bool graded = m.is_graded();
  Resolution<K> res;
  if (graded) {
    const PruneResult<K> p = prune(m);
    res.module = p.module;
    res.from_original = p.from_original.matrix();
    res.to_original = p.to_original.matrix();
  } else {
    res.module = m;
    res.from_original = res.to_original = Matrix<K>::identity(m.ring(), m.degrees());
  }
  const FpModule<K>& base = res.module;
  res.degrees0 = base.degrees();
  Matrix<K> current = detail::reduce_columns_mod_quotient(base.relations());
  if (graded) current = minimal_generators(current, Matrix<K>(m.ring(), base.degrees(), {}));
  while (res.length() < length && current.cols() > 0) {
    res.maps.push_back(current);
    Matrix<K> next = detail::reduce_columns_mod_quotient(syzygy_kernel(current));
    if (graded) next = minimal_generators(next, Matrix<K>(m.ring(), next.row_degrees(), {}));
    current = next;
  }
  return res;
}

/// Ext^i(M, N) = H^i Hom(F, N) for a free resolution F of M.
template <FieldElement K>
FpModule<K> ext_module(const FpModule<K>& m, const FpModule<K>& n, int i) {
  if (i < 0) throw BadBounds("Ext index must be nonnegative");
  const Resolution<K> res = free_resolution(m, static_cast<std::size_t>(i) + 1);
  const FreeComplex<K> h = hom(res.as_complex(), FreeComplex<K>::concentrated(n, 0));
  return homology(h, i).module;
}

/// Chain map F -> F' over a module map phi : M -> M', lifting component by component.
template <FieldElement K>
ComplexMap<K> lift_to_resolutions(const ModuleMap<K>& phi, const Resolution<K>& src, const Resolution<K>& tgt) {
  const Ring<K>& ring = phi.source().ring();
  const FreeComplex<K> cs = src.as_complex();
  const FreeComplex<K> ct = tgt.as_complex();
  std::map<int, Matrix<K>> comps;
  Matrix<K> prev = tgt.from_original * phi.matrix() * src.to_original;
  comps[0] = prev;
  for (std::size_t k = 1; k <= src.length(); ++k) {
    const Matrix<K> rhs = prev * src.maps[k - 1];
    Matrix<K> cur(ring, tgt.degrees(k), src.degrees(k));
    if (k <= tgt.length()) {
      TrackedBasis<K> solver(tgt.maps[k - 1], Matrix<K>(ring, tgt.degrees(k - 1), {}));
      for (std::size_t j = 0; j < rhs.cols(); ++j) {
        auto sol = solver.lift(rhs.column(j));
        if (!sol) throw LiftFailure("cannot lift module map to resolutions at step " + std::to_string(k));
        for (std::size_t r = 0; r < sol->size(); ++r) cur.set(r, j, (*sol)[r]);
      }
    }
    comps[-static_cast<int>(k)] = cur;
    prev = cur;
  }
  return ComplexMap<K>(cs, ct, std::move(comps), false);
}

}  // namespace koszulab
