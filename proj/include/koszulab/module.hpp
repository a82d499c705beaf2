#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "koszulab/ideal.hpp"

namespace koszulab {

/// Monomials of weighted degree d in the ring's variables, in descending ring order.
template <FieldElement K>
std::vector<Monomial> monomials_of_degree(const Ring<K>& ring, Degree d) {
  std::vector<Monomial> out;
  if (d < 0) return out;
  const std::size_t n = ring.num_variables();
  std::vector<std::uint32_t> exps(n, 0);
  auto rec = [&](auto&& self, std::size_t i, Degree left) -> void {
    if (i == n) {
      if (left == 0) out.push_back(ring.monomial(exps));
      return;
    }
    const Degree w = ring.weights()[i];
    for (Degree e = left / w; e >= 0; --e) {
      exps[i] = static_cast<std::uint32_t>(e);
      self(self, i + 1, left - e * w);
    }
    exps[i] = 0;
  };
  if (n == 0) {
    if (d == 0) out.push_back(Monomial{});
    return out;
  }
  rec(rec, 0, d);
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) { return compare(a, b, ring.order()) > 0; });
  return out;
}

/// Finitely presented module coker(relations : F1 -> F0) over the working ring R/J.
/// F0 has generators of the given degrees (so F0 = sum of R(-degree)).
template <FieldElement K>
class FpModule {
 public:
  FpModule() = default;

  FpModule(Matrix<K> relations) : ring_(relations.ring()), relations_(std::move(relations)) {}

  static FpModule free(const Ring<K>& ring, std::vector<Degree> degrees) {
    return FpModule(Matrix<K>(ring, std::move(degrees), {}));
  }

  /// R/I as a cyclic module generated in degree 0.
  static FpModule cyclic(const Ideal<K>& ideal) {
    Matrix<K> rel(ideal.ring(), {0}, {});
    for (const auto& g : ideal.generators()) rel.append_column({g}, g.is_homogeneous() ? g.max_degree() : 0);
    return FpModule(std::move(rel));
  }

  const Ring<K>& ring() const noexcept { return ring_; }
  std::size_t rank() const noexcept { return relations_.rows(); }
  const std::vector<Degree>& degrees() const noexcept { return relations_.row_degrees(); }
  const Matrix<K>& relations() const noexcept { return relations_; }

  bool is_graded() const { return ring_.is_graded() && relations_.is_graded(); }
  bool has_free_presentation() const { return relations_.is_zero() && !ring_.has_quotient(); }

  const ModuleGB<K>& gb() const {
    std::call_once(state_->once, [&] { state_->gb = std::make_shared<const ModuleGB<K>>(submodule_gb(relations_)); });
    return *state_->gb;
  }

  bool is_zero() const { return gb().is_whole_module(); }

  /// Normal form of an element of F0 (a column of polynomials).
  std::vector<Poly<K>> normal_form(const std::vector<Poly<K>>& v) const {
    return vec_to_polys(gb().normal_form(polys_to_vec(v)), ring_, 0, static_cast<std::uint32_t>(rank()));
  }

  bool is_zero_element(const std::vector<Poly<K>>& v) const { return gb().normal_form(polys_to_vec(v)).empty(); }

  /// k-basis of M_d: standard monomials m * e_c with deg m + deg e_c = d.
  std::vector<std::pair<std::uint32_t, Monomial>> degree_basis(Degree d) const {
    require_graded();
    std::vector<std::pair<std::uint32_t, Monomial>> out;
    std::vector<std::vector<Monomial>> leads(rank());
    for (const auto& g : gb().basis()) leads[g.front().comp].push_back(g.front().monomial);
    for (std::uint32_t c = 0; c < rank(); ++c) {
      for (const auto& m : monomials_of_degree(ring_, d - degrees()[c])) {
        bool standard = true;
        for (const auto& l : leads[c]) {
          if (l.divides(m)) {
            standard = false;
            break;
          }
        }
        if (standard) out.emplace_back(c, m);
      }
    }
    return out;
  }

  std::size_t dimension(Degree d) const { return degree_basis(d).size(); }

  std::map<Degree, std::size_t> hilbert_function(Degree lo, Degree hi) const {
    require_graded();
    if (lo > hi) throw BadBounds("empty degree window");
    std::map<Degree, std::size_t> out;
    for (Degree d = lo; d <= hi; ++d) out[d] = dimension(d);
    return out;
  }

  /// Coordinates of v (an element of F0 homogeneous of degree d) in the basis degree_basis(d).
  std::vector<K> coordinates(const std::vector<Poly<K>>& v, const std::vector<std::pair<std::uint32_t, Monomial>>& basis) const {
    std::vector<K> out(basis.size(), K::zero(ring_.field()));
    const ModVec<K> nf = gb().normal_form(polys_to_vec(v));
    for (const auto& t : nf) {
      bool found = false;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].first == t.comp && basis[i].second == t.monomial) {
          out[i] = t.coeff;
          found = true;
          break;
        }
      }
      if (!found) throw NotGraded("element is not homogeneous of the requested degree");
    }
    return out;
  }

  /// Same presentation with all generator degrees shifted by `by` (M(-by)).
  FpModule shifted(Degree by) const {
    Matrix<K> rel = relations_;
    for (std::size_t i = 0; i < rel.rows(); ++i) rel.set_row_degree(i, rel.row_degrees()[i] + by);
    for (std::size_t j = 0; j < rel.cols(); ++j) rel.set_col_degree(j, rel.col_degrees()[j] + by);
    return FpModule(std::move(rel));
  }

  /// M / I M.
  FpModule quotient_by_ideal(const Ideal<K>& ideal) const {
    Matrix<K> rel = relations_;
    for (const auto& g : ideal.generators()) {
      for (std::size_t i = 0; i < rank(); ++i) {
        std::vector<Poly<K>> col(rank(), ring_.zero());
        col[i] = g;
        rel.append_column(col, degrees()[i] + (g.is_homogeneous() ? g.max_degree() : 0));
      }
    }
    return FpModule(std::move(rel));
  }

  static FpModule direct_sum(const FpModule& a, const FpModule& b) {
    return FpModule(Matrix<K>::direct_sum(a.relations_, b.relations_));
  }

  std::string to_string() const {
    std::string out = "coker " + relations_.to_string() + " degrees [";
    for (std::size_t i = 0; i < rank(); ++i) out += (i ? ", " : "") + std::to_string(degrees()[i]);
    return out + "]";
  }

 private:
  void require_graded() const {
    if (!is_graded()) throw NotGraded("module presentation is not graded");
  }

  struct State {
    std::once_flag once;
    std::shared_ptr<const ModuleGB<K>> gb;
  };
  Ring<K> ring_;
  Matrix<K> relations_;
  std::shared_ptr<State> state_ = std::make_shared<State>();
};

/// Homomorphism of presented modules given on covers: column j is the image of generator j.
template <FieldElement K>
class ModuleMap {
 public:
  ModuleMap() = default;
  ModuleMap(FpModule<K> source, FpModule<K> target, Matrix<K> matrix, bool verify = true)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.rank() || matrix_.cols() != source_.rank()) {
      throw InvalidArgument("module map shape does not match modules");
    }
    for (std::size_t i = 0; i < matrix_.rows(); ++i) matrix_.set_row_degree(i, target_.degrees()[i]);
    for (std::size_t j = 0; j < matrix_.cols(); ++j) matrix_.set_col_degree(j, source_.degrees()[j]);
    if (verify && !is_well_defined()) throw InvalidArgument("matrix does not carry source relations into target relations");
  }

  static ModuleMap identity(const FpModule<K>& m) {
    return ModuleMap(m, m, Matrix<K>::identity(m.ring(), m.degrees()), false);
  }
  static ModuleMap zero(const FpModule<K>& s, const FpModule<K>& t) {
    return ModuleMap(s, t, Matrix<K>(s.ring(), t.degrees(), s.degrees()), false);
  }

  const FpModule<K>& source() const noexcept { return source_; }
  const FpModule<K>& target() const noexcept { return target_; }
  const Matrix<K>& matrix() const noexcept { return matrix_; }

  bool is_well_defined() const {
    const Matrix<K> img = matrix_ * source_.relations();
    for (std::size_t j = 0; j < img.cols(); ++j) {
      if (!target_.is_zero_element(img.column(j))) return false;
    }
    return true;
  }

  bool is_zero() const {
    for (std::size_t j = 0; j < matrix_.cols(); ++j) {
      if (!target_.is_zero_element(matrix_.column(j))) return false;
    }
    return true;
  }

  /// this after `first`.
  ModuleMap after(const ModuleMap& first) const {
    return ModuleMap(first.source_, target_, matrix_ * first.matrix_, false);
  }

  /// Dense matrix of the degree-d component M_d -> N_d in the standard-monomial bases.
  std::vector<std::vector<K>> degree_piece(Degree d) const {
    const auto sb = source_.degree_basis(d);
    const auto tb = target_.degree_basis(d);
    std::vector<std::vector<K>> cols;
    cols.reserve(sb.size());
    for (const auto& [c, m] : sb) {
      std::vector<Poly<K>> img;
      img.reserve(matrix_.rows());
      const auto mono = Poly<K>::term(source_.ring().descriptor(), m, K::one(source_.ring().field()));
      for (std::size_t i = 0; i < matrix_.rows(); ++i) img.push_back(matrix_.at(i, c) * mono);
      cols.push_back(target_.coordinates(img, tb));
    }
    // Row-major target x source.
    std::vector<std::vector<K>> out(tb.size(), std::vector<K>(sb.size(), K::zero(source_.ring().field())));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      for (std::size_t i = 0; i < tb.size(); ++i) out[i][j] = cols[j][i];
    }
    return out;
  }

 private:
  FpModule<K> source_, target_;
  Matrix<K> matrix_;
};

/// Submodule of F0 / im(rel) generated by the columns of `gens`, as a presented module
/// whose generators are those columns.
template <FieldElement K>
FpModule<K> subquotient(const Matrix<K>& gens, const Matrix<K>& rel) {
  const Matrix<K> both = Matrix<K>::hcat(gens, rel);
  const Matrix<K> syz = TrackedBasis<K>(both, Matrix<K>(gens.ring(), gens.row_degrees(), {})).kernel();
  Matrix<K> r(gens.ring(), gens.col_degrees(), {});
  for (std::size_t j = 0; j < syz.cols(); ++j) {
    std::vector<Poly<K>> col;
    bool nonzero = false;
    for (std::size_t i = 0; i < gens.cols(); ++i) {
      col.push_back(syz.at(i, j));
      nonzero = nonzero || !col.back().is_zero();
    }
    if (nonzero) r.append_column(col, syz.col_degrees()[j]);
  }
  return FpModule<K>(std::move(r));
}

template <FieldElement K>
struct KernelResult {
  FpModule<K> module;
  ModuleMap<K> inclusion;
};

template <FieldElement K>
KernelResult<K> kernel(const ModuleMap<K>& f) {
  const Matrix<K> k = TrackedBasis<K>(f.matrix(), f.target().relations()).kernel();
  Matrix<K> gens(f.source().ring(), f.source().degrees(), {});
  for (std::size_t j = 0; j < k.cols(); ++j) {
    if (!f.source().is_zero_element(k.column(j))) gens.append_column(k.column(j), k.col_degrees()[j]);
  }
  FpModule<K> m = subquotient(gens, f.source().relations());
  ModuleMap<K> inc(m, f.source(), gens, false);
  return {m, inc};
}

template <FieldElement K>
FpModule<K> cokernel(const ModuleMap<K>& f) {
  return FpModule<K>(Matrix<K>::hcat(f.target().relations(), f.matrix()));
}

template <FieldElement K>
FpModule<K> image(const ModuleMap<K>& f) {
  return subquotient(f.matrix(), f.target().relations());
}

template <FieldElement K>
struct PruneResult {
  FpModule<K> module;
  ModuleMap<K> to_original;    // pruned -> original (generator inclusion)
  ModuleMap<K> from_original;  // original -> pruned
};

/// Removes generators killed by relations with a unit entry and drops zero relations;
/// the surviving generators are a subset of the original ones.
template <FieldElement K>
PruneResult<K> prune(const FpModule<K>& m) {
  const Ring<K>& ring = m.ring();
  Matrix<K> a = m.relations();
  Matrix<K> e = Matrix<K>::identity(ring, m.degrees());
  std::vector<std::size_t> kept(m.rank());
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
  while (true) {
    std::optional<std::pair<std::size_t, std::size_t>> pivot;
    for (std::size_t j = 0; j < a.cols() && !pivot; ++j) {
      for (std::size_t i = 0; i < a.rows() && !pivot; ++i) {
        const auto& p = a.at(i, j);
        if (!p.is_zero() && p.is_constant()) pivot = {{i, j}};
      }
    }
    if (!pivot) break;
    const auto [pi, pj] = *pivot;
    const K u_inv = a.at(pi, pj).leading_coeff().inverse();
    std::vector<Degree> rd;
    for (std::size_t k = 0; k < a.rows(); ++k) {
      if (k != pi) rd.push_back(a.row_degrees()[k]);
    }
    Matrix<K> p(ring, rd, a.row_degrees());
    for (std::size_t k = 0, r = 0; k < a.rows(); ++k) {
      if (k == pi) continue;
      p.set(r, k, ring.one());
      p.set(r, pi, -(a.at(k, pj).scaled(u_inv)));
      ++r;
    }
    Matrix<K> na = p * a;
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < na.cols(); ++j) {
      if (j != pj) cols.push_back(j);
    }
    a = na.select_columns(cols);
    e = p * e;
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(pi));
  }
  std::vector<std::size_t> nonzero;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    bool z = true;
    for (std::size_t i = 0; i < a.rows(); ++i) z = z && a.at(i, j).is_zero();
    if (!z) nonzero.push_back(j);
  }
  FpModule<K> pruned(a.select_columns(nonzero));
  Matrix<K> inc(ring, m.degrees(), pruned.degrees());
  for (std::size_t k = 0; k < kept.size(); ++k) inc.set(kept[k], k, ring.one());
  return {pruned, ModuleMap<K>(pruned, m, inc, false), ModuleMap<K>(m, pruned, e, false)};
}

template <FieldElement K>
struct IsoVerdict {
  bool iso = false;
  bool kernel_zero = false;
  bool cokernel_zero = false;
  std::string witness;
};

/// Isomorphism iff kernel and cokernel presentations are zero modules.
template <FieldElement K>
IsoVerdict<K> verify_isomorphism(const ModuleMap<K>& f) {
  IsoVerdict<K> v;
  const FpModule<K> coker = cokernel(f);
  v.cokernel_zero = coker.is_zero();
  v.kernel_zero = kernel(f).module.is_zero();
  v.iso = v.kernel_zero && v.cokernel_zero;
  if (!v.cokernel_zero) v.witness = "cokernel nonzero: " + prune(coker).module.to_string();
  else if (!v.kernel_zero) v.witness = "kernel nonzero: " + prune(kernel(f).module).module.to_string();
  return v;
}

/// Drops columns of a graded matrix that lie in the span of the others (taken in
/// ascending degree), giving a minimal generating set of the submodule of F0 / im(rel).
template <FieldElement K>
Matrix<K> minimal_generators(const Matrix<K>& gens, const Matrix<K>& rel) {
  std::vector<std::size_t> order(gens.cols());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gens.col_degrees()[a] < gens.col_degrees()[b]; });
  std::vector<std::size_t> kept;
  for (std::size_t j : order) {
    Matrix<K> current = Matrix<K>::hcat(rel, gens.select_columns(kept));
    const FpModule<K> sub(current);
    if (!sub.is_zero_element(gens.column(j))) kept.push_back(j);
  }
  std::sort(kept.begin(), kept.end());
  return gens.select_columns(kept);
}

/// Exactness of A -f-> B -g-> C: g f = 0 and ker g inside im f.
template <FieldElement K>
bool is_exact_at(const ModuleMap<K>& f, const ModuleMap<K>& g) {
  if (!g.after(f).is_zero()) return false;
  const FpModule<K> image_plus_rel(Matrix<K>::hcat(g.source().relations(), f.matrix()));
  const Matrix<K> ker = kernel(g).inclusion.matrix();
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    if (!image_plus_rel.is_zero_element(ker.column(j))) return false;
  }
  return true;
}

}  // namespace koszulab
