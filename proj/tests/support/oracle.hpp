#pragma once

// Brute-force degreewise linear algebra used as an independent check on the
// Gröbner engine. Only unit variable weights and homogeneous data are supported.

#include <cstdint>
#include <map>
#include <vector>

#include "koszulab/matrix.hpp"

namespace oracle {

using koszulab::Degree;

inline void enumerate(std::size_t nvars, Degree d, std::vector<std::uint32_t>& cur, std::size_t i,
                      std::vector<std::vector<std::uint32_t>>& out) {
  if (i + 1 == nvars) {
    cur[i] = static_cast<std::uint32_t>(d);
    out.push_back(cur);
    return;
  }
  for (Degree e = d; e >= 0; --e) {
    cur[i] = static_cast<std::uint32_t>(e);
    enumerate(nvars, d - e, cur, i + 1, out);
  }
}

inline std::vector<std::vector<std::uint32_t>> monomials_of_degree(std::size_t nvars, Degree d) {
  std::vector<std::vector<std::uint32_t>> out;
  if (d < 0) return out;
  if (nvars == 0) {
    if (d == 0) out.emplace_back();
    return out;
  }
  std::vector<std::uint32_t> cur(nvars, 0);
  enumerate(nvars, d, cur, 0, out);
  return out;
}

template <class K>
std::size_t rank(std::vector<std::vector<K>> rows) {
  std::size_t r = 0;
  const std::size_t ncols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    const K inv = rows[r][c].inverse();
    for (auto& x : rows[r]) x = x * inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      const K f = rows[i][c];
      for (std::size_t k = c; k < ncols; ++k) rows[i][k] -= f * rows[r][k];
    }
    ++r;
  }
  return r;
}

/// Degree-d piece of the free module (R/J)^n with generator degrees `shifts`,
/// represented inside R^n_d with the J-multiples carried alongside.
template <class K>
class Piece {
 public:
  Piece(const koszulab::Ring<K>& ring, std::vector<Degree> shifts, Degree d)
      : ring_(ring), shifts_(std::move(shifts)), d_(d) {
    for (std::size_t j = 0; j < shifts_.size(); ++j) {
      for (auto& e : monomials_of_degree(ring.num_variables(), d - shifts_[j])) {
        index_[{j, ring.monomial(e)}] = basis_size_++;
      }
    }
  }

  std::size_t ambient_dim() const { return basis_size_; }

  std::vector<K> vectorize(const std::vector<koszulab::Poly<K>>& col) const {
    std::vector<K> v(basis_size_, K::zero(ring_.field()));
    for (std::size_t j = 0; j < col.size(); ++j) {
      for (const auto& t : col[j].terms()) {
        auto it = index_.find({j, t.monomial});
        if (it != index_.end()) v[it->second] += t.coeff;
      }
    }
    return v;
  }

  /// Rows spanning the degree-d piece of the submodule generated by `cols` (degree col_degrees).
  std::vector<std::vector<K>> span(const std::vector<std::vector<koszulab::Poly<K>>>& cols,
                                   const std::vector<Degree>& col_degrees) const {
    std::vector<std::vector<K>> rows;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      for (auto& e : monomials_of_degree(ring_.num_variables(), d_ - col_degrees[c])) {
        const auto m = koszulab::Poly<K>::term(ring_.descriptor(), ring_.monomial(e), K::one(ring_.field()));
        std::vector<koszulab::Poly<K>> col;
        for (const auto& p : cols[c]) col.push_back(p * m);
        rows.push_back(vectorize(col));
      }
    }
    return rows;
  }

  std::vector<std::vector<K>> quotient_span() const {
    std::vector<std::vector<koszulab::Poly<K>>> cols;
    std::vector<Degree> degs;
    for (const auto& g : ring_.quotient()) {
      for (std::size_t j = 0; j < shifts_.size(); ++j) {
        std::vector<koszulab::Poly<K>> col(shifts_.size(), ring_.zero());
        col[j] = g;
        cols.push_back(col);
        degs.push_back(shifts_[j] + g.max_degree());
      }
    }
    return span(cols, degs);
  }

  /// dim of (N + J F)_d / (J F)_d for N generated by cols.
  std::size_t dim_submodule(const std::vector<std::vector<koszulab::Poly<K>>>& cols,
                            const std::vector<Degree>& col_degrees) const {
    auto js = quotient_span();
    const std::size_t base = rank(js);
    auto rows = span(cols, col_degrees);
    rows.insert(rows.end(), js.begin(), js.end());
    return rank(rows) - base;
  }

  std::size_t dim_quotient_free() const { return basis_size_ - rank(quotient_span()); }

  bool in_submodule(const std::vector<std::vector<koszulab::Poly<K>>>& cols, const std::vector<Degree>& col_degrees,
                    const std::vector<koszulab::Poly<K>>& v) const {
    auto rows = span(cols, col_degrees);
    auto js = quotient_span();
    rows.insert(rows.end(), js.begin(), js.end());
    const std::size_t r = rank(rows);
    rows.push_back(vectorize(v));
    return rank(rows) == r;
  }

 private:
  struct Key {
    std::size_t comp;
    koszulab::Monomial mono;
    bool operator<(const Key& o) const {
      if (comp != o.comp) return comp < o.comp;
      for (std::size_t i = 0; i < koszulab::kMaxVariables; ++i) {
        if (mono[i] != o.mono[i]) return mono[i] < o.mono[i];
      }
      return false;
    }
  };
  koszulab::Ring<K> ring_;
  std::vector<Degree> shifts_;
  Degree d_;
  std::map<Key, std::size_t> index_;
  std::size_t basis_size_ = 0;
};

template <class K>
std::vector<std::vector<koszulab::Poly<K>>> columns(const koszulab::Matrix<K>& m) {
  std::vector<std::vector<koszulab::Poly<K>>> out;
  for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.column(j));
  return out;
}

/// dim_d of the kernel of a graded matrix over R/J, by rank-nullity on degree pieces.
template <class K>
std::size_t kernel_dim(const koszulab::Matrix<K>& m, Degree d) {
  Piece<K> src(m.ring(), m.col_degrees(), d);
  Piece<K> tgt(m.ring(), m.row_degrees(), d);
  const std::size_t image = tgt.dim_submodule(columns(m), m.col_degrees());
  return src.dim_quotient_free() - image;
}

/// dim_d of H = ker(out) / im(in) for graded matrices in : A -> B, out : B -> C over R/J.
template <class K>
std::size_t homology_dim(const koszulab::Matrix<K>& in, const koszulab::Matrix<K>& out, Degree d) {
  Piece<K> mid(out.ring(), out.col_degrees(), d);
  const std::size_t im = in.cols() == 0 ? 0 : mid.dim_submodule(columns(in), in.col_degrees());
  return kernel_dim(out, d) - im;
}

}  // namespace oracle
