#pragma once

#include <map>
#include <vector>

#include "koszulab/polynomial.hpp"

namespace koszulab {

template <FieldElement K>
using DenseMatrix = std::vector<std::vector<K>>;

/// Reduced row echelon form in place; returns the pivot columns.
template <FieldElement K>
std::vector<std::size_t> row_reduce(DenseMatrix<K>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t ncols = rows[0].size();
  std::size_t r = 0;
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
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

template <FieldElement K>
std::size_t dense_rank(DenseMatrix<K> rows) {
  return row_reduce(rows).size();
}

/// Dense product a * b.
template <FieldElement K>
DenseMatrix<K> dense_multiply(const DenseMatrix<K>& a, const DenseMatrix<K>& b, const K& zero) {
  const std::size_t inner = b.size();
  const std::size_t ncols = inner == 0 ? 0 : b[0].size();
  DenseMatrix<K> out(a.size(), std::vector<K>(ncols, zero));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < ncols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

/// k-dimension of the span of a list of polynomials.
template <FieldElement K>
std::size_t polynomial_span_rank(const std::vector<Poly<K>>& polys) {
  if (polys.empty()) return 0;
  std::map<Monomial, std::size_t, decltype([](const Monomial& a, const Monomial& b) {
             for (std::size_t i = 0; i < kMaxVariables; ++i) {
               if (a[i] != b[i]) return a[i] < b[i];
             }
             return false;
           })>
      index;
  for (const auto& p : polys) {
    for (const auto& t : p.terms()) index.emplace(t.monomial, index.size());
  }
  if (index.empty()) return 0;
  DenseMatrix<K> rows;
  for (const auto& p : polys) {
    std::vector<K> row(index.size(), K::zero(p.ring()->field()));
    for (const auto& t : p.terms()) row[index.at(t.monomial)] = t.coeff;
    rows.push_back(std::move(row));
  }
  return dense_rank(std::move(rows));
}

}  // namespace koszulab
