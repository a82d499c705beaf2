#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "koszulab/poly_io.hpp"
#include "koszulab/polynomial.hpp"

namespace koszulab {

using Degree = std::int64_t;

/// Polynomial matrix between graded free modules: columns index the source basis,
/// rows the target basis. Generator degrees are stored per row and column, so a
/// graded entry (i, j) is homogeneous of degree col_degree(j) - row_degree(i).
template <FieldElement K>
class Matrix {
 public:
  Matrix() = default;

  Matrix(Ring<K> ring, std::vector<Degree> row_degrees, std::vector<Degree> col_degrees)
      : ring_(std::move(ring)),
        row_degrees_(std::move(row_degrees)),
        col_degrees_(std::move(col_degrees)),
        entries_(row_degrees_.size() * col_degrees_.size(), ring_.zero()) {}

  static Matrix identity(const Ring<K>& ring, const std::vector<Degree>& degrees) {
    Matrix m(ring, degrees, degrees);
    for (std::size_t i = 0; i < degrees.size(); ++i) m.set(i, i, ring.one());
    return m;
  }

  /// Builds from row-major entries, inferring column degrees from homogeneous entries
  /// (falling back to the largest entry degree when a column is not homogeneous).
  static Matrix from_rows(const Ring<K>& ring, const std::vector<std::vector<Poly<K>>>& rows,
                          std::vector<Degree> row_degrees = {}, std::size_t cols_if_empty = 0) {
    const std::size_t nr = rows.size();
    const std::size_t nc = nr == 0 ? cols_if_empty : rows[0].size();
    if (row_degrees.empty()) row_degrees.assign(nr, 0);
    if (row_degrees.size() != nr) throw InvalidArgument("row degree count mismatch");
    Matrix m(ring, row_degrees, std::vector<Degree>(nc, 0));
    for (std::size_t i = 0; i < nr; ++i) {
      if (rows[i].size() != nc) throw InvalidArgument("ragged matrix rows");
      for (std::size_t j = 0; j < nc; ++j) m.set(i, j, rows[i][j]);
    }
    for (std::size_t j = 0; j < nc; ++j) m.col_degrees_[j] = m.infer_column_degree(j).value_or(0);
    return m;
  }

  const Ring<K>& ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return row_degrees_.size(); }
  std::size_t cols() const noexcept { return col_degrees_.size(); }
  const std::vector<Degree>& row_degrees() const noexcept { return row_degrees_; }
  const std::vector<Degree>& col_degrees() const noexcept { return col_degrees_; }

  const Poly<K>& at(std::size_t i, std::size_t j) const { return entries_[i * cols() + j]; }
  void set(std::size_t i, std::size_t j, Poly<K> p) {
    if (!same_ring(p.ring(), ring_.descriptor())) throw MixedRings("matrix entry from another ring");
    entries_[i * cols() + j] = std::move(p);
  }
  void set_col_degree(std::size_t j, Degree d) { col_degrees_[j] = d; }
  void set_row_degree(std::size_t i, Degree d) { row_degrees_[i] = d; }

  std::vector<Poly<K>> column(std::size_t j) const {
    std::vector<Poly<K>> out;
    out.reserve(rows());
    for (std::size_t i = 0; i < rows(); ++i) out.push_back(at(i, j));
    return out;
  }

  void append_column(const std::vector<Poly<K>>& col, Degree degree) {
    if (col.size() != rows()) throw InvalidArgument("column length mismatch");
    std::vector<Poly<K>> next;
    next.reserve(rows() * (cols() + 1));
    for (std::size_t i = 0; i < rows(); ++i) {
      for (std::size_t j = 0; j < cols(); ++j) next.push_back(at(i, j));
      next.push_back(col[i]);
    }
    entries_ = std::move(next);
    col_degrees_.push_back(degree);
  }

  std::optional<Degree> infer_column_degree(std::size_t j) const {
    std::optional<Degree> d;
    for (std::size_t i = 0; i < rows(); ++i) {
      const auto& p = at(i, j);
      if (p.is_zero()) continue;
      if (!p.is_homogeneous()) return std::nullopt;
      const Degree cand = p.max_degree() + row_degrees_[i];
      if (d && *d != cand) return std::nullopt;
      d = cand;
    }
    return d;
  }

  /// Largest entry degree plus row degree in column j (sugar of the column).
  Degree column_sugar(std::size_t j) const {
    Degree d = col_degrees_[j];
    bool any = false;
    for (std::size_t i = 0; i < rows(); ++i) {
      const auto& p = at(i, j);
      if (p.is_zero()) continue;
      const Degree cand = p.max_degree() + row_degrees_[i];
      d = any ? std::max(d, cand) : cand;
      any = true;
    }
    return d;
  }

  bool is_zero() const {
    for (const auto& p : entries_) {
      if (!p.is_zero()) return false;
    }
    return true;
  }

  /// True when every nonzero entry (i,j) is homogeneous of degree col(j) - row(i).
  bool is_graded() const {
    for (std::size_t i = 0; i < rows(); ++i) {
      for (std::size_t j = 0; j < cols(); ++j) {
        const auto& p = at(i, j);
        if (p.is_zero()) continue;
        if (!p.is_homogeneous() || p.max_degree() != col_degrees_[j] - row_degrees_[i]) return false;
      }
    }
    return true;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("matrix product dimension mismatch");
    if (!same_ring(a.ring_.descriptor(), b.ring_.descriptor())) throw MixedRings("matrix product across rings");
    Matrix c(a.ring_, a.row_degrees_, b.col_degrees_);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const auto& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols(); ++j) {
          const auto& bkj = b.at(k, j);
          if (bkj.is_zero()) continue;
          c.entries_[i * c.cols() + j] += aik * bkj;
        }
      }
    }
    return c;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) { return a.combine(b, false); }
  friend Matrix operator-(const Matrix& a, const Matrix& b) { return a.combine(b, true); }

  Matrix scaled(const K& c) const {
    Matrix m(*this);
    for (auto& p : m.entries_) p = p.scaled(c);
    return m;
  }

  Matrix negated() const {
    Matrix m(*this);
    for (auto& p : m.entries_) p = -p;
    return m;
  }

  Matrix transpose_shape(std::vector<Degree> row_degrees, std::vector<Degree> col_degrees) const {
    Matrix m(ring_, std::move(row_degrees), std::move(col_degrees));
    for (std::size_t i = 0; i < rows(); ++i) {
      for (std::size_t j = 0; j < cols(); ++j) m.set(j, i, at(i, j));
    }
    return m;
  }

  /// [a | b]: same target, concatenated sources.
  static Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw InvalidArgument("hcat row mismatch");
    std::vector<Degree> cd = a.col_degrees_;
    cd.insert(cd.end(), b.col_degrees_.begin(), b.col_degrees_.end());
    Matrix m(a.ring_, a.row_degrees_, cd);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) m.set(i, j, a.at(i, j));
      for (std::size_t j = 0; j < b.cols(); ++j) m.set(i, a.cols() + j, b.at(i, j));
    }
    return m;
  }

  /// Block diagonal sum.
  static Matrix direct_sum(const Matrix& a, const Matrix& b) {
    std::vector<Degree> rd = a.row_degrees_, cd = a.col_degrees_;
    rd.insert(rd.end(), b.row_degrees_.begin(), b.row_degrees_.end());
    cd.insert(cd.end(), b.col_degrees_.begin(), b.col_degrees_.end());
    Matrix m(a.ring_, rd, cd);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) m.set(i, j, a.at(i, j));
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) m.set(a.rows() + i, a.cols() + j, b.at(i, j));
    }
    return m;
  }

  Matrix select_columns(const std::vector<std::size_t>& which) const {
    std::vector<Degree> cd;
    for (auto j : which) cd.push_back(col_degrees_[j]);
    Matrix m(ring_, row_degrees_, cd);
    for (std::size_t i = 0; i < rows(); ++i) {
      for (std::size_t k = 0; k < which.size(); ++k) m.set(i, k, at(i, which[k]));
    }
    return m;
  }

  Matrix select_rows(const std::vector<std::size_t>& which) const {
    std::vector<Degree> rd;
    for (auto i : which) rd.push_back(row_degrees_[i]);
    Matrix m(ring_, rd, col_degrees_);
    for (std::size_t k = 0; k < which.size(); ++k) {
      for (std::size_t j = 0; j < cols(); ++j) m.set(k, j, at(which[k], j));
    }
    return m;
  }

  /// Rows [begin, end).
  Matrix row_block(std::size_t begin, std::size_t end) const {
    std::vector<std::size_t> which;
    for (std::size_t i = begin; i < end; ++i) which.push_back(i);
    return select_rows(which);
  }

  Matrix with_ring(const Ring<K>& ring) const {
    Matrix m(*this);
    m.ring_ = ring;
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.row_degrees_ == b.row_degrees_ && a.col_degrees_ == b.col_degrees_ && a.entries_ == b.entries_;
  }

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < rows(); ++i) {
      out += i == 0 ? "[" : ", [";
      for (std::size_t j = 0; j < cols(); ++j) {
        if (j > 0) out += ", ";
        out += format_poly(at(i, j));
      }
      out += "]";
    }
    return out + "]";
  }

 private:
  Matrix combine(const Matrix& b, bool subtract) const {
    if (rows() != b.rows() || cols() != b.cols()) throw InvalidArgument("matrix sum dimension mismatch");
    Matrix m(*this);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      m.entries_[k] = subtract ? entries_[k] - b.entries_[k] : entries_[k] + b.entries_[k];
    }
    return m;
  }

  Ring<K> ring_;
  std::vector<Degree> row_degrees_;
  std::vector<Degree> col_degrees_;
  std::vector<Poly<K>> entries_;
};

}  // namespace koszulab
