#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "ihtk/exact.hpp"

namespace ihtk {

/// Sparse column vector: (row, value) pairs sorted by row, values nonzero.
template <class T>
using SCol = std::vector<std::pair<int, T>>;

/// c += k * a, merge style.  T must have exact arithmetic.
template <class T>
SCol<T> col_axpy(const SCol<T>& c, const T& k, const SCol<T>& a) {
  SCol<T> out;
  out.reserve(c.size() + a.size());
  size_t i = 0, j = 0;
  while (i < c.size() || j < a.size()) {
    if (j == a.size() || (i < c.size() && c[i].first < a[j].first)) {
      out.push_back(c[i++]);
    } else if (i == c.size() || a[j].first < c[i].first) {
      T v = k * a[j].second;
      if (v != 0) out.emplace_back(a[j].first, std::move(v));
      ++j;
    } else {
      T v = c[i].second + k * a[j].second;
      if (v != 0) out.emplace_back(c[i].first, std::move(v));
      ++i, ++j;
    }
  }
  return out;
}

/// Dense-free sparse matrix, column major.  Rows and columns are 0-based.
template <class T>
struct SMat {
  int nr = 0, nc = 0;
  std::vector<SCol<T>> col;

  SMat() = default;
  SMat(int r, int c) : nr(r), nc(c), col(c) {}

  static SMat identity(int n) {
    SMat m(n, n);
    for (int i = 0; i < n; ++i) m.col[i].emplace_back(i, T(1));
    return m;
  }

  T get(int r, int c) const {
    const auto& v = col[c];
    auto it = std::lower_bound(
        v.begin(), v.end(), r,
        [](const std::pair<int, T>& p, int row) { return p.first < row; });
    if (it != v.end() && it->first == r) return it->second;
    return T(0);
  }

  void set(int r, int c, const T& val) {
    auto& v = col[c];
    auto it = std::lower_bound(
        v.begin(), v.end(), r,
        [](const std::pair<int, T>& p, int row) { return p.first < row; });
    if (it != v.end() && it->first == r) {
      if (val == 0)
        v.erase(it);
      else
        it->second = val;
    } else if (val != 0) {
      v.insert(it, {r, val});
    }
  }

  size_t nnz() const {
    size_t n = 0;
    for (const auto& c : col) n += c.size();
    return n;
  }

  bool is_zero() const {
    for (const auto& c : col)
      if (!c.empty()) return false;
    return true;
  }

  bool operator==(const SMat& o) const {
    return nr == o.nr && nc == o.nc && col == o.col;
  }
  bool operator!=(const SMat& o) const { return !(*this == o); }

  SMat transpose() const {
    SMat t(nc, nr);
    for (int c = 0; c < nc; ++c)
      for (const auto& [r, v] : col[c]) t.col[r].emplace_back(c, v);
    for (auto& c : t.col)
      std::sort(c.begin(), c.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    return t;
  }

  SMat mul(const SMat& b) const {
    SMat out(nr, b.nc);
    for (int c = 0; c < b.nc; ++c) {
      SCol<T> acc;
      for (const auto& [k, v] : b.col[c]) acc = col_axpy(acc, v, col[k]);
      out.col[c] = std::move(acc);
    }
    return out;
  }

  SCol<T> apply(const SCol<T>& x) const {
    SCol<T> acc;
    for (const auto& [k, v] : x) acc = col_axpy(acc, v, col[k]);
    return acc;
  }

  SMat add(const SMat& b) const {
    SMat out(nr, nc);
    for (int c = 0; c < nc; ++c) out.col[c] = col_axpy(col[c], T(1), b.col[c]);
    return out;
  }

  SMat sub(const SMat& b) const {
    SMat out(nr, nc);
    for (int c = 0; c < nc; ++c) out.col[c] = col_axpy(col[c], T(-1), b.col[c]);
    return out;
  }

  SMat scaled(const T& k) const {
    SMat out(nr, nc);
    if (k == 0) return out;
    for (int c = 0; c < nc; ++c) {
      out.col[c] = col[c];
      for (auto& e : out.col[c]) e.second *= k;
    }
    return out;
  }

  /// Glue columns of b to the right.
  SMat hcat(const SMat& b) const {
    SMat out(nr, nc + b.nc);
    for (int c = 0; c < nc; ++c) out.col[c] = col[c];
    for (int c = 0; c < b.nc; ++c) out.col[nc + c] = b.col[c];
    return out;
  }

  /// Keep the listed columns, in the listed order.
  SMat select_cols(const std::vector<int>& cols) const {
    SMat out(nr, static_cast<int>(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i) out.col[i] = col[cols[i]];
    return out;
  }

  /// Keep the listed rows, renumbered 0..k-1 in the listed order.
  SMat select_rows(const std::vector<int>& rows) const {
    std::vector<int> where(nr, -1);
    for (size_t i = 0; i < rows.size(); ++i) where[rows[i]] = static_cast<int>(i);
    SMat out(static_cast<int>(rows.size()), nc);
    for (int c = 0; c < nc; ++c)
      for (const auto& [r, v] : col[c])
        if (where[r] >= 0) out.col[c].emplace_back(where[r], v);
    return out;
  }

  /// Push rows into a larger row space: new row index = rowmap[old].
  SMat embed_rows(int new_nr, const std::vector<int>& rowmap) const {
    SMat out(new_nr, nc);
    for (int c = 0; c < nc; ++c) {
      for (const auto& [r, v] : col[c]) out.col[c].emplace_back(rowmap[r], v);
      std::sort(out.col[c].begin(), out.col[c].end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    return out;
  }

  std::vector<std::vector<T>> to_dense() const {
    std::vector<std::vector<T>> d(nr, std::vector<T>(nc, T(0)));
    for (int c = 0; c < nc; ++c)
      for (const auto& [r, v] : col[c]) d[r][c] = v;
    return d;
  }

  static SMat from_dense(const std::vector<std::vector<T>>& d) {
    SMat m(static_cast<int>(d.size()),
           d.empty() ? 0 : static_cast<int>(d[0].size()));
    for (int r = 0; r < m.nr; ++r)
      for (int c = 0; c < m.nc; ++c)
        if (d[r][c] != 0) m.col[c].emplace_back(r, d[r][c]);
    return m;
  }
};

using IntMat = SMat<Int>;
using RatMat = SMat<Rat>;

inline RatMat to_rat(const IntMat& m) {
  RatMat out(m.nr, m.nc);
  for (int c = 0; c < m.nc; ++c)
    for (const auto& [r, v] : m.col[c]) out.col[c].emplace_back(r, Rat(v));
  return out;
}

/// Exact integer part; throws if any entry is non-integral.
inline IntMat to_int(const RatMat& m) {
  IntMat out(m.nr, m.nc);
  for (int c = 0; c < m.nc; ++c)
    for (const auto& [r, v] : m.col[c]) {
      if (boost::multiprecision::denominator(v) != 1)
        throw std::domain_error("matrix entry is not an integer");
      out.col[c].emplace_back(r, boost::multiprecision::numerator(v));
    }
  return out;
}

/// Fraction-free determinant (Bareiss).  Square matrices only.
Int det(const IntMat& m);

/// Exact inverse of a square integer matrix; requires det = +-1 over Z.
/// Over F_p entries are reduced and any unit determinant works.
IntMat unimodular_inverse(const IntMat& m, const Ring& ring);

}  // namespace ihtk
