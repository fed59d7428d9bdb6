#include "ihtk/snf.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ihtk {

namespace {

Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }

/// Dense elimination to Smith form.  Pivot selection: globally minimal
/// absolute value in the remaining region, ties by (row, col).  Optionally
/// tracks the unimodular transforms and their inverses.
struct DenseSnf {
  int m, n;
  std::vector<std::vector<Int>> a;
  bool track;
  std::vector<std::vector<Int>> u, uinv, v, vinv;

  DenseSnf(std::vector<std::vector<Int>> mat, bool with_transforms)
      : m(static_cast<int>(mat.size())),
        n(m ? static_cast<int>(mat[0].size()) : 0),
        a(std::move(mat)),
        track(with_transforms) {
    if (track) {
      u = ident(m);
      uinv = ident(m);
      v = ident(n);
      vinv = ident(n);
    }
  }

  static std::vector<std::vector<Int>> ident(int k) {
    std::vector<std::vector<Int>> e(k, std::vector<Int>(k, 0));
    for (int i = 0; i < k; ++i) e[i][i] = 1;
    return e;
  }

  void row_axpy(int i, int j, const Int& q) {  // row i += q * row j
    for (int c = 0; c < n; ++c) a[i][c] += q * a[j][c];
    if (track) {
      for (int c = 0; c < m; ++c) u[i][c] += q * u[j][c];
      for (int r = 0; r < m; ++r) uinv[r][j] -= q * uinv[r][i];
    }
  }
  void row_swap(int i, int j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    if (track) {
      std::swap(u[i], u[j]);
      for (int r = 0; r < m; ++r) std::swap(uinv[r][i], uinv[r][j]);
    }
  }
  void row_neg(int i) {
    for (int c = 0; c < n; ++c) a[i][c] = -a[i][c];
    if (track) {
      for (int c = 0; c < m; ++c) u[i][c] = -u[i][c];
      for (int r = 0; r < m; ++r) uinv[r][i] = -uinv[r][i];
    }
  }
  void col_axpy(int j, int k, const Int& q) {  // col j += q * col k
    for (int r = 0; r < m; ++r) a[r][j] += q * a[r][k];
    if (track) {
      for (int r = 0; r < n; ++r) v[r][j] += q * v[r][k];
      for (int c = 0; c < n; ++c) vinv[k][c] -= q * vinv[j][c];
    }
  }
  void col_swap(int j, int k) {
    if (j == k) return;
    for (int r = 0; r < m; ++r) std::swap(a[r][j], a[r][k]);
    if (track) {
      for (int r = 0; r < n; ++r) std::swap(v[r][j], v[r][k]);
      std::swap(vinv[j], vinv[k]);
    }
  }

  void run() {
    int t = 0;
    while (t < m && t < n) {
      int pr = -1, pc = -1;
      for (int r = t; r < m; ++r)
        for (int c = t; c < n; ++c) {
          if (a[r][c] == 0) continue;
          if (pr < 0 || iabs(a[r][c]) < iabs(a[pr][pc])) {
            pr = r;
            pc = c;
          }
        }
      if (pr < 0) break;
      row_swap(t, pr);
      col_swap(t, pc);

      bool restart = false;
      for (int i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        Int q = a[i][t] / a[t][t];
        if (q != 0) row_axpy(i, t, -q);
        if (a[i][t] != 0) restart = true;  // remainder beats the pivot
      }
      if (restart) continue;
      for (int j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        Int q = a[t][j] / a[t][t];
        if (q != 0) col_axpy(j, t, -q);
        if (a[t][j] != 0) restart = true;
      }
      if (restart) continue;

      // The pivot must divide every remaining entry; pull a violator into
      // its row and re-run, which strictly shrinks the pivot.
      bool fixed = false;
      for (int i = t + 1; i < m && !fixed; ++i)
        for (int j = t + 1; j < n && !fixed; ++j)
          if (a[i][j] % a[t][t] != 0) {
            row_axpy(t, i, 1);
            fixed = true;
          }
      if (fixed) continue;
      ++t;
    }
    for (int i = 0; i < t; ++i)
      if (a[i][i] < 0) row_neg(i);
  }

  std::vector<Int> diag() const {
    std::vector<Int> d(std::min(m, n), 0);
    for (int i = 0; i < std::min(m, n); ++i) d[i] = a[i][i];
    return d;
  }
};

IntMat dense_to_smat(const std::vector<std::vector<Int>>& d) {
  return IntMat::from_dense(d);
}

}  // namespace

std::vector<Int> smith_diagonal(const IntMat& a) {
  const int nr = a.nr, nc = a.nc;
  const int mn = std::min(nr, nc);
  if (mn == 0) return {};

  std::vector<std::map<int, Int>> colm(nc);
  std::vector<std::set<int>> rowocc(nr);
  for (int c = 0; c < nc; ++c)
    for (const auto& [r, val] : a.col[c]) {
      colm[c].emplace(r, val);
      rowocc[r].insert(c);
    }
  std::vector<char> colactive(nc, 1);
  int ones = 0;

  // Phase 1: eliminate on unit pivots.  Clearing the pivot row by column
  // operations leaves the pivot column supported only at the pivot, so the
  // matching row operations are free of fill-in.
  auto eliminate = [&](int r, int c) {
    const Int pv = colm[c].at(r);
    std::vector<int> rowcols(rowocc[r].begin(), rowocc[r].end());
    for (int c2 : rowcols) {
      if (c2 == c) continue;
      Int k = colm[c2].at(r) / pv;  // exact: pv is a unit
      for (const auto& [r2, val] : colm[c]) {
        auto it = colm[c2].find(r2);
        Int nv = (it != colm[c2].end() ? it->second : Int(0)) - k * val;
        if (nv == 0) {
          if (it != colm[c2].end()) {
            colm[c2].erase(it);
            rowocc[r2].erase(c2);
          }
        } else if (it != colm[c2].end()) {
          it->second = std::move(nv);
        } else {
          colm[c2].emplace(r2, std::move(nv));
          rowocc[r2].insert(c2);
        }
      }
    }
    for (const auto& [r2, val] : colm[c])
      if (r2 != r) rowocc[r2].erase(c);
    colm[c].clear();
    rowocc[r].clear();
    colactive[c] = 0;
  };

  bool progress = true;
  while (progress) {
    progress = false;
    for (int c = 0; c < nc; ++c) {
      if (!colactive[c] || colm[c].empty()) continue;
      int bestr = -1;
      size_t bestcost = 0;
      for (const auto& [r, val] : colm[c]) {
        if (val != 1 && val != -1) continue;
        size_t cost = rowocc[r].size();
        if (bestr < 0 || cost < bestcost) {
          bestr = r;
          bestcost = cost;
        }
      }
      if (bestr < 0) continue;
      eliminate(bestr, c);
      ++ones;
      progress = true;
    }
  }

  // Phase 2: dense reduction of whatever survives.
  std::vector<int> rrows, rcols;
  {
    std::set<int> rws;
    for (int c = 0; c < nc; ++c)
      if (colactive[c] && !colm[c].empty()) {
        rcols.push_back(c);
        for (const auto& [r, val] : colm[c]) rws.insert(r);
      }
    rrows.assign(rws.begin(), rws.end());
  }
  std::vector<Int> diag(static_cast<size_t>(ones), Int(1));
  if (!rcols.empty()) {
    std::vector<int> rowidx(nr, -1);
    for (size_t i = 0; i < rrows.size(); ++i) rowidx[rrows[i]] = static_cast<int>(i);
    std::vector<std::vector<Int>> dense(rrows.size(),
                                        std::vector<Int>(rcols.size(), 0));
    for (size_t j = 0; j < rcols.size(); ++j)
      for (const auto& [r, val] : colm[rcols[j]]) dense[rowidx[r]][j] = val;
    DenseSnf ds(std::move(dense), false);
    ds.run();
    for (const Int& d : ds.diag())
      if (d != 0) diag.push_back(d);
  }
  diag.resize(mn, Int(0));
  return diag;
}

Snf smith_normal_form(const IntMat& a, bool with_transforms) {
  Snf out;
  out.with_transforms = with_transforms;
  if (!with_transforms) {
    out.diag = smith_diagonal(a);
    return out;
  }
  DenseSnf ds(a.to_dense(), true);
  ds.run();
  out.diag = ds.diag();
  out.u = dense_to_smat(ds.u);
  out.uinv = dense_to_smat(ds.uinv);
  out.v = dense_to_smat(ds.v);
  out.vinv = dense_to_smat(ds.vinv);
  return out;
}

Snf smith_textbook(const IntMat& a) { return smith_normal_form(a, true); }

}  // namespace ihtk
