#include "ihtk/echelon.hpp"

#include <boost/multiprecision/integer.hpp>

namespace ihtk {

namespace {

int low_row(const SCol<Int>& c) { return c.empty() ? -1 : c.back().first; }
int low_row(const SCol<Rat>& c) { return c.empty() ? -1 : c.back().first; }

}  // namespace

int ZEchelon::add(SCol<Int> c) {
  int id = n_in_++;
  SCol<Int> expr{{id, Int(1)}};
  // Reduce from the bottom: gcd-combine with the echelon column owning the
  // current lowest row until that row clears or the column claims it.
  while (!c.empty()) {
    int r = low_row(c);
    auto it = piv_.find(r);
    if (it == piv_.end()) {
      piv_.emplace(r, ECol{std::move(c), std::move(expr)});
      return id;
    }
    ECol& e = it->second;
    Int a = e.v.back().second;
    Int b = c.back().second;
    // Euclid on the row-r values; |value| strictly shrinks every pass.
    while (true) {
      Int q = b / a;
      if (q != 0) {
        c = col_axpy(c, Int(-q), e.v);
        expr = col_axpy(expr, Int(-q), e.expr);
      }
      if (low_row(c) != r) break;
      b = c.back().second;
      std::swap(e.v, c);
      std::swap(e.expr, expr);
      std::swap(a, b);
    }
  }
  kernel_.push_back(std::move(expr));
  return id;
}

SCol<Int> ZEchelon::reduce(SCol<Int> v, SCol<Int>* coeffs) const {
  SCol<Int> acc;
  while (!v.empty()) {
    int r = low_row(v);
    auto it = piv_.find(r);
    if (it == piv_.end()) break;
    const ECol& e = it->second;
    const Int& a = e.v.back().second;
    const Int& b = v.back().second;
    if (b % a != 0) break;  // not in the integer span at this row
    Int q = b / a;
    v = col_axpy(v, Int(-q), e.v);
    if (coeffs) acc = col_axpy(acc, q, e.expr);
  }
  if (coeffs) *coeffs = std::move(acc);
  return v;
}

std::optional<SCol<Int>> ZEchelon::solve(const SCol<Int>& v) const {
  SCol<Int> coeffs;
  SCol<Int> res = reduce(v, &coeffs);
  if (!res.empty()) return std::nullopt;
  return coeffs;
}

std::vector<int> ZEchelon::pivot_rows() const {
  std::vector<int> out;
  out.reserve(piv_.size());
  for (const auto& [r, e] : piv_) out.push_back(r);
  return out;
}

int FEchelon::add(SCol<Rat> c) {
  int id = n_in_++;
  SCol<Rat> expr{{id, Rat(1)}};
  for (auto& e : c) e.second = F_.norm(e.second);
  c.erase(std::remove_if(c.begin(), c.end(),
                         [&](const auto& p) { return F_.is_zero(p.second); }),
          c.end());
  while (!c.empty()) {
    int r = low_row(c);
    auto it = piv_.find(r);
    if (it == piv_.end()) {
      piv_.emplace(r, ECol{std::move(c), std::move(expr)});
      return id;
    }
    const ECol& e = it->second;
    Rat k = F_.neg(F_.div(c.back().second, e.v.back().second));
    c = col_axpy(c, k, e.v);
    for (auto& p : c) p.second = F_.norm(p.second);
    c.erase(std::remove_if(c.begin(), c.end(),
                           [&](const auto& p) { return F_.is_zero(p.second); }),
            c.end());
    expr = col_axpy(expr, k, e.expr);
  }
  kernel_.push_back(std::move(expr));
  return id;
}

SCol<Rat> FEchelon::reduce(SCol<Rat> v, SCol<Rat>* coeffs) const {
  SCol<Rat> acc;
  for (auto& e : v) e.second = F_.norm(e.second);
  v.erase(std::remove_if(v.begin(), v.end(),
                         [&](const auto& p) { return F_.is_zero(p.second); }),
          v.end());
  while (!v.empty()) {
    int r = low_row(v);
    auto it = piv_.find(r);
    if (it == piv_.end()) break;
    const ECol& e = it->second;
    Rat q = F_.div(v.back().second, e.v.back().second);
    v = col_axpy(v, F_.neg(q), e.v);
    for (auto& p : v) p.second = F_.norm(p.second);
    v.erase(std::remove_if(v.begin(), v.end(),
                           [&](const auto& p) { return F_.is_zero(p.second); }),
            v.end());
    if (coeffs) acc = col_axpy(acc, q, e.expr);
  }
  if (coeffs) {
    for (auto& p : acc) p.second = F_.norm(p.second);
    acc.erase(std::remove_if(acc.begin(), acc.end(),
                             [&](const auto& p) { return F_.is_zero(p.second); }),
              acc.end());
    *coeffs = std::move(acc);
  }
  return v;
}

SCol<Rat> FEchelon::reduce_full(SCol<Rat> v, SCol<Rat>* coeffs) const {
  SCol<Rat> acc;
  for (auto& p : v) p.second = F_.norm(p.second);
  v.erase(std::remove_if(v.begin(), v.end(),
                         [&](const auto& p) { return F_.is_zero(p.second); }),
          v.end());
  // Eliminate the highest pivotal row each pass; the axpy only touches rows
  // at or below it, so the highest pivotal row strictly descends.
  while (true) {
    int target = -1;
    Rat tval;
    for (auto it = v.rbegin(); it != v.rend(); ++it)
      if (piv_.count(it->first)) {
        target = it->first;
        tval = it->second;
        break;
      }
    if (target < 0) break;
    const ECol& e = piv_.at(target);
    Rat q = F_.div(tval, e.v.back().second);
    v = col_axpy(v, F_.neg(q), e.v);
    for (auto& p : v) p.second = F_.norm(p.second);
    v.erase(std::remove_if(v.begin(), v.end(),
                           [&](const auto& p) { return F_.is_zero(p.second); }),
            v.end());
    if (coeffs) acc = col_axpy(acc, q, e.expr);
  }
  if (coeffs) {
    for (auto& p : acc) p.second = F_.norm(p.second);
    acc.erase(std::remove_if(acc.begin(), acc.end(),
                             [&](const auto& p) { return F_.is_zero(p.second); }),
              acc.end());
    *coeffs = std::move(acc);
  }
  return v;
}

std::optional<SCol<Rat>> FEchelon::solve(const SCol<Rat>& v) const {
  SCol<Rat> coeffs;
  SCol<Rat> res = reduce(v, &coeffs);
  if (!res.empty()) return std::nullopt;
  return coeffs;
}

std::vector<int> FEchelon::pivot_rows() const {
  std::vector<int> out;
  out.reserve(piv_.size());
  for (const auto& [r, e] : piv_) out.push_back(r);
  return out;
}

IntMat kernel_basis_z(const IntMat& a) {
  ZEchelon ech(a.nr);
  for (int c = 0; c < a.nc; ++c) ech.add(a.col[c]);
  IntMat k(a.nc, static_cast<int>(ech.kernel().size()));
  for (size_t j = 0; j < ech.kernel().size(); ++j) k.col[j] = ech.kernel()[j];
  return k;
}

RatMat kernel_basis_f(const FieldOps& f, const RatMat& a) {
  FEchelon ech(f, a.nr);
  for (int c = 0; c < a.nc; ++c) ech.add(a.col[c]);
  RatMat k(a.nc, static_cast<int>(ech.kernel().size()));
  for (size_t j = 0; j < ech.kernel().size(); ++j) k.col[j] = ech.kernel()[j];
  return k;
}

int rank_q(const IntMat& a) {
  FEchelon ech(FieldOps(Ring::Q()), a.nr);
  for (int c = 0; c < a.nc; ++c) {
    SCol<Rat> col;
    col.reserve(a.col[c].size());
    for (const auto& [r, v] : a.col[c]) col.emplace_back(r, Rat(v));
    ech.add(std::move(col));
  }
  return ech.rank();
}

int rank_f(const FieldOps& f, const RatMat& a) {
  FEchelon ech(f, a.nr);
  for (int c = 0; c < a.nc; ++c) ech.add(a.col[c]);
  return ech.rank();
}

IntMat solve_columns_z(const IntMat& a, const IntMat& b) {
  ZEchelon ech(a.nr);
  for (int c = 0; c < a.nc; ++c) ech.add(a.col[c]);
  IntMat x(a.nc, b.nc);
  for (int c = 0; c < b.nc; ++c) {
    auto s = ech.solve(b.col[c]);
    if (!s) throw verify_error("column is not in the integer span");
    x.col[c] = *s;
  }
  return x;
}

RatMat solve_columns_f(const FieldOps& f, const RatMat& a, const RatMat& b) {
  FEchelon ech(f, a.nr);
  for (int c = 0; c < a.nc; ++c) ech.add(a.col[c]);
  RatMat x(a.nc, b.nc);
  for (int c = 0; c < b.nc; ++c) {
    auto s = ech.solve(b.col[c]);
    if (!s) throw verify_error("column is not in the field span");
    x.col[c] = *s;
  }
  return x;
}

IntMat residue_int(const FieldOps& f, const RatMat& m) {
  IntMat out(m.nr, m.nc);
  for (int c = 0; c < m.nc; ++c)
    for (const auto& [r, v] : m.col[c]) {
      Rat w = f.norm(v);
      if (boost::multiprecision::denominator(w) != 1)
        throw verify_error("expected an integral matrix entry");
      Int num = boost::multiprecision::numerator(w);
      if (num != 0) out.col[c].emplace_back(r, num);
    }
  return out;
}

}  // namespace ihtk
