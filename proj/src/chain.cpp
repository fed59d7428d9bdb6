#include "ihtk/chain.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ihtk {

bool zero_over(const IntMat& m, const Ring& ring) {
  if (ring.kind != RingKind::PrimeField) return m.is_zero();
  for (const auto& c : m.col)
    for (const auto& [r, v] : c)
      if (v % ring.p != 0) return false;
  return true;
}

namespace {

Int pos_mod(const Int& x, const Int& o) {
  Int r = x % o;
  if (r < 0) r += o;
  return r;
}

SCol<Rat> rat_col(const SCol<Int>& c) {
  SCol<Rat> out;
  out.reserve(c.size());
  for (const auto& [r, v] : c) out.emplace_back(r, Rat(v));
  return out;
}

/// Dense field rank by plain Gaussian elimination; the slow independent
/// recomputation used by verification paths.
int dense_rank_field(const FieldOps& f, const IntMat& a) {
  std::vector<std::vector<Rat>> d(a.nr, std::vector<Rat>(a.nc, Rat(0)));
  for (int c = 0; c < a.nc; ++c)
    for (const auto& [r, v] : a.col[c]) d[r][c] = f.norm(Rat(v));
  int rank = 0;
  for (int c = 0; c < a.nc && rank < a.nr; ++c) {
    int pr = -1;
    for (int r = rank; r < a.nr; ++r)
      if (!f.is_zero(d[r][c])) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    std::swap(d[pr], d[rank]);
    for (int r = rank + 1; r < a.nr; ++r) {
      if (f.is_zero(d[r][c])) continue;
      Rat k = f.div(d[r][c], d[rank][c]);
      for (int j = c; j < a.nc; ++j)
        d[r][j] = f.sub(d[r][j], f.mul(k, d[rank][j]));
    }
    ++rank;
  }
  return rank;
}

std::string degree_msg(const char* what, int d) {
  std::ostringstream os;
  os << what << " at degree " << d;
  return os.str();
}

}  // namespace

IntMat ChainComplex::boundary(int d) const {
  if (d >= 0 && d <= top()) return bd[d];
  return IntMat(dim(d - 1), dim(d));
}

void ChainComplex::validate() const {
  if (bd.size() != dims.size())
    throw input_error("chain complex: one boundary matrix per degree required");
  for (int d = 0; d <= top(); ++d) {
    int want_r = d == 0 ? 0 : dims[d - 1];
    if (bd[d].nr != want_r || bd[d].nc != dims[d])
      throw input_error(degree_msg("chain complex: boundary shape mismatch", d));
  }
  for (int d = 2; d <= top(); ++d)
    if (!zero_over(bd[d - 1].mul(bd[d]), ring))
      throw verify_error(degree_msg("boundary of boundary is nonzero", d));
}

std::string HomologyResult::to_string() const {
  std::ostringstream os;
  os << ring.name() << " homology:";
  for (int d = 0; d <= top(); ++d) {
    os << " H" << d << "=";
    os << betti[d];
    if (d < static_cast<int>(torsion.size()))
      for (const Int& t : torsion[d]) os << "+Z/" << t;
  }
  return os.str();
}

namespace {

HomologyResult homology_impl(const ChainComplex& c, bool textbook) {
  HomologyResult h;
  h.ring = c.ring;
  const int T = c.top();
  h.betti.assign(T + 1, 0);
  h.torsion.assign(T + 1, {});
  std::vector<int> rk(T + 2, 0);
  std::vector<std::vector<Int>> diags(T + 1);

  for (int d = 0; d <= T; ++d) {
    if (c.ring.kind == RingKind::Integers) {
      diags[d] = textbook ? smith_textbook(c.bd[d]).diag : smith_diagonal(c.bd[d]);
      for (const Int& v : diags[d])
        if (v != 0) ++rk[d];
    } else if (textbook) {
      rk[d] = dense_rank_field(FieldOps(c.ring), c.bd[d]);
    } else if (c.ring.kind == RingKind::Rationals) {
      rk[d] = rank_q(c.bd[d]);
    } else {
      rk[d] = rank_f(FieldOps(c.ring), to_rat(c.bd[d]));
    }
  }

  for (int d = 0; d <= T; ++d) {
    h.betti[d] = c.dims[d] - rk[d] - rk[d + 1];
    if (c.ring.kind == RingKind::Integers && d < T)
      for (const Int& v : diags[d + 1])
        if (v > 1) h.torsion[d].push_back(v);
  }
  return h;
}

}  // namespace

HomologyResult homology(const ChainComplex& c) { return homology_impl(c, false); }
HomologyResult homology_textbook(const ChainComplex& c) {
  return homology_impl(c, true);
}

HomologyBasisZ::HomologyBasisZ(const ChainComplex& c) : c_(&c) {
  if (c.ring != Ring::Z())
    throw input_error("integral homology basis needs Z coefficients");
  const int T = c.top();
  deg_.resize(T + 1);
  for (int d = 0; d <= T; ++d) {
    Deg& dd = deg_[d];
    dd.kernel = kernel_basis_z(c.bd[d]);
    const int k = dd.kernel.nc;
    IntMat b = d < T ? solve_columns_z(dd.kernel, c.bd[d + 1]) : IntMat(k, 0);
    Snf s = smith_normal_form(b, true);
    dd.u = s.u;
    dd.diag = s.diag;
    dd.rho = s.rank();
    for (int i = dd.rho; i < k; ++i) dd.gen_rows.push_back(i);  // free
    dd.g.betti = k - dd.rho;
    for (int i = 0; i < dd.rho; ++i)
      if (s.diag[i] > 1) {
        dd.gen_rows.push_back(i);
        dd.g.orders.push_back(s.diag[i]);
      }
    dd.reps = dd.kernel.mul(s.uinv.select_cols(dd.gen_rows));
    dd.kech = std::make_shared<ZEchelon>(c.dims[d]);
    for (int j = 0; j < k; ++j) dd.kech->add(dd.kernel.col[j]);
  }
}

const GroupDesc& HomologyBasisZ::group(int d) const {
  if (d < 0 || d >= static_cast<int>(deg_.size())) return zero_;
  return deg_[d].g;
}

const IntMat& HomologyBasisZ::reps(int d) const {
  if (d < 0 || d >= static_cast<int>(deg_.size())) return empty_;
  return deg_[d].reps;
}

std::vector<Int> HomologyBasisZ::coords(int d, const SCol<Int>& cycle) const {
  if (d < 0 || d >= static_cast<int>(deg_.size())) {
    if (!cycle.empty())
      throw verify_error(degree_msg("nonzero chain in an empty degree", d));
    return {};
  }
  const Deg& dd = deg_[d];
  auto x = dd.kech->solve(cycle);
  if (!x) throw verify_error(degree_msg("chain is not a cycle", d));
  SCol<Int> y = dd.u.apply(*x);
  std::vector<Int> dense(dd.u.nr, 0);
  for (const auto& [r, v] : y) dense[r] = v;
  std::vector<Int> out(dd.g.ngens(), 0);
  for (size_t j = 0; j < dd.gen_rows.size(); ++j) {
    Int v = dense[dd.gen_rows[j]];
    int tj = static_cast<int>(j) - dd.g.betti;
    out[j] = tj >= 0 ? pos_mod(v, dd.g.orders[tj]) : v;
  }
  return out;
}

HomologyBasisF::HomologyBasisF(const ChainComplex& c, FieldOps f)
    : c_(&c), f_(f) {
  if (c.ring != f.R) throw input_error("field basis ring mismatch");
  const int T = c.top();
  deg_.resize(T + 1);
  for (int d = 0; d <= T; ++d) {
    Deg& dd = deg_[d];
    dd.kernel = kernel_basis_f(f_, to_rat(c.bd[d]));
    const int k = dd.kernel.nc;
    dd.kech = std::make_shared<FEchelon>(f_, c.dims[d]);
    for (int j = 0; j < k; ++j) dd.kech->add(dd.kernel.col[j]);
    dd.bech = std::make_shared<FEchelon>(f_, k);
    if (d < T) {
      RatMat bc = solve_columns_f(f_, dd.kernel, to_rat(c.bd[d + 1]));
      for (int j = 0; j < bc.nc; ++j) dd.bech->add(bc.col[j]);
    }
    std::vector<int> repcols;
    for (int j = 0; j < k; ++j) {
      int before = dd.bech->rank();
      int id = dd.bech->add({{j, Rat(1)}});
      if (dd.bech->rank() > before) {
        dd.rep_ids.push_back(id);
        repcols.push_back(j);
      }
    }
    dd.betti = static_cast<int>(repcols.size());
    dd.reps = dd.kernel.select_cols(repcols);
  }
}

int HomologyBasisF::betti(int d) const {
  if (d < 0 || d >= static_cast<int>(deg_.size())) return 0;
  return deg_[d].betti;
}

const RatMat& HomologyBasisF::reps(int d) const {
  if (d < 0 || d >= static_cast<int>(deg_.size())) return empty_;
  return deg_[d].reps;
}

std::vector<Rat> HomologyBasisF::coords(int d, const SCol<Rat>& cycle) const {
  if (d < 0 || d >= static_cast<int>(deg_.size())) {
    for (const auto& [r, v] : cycle)
      if (!f_.is_zero(v))
        throw verify_error(degree_msg("nonzero chain in an empty degree", d));
    return {};
  }
  const Deg& dd = deg_[d];
  auto x = dd.kech->solve(cycle);
  if (!x) throw verify_error(degree_msg("chain is not a cycle", d));
  SCol<Rat> coeffs;
  SCol<Rat> res = dd.bech->reduce(*x, &coeffs);
  if (!res.empty())
    throw verify_error(degree_msg("cycle escapes the tracked cycle space", d));
  std::vector<Rat> out(dd.betti, Rat(0));
  for (const auto& [id, v] : coeffs) {
    auto it = std::lower_bound(dd.rep_ids.begin(), dd.rep_ids.end(), id);
    if (it != dd.rep_ids.end() && *it == id)
      out[it - dd.rep_ids.begin()] = v;
  }
  return out;
}

IntMat ChainMap::mat(int d) const {
  if (d >= 0 && d < static_cast<int>(m.size())) return m[d];
  return IntMat(dst->dim(d), src->dim(d));
}

void ChainMap::validate() const {
  if (!src || !dst) throw input_error("chain map endpoints missing");
  if (m.size() != src->dims.size())
    throw input_error("chain map: one matrix per source degree required");
  for (int d = 0; d <= src->top(); ++d)
    if (m[d].nr != dst->dim(d) || m[d].nc != src->dim(d))
      throw input_error(degree_msg("chain map shape mismatch", d));
  for (int d = 1; d <= src->top(); ++d) {
    IntMat lhs = dst->boundary(d).mul(mat(d));
    IntMat rhs = mat(d - 1).mul(src->boundary(d));
    if (!zero_over(lhs.sub(rhs), dst->ring))
      throw verify_error(
          degree_msg("chain map does not commute with the boundary", d));
  }
}

GradedClassMap induced_map(const ChainMap& f, const HomologyBasisZ& bs,
                           const HomologyBasisZ& bd) {
  const int T = std::max(f.src->top(), f.dst->top());
  GradedClassMap out;
  out.src.resize(T + 1);
  out.dst.resize(T + 1);
  out.m.resize(T + 1);
  for (int d = 0; d <= T; ++d) {
    const GroupDesc& gs = bs.group(d);
    const GroupDesc& gd = bd.group(d);
    out.src[d] = gs;
    out.dst[d] = gd;
    IntMat mm(gd.ngens(), gs.ngens());
    IntMat fm = f.mat(d);
    for (int j = 0; j < gs.ngens(); ++j) {
      SCol<Int> y = fm.apply(bs.reps(d).col[j]);
      std::vector<Int> cv = bd.coords(d, y);
      for (int r = 0; r < gd.ngens(); ++r)
        if (cv[r] != 0) mm.col[j].emplace_back(r, cv[r]);
      if (j >= gs.betti) {
        const Int& o = gs.orders[j - gs.betti];
        for (int r = 0; r < gd.ngens(); ++r) {
          bool ok = r < gd.betti ? cv[r] == 0
                                 : pos_mod(o * cv[r],
                                           gd.orders[r - gd.betti]) == 0;
          if (!ok)
            throw verify_error(
                degree_msg("induced map not defined on a torsion class", d));
        }
      }
    }
    out.m[d] = std::move(mm);
  }
  return out;
}

std::vector<RatMat> induced_map_f(const ChainMap& f, const HomologyBasisF& bs,
                                  const HomologyBasisF& bd) {
  const int T = std::max(f.src->top(), f.dst->top());
  std::vector<RatMat> out(T + 1);
  for (int d = 0; d <= T; ++d) {
    RatMat mm(bd.betti(d), bs.betti(d));
    RatMat fm = to_rat(f.mat(d));
    for (int j = 0; j < bs.betti(d); ++j) {
      SCol<Rat> y = fm.apply(bs.reps(d).col[j]);
      std::vector<Rat> cv = bd.coords(d, y);
      for (int r = 0; r < bd.betti(d); ++r)
        if (!bd.field().is_zero(cv[r])) mm.col[j].emplace_back(r, cv[r]);
    }
    out[d] = std::move(mm);
  }
  return out;
}

SpanComplex restrict_to_span_z(const ChainComplex& c,
                               const std::vector<IntMat>& span) {
  if (c.ring != Ring::Z())
    throw input_error("integral span restriction needs Z coefficients");
  if (span.size() != c.dims.size())
    throw input_error("span restriction: one span matrix per degree required");
  SpanComplex out;
  out.basis = span;
  out.cc.ring = c.ring;
  out.cc.dims.resize(c.dims.size());
  out.cc.bd.resize(c.dims.size());
  for (int d = 0; d <= c.top(); ++d) {
    if (span[d].nr != c.dims[d])
      throw input_error(degree_msg("span matrix row mismatch", d));
    out.cc.dims[d] = span[d].nc;
  }
  out.cc.bd[0] = IntMat(0, out.cc.dims[0]);
  for (int d = 1; d <= c.top(); ++d) {
    try {
      out.cc.bd[d] = solve_columns_z(span[d - 1], c.bd[d].mul(span[d]));
    } catch (const verify_error&) {
      throw input_error(degree_msg("span is not boundary stable over Z", d));
    }
  }
  return out;
}

SpanComplexF restrict_to_span_f(const ChainComplex& c, FieldOps f,
                                const std::vector<RatMat>& span) {
  if (c.ring != f.R) throw input_error("span restriction ring mismatch");
  if (span.size() != c.dims.size())
    throw input_error("span restriction: one span matrix per degree required");
  SpanComplexF out;
  out.basis = span;
  out.cc.ring = c.ring;
  out.cc.dims.resize(c.dims.size());
  out.cc.bd.resize(c.dims.size());
  out.bd.resize(c.dims.size());
  for (int d = 0; d <= c.top(); ++d) {
    if (span[d].nr != c.dims[d])
      throw input_error(degree_msg("span matrix row mismatch", d));
    out.cc.dims[d] = span[d].nc;
  }
  out.cc.bd[0] = IntMat(0, out.cc.dims[0]);
  out.bd[0] = RatMat(0, out.cc.dims[0]);
  for (int d = 1; d <= c.top(); ++d) {
    RatMat img = to_rat(c.bd[d]).mul(span[d]);
    try {
      out.bd[d] = solve_columns_f(f, span[d - 1], img);
    } catch (const verify_error&) {
      throw input_error(degree_msg("span is not boundary stable", d));
    }
    Int l = 1;
    for (const auto& col : out.bd[d].col)
      for (const auto& [r, v] : col)
        l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(v));
    out.cc.bd[d] = to_int(out.bd[d].scaled(Rat(l)));
  }
  return out;
}

QuotientZ quotient_by_span_z(const ChainComplex& c,
                             const std::vector<IntMat>& span) {
  if (c.ring != Ring::Z())
    throw input_error("integral quotient needs Z coefficients");
  if (span.size() != c.dims.size())
    throw input_error("quotient: one span matrix per degree required");
  QuotientZ out;
  const int T = c.top();
  out.cc.ring = c.ring;
  out.cc.dims.resize(T + 1);
  out.cc.bd.resize(T + 1);
  out.lift.resize(T + 1);
  out.proj.resize(T + 1);
  for (int d = 0; d <= T; ++d) {
    const IntMat& s = span[d];
    const int n = c.dims[d];
    if (s.nr != n) throw input_error(degree_msg("span matrix row mismatch", d));
    bool coordinate = true;
    {
      std::vector<char> seen(n, 0);
      for (const auto& col : s.col) {
        if (col.size() != 1 ||
            (col[0].second != 1 && col[0].second != -1) || seen[col[0].first]) {
          coordinate = false;
          break;
        }
        seen[col[0].first] = 1;
      }
    }
    if (s.nc == 0) {
      out.lift[d] = IntMat::identity(n);
      out.proj[d] = IntMat::identity(n);
    } else if (coordinate) {
      std::vector<char> covered(n, 0);
      for (const auto& col : s.col) covered[col[0].first] = 1;
      std::vector<int> rows;
      for (int r = 0; r < n; ++r)
        if (!covered[r]) rows.push_back(r);
      out.proj[d] = IntMat::identity(n).select_rows(rows);
      out.lift[d] = IntMat::identity(n).select_cols(rows);
    } else {
      Snf sn = smith_normal_form(s, true);
      if (sn.rank() != s.nc)
        throw input_error(degree_msg("quotient span columns are dependent", d));
      for (int i = 0; i < s.nc; ++i)
        if (sn.diag[i] != 1)
          throw input_error(degree_msg("quotient span is not saturated", d));
      std::vector<int> rest;
      for (int i = s.nc; i < n; ++i) rest.push_back(i);
      out.proj[d] = sn.u.select_rows(rest);
      out.lift[d] = sn.uinv.select_cols(rest);
    }
    out.cc.dims[d] = n - s.nc;
  }
  out.cc.bd[0] = IntMat(0, out.cc.dims[0]);
  for (int d = 1; d <= T; ++d) {
    if (!out.proj[d - 1].mul(c.bd[d].mul(span[d])).is_zero())
      throw input_error(degree_msg("quotient span is not boundary stable", d));
    out.cc.bd[d] = out.proj[d - 1].mul(c.bd[d]).mul(out.lift[d]);
  }
  return out;
}

SCol<Int> QuotientZ::project(int d, const SCol<Int>& ambient) const {
  return proj[d].apply(ambient);
}

QuotientF quotient_by_span_f(const ChainComplex& c, FieldOps f,
                             const std::vector<RatMat>& span) {
  if (c.ring != f.R) throw input_error("field quotient ring mismatch");
  if (span.size() != c.dims.size())
    throw input_error("quotient: one span matrix per degree required");
  QuotientF out;
  out.f = f;
  const int T = c.top();
  out.cc.ring = c.ring;
  out.cc.dims.resize(T + 1);
  out.cc.bd.resize(T + 1);
  out.free_rows.resize(T + 1);
  out.span_ech.resize(T + 1);
  out.qdims.resize(T + 1);
  for (int d = 0; d <= T; ++d) {
    const int n = c.dims[d];
    if (span[d].nr != n)
      throw input_error(degree_msg("span matrix row mismatch", d));
    out.span_ech[d] = std::make_shared<FEchelon>(f, n);
    for (int j = 0; j < span[d].nc; ++j) out.span_ech[d]->add(span[d].col[j]);
    if (out.span_ech[d]->rank() != span[d].nc)
      throw input_error(degree_msg("quotient span columns are dependent", d));
    std::vector<int> piv = out.span_ech[d]->pivot_rows();
    std::vector<char> is_piv(n, 0);
    for (int r : piv) is_piv[r] = 1;
    for (int r = 0; r < n; ++r)
      if (!is_piv[r]) out.free_rows[d].push_back(r);
    out.qdims[d] = static_cast<int>(out.free_rows[d].size());
    out.cc.dims[d] = out.qdims[d];
  }
  out.cc.bd[0] = IntMat(0, out.qdims[0]);
  for (int d = 1; d <= T; ++d) {
    RatMat rbd = to_rat(c.bd[d]);
    for (int j = 0; j < span[d].nc; ++j)
      if (!out.project(d - 1, rbd.apply(span[d].col[j])).empty())
        throw input_error(degree_msg("quotient span is not boundary stable", d));
    RatMat q(out.qdims[d - 1], out.qdims[d]);
    for (int j = 0; j < out.qdims[d]; ++j)
      q.col[j] = out.project(d - 1, rat_col(c.bd[d].col[out.free_rows[d][j]]));
    Int l = 1;
    for (const auto& col : q.col)
      for (const auto& [r, v] : col)
        l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(v));
    out.cc.bd[d] = to_int(q.scaled(Rat(l)));
  }
  return out;
}

SCol<Rat> QuotientF::project(int d, const SCol<Rat>& ambient) const {
  SCol<Rat> res = span_ech[d]->reduce_full(ambient);
  SCol<Rat> out;
  out.reserve(res.size());
  const auto& fr = free_rows[d];
  for (const auto& [r, v] : res) {
    auto it = std::lower_bound(fr.begin(), fr.end(), r);
    if (it == fr.end() || *it != r)
      throw verify_error(degree_msg("projection residual off the free rows", d));
    out.emplace_back(static_cast<int>(it - fr.begin()), v);
  }
  return out;
}

SCol<Rat> QuotientF::lift(int d, const SCol<Rat>& qvec) const {
  SCol<Rat> out;
  out.reserve(qvec.size());
  for (const auto& [i, v] : qvec) out.emplace_back(free_rows[d][i], v);
  return out;
}

ConnectingZ connecting_pair_z(const ChainComplex& c,
                              const std::vector<IntMat>& span_a,
                              const QuotientZ& q, const HomologyBasisZ& hq,
                              const SpanComplex& a, const HomologyBasisZ& ha) {
  const int T = c.top();
  ConnectingZ out;
  out.m.resize(T + 1);
  std::vector<std::unique_ptr<ZEchelon>> ech(T + 1);
  for (int d = 0; d <= T; ++d) {
    ech[d] = std::make_unique<ZEchelon>(c.dims[d]);
    for (int j = 0; j < span_a[d].nc; ++j) ech[d]->add(span_a[d].col[j]);
  }
  for (int d = 0; d <= T; ++d) {
    int rows = d >= 1 ? ha.group(d - 1).ngens() : 0;
    IntMat mm(rows, hq.group(d).ngens());
    for (int j = 0; j < mm.nc && d >= 1; ++j) {
      SCol<Int> z = q.lift[d].apply(hq.reps(d).col[j]);
      SCol<Int> b = c.bd[d].apply(z);
      auto xa = ech[d - 1]->solve(b);
      if (!xa)
        throw verify_error(
            degree_msg("connecting image escapes the subcomplex", d));
      std::vector<Int> cv = ha.coords(d - 1, *xa);
      for (int r = 0; r < rows; ++r)
        if (cv[r] != 0) mm.col[j].emplace_back(r, cv[r]);
    }
    out.m[d] = std::move(mm);
  }
  return out;
}

ConnectingF connecting_pair_f(const ChainComplex& c, FieldOps f,
                              const QuotientF& q, const HomologyBasisF& hq,
                              const SpanComplexF& a, const HomologyBasisF& ha) {
  const int T = c.top();
  ConnectingF out;
  out.m.resize(T + 1);
  std::vector<std::unique_ptr<FEchelon>> ech(T + 1);
  for (int d = 0; d <= T; ++d) {
    ech[d] = std::make_unique<FEchelon>(f, c.dims[d]);
    for (int j = 0; j < a.basis[d].nc; ++j) ech[d]->add(a.basis[d].col[j]);
  }
  for (int d = 0; d <= T; ++d) {
    int rows = d >= 1 ? ha.betti(d - 1) : 0;
    RatMat mm(rows, hq.betti(d));
    for (int j = 0; j < mm.nc && d >= 1; ++j) {
      SCol<Rat> z = q.lift(d, hq.reps(d).col[j]);
      SCol<Rat> b = to_rat(c.bd[d]).apply(z);
      auto xa = ech[d - 1]->solve(b);
      if (!xa)
        throw verify_error(
            degree_msg("connecting image escapes the subcomplex", d));
      std::vector<Rat> cv = ha.coords(d - 1, *xa);
      for (int r = 0; r < rows; ++r)
        if (!f.is_zero(cv[r])) mm.col[j].emplace_back(r, cv[r]);
    }
    out.m[d] = std::move(mm);
  }
  return out;
}

void canonicalize_class_matrix(const GroupDesc& dst, IntMat& m) {
  for (auto& col : m.col) {
    SCol<Int> nc;
    for (auto& [r, v] : col) {
      Int w = r >= dst.betti ? pos_mod(v, dst.orders[r - dst.betti]) : v;
      if (w != 0) nc.emplace_back(r, std::move(w));
    }
    col = std::move(nc);
  }
}

IntMat compose_class_maps(const GroupDesc& gz, const IntMat& g,
                          const IntMat& f) {
  IntMat out = g.mul(f);
  canonicalize_class_matrix(gz, out);
  return out;
}

void check_exact_z(const std::vector<ExactNodeZ>& nodes) {
  for (size_t i = 0; i < nodes.size(); ++i) {
    const ExactNodeZ& nd = nodes[i];
    std::string where = " at node " + std::to_string(i);
    if (!compose_class_maps(nd.gz, nd.g, nd.f).is_zero())
      throw verify_error("exactness: composite map is nonzero" + where);

    const int ny = nd.gy.ngens();
    const int tz = static_cast<int>(nd.gz.orders.size());
    // Kernel lattice of g as a map into the presented group: solutions of
    // g y = R_z w, projected to the y block.
    IntMat rz(nd.gz.ngens(), tz);
    for (int t = 0; t < tz; ++t)
      rz.col[t].emplace_back(nd.gz.betti + t, nd.gz.orders[t]);
    IntMat kergens = kernel_basis_z(nd.g.hcat(rz));
    std::vector<int> yrows(ny);
    std::iota(yrows.begin(), yrows.end(), 0);
    kergens = kergens.select_rows(yrows);

    // Image lattice of f together with the torsion relations of the middle
    // group.
    IntMat ry(ny, static_cast<int>(nd.gy.orders.size()));
    for (size_t t = 0; t < nd.gy.orders.size(); ++t)
      ry.col[t].emplace_back(nd.gy.betti + static_cast<int>(t),
                             nd.gy.orders[t]);
    IntMat imgens = nd.f.hcat(ry);

    ZEchelon im_ech(ny), ker_ech(ny);
    for (int j = 0; j < imgens.nc; ++j) im_ech.add(imgens.col[j]);
    for (int j = 0; j < kergens.nc; ++j) ker_ech.add(kergens.col[j]);
    for (int j = 0; j < kergens.nc; ++j)
      if (!im_ech.reduce(kergens.col[j]).empty())
        throw verify_error("exactness: kernel escapes the image" + where);
    for (int j = 0; j < imgens.nc; ++j)
      if (!ker_ech.reduce(imgens.col[j]).empty())
        throw verify_error("exactness: image escapes the kernel" + where);
  }
}

LesZ les_pair_z(const ChainComplex& c, const std::vector<IntMat>& span_a) {
  SpanComplex a = restrict_to_span_z(c, span_a);
  QuotientZ q = quotient_by_span_z(c, span_a);
  HomologyBasisZ ha(a.cc), hc(c), hq(q.cc);
  const int T = c.top();
  LesZ L;
  for (int d = 0; d <= T; ++d) {
    L.ga.push_back(ha.group(d));
    L.gc.push_back(hc.group(d));
    L.gq.push_back(hq.group(d));
  }
  ChainMap im{&a.cc, &c, a.basis};
  im.validate();
  L.i = induced_map(im, ha, hc).m;
  ChainMap jm{&c, &q.cc, q.proj};
  jm.validate();
  L.j = induced_map(jm, hc, hq).m;
  L.d = connecting_pair_z(c, span_a, q, hq, a, ha).m;
  return L;
}

std::vector<ExactNodeZ> LesZ::nodes() const {
  std::vector<GroupDesc> gs;
  std::vector<IntMat> ms;
  const int T = static_cast<int>(gc.size()) - 1;
  gs.push_back(GroupDesc{});
  if (T >= 0) ms.push_back(IntMat(ga[T].ngens(), 0));
  for (int k = T; k >= 0; --k) {
    gs.push_back(ga[k]);
    ms.push_back(i[k]);
    gs.push_back(gc[k]);
    ms.push_back(j[k]);
    gs.push_back(gq[k]);
    ms.push_back(d[k].nr == 0 && k == 0 ? IntMat(0, gq[0].ngens()) : d[k]);
  }
  gs.push_back(GroupDesc{});
  std::vector<ExactNodeZ> out;
  for (size_t t = 0; t + 2 < gs.size(); ++t)
    out.push_back({gs[t], gs[t + 1], gs[t + 2], ms[t], ms[t + 1]});
  return out;
}

LesF les_pair_f(const ChainComplex& c, FieldOps f,
                const std::vector<RatMat>& span_a) {
  SpanComplexF a = restrict_to_span_f(c, f, span_a);
  QuotientF q = quotient_by_span_f(c, f, span_a);
  HomologyBasisF ha(a.cc, f), hc(c, f), hq(q.cc, f);
  const int T = c.top();
  LesF L;
  for (int d = 0; d <= T; ++d) {
    L.ba.push_back(ha.betti(d));
    L.bc.push_back(hc.betti(d));
    L.bq.push_back(hq.betti(d));
  }
  // Class matrices computed rep-by-rep; the scaled model complexes share the
  // exact complexes' cycle spaces, so representatives transfer verbatim.
  for (int d = 0; d <= T; ++d) {
    RatMat im(L.bc[d], L.ba[d]);
    for (int jx = 0; jx < L.ba[d]; ++jx) {
      SCol<Rat> amb = a.basis[d].apply(ha.reps(d).col[jx]);
      std::vector<Rat> cv = hc.coords(d, amb);
      for (int r = 0; r < im.nr; ++r)
        if (!f.is_zero(cv[r])) im.col[jx].emplace_back(r, f.norm(cv[r]));
    }
    L.i.push_back(std::move(im));
    RatMat jm(L.bq[d], L.bc[d]);
    for (int jx = 0; jx < L.bc[d]; ++jx) {
      SCol<Rat> pr = q.project(d, hc.reps(d).col[jx]);
      std::vector<Rat> cv = hq.coords(d, pr);
      for (int r = 0; r < jm.nr; ++r)
        if (!f.is_zero(cv[r])) jm.col[jx].emplace_back(r, f.norm(cv[r]));
    }
    L.j.push_back(std::move(jm));
  }
  L.d = connecting_pair_f(c, f, q, hq, a, ha).m;
  return L;
}

std::vector<ExactNodeF> LesF::nodes() const {
  std::vector<int> gs;
  std::vector<RatMat> ms;
  const int T = static_cast<int>(bc.size()) - 1;
  gs.push_back(0);
  if (T >= 0) ms.push_back(RatMat(ba[T], 0));
  for (int k = T; k >= 0; --k) {
    gs.push_back(ba[k]);
    ms.push_back(i[k]);
    gs.push_back(bc[k]);
    ms.push_back(j[k]);
    gs.push_back(bq[k]);
    ms.push_back(d[k]);
  }
  gs.push_back(0);
  std::vector<ExactNodeF> out;
  for (size_t t = 0; t + 2 < gs.size(); ++t)
    out.push_back({gs[t], gs[t + 1], gs[t + 2], ms[t], ms[t + 1]});
  return out;
}

std::vector<IntMat> relative_span_z(const ChainComplex& c,
                                    const std::vector<IntMat>& span_a,
                                    const QuotientZ& qb) {
  QuotientZ qa = quotient_by_span_z(c, span_a);
  std::vector<IntMat> out(c.top() + 1);
  for (int d = 0; d <= c.top(); ++d)
    out[d] = kernel_basis_z(qa.proj[d].mul(qb.lift[d]));
  return out;
}

namespace {

GroupDesc sum_group(const GroupDesc& a, const GroupDesc& b) {
  if (!a.orders.empty() && !b.orders.empty())
    throw input_error(
        "direct sum with torsion in both summands is not supported");
  GroupDesc g;
  g.betti = a.betti + b.betti;
  g.orders = a.orders.empty() ? b.orders : a.orders;
  return g;
}

// Row map of one summand's generators into the free-then-torsion layout of
// the direct sum.
std::vector<int> sum_rowmap(const GroupDesc& self, const GroupDesc& other,
                            bool first) {
  int free_off = first ? 0 : other.betti;
  int tors_off = self.betti + other.betti +
                 (first ? 0 : static_cast<int>(other.orders.size()));
  std::vector<int> map(self.ngens());
  for (int r = 0; r < self.ngens(); ++r)
    map[r] = r < self.betti ? free_off + r : tors_off + (r - self.betti);
  return map;
}

}  // namespace

MvZ mayer_vietoris_z(const ChainComplex& c, const std::vector<IntMat>& span_u,
                     const std::vector<IntMat>& span_v,
                     const std::vector<IntMat>& span_w) {
  SpanComplex U = restrict_to_span_z(c, span_u);
  SpanComplex V = restrict_to_span_z(c, span_v);
  SpanComplex W = restrict_to_span_z(c, span_w);
  HomologyBasisZ hu(U.cc), hv(V.cc), hw(W.cc), hx(c);
  const int T = c.top();

  MvZ M;
  for (int d = 0; d <= T; ++d) {
    M.gw.push_back(hw.group(d));
    M.gm.push_back(sum_group(hu.group(d), hv.group(d)));
    M.gx.push_back(hx.group(d));
  }

  std::vector<IntMat> mwu(T + 1), mwv(T + 1);
  for (int d = 0; d <= T; ++d) {
    mwu[d] = solve_columns_z(span_u[d], span_w[d]);
    mwv[d] = solve_columns_z(span_v[d], span_w[d]);
  }
  ChainMap cwu{&W.cc, &U.cc, mwu};
  cwu.validate();
  ChainMap cwv{&W.cc, &V.cc, mwv};
  cwv.validate();
  std::vector<IntMat> au = induced_map(cwu, hw, hu).m;
  std::vector<IntMat> av = induced_map(cwv, hw, hv).m;
  ChainMap cux{&U.cc, &c, U.basis};
  cux.validate();
  ChainMap cvx{&V.cc, &c, V.basis};
  cvx.validate();
  std::vector<IntMat> ju = induced_map(cux, hu, hx).m;
  std::vector<IntMat> jv = induced_map(cvx, hv, hx).m;

  for (int d = 0; d <= T; ++d) {
    const GroupDesc &gu = hu.group(d), &gv = hv.group(d);
    int total = M.gm[d].ngens();
    // alpha(x) = (x, -x) in the direct-sum layout.
    IntMat f = au[d].embed_rows(total, sum_rowmap(gu, gv, true));
    IntMat bneg = av[d].scaled(Int(-1));
    f = f.add(bneg.embed_rows(total, sum_rowmap(gv, gu, false)));
    canonicalize_class_matrix(M.gm[d], f);
    M.f.push_back(std::move(f));

    // beta(u, v) = u + v, columns reordered to the direct-sum layout.
    IntMat g(M.gx[d].ngens(), total);
    std::vector<int> um = sum_rowmap(gu, gv, true);
    std::vector<int> vm = sum_rowmap(gv, gu, false);
    for (int cidx = 0; cidx < gu.ngens(); ++cidx)
      g.col[um[cidx]] = ju[d].col[cidx];
    for (int cidx = 0; cidx < gv.ngens(); ++cidx)
      g.col[vm[cidx]] = jv[d].col[cidx];
    canonicalize_class_matrix(M.gx[d], g);
    M.g.push_back(std::move(g));
  }

  // Connecting map: split a cycle of C as u + v and take the class of du.
  for (int d = 0; d <= T; ++d) {
    int rows = d >= 1 ? M.gw[d - 1].ngens() : 0;
    IntMat del(rows, M.gx[d].ngens());
    if (d >= 1 && M.gx[d].ngens() > 0) {
      IntMat uv = span_u[d].hcat(span_v[d]);
      IntMat sol = solve_columns_z(uv, hx.reps(d));
      std::vector<int> head(span_u[d].nc);
      for (int r = 0; r < span_u[d].nc; ++r) head[r] = r;
      IntMat uch = span_u[d].mul(sol.select_rows(head));
      IntMat bd = c.boundary(d).mul(uch);
      IntMat wc = solve_columns_z(span_w[d - 1], bd);
      for (int jx = 0; jx < del.nc; ++jx) {
        std::vector<Int> cv = hw.coords(d - 1, wc.col[jx]);
        for (int r = 0; r < rows; ++r)
          if (cv[r] != 0) del.col[jx].emplace_back(r, cv[r]);
      }
      canonicalize_class_matrix(M.gw[d - 1], del);
    }
    M.d.push_back(std::move(del));
  }
  return M;
}

std::vector<ExactNodeZ> MvZ::nodes() const {
  std::vector<GroupDesc> gs;
  std::vector<IntMat> ms;
  const int T = static_cast<int>(gx.size()) - 1;
  gs.push_back(GroupDesc{});
  if (T >= 0) ms.push_back(IntMat(gw[T].ngens(), 0));
  for (int k = T; k >= 0; --k) {
    gs.push_back(gw[k]);
    ms.push_back(f[k]);
    gs.push_back(gm[k]);
    ms.push_back(g[k]);
    gs.push_back(gx[k]);
    ms.push_back(d[k]);
  }
  gs.push_back(GroupDesc{});
  std::vector<ExactNodeZ> out;
  for (size_t t = 0; t + 2 < gs.size(); ++t)
    out.push_back({gs[t], gs[t + 1], gs[t + 2], ms[t], ms[t + 1]});
  return out;
}

void check_exact_f(const FieldOps& fld, const std::vector<ExactNodeF>& nodes) {
  for (size_t i = 0; i < nodes.size(); ++i) {
    const ExactNodeF& nd = nodes[i];
    std::string where = " at node " + std::to_string(i);
    RatMat comp = nd.g.mul(nd.f);
    for (const auto& col : comp.col)
      for (const auto& [r, v] : col)
        if (!fld.is_zero(v))
          throw verify_error("exactness: composite map is nonzero" + where);
    if (rank_f(fld, nd.f) + rank_f(fld, nd.g) != nd.dy)
      throw verify_error("exactness: rank defect" + where);
  }
}

}  // namespace ihtk
