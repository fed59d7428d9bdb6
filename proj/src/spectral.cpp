#include "ihtk/spectral.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ihtk/echelon.hpp"

namespace ihtk {

namespace {

std::string at(int p, int q) {
  return "(" + std::to_string(p) + ", " + std::to_string(q) + ")";
}

RatMat fnorm(const FieldOps& f, RatMat m) {
  for (auto& c : m.col) {
    SCol<Rat> out;
    out.reserve(c.size());
    for (auto& [r, v] : c) {
      Rat nv = f.norm(v);
      if (nv != 0) out.emplace_back(r, nv);
    }
    c = std::move(out);
  }
  return m;
}

RatMat mulf(const FieldOps& f, const RatMat& a, const RatMat& b) {
  return fnorm(f, a.mul(b));
}

SCol<Rat> apply_col(const FieldOps& f, const RatMat& m, const SCol<Rat>& x) {
  SCol<Rat> acc;
  for (const auto& [j, v] : x) acc = col_axpy(acc, v, m.col[j]);
  SCol<Rat> out;
  out.reserve(acc.size());
  for (auto& [r, v] : acc) {
    Rat nv = f.norm(v);
    if (nv != 0) out.emplace_back(r, nv);
  }
  return out;
}

bool mats_equal(const FieldOps& f, const RatMat& a, const RatMat& b) {
  if (a.nr != b.nr || a.nc != b.nc) return false;
  RatMat x = fnorm(f, a), y = fnorm(f, b);
  return x.col == y.col;
}

bool mat_zero(const FieldOps& f, const RatMat& a) {
  for (const auto& c : a.col)
    for (const auto& [r, v] : c)
      if (f.norm(v) != 0) return false;
  return true;
}

/// Spans and membership machinery shared by the page extraction: cached
/// stage echelons and memoized subspaces {x in F_s : dx in F_t}.
struct PageEngine {
  const FilteredChainComplex& fc;
  FieldOps f;
  int S, topd;
  std::vector<RatMat> bdr;  // exact boundaries, index 0..topd+1
  std::vector<std::vector<std::shared_ptr<FEchelon>>> sech;
  std::map<std::array<int, 3>, RatMat> memo;

  PageEngine(const FilteredChainComplex& fc_, const FieldOps& f_)
      : fc(fc_), f(f_), S(fc_.steps()), topd(fc_.c.top()) {
    bdr.resize(topd + 2);
    for (int d = 0; d <= topd + 1; ++d) bdr[d] = to_rat(fc.c.boundary(d));
    sech.assign(S, std::vector<std::shared_ptr<FEchelon>>(topd + 1));
    for (int s = 0; s < S; ++s)
      for (int d = 0; d <= topd; ++d) {
        auto e = std::make_shared<FEchelon>(f, fc.c.dim(d));
        for (const auto& c : fc.span[s][d].col) e->add(c);
        sech[s][d] = e;
      }
  }

  /// Basis of { x in F_s C_d : dx in F_t C_{d-1} }; s is clamped to the
  /// stage range, t < 0 asks for honest cycles, t >= S-1 for no condition.
  const RatMat& meet(int d, int s, int t) {
    s = std::min(s, S - 1);
    t = std::min(std::max(t, -1), S - 1);
    static const RatMat nothing;
    if (d < 0 || d > topd || s < 0) {
      auto key = std::array<int, 3>{d < 0 ? -1 : d, s < 0 ? -1 : s, t};
      auto [it, fresh] = memo.try_emplace(key, RatMat(fc.c.dim(d), 0));
      return it->second;
    }
    if (t == S - 1) return fc.span[s][d];
    auto key = std::array<int, 3>{d, s, t};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const RatMat& stage = fc.span[s][d];
    RatMat img = mulf(f, bdr[d], stage);
    RatMat res(fc.c.dim(d - 1), img.nc);
    for (int j = 0; j < img.nc; ++j)
      res.col[j] = t < 0 ? img.col[j] : sech[t][d - 1]->reduce_full(img.col[j]);
    RatMat ker = kernel_basis_f(f, res);
    return memo.emplace(key, mulf(f, stage, ker)).first->second;
  }
};

/// One filtration stage with its predecessor quotient: the canonical
/// first-page cell bases are homology representatives of Q = F_p / F_{p-1},
/// lifted to ambient coordinates.
struct StepModel {
  SpanComplexF R;
  QuotientF Q;
  std::shared_ptr<HomologyBasisF> h;
};

StepModel make_step(const FilteredChainComplex& fc, const FieldOps& f, int p) {
  StepModel m;
  m.R = restrict_to_span_f(fc.c, f, fc.span[p]);
  std::vector<RatMat> prev(fc.c.top() + 1);
  for (int d = 0; d <= fc.c.top(); ++d)
    prev[d] = p == 0 ? RatMat(m.R.cc.dim(d), 0)
                     : solve_columns_f(f, m.R.basis[d], fc.span[p - 1][d]);
  m.Q = quotient_by_span_f(m.R.cc, f, prev);
  m.h = std::make_shared<HomologyBasisF>(m.Q.cc, f);
  return m;
}

}  // namespace

void FilteredChainComplex::validate() const {
  if (!c.ring.is_field())
    throw input_error("filtered chain complex requires field coefficients");
  if (span.empty()) throw input_error("filtration has no stages");
  FieldOps f(c.ring);
  const int t = c.top();
  for (int s = 0; s < steps(); ++s) {
    if (static_cast<int>(span[s].size()) != t + 1)
      throw input_error("stage " + std::to_string(s) +
                        " does not cover every chain degree");
    for (int d = 0; d <= t; ++d)
      if (span[s][d].nr != c.dim(d))
        throw input_error("stage " + std::to_string(s) +
                          " has wrong ambient rows in degree " +
                          std::to_string(d));
  }
  for (int d = 0; d <= t; ++d) {
    RatMat bd = to_rat(c.boundary(d));
    for (int s = 0; s < steps(); ++s) {
      FEchelon e(f, c.dim(d));
      for (const auto& col : span[s][d].col) e.add(col);
      if (s > 0)
        for (const auto& col : span[s - 1][d].col)
          if (!e.reduce_full(col).empty())
            throw input_error("stage " + std::to_string(s - 1) +
                              " is not contained in stage " +
                              std::to_string(s) + " in degree " +
                              std::to_string(d));
      if (s == steps() - 1 && e.rank() != c.dim(d))
        throw input_error("top stage does not span degree " +
                          std::to_string(d));
      if (d > 0) {
        FEchelon low(f, c.dim(d - 1));
        for (const auto& col : span[s][d - 1].col) low.add(col);
        for (const auto& col : span[s][d].col) {
          SCol<Rat> img = apply_col(f, bd, col);
          if (!low.reduce_full(img).empty())
            throw input_error("stage " + std::to_string(s) +
                              " is not boundary stable in degree " +
                              std::to_string(d));
        }
      }
    }
  }
}

int SpectralSequence::dim_at(int r, int p, int q) const {
  if (r < 1) throw input_error("pages are indexed from 1");
  r = std::min(r, rmax);  // pages are stable beyond the stored range
  if (p < 0 || p >= steps || q < 0 || q > top) return 0;
  return dim[r][p][q];
}

const RatMat& SpectralSequence::d_at(int r, int p, int q) const {
  if (r < 1 || r > rmax || p < 0 || p >= steps || q < 0 || q > top)
    throw input_error("page differential index out of range");
  return d[r][p][q];
}

SpectralSequence compute_pages(const FilteredChainComplex& fc) {
  fc.validate();
  FieldOps f(fc.c.ring);
  PageEngine eng(fc, f);
  const int S = eng.S, topd = eng.topd;

  SpectralSequence ss;
  ss.ring = fc.c.ring;
  ss.steps = S;
  ss.top = topd;
  ss.rmax = std::max(S - 1, topd) + 1;
  auto grid_i = std::vector<std::vector<int>>(S, std::vector<int>(topd + 1, 0));
  auto grid_m =
      std::vector<std::vector<RatMat>>(S, std::vector<RatMat>(topd + 1));
  ss.dim.assign(ss.rmax + 1, grid_i);
  ss.rep.assign(ss.rmax + 1, grid_m);
  ss.den.assign(ss.rmax + 1, grid_m);
  ss.d.assign(ss.rmax + 1, grid_m);

  std::vector<StepModel> sm;
  sm.reserve(S);
  for (int p = 0; p < S; ++p) sm.push_back(make_step(fc, f, p));

  for (int r = 1; r <= ss.rmax; ++r) {
    // pass 1: cell bases
    for (int p = 0; p < S; ++p)
      for (int n = 0; n <= topd; ++n) {
        const int q = n - p;
        const RatMat& Z = eng.meet(n, p, p - r);
        const RatMat& Zprev = eng.meet(n, p - 1, p - r);
        const RatMat& W = eng.meet(n + 1, p + r - 1, p);
        RatMat D = Zprev.hcat(mulf(f, eng.bdr[n + 1], W));

        FEchelon ed(f, fc.c.dim(n));
        for (const auto& col : D.col) ed.add(col);
        const int rkd = ed.rank();

        RatMat reps(fc.c.dim(n), 0);
        if (r == 1) {
          const StepModel& m = sm[p];
          const RatMat& hr = m.h->reps(n);
          for (int j = 0; j < hr.nc; ++j) {
            SCol<Rat> lifted = m.Q.lift(n, hr.col[j]);
            reps.col.push_back(apply_col(f, m.R.basis[n], lifted));
          }
          reps.nc = hr.nc;
          for (const auto& col : reps.col) {
            int before = ed.rank();
            ed.add(col);
            if (ed.rank() != before + 1)
              throw verify_error("dependent representatives in page cell " +
                                 at(p, q));
          }
          for (const auto& col : Z.col) ed.add(col);
          if (ed.rank() != rkd + reps.nc)
            throw verify_error("representatives do not span page cell " +
                               at(p, q));
        } else {
          for (const auto& col : Z.col) {
            int before = ed.rank();
            ed.add(col);
            if (ed.rank() == before + 1) {
              reps.col.push_back(col);
              ++reps.nc;
            }
          }
        }

        if (q < 0) {
          if (reps.nc != 0)
            throw verify_error(
                "nonzero page cell at negative complementary degree " +
                at(p, q));
          continue;
        }
        ss.dim[r][p][q] = reps.nc;
        ss.rep[r][p][q] = std::move(reps);
        ss.den[r][p][q] = std::move(D);
      }

    // pass 2: differentials d^r : (p, q) -> (p - r, q + r - 1)
    for (int p = 0; p < S; ++p)
      for (int q = 0; q + p <= topd; ++q) {
        const int n = p + q, tp = p - r, tq = q + r - 1;
        const int ds = ss.dim[r][p][q];
        const int dt = tp >= 0 && tq <= topd ? ss.dim[r][tp][tq] : 0;
        RatMat m(dt, ds);
        if (ds > 0 && dt > 0) {
          const RatMat& tden = ss.den[r][tp][tq];
          FEchelon se(f, fc.c.dim(n - 1));
          for (const auto& col : tden.col) se.add(col);
          for (const auto& col : ss.rep[r][tp][tq].col) se.add(col);
          for (int j = 0; j < ds; ++j) {
            SCol<Rat> v = apply_col(f, eng.bdr[n], ss.rep[r][p][q].col[j]);
            auto sol = se.solve(v);
            if (!sol)
              throw verify_error("differential escaped the target cell " +
                                 at(tp, tq));
            for (const auto& [id, val] : *sol)
              if (id >= tden.nc) {
                Rat nv = f.norm(val);
                if (nv != 0) m.col[j].emplace_back(id - tden.nc, nv);
              }
          }
        }
        ss.d[r][p][q] = std::move(m);
      }

    // composable differentials square to zero
    for (int p = 0; p < S; ++p)
      for (int q = 0; q + p <= topd; ++q) {
        const int tp = p - r, tq = q + r - 1;
        if (tp < 0 || tq > topd) continue;
        if (!mat_zero(f, mulf(f, ss.d[r][tp][tq], ss.d[r][p][q])))
          throw verify_error("page " + std::to_string(r) +
                             " differential does not square to zero at " +
                             at(p, q));
      }
  }

  // each page has the homology dimensions of its predecessor
  for (int r = 1; r < ss.rmax; ++r)
    for (int p = 0; p < S; ++p)
      for (int q = 0; q + p <= topd; ++q) {
        int out_rk = rank_f(f, ss.d[r][p][q]);
        int in_rk = p + r < S && q - r + 1 >= 0
                        ? rank_f(f, ss.d[r][p + r][q - r + 1])
                        : 0;
        if (ss.dim[r + 1][p][q] != ss.dim[r][p][q] - out_rk - in_rk)
          throw verify_error("page " + std::to_string(r + 1) +
                             " is not the homology of page " +
                             std::to_string(r) + " at " + at(p, q));
      }

  // abutment: graded dimensions of the filtered homology, compared with
  // the final page
  ss.abutment.assign(topd + 1, std::vector<int>(S, 0));
  for (int n = 0; n <= topd; ++n) {
    FEchelon e(f, fc.c.dim(n));
    for (const auto& col : eng.bdr[n + 1].col) e.add(col);
    const int base = e.rank();
    int prev = base;
    for (int p = 0; p < S; ++p) {
      for (const auto& col : eng.meet(n, p, -1).col) e.add(col);
      ss.abutment[n][p] = e.rank() - prev;
      prev = e.rank();
    }
    const int bn = fc.c.dim(n) - rank_f(f, eng.bdr[n]) -
                   rank_f(f, eng.bdr[n + 1]);
    if (prev - base != bn)
      throw verify_error("graded pieces do not sum to the homology in degree " +
                         std::to_string(n));
    for (int p = 0; p < S; ++p) {
      const int q = n - p;
      const int einf = q >= 0 ? ss.dim[ss.rmax][p][q] : 0;
      if (einf != ss.abutment[n][p])
        throw verify_error("final page differs from the graded homology at " +
                           at(p, q));
    }
  }
  return ss;
}

RatMat page_coords(const SpectralSequence& ss, const FieldOps& f, int r, int p,
                   int q, const RatMat& chains) {
  if (r < 1) throw input_error("pages are indexed from 1");
  r = std::min(r, ss.rmax);
  if (p < 0 || p >= ss.steps || q < 0 || q > ss.top)
    throw input_error("page cell " + at(p, q) + " out of range");
  const RatMat& den = ss.den[r][p][q];
  const RatMat& rep = ss.rep[r][p][q];
  if (chains.nr != den.nr)
    throw input_error("chain rows do not match the page cell degree");
  FEchelon se(f, den.nr);
  for (const auto& col : den.col) se.add(col);
  for (const auto& col : rep.col) se.add(col);
  RatMat out(rep.nc, chains.nc);
  for (int j = 0; j < chains.nc; ++j) {
    auto sol = se.solve(chains.col[j]);
    if (!sol)
      throw verify_error("chain is not a cycle of page cell " + at(p, q));
    for (const auto& [id, val] : *sol)
      if (id >= den.nc) {
        Rat nv = f.norm(val);
        if (nv != 0) out.col[j].emplace_back(id - den.nc, nv);
      }
  }
  return out;
}

namespace {

void check_retraction(const RegularNeighborhood& rn) {
  const SimplicialComplex& k = rn.N.K;
  for (int v : k.vertices())
    if (!rn.retraction.defined(v))
      throw input_error("retraction is undefined on vertex " +
                        std::to_string(v));
  if (!is_simplicial(k, k, rn.retraction))
    throw input_error("retraction is not a simplicial self-map");
  for (int i = 0; i < k.ncells(0); ++i)
    if (rn.base.has(0, i)) {
      int v = k.cells(0)[i][0];
      if (rn.retraction(v) != v)
        throw input_error("retraction moves the core vertex " +
                          std::to_string(v));
    }
}

FilteredChainComplex filtration_from_tower(const IntersectionComplex& ic,
                                           const FilteredComplex& x,
                                           const std::vector<Subcomplex>& J) {
  if (J.empty()) throw input_error("empty skeletal tower");
  FilteredChainComplex fc;
  fc.c = ic.cc;
  const int t = ic.cc.top();
  for (const Subcomplex& j : J) {
    std::vector<IntMat> sp = ic_subcomplex_span(ic, x, j);
    std::vector<RatMat> row(t + 1);
    for (int d = 0; d <= t; ++d)
      row[d] = d < static_cast<int>(sp.size())
                   ? to_rat(sp[d])
                   : RatMat(ic.cc.dim(d), 0);
    fc.span.push_back(std::move(row));
  }
  fc.validate();
  return fc;
}

}  // namespace

SkeletalFiltration skeletal_filtration(const RegularNeighborhood& rn,
                                       const Perversity& pv,
                                       const Ring& field) {
  if (!field.is_field())
    throw input_error("skeletal filtration requires field coefficients");
  check_retraction(rn);
  SkeletalFiltration sf;
  sf.p = pv;
  sf.ring = field;
  sf.ic = intersection_chain_complex(rn.N, pv, field);
  sf.fc = filtration_from_tower(sf.ic, rn.N, rn.J);
  return sf;
}

SkeletalFiltration skeletal_filtration_deleted(const RegularNeighborhood& rn,
                                               const DeletedNeighborhood& dn,
                                               const Perversity& pv,
                                               const Ring& field) {
  if (!field.is_field())
    throw input_error("skeletal filtration requires field coefficients");
  check_retraction(rn);
  SkeletalFiltration sf;
  sf.p = pv.restricted(dn.D.n);
  sf.ring = field;
  sf.ic = intersection_chain_complex(dn.D, sf.p, field);
  sf.fc = filtration_from_tower(sf.ic, dn.D, dn.J);
  return sf;
}

D1Comparison d1_cross_check(const SkeletalFiltration& sf,
                            const SpectralSequence& ss) {
  const FilteredChainComplex& fc = sf.fc;
  if (ss.ring != sf.ring || ss.steps != fc.steps() || ss.top != fc.c.top())
    throw input_error("spectral sequence does not belong to the filtration");
  FieldOps f(sf.ring);
  std::vector<StepModel> sm;
  sm.reserve(fc.steps());
  for (int p = 0; p < fc.steps(); ++p) sm.push_back(make_step(fc, f, p));

  D1Comparison out;
  for (int p = 1; p < fc.steps(); ++p)
    for (int q = 0; q + p <= fc.c.top(); ++q) {
      const int n = p + q;
      const int dsrc = ss.dim_at(1, p, q), dtgt = ss.dim_at(1, p - 1, q);
      if (dsrc == 0 && dtgt == 0) continue;
      D1Comparison::Cell cell;
      cell.p = p;
      cell.q = q;
      cell.d1 = ss.d_at(1, p, q);
      cell.conn = RatMat(dtgt, dsrc);
      RatMat bd = to_rat(fc.c.boundary(n));
      const StepModel& tm = sm[p - 1];
      for (int j = 0; j < dsrc; ++j) {
        SCol<Rat> v = apply_col(f, bd, ss.rep[1][p][q].col[j]);
        RatMat vm(fc.c.dim(n - 1), 1);
        vm.col[0] = std::move(v);
        RatMat rc = solve_columns_f(f, tm.R.basis[n - 1], vm);
        SCol<Rat> qc = tm.Q.project(n - 1, rc.col[0]);
        std::vector<Rat> co = tm.h->coords(n - 1, qc);
        for (int i = 0; i < dtgt; ++i) {
          Rat nv = f.norm(co[i]);
          if (nv != 0) cell.conn.col[j].emplace_back(i, nv);
        }
      }
      cell.equal = mats_equal(f, cell.d1, cell.conn);
      out.ok = out.ok && cell.equal;
      out.cells.push_back(std::move(cell));
    }
  return out;
}

E2Comparison e2_vs_twisted(const SpectralSequence& ss,
                           const StalkSystem& sys) {
  if (sys.ring != ss.ring)
    throw input_error("stalk system ring differs from the page ring");
  const int qmax =
      std::max(ss.top, static_cast<int>(sys.stalk.betti.size()) - 1);
  const int pmax = std::max(ss.steps - 1, sys.base.dim());
  E2Comparison out;
  out.got.assign(pmax + 1, std::vector<int>(qmax + 1, 0));
  out.want = out.got;
  for (int q = 0; q <= qmax; ++q) {
    ChainComplex tc = twisted_cellular_complex(sys.base, sys, q);
    HomologyResult h = homology(tc);
    for (int p = 0; p <= pmax; ++p) {
      out.want[p][q] = p < static_cast<int>(h.betti.size()) ? h.betti[p] : 0;
      out.got[p][q] = ss.dim_at(2, p, q);
      out.ok = out.ok && out.want[p][q] == out.got[p][q];
    }
  }
  return out;
}

namespace {

std::vector<int> relative_betti_f(const ChainComplex& c, const FieldOps& f,
                                  const std::vector<RatMat>& big,
                                  const std::vector<RatMat>& small) {
  SpanComplexF r = restrict_to_span_f(c, f, big);
  std::vector<RatMat> inner(c.top() + 1);
  for (int d = 0; d <= c.top(); ++d)
    inner[d] = solve_columns_f(f, r.basis[d], small[d]);
  QuotientF q = quotient_by_span_f(r.cc, f, inner);
  HomologyBasisF h(q.cc, f);
  std::vector<int> out(c.top() + 1, 0);
  for (int d = 0; d <= c.top(); ++d) out[d] = h.betti(d);
  return out;
}

std::vector<RatMat> ic_span_rat(const IntersectionComplex& ic,
                                const FilteredComplex& x, const Subcomplex& a) {
  std::vector<IntMat> sp = ic_subcomplex_span(ic, x, a);
  std::vector<RatMat> out(ic.cc.top() + 1);
  for (int d = 0; d <= ic.cc.top(); ++d)
    out[d] = d < static_cast<int>(sp.size()) ? to_rat(sp[d])
                                             : RatMat(ic.cc.dim(d), 0);
  return out;
}

}  // namespace

E1Decomposition e1_decomposition(const RegularNeighborhood& rn,
                                 const SkeletalFiltration& sf,
                                 const SpectralSequence& ss) {
  const FilteredChainComplex& fc = sf.fc;
  if (ss.ring != sf.ring || ss.steps != fc.steps() || ss.top != fc.c.top())
    throw input_error("spectral sequence does not belong to the filtration");
  if (ss.steps != static_cast<int>(rn.J.size()))
    throw input_error("filtration does not match the neighborhood tower");
  FieldOps f(sf.ring);
  E1Decomposition out;
  for (int p = 0; p < ss.steps; ++p) {
    const auto& ycells = rn.Y.cells(p);
    std::vector<std::vector<int>> piece_betti;
    for (const Simplex& y : ycells) {
      Subcomplex big = rn.piece(y);
      Subcomplex small = p > 0 ? big.intersect(rn.J[p - 1])
                               : Subcomplex::none(rn.N.K);
      piece_betti.push_back(
          relative_betti_f(fc.c, f, ic_span_rat(sf.ic, rn.N, big),
                           ic_span_rat(sf.ic, rn.N, small)));
    }
    for (int q = 0; q + p <= ss.top; ++q) {
      E1Decomposition::Row row;
      row.p = p;
      row.q = q;
      row.lhs = ss.dim_at(1, p, q);
      int total = 0;
      for (const auto& pb : piece_betti) {
        row.pieces.push_back(pb[p + q]);
        total += pb[p + q];
      }
      row.equal = total == row.lhs;
      if (row.lhs == 0 && total == 0) continue;
      out.ok = out.ok && row.equal;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

const RatMat& SsComparison::map_at(int r, int p, int q) const {
  for (const PageMap& pm : maps)
    if (pm.r == r && pm.p == p && pm.q == q) return pm.m;
  throw input_error("no page map stored at " + at(p, q) + " on page " +
                    std::to_string(r));
}

SsComparison ss_map_deleted_to_full(const RegularNeighborhood& rn,
                                    const Perversity& pv, const Ring& field) {
  SsComparison out;
  DeletedNeighborhood dn = deleted_neighborhood(rn);
  out.full = skeletal_filtration(rn, pv, field);
  out.del = skeletal_filtration_deleted(rn, dn, pv, field);
  out.sfull = compute_pages(out.full.fc);
  out.sdel = compute_pages(out.del.fc);
  FieldOps f(field);

  // the frontier inclusion restricted to intersection chains, written in
  // the two intersection bases
  const int dtop = out.del.fc.c.top();
  std::vector<RatMat> icmap(dtop + 1);
  for (int d = 0; d <= dtop; ++d) {
    IntMat emb(rn.N.K.ncells(d), dn.D.K.ncells(d));
    for (int j = 0; j < dn.D.K.ncells(d); ++j) {
      int idx = rn.N.K.index_of(d, dn.D.K.cells(d)[j]);
      if (idx < 0)
        throw verify_error("frontier cell missing from the neighborhood");
      emb.col[j].emplace_back(idx, Int(1));
    }
    icmap[d] = solve_columns_f(
        f, to_rat(out.full.ic.basis[d]),
        mulf(f, to_rat(emb), to_rat(out.del.ic.basis[d])));
  }

  const int rmax = std::min(out.sdel.rmax, out.sfull.rmax);
  for (int r = 1; r <= rmax; ++r)
    for (int p = 0; p < out.sdel.steps; ++p)
      for (int q = 0; q <= out.sdel.top; ++q) {
        const int n = p + q;
        const RatMat& reps = out.sdel.rep[r][p][q];
        RatMat mapped(out.full.fc.c.dim(n), reps.nc);
        for (int j = 0; j < reps.nc; ++j)
          mapped.col[j] = n <= dtop ? apply_col(f, icmap[n], reps.col[j])
                                    : SCol<Rat>{};
        RatMat m = q <= out.sfull.top
                       ? page_coords(out.sfull, f, r, p, q, mapped)
                       : RatMat(0, reps.nc);
        out.maps.push_back({r, p, q, std::move(m)});
      }

  // page maps commute with the differentials
  for (int r = 1; r <= rmax; ++r)
    for (int p = 0; p < out.sdel.steps; ++p)
      for (int q = 0; q <= out.sdel.top; ++q) {
        const int tp = p - r, tq = q + r - 1;
        if (tp < 0 || tq > out.sdel.top) continue;
        const RatMat& dd = out.sdel.d[r][p][q];
        RatMat lhs = mulf(f, out.map_at(r, tp, tq), dd);
        RatMat rhs = q <= out.sfull.top && tq <= out.sfull.top
                         ? mulf(f, out.sfull.d[r][p][q], out.map_at(r, p, q))
                         : RatMat(lhs.nr, lhs.nc);
        if (!mats_equal(f, lhs, rhs))
          throw verify_error("page map does not commute with d^" +
                             std::to_string(r) + " at " + at(p, q));
      }

  // second-page verdicts against the cone-formula cutoff
  const int codim = rn.N.n - rn.base_dim();
  out.cutoff = codim - 1 - pv(std::max(codim, 0));
  const int qv = std::max(out.sdel.top, out.sfull.top);
  for (int p = 0; p < out.sfull.steps; ++p)
    for (int q = 0; q <= qv; ++q) {
      const int md = out.sdel.dim_at(2, p, q);
      const int mf = out.sfull.dim_at(2, p, q);
      if (md == 0 && mf == 0) continue;
      SsComparison::Verdict v;
      v.p = p;
      v.q = q;
      v.expect_zero = q >= out.cutoff;
      if (v.expect_zero) {
        v.ok = md == 0 ||
               mat_zero(f, out.map_at(std::min(2, rmax), p, q));
      } else {
        v.ok = md == mf && md > 0 &&
               rank_f(f, out.map_at(std::min(2, rmax), p, q)) == md;
      }
      out.ok = out.ok && v.ok;
      out.verdicts.push_back(v);
    }
  return out;
}

}  // namespace ihtk
