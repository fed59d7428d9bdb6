#include "ihtk/localsys.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ihtk {
namespace {

bool same_complex(const SimplicialComplex& a, const SimplicialComplex& b) {
  if (a.dim() != b.dim()) return false;
  for (int d = 0; d <= a.dim(); ++d)
    if (a.cells(d) != b.cells(d)) return false;
  return true;
}

bool is_identity_over(const IntMat& m, const Ring& ring) {
  if (m.nr != m.nc) return false;
  return zero_over(m.sub(IntMat::identity(m.nr)), ring);
}

bool invertible_over(const IntMat& m, const Ring& ring) {
  if (m.nr != m.nc) return false;
  if (m.nr == 0) return true;
  Int dv = det(m);
  switch (ring.kind) {
    case RingKind::Integers:
      return dv == 1 || dv == -1;
    case RingKind::Rationals:
      // Entries stay integral under the reverse-orientation invariant, so
      // transports must be invertible as integer matrices here too.
      return dv == 1 || dv == -1;
    case RingKind::PrimeField:
      return dv % ring.p != 0;
  }
  return false;
}

IntMat lookup_transport(const std::map<std::pair<int, int>, IntMat>& rho,
                        const Ring& ring, int r, int u, int v) {
  if (u == v) return IntMat::identity(r);
  auto it = rho.find({u, v});
  if (it != rho.end()) return it->second;
  auto rit = rho.find({v, u});
  if (rit != rho.end()) return unimodular_inverse(rit->second, ring);
  return IntMat::identity(r);
}

std::string edge_str(int u, int v) {
  return std::to_string(u) + " " + std::to_string(v);
}

}  // namespace

IntMat LocalSystem::transport(int u, int v) const {
  return lookup_transport(rho, ring, stalk_rank, u, v);
}

SimplicialComplex top_stratum_carrier(const FilteredComplex& f,
                                      Subdivision* out) {
  Subdivision sd = barycentric_subdivision(f.K);
  std::vector<int> verts;
  for (int d = 0; d <= f.K.dim(); ++d)
    for (int i = 0; i < f.K.ncells(d); ++i)
      if (f.level(f.K.cells(d)[i]) == f.n) verts.push_back(sd.vertex_id(d, i));
  SimplicialComplex carrier = full_subcomplex(sd.sd, verts).extract(sd.sd);
  if (out) *out = std::move(sd);
  return carrier;
}

void validate_local_system(const LocalSystem& sys) {
  int r = sys.stalk_rank;
  if (r < 1) throw input_error("stalk rank must be at least 1");
  for (const auto& [e, m] : sys.rho) {
    auto [u, v] = e;
    if (u == v) throw input_error("degenerate edge " + edge_str(u, v));
    Simplex s = u < v ? Simplex{u, v} : Simplex{v, u};
    if (!sys.carrier.contains(s))
      throw input_error("edge " + edge_str(u, v) + " is not in the carrier");
    if (m.nr != r || m.nc != r)
      throw input_error("edge matrix has the wrong shape at edge " +
                        edge_str(u, v));
    if (!invertible_over(m, sys.ring))
      throw input_error("edge matrix is not invertible over " +
                        sys.ring.name() + " at edge " + edge_str(u, v));
    auto rit = sys.rho.find({v, u});
    if (rit != sys.rho.end() &&
        !is_identity_over(rit->second.mul(m), sys.ring))
      throw input_error("edge matrices are not mutually inverse at edge " +
                        edge_str(u, v));
  }
  for (const Simplex& t : sys.carrier.cells(2)) {
    IntMat m = sys.transport(t[2], t[0])
                   .mul(sys.transport(t[1], t[2]).mul(sys.transport(t[0], t[1])));
    if (!is_identity_over(m, sys.ring))
      throw input_error("system is not flat at 2-simplex " +
                        std::to_string(t[0]) + " " + std::to_string(t[1]) +
                        " " + std::to_string(t[2]));
  }
}

LocalSystem trivial_local_system(const FilteredComplex& f, const Ring& ring,
                                 int rank) {
  LocalSystem sys;
  sys.carrier = top_stratum_carrier(f);
  sys.ring = ring;
  sys.stalk_rank = rank;
  validate_local_system(sys);
  return sys;
}

LocalSystem read_local_system(std::istream& is,
                              const SimplicialComplex& carrier,
                              const Ring& ring) {
  LocalSystem sys;
  sys.carrier = carrier;
  sys.ring = ring;
  std::string line;
  int lineno = 0;
  bool have_rank = false;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    const std::string where = " at line " + std::to_string(lineno);
    if (tok == "rank") {
      if (have_rank) throw input_error("repeated rank header" + where);
      if (!(ls >> sys.stalk_rank) || sys.stalk_rank < 1)
        throw input_error("malformed rank header" + where);
      have_rank = true;
    } else if (tok == "edge") {
      if (!have_rank) throw input_error("edge before rank header" + where);
      int u, v;
      std::string colon;
      if (!(ls >> u >> v >> colon) || colon != ":")
        throw input_error("malformed edge line" + where);
      int r = sys.stalk_rank;
      std::vector<Int> entries;
      long long e;
      while (ls >> e) entries.emplace_back(e);
      if (static_cast<int>(entries.size()) != r * r)
        throw input_error("edge matrix needs " + std::to_string(r * r) +
                          " entries" + where);
      IntMat m(r, r);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          if (entries[i * r + j] != 0) m.set(i, j, entries[i * r + j]);
      if (!sys.rho.emplace(std::make_pair(u, v), std::move(m)).second)
        throw input_error("repeated edge " + edge_str(u, v) + where);
    } else {
      throw input_error("unknown directive '" + tok + "'" + where);
    }
  }
  if (!have_rank) throw input_error("missing rank header");
  validate_local_system(sys);
  return sys;
}

void write_local_system(std::ostream& os, const LocalSystem& sys) {
  os << "rank " << sys.stalk_rank << "\n";
  for (const auto& [e, m] : sys.rho) {
    os << "edge " << e.first << " " << e.second << " :";
    for (int i = 0; i < m.nr; ++i)
      for (int j = 0; j < m.nc; ++j) os << " " << m.get(i, j);
    os << "\n";
  }
}

LocalSystem load_local_system(const std::string& path,
                              const FilteredComplex& f, const Ring& ring) {
  std::ifstream is(path);
  if (!is) throw input_error("cannot open " + path);
  return read_local_system(is, top_stratum_carrier(f), ring);
}

void save_local_system(const std::string& path, const LocalSystem& sys) {
  std::ofstream os(path);
  if (!os) throw input_error("cannot open " + path);
  write_local_system(os, sys);
}

bool facet_interior_check(const FilteredComplex& f, const Perversity& p) {
  AllowabilityTable t = allowability_table(f, p);
  for (int d = 0; d <= f.K.dim(); ++d)
    for (int i : t.indices(d)) {
      const Simplex& s = f.K.cells(d)[i];
      if (f.level(s) != f.n) return false;
      for (int j = 0; j <= d && d > 0; ++j) {
        Simplex face;
        for (int k = 0; k <= d; ++k)
          if (k != j) face.push_back(s[k]);
        if (f.level(face) != f.n) return false;
      }
    }
  return true;
}

ChainComplex twisted_IC(const FilteredComplex& f, const Perversity& p,
                        const LocalSystem& sys) {
  Subdivision sd;
  SimplicialComplex expect = top_stratum_carrier(f, &sd);
  if (!same_complex(expect, sys.carrier))
    throw input_error("carrier does not match the top stratum of the space");
  int r = sys.stalk_rank;
  AllowabilityTable at = allowability_table(f, p);
  bool fp = sys.ring.kind == RingKind::PrimeField;
  FieldOps fops(fp ? sys.ring : Ring::Q());
  int top = f.K.dim();

  ChainComplex out;
  out.ring = sys.ring;
  out.dims.assign(top + 1, 0);
  out.bd.assign(top + 1, IntMat(0, 0));
  std::vector<IntMat> basis(top + 1);  // columns in full block coordinates
  for (int d = 0; d <= top; ++d) {
    std::vector<int> aidx = at.indices(d);
    int na = static_cast<int>(aidx.size());
    // Twisted boundary of the allowable span, rows over all facets.
    IntMat tb(d > 0 ? f.K.ncells(d - 1) * r : 0, na * r);
    for (int ci = 0; ci < na; ++ci) {
      const Simplex& s = f.K.cells(d)[aidx[ci]];
      if (f.level(s) != f.n)
        throw verify_error(
            "allowable simplex lies outside the top stratum; transport is "
            "undefined");
      if (d == 0) continue;
      int bs = sd.vertex_id(d, aidx[ci]);
      for (int j = 0; j <= d; ++j) {
        Simplex face;
        for (int k = 0; k <= d; ++k)
          if (k != j) face.push_back(s[k]);
        if (f.level(face) != f.n)
          throw verify_error(
              "allowable simplex has a facet outside the top stratum; "
              "transport is undefined");
        int ti = f.K.index_of(d - 1, face);
        IntMat t = sys.transport(bs, sd.vertex_id(d - 1, ti));
        int sign = j % 2 == 0 ? 1 : -1;
        for (int cc = 0; cc < r; ++cc)
          for (const auto& [rr, v] : t.col[cc])
            tb.set(ti * r + rr, ci * r + cc, Int(sign) * v);
      }
    }

    std::vector<int> nonallow;
    if (d > 0)
      for (int i = 0; i < f.K.ncells(d - 1); ++i)
        if (!at.get(d - 1, i))
          for (int cc = 0; cc < r; ++cc) nonallow.push_back(i * r + cc);
    IntMat m = d > 0 ? tb.select_rows(nonallow) : IntMat(0, na * r);
    IntMat ker = fp ? residue_int(fops, kernel_basis_f(fops, to_rat(m)))
                    : kernel_basis_z(m);
    std::vector<int> rowmap(na * r);
    for (int ci = 0; ci < na; ++ci)
      for (int cc = 0; cc < r; ++cc) rowmap[ci * r + cc] = aidx[ci] * r + cc;
    basis[d] = ker.embed_rows(f.K.ncells(d) * r, rowmap);
    out.dims[d] = ker.nc;
    if (d == 0) {
      out.bd[d] = IntMat(0, out.dims[d]);
    } else {
      IntMat img = tb.mul(ker);
      out.bd[d] =
          fp ? residue_int(fops, solve_columns_f(fops, to_rat(basis[d - 1]),
                                                 to_rat(img)))
             : solve_columns_z(basis[d - 1], img);
    }
  }
  out.validate();
  return out;
}

HomologyResult twisted_IH(const FilteredComplex& f, const Perversity& p,
                          const LocalSystem& sys) {
  return homology(twisted_IC(f, p, sys));
}

int StalkSystem::rank(int q) const {
  if (q < 0 || q >= static_cast<int>(stalk.betti.size())) return 0;
  return stalk.betti[q];
}

IntMat StalkSystem::transport(int u, int v, int q) const {
  int r = rank(q);
  if (u == v || r == 0) return IntMat::identity(r);
  auto it = rho.find({u, v});
  if (it != rho.end()) return it->second[q];
  auto rit = rho.find({v, u});
  if (rit != rho.end()) return unimodular_inverse(rit->second[q], ring);
  return IntMat::identity(r);
}

std::vector<IntMat> StalkSystem::loop_monodromy(
    const std::vector<int>& loop) const {
  int nd = static_cast<int>(stalk.betti.size());
  std::vector<IntMat> out(nd);
  for (int q = 0; q < nd; ++q) {
    IntMat m = IntMat::identity(rank(q));
    for (size_t i = 0; i < loop.size(); ++i)
      m = transport(loop[i], loop[(i + 1) % loop.size()], q).mul(m);
    out[q] = std::move(m);
  }
  return out;
}

void validate_stalk_system(const StalkSystem& sys) {
  int nd = static_cast<int>(sys.stalk.betti.size());
  for (int q = 0; q < static_cast<int>(sys.stalk.torsion.size()); ++q)
    if (!sys.stalk.torsion[q].empty())
      throw input_error("stalk groups must be free; torsion in degree " +
                        std::to_string(q));
  for (const auto& [e, ms] : sys.rho) {
    auto [u, v] = e;
    if (u == v) throw input_error("degenerate edge " + edge_str(u, v));
    Simplex s = u < v ? Simplex{u, v} : Simplex{v, u};
    if (!sys.base.contains(s))
      throw input_error("edge " + edge_str(u, v) + " is not in the base");
    if (static_cast<int>(ms.size()) != nd)
      throw input_error("one transport matrix per stalk degree required at "
                        "edge " +
                        edge_str(u, v));
    for (int q = 0; q < nd; ++q) {
      int r = sys.rank(q);
      if (ms[q].nr != r || ms[q].nc != r)
        throw input_error("transport has the wrong shape in degree " +
                          std::to_string(q) + " at edge " + edge_str(u, v));
      if (!invertible_over(ms[q], sys.ring))
        throw input_error("transport is not invertible over " +
                          sys.ring.name() + " in degree " + std::to_string(q) +
                          " at edge " + edge_str(u, v));
    }
  }
  for (const Simplex& t : sys.base.cells(2))
    for (int q = 0; q < nd; ++q) {
      IntMat m = sys.transport(t[2], t[0], q)
                     .mul(sys.transport(t[1], t[2], q)
                              .mul(sys.transport(t[0], t[1], q)));
      if (!is_identity_over(m, sys.ring))
        throw input_error("system is not flat at 2-simplex " +
                          std::to_string(t[0]) + " " + std::to_string(t[1]) +
                          " " + std::to_string(t[2]) + " in degree " +
                          std::to_string(q));
    }
}

StalkSystem trivial_stalk_system(const SimplicialComplex& base,
                                 const Ring& ring,
                                 const HomologyResult& stalk) {
  StalkSystem sys;
  sys.base = base;
  sys.ring = ring;
  sys.stalk = stalk;
  validate_stalk_system(sys);
  return sys;
}

StalkSystem stalk_system_from_gluing(const HomologyResult& stalk,
                                     const std::vector<IntMat>& phi,
                                     const std::vector<int>& loop,
                                     const Ring& ring) {
  int m = static_cast<int>(loop.size());
  if (m < 3) throw input_error("the base loop needs at least 3 vertices");
  {
    std::vector<int> sorted = loop;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw input_error("the base loop repeats a vertex");
  }
  int nd = static_cast<int>(stalk.betti.size());
  if (static_cast<int>(phi.size()) != nd)
    throw input_error("one gluing matrix per stalk degree required");

  StalkSystem sys;
  std::vector<Simplex> edges;
  for (int i = 0; i < m; ++i) {
    int a = loop[i], b = loop[(i + 1) % m];
    edges.push_back(a < b ? Simplex{a, b} : Simplex{b, a});
  }
  sys.base = SimplicialComplex::close(edges);
  sys.ring = ring;
  sys.stalk = stalk;

  bool trivial = true;
  for (int q = 0; q < nd; ++q) {
    int r = sys.rank(q);
    if (phi[q].nr != r || phi[q].nc != r)
      throw input_error("gluing matrix has the wrong shape in degree " +
                        std::to_string(q));
    if (!invertible_over(phi[q], ring))
      throw input_error("gluing matrix is not invertible over " +
                        ring.name() + " in degree " + std::to_string(q));
    if (!is_identity_over(phi[q], ring)) trivial = false;
  }
  if (!trivial) sys.rho[{loop[m - 1], loop[0]}] = phi;
  validate_stalk_system(sys);
  return sys;
}

ChainComplex twisted_cellular_complex(const SimplicialComplex& b,
                                      const StalkSystem& sys, int q) {
  if (!same_complex(b, sys.base))
    throw input_error("stalk system is not based on the given complex");
  int r = sys.rank(q);
  if (q >= 0 && q < static_cast<int>(sys.stalk.torsion.size()) &&
      !sys.stalk.torsion[q].empty())
    throw input_error("stalk groups must be free; torsion in degree " +
                      std::to_string(q));
  int top = std::max(b.dim(), 0);

  ChainComplex out;
  out.ring = sys.ring;
  out.dims.assign(top + 1, 0);
  out.bd.assign(top + 1, IntMat(0, 0));
  for (int d = 0; d <= b.dim(); ++d) out.dims[d] = b.ncells(d) * r;
  out.bd[0] = IntMat(0, out.dims[0]);
  for (int d = 1; d <= b.dim(); ++d) {
    IntMat bd(out.dims[d - 1], out.dims[d]);
    for (int i = 0; i < b.ncells(d); ++i) {
      const Simplex& s = b.cells(d)[i];
      for (int j = 0; j <= d; ++j) {
        Simplex face;
        for (int k = 0; k <= d; ++k)
          if (k != j) face.push_back(s[k]);
        int ti = b.index_of(d - 1, face);
        // Coefficients sit at the leading vertex; only dropping it moves
        // the anchor, one base edge over.
        IntMat t = sys.transport(s[0], face[0], q);
        int sign = j % 2 == 0 ? 1 : -1;
        for (int cc = 0; cc < r; ++cc)
          for (const auto& [rr, v] : t.col[cc])
            bd.set(ti * r + rr, i * r + cc, Int(sign) * v);
      }
    }
    out.bd[d] = std::move(bd);
  }
  out.validate();
  return out;
}

std::vector<IntMat> stalk_comparison_map(const StalkSystem& link,
                                         const StalkSystem& cone) {
  if (!same_complex(link.base, cone.base))
    throw input_error("the two systems live over different bases");
  if (link.ring.kind != cone.ring.kind || link.ring.p != cone.ring.p)
    throw input_error("the two systems live over different rings");
  int nd = std::max(static_cast<int>(link.stalk.betti.size()),
                    static_cast<int>(cone.stalk.betti.size()));
  std::vector<IntMat> out(nd);
  for (int q = 0; q < nd; ++q) {
    int lb = link.rank(q), cb = cone.rank(q);
    if (cb == lb)
      out[q] = IntMat::identity(lb);
    else if (cb == 0)
      out[q] = IntMat(0, lb);
    else
      throw input_error(
          "stalk groups are not related by coning in degree " +
          std::to_string(q));
    // The map must intertwine the transports of the two systems.
    std::vector<std::pair<int, int>> edges;
    for (const auto& [e, ms] : link.rho) edges.push_back(e);
    for (const auto& [e, ms] : cone.rho) edges.push_back(e);
    for (const auto& [u, v] : edges) {
      IntMat lhs = cone.transport(u, v, q).mul(out[q]);
      IntMat rhs = out[q].mul(link.transport(u, v, q));
      if (!zero_over(lhs.sub(rhs), link.ring))
        throw verify_error(
            "comparison map does not commute with transport in degree " +
            std::to_string(q));
    }
  }
  return out;
}

}  // namespace ihtk
