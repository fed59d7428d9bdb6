#include "ihtk/simplicial.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ihtk/exact.hpp"

namespace ihtk {

namespace {

Simplex facet_of(const Simplex& s, int j) {
  Simplex g;
  g.reserve(s.size() - 1);
  for (int t = 0; t < static_cast<int>(s.size()); ++t)
    if (t != j) g.push_back(s[t]);
  return g;
}

void sort_col(SCol<Int>& c) {
  std::sort(c.begin(), c.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

/// Re-houses flags from a parent complex onto an extracted subcomplex.
Subcomplex restrict_flags(const SimplicialComplex& sub, const SimplicialComplex& parent,
                          const Subcomplex& flags) {
  Subcomplex out = Subcomplex::none(sub);
  for (int d = 0; d <= sub.dim(); ++d)
    for (int i = 0; i < sub.ncells(d); ++i) {
      int pi = parent.index_of(d, sub.cells(d)[i]);
      if (pi >= 0 && flags.has(d, pi)) out.set(d, i);
    }
  return out;
}

Subcomplex piece_flags(const SimplicialComplex& k, const std::map<int, Simplex>& base_part,
                       const Simplex& y_cell) {
  Subcomplex p = Subcomplex::none(k);
  for (int d = 0; d <= k.dim(); ++d)
    for (int i = 0; i < k.ncells(d); ++i) {
      const Simplex& bp = base_part.at(k.cells(d)[i].back());
      if (std::includes(y_cell.begin(), y_cell.end(), bp.begin(), bp.end())) p.set(d, i);
    }
  return p;
}

}  // namespace

std::string simplex_str(const Simplex& s) {
  std::string out = "[";
  for (size_t t = 0; t < s.size(); ++t) {
    if (t) out += ",";
    out += std::to_string(s[t]);
  }
  return out + "]";
}

Simplex make_simplex(std::vector<int> verts) {
  std::sort(verts.begin(), verts.end());
  if (std::adjacent_find(verts.begin(), verts.end()) != verts.end())
    throw input_error("simplex " + simplex_str(verts) + " repeats a vertex");
  return verts;
}

SimplicialComplex::SimplicialComplex(std::vector<std::vector<Simplex>> cells) {
  while (!cells.empty() && cells.back().empty()) cells.pop_back();
  cells_ = std::move(cells);
  for (int d = 0; d < static_cast<int>(cells_.size()); ++d) {
    auto& lst = cells_[d];
    for (const Simplex& s : lst) {
      if (static_cast<int>(s.size()) != d + 1)
        throw input_error("cell " + simplex_str(s) + " listed at dimension " + std::to_string(d));
      for (size_t t = 1; t < s.size(); ++t)
        if (s[t - 1] >= s[t])
          throw input_error("cell " + simplex_str(s) + " is not strictly increasing");
    }
    std::sort(lst.begin(), lst.end());
    if (std::adjacent_find(lst.begin(), lst.end()) != lst.end())
      throw input_error("duplicate cell in dimension " + std::to_string(d));
  }
  build_index();
  for (int d = 1; d < static_cast<int>(cells_.size()); ++d)
    for (const Simplex& s : cells_[d])
      for (int j = 0; j <= d; ++j)
        if (index_of(d - 1, facet_of(s, j)) < 0)
          throw input_error("cell family is not face closed at " + simplex_str(s));
}

void SimplicialComplex::build_index() {
  index_.assign(cells_.size(), {});
  for (int d = 0; d < static_cast<int>(cells_.size()); ++d)
    for (int i = 0; i < static_cast<int>(cells_[d].size()); ++i) index_[d][cells_[d][i]] = i;
  verts_.clear();
  if (!cells_.empty())
    for (const Simplex& s : cells_[0]) verts_.push_back(s[0]);
}

SimplicialComplex SimplicialComplex::close(const std::vector<Simplex>& generators) {
  int maxd = -1;
  std::vector<Simplex> gens;
  gens.reserve(generators.size());
  for (const Simplex& g : generators) {
    gens.push_back(make_simplex(g));
    maxd = std::max(maxd, simplex_dim(gens.back()));
  }
  std::vector<std::set<Simplex>> byd(maxd + 1);
  for (Simplex& g : gens) {
    int d = simplex_dim(g);
    byd[d].insert(std::move(g));
  }
  for (int d = maxd; d >= 1; --d)
    for (const Simplex& s : byd[d])
      for (int j = 0; j <= d; ++j) byd[d - 1].insert(facet_of(s, j));
  std::vector<std::vector<Simplex>> cells(maxd + 1);
  for (int d = 0; d <= maxd; ++d) cells[d].assign(byd[d].begin(), byd[d].end());
  return SimplicialComplex(std::move(cells));
}

int SimplicialComplex::ncells(int d) const {
  if (d < 0 || d > dim()) return 0;
  return static_cast<int>(cells_[d].size());
}

const std::vector<Simplex>& SimplicialComplex::cells(int d) const {
  static const std::vector<Simplex> kNone;
  if (d < 0 || d > dim()) return kNone;
  return cells_[d];
}

int SimplicialComplex::index_of(int d, const Simplex& s) const {
  if (d < 0 || d > dim()) return -1;
  auto it = index_[d].find(s);
  return it == index_[d].end() ? -1 : it->second;
}

bool SimplicialComplex::contains(const Simplex& s) const {
  return index_of(simplex_dim(s), s) >= 0;
}

std::vector<int> SimplicialComplex::f_vector() const {
  std::vector<int> f;
  for (int d = 0; d <= dim(); ++d) f.push_back(ncells(d));
  return f;
}

long long SimplicialComplex::euler() const {
  long long e = 0;
  for (int d = 0; d <= dim(); ++d) e += (d % 2 == 0) ? ncells(d) : -ncells(d);
  return e;
}

std::vector<Simplex> SimplicialComplex::maximal_cells() const {
  std::vector<Simplex> out;
  for (int d = 0; d <= dim(); ++d) {
    std::vector<char> covered(ncells(d), 0);
    for (const Simplex& s : cells(d + 1))
      for (int j = 0; j <= d + 1; ++j) covered[index_of(d, facet_of(s, j))] = 1;
    for (int i = 0; i < ncells(d); ++i)
      if (!covered[i]) out.push_back(cells_[d][i]);
  }
  return out;
}

IntMat SimplicialComplex::boundary_matrix(int d) const {
  IntMat b(ncells(d - 1), ncells(d));
  if (d <= 0 || d > dim()) return b;
  for (int j = 0; j < ncells(d); ++j) {
    const Simplex& s = cells_[d][j];
    SCol<Int> col;
    col.reserve(d + 1);
    for (int t = 0; t <= d; ++t)
      col.push_back({index_of(d - 1, facet_of(s, t)), t % 2 == 0 ? Int(1) : Int(-1)});
    sort_col(col);
    b.col[j] = std::move(col);
  }
  return b;
}

ChainComplex SimplicialComplex::chain_complex(const Ring& ring) const {
  ChainComplex c;
  c.ring = ring;
  for (int d = 0; d <= dim(); ++d) {
    c.dims.push_back(ncells(d));
    c.bd.push_back(boundary_matrix(d));
  }
  return c;
}

Subcomplex Subcomplex::none(const SimplicialComplex& k) {
  Subcomplex s;
  s.flags.resize(k.dim() + 1);
  for (int d = 0; d <= k.dim(); ++d) s.flags[d].assign(k.ncells(d), 0);
  return s;
}

Subcomplex Subcomplex::whole(const SimplicialComplex& k) {
  Subcomplex s = none(k);
  for (auto& row : s.flags) std::fill(row.begin(), row.end(), 1);
  return s;
}

bool Subcomplex::has(int d, int i) const {
  if (d < 0 || d >= static_cast<int>(flags.size())) return false;
  if (i < 0 || i >= static_cast<int>(flags[d].size())) return false;
  return flags[d][i] != 0;
}

void Subcomplex::set(int d, int i) { flags.at(d).at(i) = 1; }

void Subcomplex::add_closed(const SimplicialComplex& k, const Simplex& s) {
  int d = simplex_dim(s), i = k.index_of(d, s);
  if (i < 0) throw input_error("cell " + simplex_str(s) + " is not in the complex");
  if (has(d, i)) return;
  set(d, i);
  for (int j = 0; j <= d && d > 0; ++j) add_closed(k, facet_of(s, j));
}

int Subcomplex::count(int d) const {
  if (d < 0 || d >= static_cast<int>(flags.size())) return 0;
  return static_cast<int>(std::count(flags[d].begin(), flags[d].end(), 1));
}

long long Subcomplex::total() const {
  long long t = 0;
  for (int d = 0; d < static_cast<int>(flags.size()); ++d) t += count(d);
  return t;
}

int Subcomplex::dim() const {
  for (int d = static_cast<int>(flags.size()) - 1; d >= 0; --d)
    if (count(d) > 0) return d;
  return -1;
}

bool Subcomplex::empty() const { return dim() < 0; }

bool Subcomplex::closed(const SimplicialComplex& k) const {
  for (int d = 1; d < static_cast<int>(flags.size()); ++d)
    for (int i = 0; i < static_cast<int>(flags[d].size()); ++i) {
      if (!flags[d][i]) continue;
      const Simplex& s = k.cells(d)[i];
      for (int j = 0; j <= d; ++j)
        if (!has(d - 1, k.index_of(d - 1, facet_of(s, j)))) return false;
    }
  return true;
}

bool Subcomplex::full(const SimplicialComplex& k) const {
  std::set<int> vs;
  for (int v : vertex_list(k)) vs.insert(v);
  for (int d = 0; d <= k.dim(); ++d)
    for (int i = 0; i < k.ncells(d); ++i) {
      if (has(d, i)) continue;
      const Simplex& s = k.cells(d)[i];
      bool inside = true;
      for (int v : s)
        if (!vs.count(v)) {
          inside = false;
          break;
        }
      if (inside) return false;
    }
  return true;
}

std::vector<int> Subcomplex::vertex_list(const SimplicialComplex& k) const {
  std::vector<int> out;
  for (int i = 0; i < k.ncells(0); ++i)
    if (has(0, i)) out.push_back(k.cells(0)[i][0]);
  return out;
}

std::vector<IntMat> Subcomplex::span(const SimplicialComplex& k) const {
  std::vector<IntMat> out;
  for (int d = 0; d <= k.dim(); ++d) {
    IntMat m(k.ncells(d), count(d));
    int c = 0;
    for (int i = 0; i < k.ncells(d); ++i)
      if (has(d, i)) m.col[c++] = {{i, Int(1)}};
    out.push_back(std::move(m));
  }
  return out;
}

SimplicialComplex Subcomplex::extract(const SimplicialComplex& k) const {
  std::vector<std::vector<Simplex>> cells(k.dim() + 1);
  for (int d = 0; d <= k.dim(); ++d)
    for (int i = 0; i < k.ncells(d); ++i)
      if (has(d, i)) cells[d].push_back(k.cells(d)[i]);
  return SimplicialComplex(std::move(cells));
}

bool Subcomplex::subset_of(const Subcomplex& o) const {
  if (flags.size() != o.flags.size()) throw input_error("subcomplex shape mismatch");
  for (size_t d = 0; d < flags.size(); ++d) {
    if (flags[d].size() != o.flags[d].size()) throw input_error("subcomplex shape mismatch");
    for (size_t i = 0; i < flags[d].size(); ++i)
      if (flags[d][i] && !o.flags[d][i]) return false;
  }
  return true;
}

Subcomplex Subcomplex::intersect(const Subcomplex& o) const {
  if (flags.size() != o.flags.size()) throw input_error("subcomplex shape mismatch");
  Subcomplex out = *this;
  for (size_t d = 0; d < flags.size(); ++d) {
    if (flags[d].size() != o.flags[d].size()) throw input_error("subcomplex shape mismatch");
    for (size_t i = 0; i < flags[d].size(); ++i) out.flags[d][i] = flags[d][i] && o.flags[d][i];
  }
  return out;
}

Subcomplex Subcomplex::unite(const Subcomplex& o) const {
  if (flags.size() != o.flags.size()) throw input_error("subcomplex shape mismatch");
  Subcomplex out = *this;
  for (size_t d = 0; d < flags.size(); ++d) {
    if (flags[d].size() != o.flags[d].size()) throw input_error("subcomplex shape mismatch");
    for (size_t i = 0; i < flags[d].size(); ++i) out.flags[d][i] = flags[d][i] || o.flags[d][i];
  }
  return out;
}

Subcomplex full_subcomplex(const SimplicialComplex& k, const std::vector<int>& verts) {
  std::set<int> vs(verts.begin(), verts.end());
  Subcomplex out = Subcomplex::none(k);
  for (int d = 0; d <= k.dim(); ++d)
    for (int i = 0; i < k.ncells(d); ++i) {
      bool inside = true;
      for (int v : k.cells(d)[i])
        if (!vs.count(v)) {
          inside = false;
          break;
        }
      if (inside) out.set(d, i);
    }
  return out;
}

std::pair<Subcomplex, Subcomplex> star_link(const SimplicialComplex& k, const Subcomplex& a) {
  if (!a.closed(k)) throw input_error("star of a subcomplex that is not face closed");
  std::set<int> av;
  for (int v : a.vertex_list(k)) av.insert(v);
  Subcomplex star = Subcomplex::none(k);
  for (int d = k.dim(); d >= 0; --d)
    for (int i = 0; i < k.ncells(d); ++i) {
      if (star.has(d, i)) continue;
      const Simplex& s = k.cells(d)[i];
      for (int v : s)
        if (av.count(v)) {
          star.add_closed(k, s);
          break;
        }
    }
  Subcomplex link = Subcomplex::none(k);
  for (int d = 0; d <= k.dim(); ++d)
    for (int i = 0; i < k.ncells(d); ++i) {
      if (!star.has(d, i)) continue;
      bool meets = false;
      for (int v : k.cells(d)[i])
        if (av.count(v)) {
          meets = true;
          break;
        }
      if (!meets) link.set(d, i);
    }
  return {star, link};
}

int VertexMap::operator()(int v) const {
  auto it = f.find(v);
  if (it == f.end()) throw input_error("vertex map undefined on " + std::to_string(v));
  return it->second;
}

bool VertexMap::defined(int v) const { return f.count(v) > 0; }

MappedCell push_cell(const VertexMap& vm, const Simplex& s) {
  std::vector<int> w;
  w.reserve(s.size());
  for (int v : s) w.push_back(vm(v));
  int inv = 0;
  for (size_t a = 0; a < w.size(); ++a)
    for (size_t b = a + 1; b < w.size(); ++b)
      if (w[a] > w[b]) ++inv;
  MappedCell out;
  std::sort(w.begin(), w.end());
  bool degenerate = std::adjacent_find(w.begin(), w.end()) != w.end();
  if (degenerate) w.erase(std::unique(w.begin(), w.end()), w.end());
  out.image = std::move(w);
  out.sign = degenerate ? 0 : (inv % 2 == 0 ? 1 : -1);
  return out;
}

bool is_simplicial(const SimplicialComplex& k, const SimplicialComplex& l, const VertexMap& vm) {
  for (int v : k.vertices())
    if (!vm.defined(v) || l.index_of(0, {vm(v)}) < 0) return false;
  for (int d = 1; d <= k.dim(); ++d)
    for (const Simplex& s : k.cells(d))
      if (!l.contains(push_cell(vm, s).image)) return false;
  return true;
}

std::vector<IntMat> chain_map_matrices(const SimplicialComplex& k, const SimplicialComplex& l,
                                       const VertexMap& vm) {
  if (!is_simplicial(k, l, vm)) throw input_error("vertex map is not simplicial");
  std::vector<IntMat> out;
  for (int d = 0; d <= k.dim(); ++d) {
    IntMat m(l.ncells(d), k.ncells(d));
    for (int j = 0; j < k.ncells(d); ++j) {
      MappedCell mc = push_cell(vm, k.cells(d)[j]);
      if (mc.sign == 0) continue;
      m.col[j] = {{l.index_of(d, mc.image), Int(mc.sign)}};
    }
    out.push_back(std::move(m));
  }
  return out;
}

ChainMap chain_map(const ChainComplex& cs, const SimplicialComplex& k, const ChainComplex& cd,
                   const SimplicialComplex& l, const VertexMap& vm) {
  ChainMap f;
  f.src = &cs;
  f.dst = &cd;
  f.m = chain_map_matrices(k, l, vm);
  return f;
}

Subdivision barycentric_subdivision(const SimplicialComplex& k) {
  Subdivision s;
  s.base = k;
  int kd = k.dim();
  s.offset.assign(kd + 1 < 0 ? 0 : kd + 1, 0);
  int acc = 0;
  for (int d = 0; d <= kd; ++d) {
    s.offset[d] = acc;
    acc += k.ncells(d);
  }
  // Chains of the face poset, each listed once under its top cell.
  std::vector<std::vector<std::vector<Simplex>>> ch(kd + 1);
  for (int d = 0; d <= kd; ++d) {
    ch[d].resize(k.ncells(d));
    for (int i = 0; i < k.ncells(d); ++i) {
      const Simplex& tau = k.cells(d)[i];
      int tid = s.offset[d] + i;
      auto& into = ch[d][i];
      into.push_back({tid});
      int nv = d + 1;
      for (unsigned mask = 1; mask + 1 < (1u << nv); ++mask) {
        Simplex face;
        for (int t = 0; t < nv; ++t)
          if (mask & (1u << t)) face.push_back(tau[t]);
        int e = static_cast<int>(face.size()) - 1;
        for (const Simplex& c : ch[e][k.index_of(e, face)]) {
          Simplex c2 = c;
          c2.push_back(tid);
          into.push_back(std::move(c2));
        }
      }
    }
  }
  std::vector<std::vector<Simplex>> cells(kd + 1 < 0 ? 0 : kd + 1);
  for (int d = 0; d <= kd; ++d)
    for (auto& lst : ch[d])
      for (Simplex& c : lst) {
        int e = static_cast<int>(c.size()) - 1;
        cells[e].push_back(std::move(c));
      }
  s.sd = SimplicialComplex(std::move(cells));
  return s;
}

std::pair<int, int> Subdivision::cell_of(int v) const {
  for (int d = static_cast<int>(offset.size()) - 1; d >= 0; --d)
    if (v >= offset[d]) {
      if (v - offset[d] >= base.ncells(d)) break;
      return {d, v - offset[d]};
    }
  throw input_error("not a subdivision vertex: " + std::to_string(v));
}

const Simplex& Subdivision::original_cell(int v) const {
  auto [d, i] = cell_of(v);
  return base.cells(d)[i];
}

Subcomplex Subdivision::image(const Subcomplex& a) const {
  Subcomplex out = Subcomplex::none(sd);
  for (int d = 0; d <= sd.dim(); ++d)
    for (int i = 0; i < sd.ncells(d); ++i) {
      auto [e, j] = cell_of(sd.cells(d)[i].back());
      if (a.has(e, j)) out.set(d, i);
    }
  return out;
}

int FilteredComplex::level(int v) const {
  auto it = levels.find(v);
  return it == levels.end() ? n : it->second;
}

int FilteredComplex::level(const Simplex& s) const {
  int m = 0;
  for (int v : s) m = std::max(m, level(v));
  return m;
}

int FilteredComplex::skeleton_face_dim(const Simplex& s, int i) const {
  int c = 0;
  for (int v : s)
    if (level(v) <= i) ++c;
  return c == 0 ? kEmptyFaceDim : c - 1;
}

bool FilteredComplex::skeleton_nonempty(int i) const {
  for (int v : K.vertices())
    if (level(v) <= i) return true;
  return false;
}

std::vector<int> FilteredComplex::skeleton_vertices(int i) const {
  std::vector<int> out;
  for (int v : K.vertices())
    if (level(v) <= i) out.push_back(v);
  return out;
}

Subcomplex FilteredComplex::skeleton(int i) const {
  return full_subcomplex(K, skeleton_vertices(i));
}

int FilteredComplex::bottom() const {
  int b = n;
  for (int v : K.vertices()) b = std::min(b, level(v));
  return b;
}

std::vector<int> FilteredComplex::bottom_stratum_vertices() const {
  return skeleton_vertices(bottom());
}

bool FilteredComplex::plain() const {
  for (int v : K.vertices())
    if (level(v) != n) return false;
  return true;
}

bool FilteredComplex::codim1_empty() const {
  for (int v : K.vertices())
    if (level(v) == n - 1) return false;
  return true;
}

void FilteredComplex::validate() const {
  if (K.ncells(0) == 0) throw input_error("empty complex");
  if (n < K.dim())
    throw input_error("formal dimension " + std::to_string(n) + " below cell dimension " +
                      std::to_string(K.dim()));
  for (const auto& [v, lev] : levels) {
    if (K.index_of(0, {v}) < 0)
      throw input_error("level assigned to unknown vertex " + std::to_string(v));
    if (lev < 0 || lev > n)
      throw input_error("vertex " + std::to_string(v) + " level " + std::to_string(lev) +
                        " outside [0, " + std::to_string(n) + "]");
  }
}

FilteredComplex trivial_filtration(const SimplicialComplex& k, int n) {
  FilteredComplex f;
  f.K = k;
  f.n = n < 0 ? k.dim() : n;
  f.validate();
  return f;
}

FilteredComplex make_filtered(const SimplicialComplex& k, int n,
                              const std::map<int, int>& levels) {
  FilteredComplex f;
  f.K = k;
  f.n = n;
  for (const auto& [v, lev] : levels)
    if (lev != n) f.levels[v] = lev;
  f.validate();
  return f;
}

FilteredComplex make_filtered(const SimplicialComplex& k, int n,
                              const std::vector<Subcomplex>& skeleta) {
  if (static_cast<int>(skeleta.size()) > n + 1) throw input_error("more skeleta than levels");
  for (size_t i = 0; i < skeleta.size(); ++i) {
    if (!skeleta[i].closed(k)) throw input_error("skeleton is not face closed");
    if (i + 1 < skeleta.size() && !skeleta[i].subset_of(skeleta[i + 1]))
      throw input_error("skeleta are not nested");
  }
  bool all_full = true;
  for (const Subcomplex& s : skeleta)
    if (!s.full(k)) all_full = false;
  if (all_full) {
    std::map<int, int> levels;
    for (size_t i = 0; i < skeleta.size(); ++i)
      for (int v : skeleta[i].vertex_list(k))
        if (!levels.count(v)) levels[v] = static_cast<int>(i);
    return make_filtered(k, n, levels);
  }
  Subdivision sd = barycentric_subdivision(k);
  std::map<int, int> levels;
  for (int v = 0; v < sd.sd.vertex_count(); ++v) {
    auto [d, i] = sd.cell_of(v);
    for (size_t s = 0; s < skeleta.size(); ++s)
      if (skeleta[s].has(d, i)) {
        levels[v] = static_cast<int>(s);
        break;
      }
  }
  FilteredComplex f = make_filtered(sd.sd, n, levels);
  f.subdivided_input = true;
  return f;
}

FilteredComplex subdivide_filtered(const FilteredComplex& x, Subdivision* out) {
  x.validate();
  Subdivision sd = barycentric_subdivision(x.K);
  std::map<int, int> levels;
  for (int v = 0; v < sd.sd.vertex_count(); ++v) {
    int lev = x.level(sd.original_cell(v));
    if (lev != x.n) levels[v] = lev;
  }
  FilteredComplex f;
  f.K = sd.sd;
  f.n = x.n;
  f.levels = std::move(levels);
  f.subdivided_input = x.subdivided_input;
  f.validate();
  if (out) *out = std::move(sd);
  return f;
}

FilteredComplex restrict_filtered(const FilteredComplex& x, const Subcomplex& a, int formal_dim,
                                  int level_shift) {
  if (!a.closed(x.K)) throw input_error("restriction to a subcomplex that is not face closed");
  SimplicialComplex sub = a.extract(x.K);
  int nn = formal_dim < 0 ? x.n : formal_dim;
  std::map<int, int> levels;
  for (int v : sub.vertices()) {
    int lev = x.level(v) - level_shift;
    if (lev < 0)
      throw input_error("level shift drops vertex " + std::to_string(v) + " below zero");
    if (lev != nn) levels[v] = lev;
  }
  FilteredComplex f;
  f.K = std::move(sub);
  f.n = nn;
  f.levels = std::move(levels);
  f.subdivided_input = x.subdivided_input;
  f.validate();
  return f;
}

Cone cone(const FilteredComplex& x) {
  x.validate();
  Cone out;
  out.apex = x.K.vertices().back() + 1;
  std::vector<Simplex> gens;
  for (Simplex s : x.K.maximal_cells()) {
    s.push_back(out.apex);
    gens.push_back(std::move(s));
  }
  SimplicialComplex ck = SimplicialComplex::close(gens);
  std::map<int, int> levels;
  levels[out.apex] = 0;
  for (int v : x.K.vertices()) {
    int lev = x.level(v) + 1;
    if (lev != x.n + 1) levels[v] = lev;
  }
  out.C.K = std::move(ck);
  out.C.n = x.n + 1;
  out.C.levels = std::move(levels);
  out.C.subdivided_input = x.subdivided_input;
  out.C.validate();
  return out;
}

std::vector<SignedSimplex> prism_decomposition(int i) {
  if (i < 0) throw input_error("prism of negative dimension");
  std::vector<SignedSimplex> out;
  for (int l = 0; l <= i; ++l) {
    Simplex c;
    c.reserve(i + 2);
    for (int t = 0; t <= l; ++t) c.push_back(t);
    for (int t = l; t <= i; ++t) c.push_back(i + 1 + t);
    out.push_back({l % 2 == 0 ? 1 : -1, std::move(c)});
  }
  return out;
}

int Cylinder::vid(int layer, int v) const {
  auto it = vrank.find(v);
  if (it == vrank.end()) throw input_error("unknown cylinder vertex " + std::to_string(v));
  return layer * V + it->second;
}

Cylinder cylinder(const SimplicialComplex& k) {
  if (k.ncells(0) == 0) throw input_error("cylinder over an empty complex");
  Cylinder c;
  c.base = k;
  c.vlist = k.vertices();
  c.V = k.vertex_count();
  for (int r = 0; r < c.V; ++r) c.vrank[c.vlist[r]] = r;
  std::vector<Simplex> gens;
  for (const Simplex& s : k.maximal_cells()) {
    int d = simplex_dim(s);
    for (int l = 0; l <= d; ++l) {
      Simplex cell;
      for (int t = 0; t <= l; ++t) cell.push_back(c.vid(0, s[t]));
      for (int t = l; t <= d; ++t) cell.push_back(c.vid(1, s[t]));
      gens.push_back(std::move(cell));
    }
  }
  c.C = SimplicialComplex::close(gens);
  for (int v : c.vlist) {
    c.end0.f[v] = c.vid(0, v);
    c.end1.f[v] = c.vid(1, v);
    c.proj.f[c.vid(0, v)] = v;
    c.proj.f[c.vid(1, v)] = v;
  }
  return c;
}

IntMat Cylinder::prism_matrix(int d) const {
  IntMat f(C.ncells(d + 1), base.ncells(d));
  for (int j = 0; j < base.ncells(d); ++j) {
    const Simplex& s = base.cells(d)[j];
    SCol<Int> col;
    for (int l = 0; l <= d; ++l) {
      Simplex cell;
      for (int t = 0; t <= l; ++t) cell.push_back(vid(0, s[t]));
      for (int t = l; t <= d; ++t) cell.push_back(vid(1, s[t]));
      col.push_back({C.index_of(d + 1, cell), l % 2 == 0 ? Int(1) : Int(-1)});
    }
    sort_col(col);
    f.col[j] = std::move(col);
  }
  return f;
}

FilteredComplex Cylinder::filtered(const FilteredComplex& x) const {
  if (x.K != base) throw input_error("filtration is over a different complex");
  std::map<int, int> levels;
  for (int v : vlist) {
    int lev = x.level(v) + 1;
    if (lev == x.n + 1) continue;
    levels[vid(0, v)] = lev;
    levels[vid(1, v)] = lev;
  }
  FilteredComplex f;
  f.K = C;
  f.n = x.n + 1;
  f.levels = std::move(levels);
  f.subdivided_input = x.subdivided_input;
  f.validate();
  return f;
}

int MappingTorus::vid(int layer, int v) const {
  auto it = vrank.find(v);
  if (it == vrank.end()) throw input_error("unknown fiber vertex " + std::to_string(v));
  return layer * V + it->second;
}

VertexMap MappingTorus::fiber_inclusion(int layer) const {
  VertexMap vm;
  for (int v : vlist) vm.f[v] = vid(layer, v);
  return vm;
}

FilteredComplex MappingTorus::filtered(const FilteredComplex& x) const {
  if (x.K != fiber) throw input_error("filtration is over a different complex");
  for (int v : vlist)
    if (x.level(phi(v)) != x.level(v))
      throw input_error("vertex map does not preserve levels at " + std::to_string(v));
  std::map<int, int> levels;
  for (int v : vlist) {
    int lev = x.level(v) + 1;
    if (lev == x.n + 1) continue;
    for (int l = 0; l < m; ++l) levels[vid(l, v)] = lev;
  }
  FilteredComplex f;
  f.K = total;
  f.n = x.n + 1;
  f.levels = std::move(levels);
  f.subdivided_input = x.subdivided_input;
  f.validate();
  return f;
}

MappingTorus mapping_torus(const SimplicialComplex& k, const VertexMap& phi, int m) {
  if (m < 3) throw input_error("mapping torus needs at least 3 layers");
  if (k.ncells(0) == 0) throw input_error("mapping torus over an empty complex");
  std::set<int> seen;
  for (int v : k.vertices()) {
    int w = phi(v);
    if (k.index_of(0, {w}) < 0 || !seen.insert(w).second)
      throw input_error("vertex map is not an automorphism");
  }
  for (int d = 1; d <= k.dim(); ++d)
    for (const Simplex& s : k.cells(d)) {
      MappedCell mc = push_cell(phi, s);
      if (mc.sign == 0 || !k.contains(mc.image))
        throw input_error("vertex map is not an automorphism at " + simplex_str(s));
    }
  MappingTorus t;
  t.fiber = k;
  t.phi = phi;
  t.m = m;
  t.vlist = k.vertices();
  t.V = k.vertex_count();
  for (int r = 0; r < t.V; ++r) t.vrank[t.vlist[r]] = r;
  std::vector<Simplex> gens;
  for (const Simplex& s : k.maximal_cells()) {
    int d = simplex_dim(s);
    for (int layer = 0; layer < m; ++layer)
      for (int l = 0; l <= d; ++l) {
        std::vector<int> cell;
        for (int u = 0; u <= l; ++u) cell.push_back(t.vid(layer, s[u]));
        if (layer + 1 < m)
          for (int u = l; u <= d; ++u) cell.push_back(t.vid(layer + 1, s[u]));
        else
          for (int u = l; u <= d; ++u) cell.push_back(t.vid(0, phi(s[u])));
        gens.push_back(make_simplex(std::move(cell)));
      }
  }
  t.total = SimplicialComplex::close(gens);
  std::vector<Simplex> edges;
  for (int l = 0; l + 1 < m; ++l) edges.push_back({l, l + 1});
  edges.push_back({0, m - 1});
  t.circle = SimplicialComplex::close(edges);
  for (int l = 0; l < m; ++l)
    for (int v : t.vlist) t.proj.f[t.vid(l, v)] = l;
  return t;
}

MappingTorus product_with_circle(const SimplicialComplex& k, int m) {
  VertexMap id;
  for (int v : k.vertices()) id.f[v] = v;
  return mapping_torus(k, id, m);
}

Subcomplex RegularNeighborhood::piece(const Simplex& y_cell) const {
  return piece_flags(N.K, base_part, y_cell);
}

RegularNeighborhood regular_neighborhood(const FilteredComplex& x,
                                         const std::vector<int>& base_vertices) {
  x.validate();
  std::set<int> b(base_vertices.begin(), base_vertices.end());
  if (b.empty()) throw input_error("empty neighborhood base");
  for (int v : b)
    if (x.K.index_of(0, {v}) < 0)
      throw input_error("base vertex " + std::to_string(v) + " is not in the complex");
  Subcomplex ysub = full_subcomplex(x.K, base_vertices);
  Subdivision sd = barycentric_subdivision(x.K);
  int total = sd.sd.vertex_count();
  std::vector<Simplex> part(total);
  std::vector<char> in_y(total, 0);
  for (int v = 0; v < total; ++v) {
    const Simplex& s = sd.original_cell(v);
    Simplex p;
    for (int u : s)
      if (b.count(u)) p.push_back(u);
    in_y[v] = p.size() == s.size();
    part[v] = std::move(p);
  }
  int ydim = ysub.dim();
  Subcomplex nflags = Subcomplex::none(sd.sd);
  Subcomplex frflags = Subcomplex::none(sd.sd);
  Subcomplex baseflags = Subcomplex::none(sd.sd);
  std::vector<Subcomplex> jflags(ydim + 1, Subcomplex::none(sd.sd));
  for (int d = 0; d <= sd.sd.dim(); ++d)
    for (int i = 0; i < sd.sd.ncells(d); ++i) {
      const Simplex& c = sd.sd.cells(d)[i];
      if (part[c.front()].empty()) continue;
      nflags.set(d, i);
      bool meets = false;
      for (int v : c)
        if (in_y[v]) {
          meets = true;
          break;
        }
      if (!meets) frflags.set(d, i);
      if (in_y[c.back()]) baseflags.set(d, i);
      int fdim = static_cast<int>(part[c.back()].size()) - 1;
      for (int s2 = fdim; s2 <= ydim; ++s2) jflags[s2].set(d, i);
    }
  RegularNeighborhood rn;
  SimplicialComplex nk = nflags.extract(sd.sd);
  std::map<int, int> lev;
  for (int v : nk.vertices()) {
    int l = x.level(sd.original_cell(v));
    if (l != x.n) lev[v] = l;
  }
  rn.N.K = std::move(nk);
  rn.N.n = x.n;
  rn.N.levels = std::move(lev);
  rn.N.subdivided_input = x.subdivided_input;
  rn.N.validate();
  rn.frontier = restrict_flags(rn.N.K, sd.sd, frflags);
  rn.base = restrict_flags(rn.N.K, sd.sd, baseflags);
  for (const Subcomplex& jf : jflags) rn.J.push_back(restrict_flags(rn.N.K, sd.sd, jf));
  for (int v : rn.N.K.vertices()) {
    const Simplex& p = part[v];
    rn.retraction.f[v] =
        sd.vertex_id(static_cast<int>(p.size()) - 1,
                     x.K.index_of(static_cast<int>(p.size()) - 1, p));
    rn.carrier[v] = sd.original_cell(v);
    rn.base_part[v] = p;
  }
  rn.Y = ysub.extract(x.K);
  return rn;
}

Subcomplex DeletedNeighborhood::piece(const Simplex& y_cell) const {
  return piece_flags(D.K, base_part, y_cell);
}

DeletedNeighborhood deleted_neighborhood(const RegularNeighborhood& rn) {
  if (rn.frontier.empty()) throw input_error("neighborhood has no frontier");
  DeletedNeighborhood dn;
  dn.D = restrict_filtered(rn.N, rn.frontier, rn.N.n - 1, 1);
  for (const Subcomplex& j : rn.J)
    dn.J.push_back(restrict_flags(dn.D.K, rn.N.K, j.intersect(rn.frontier)));
  for (int v : dn.D.K.vertices()) dn.base_part[v] = rn.base_part.at(v);
  return dn;
}

FilteredComplex read_filtered(std::istream& is) {
  std::string line;
  int n = 0, lineno = 0;
  bool have_dim = false;
  std::vector<Simplex> gens;
  std::map<int, int> level;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    const std::string where = " at line " + std::to_string(lineno);
    if (tok == "dim") {
      if (have_dim) throw input_error("repeated dim header" + where);
      if (!(ls >> n)) throw input_error("malformed dim header" + where);
      have_dim = true;
    } else if (tok == "s") {
      if (!have_dim) throw input_error("simplex before dim header" + where);
      std::vector<int> vs;
      int v;
      while (ls >> v) vs.push_back(v);
      if (!ls.eof() || vs.empty()) throw input_error("malformed simplex line" + where);
      gens.push_back(std::move(vs));
    } else if (tok == "stratum") {
      if (!have_dim) throw input_error("stratum before dim header" + where);
      int i;
      if (!(ls >> i)) throw input_error("malformed stratum index" + where);
      ls >> std::ws;
      if (ls.get() != ':') throw input_error("missing ':' in stratum line" + where);
      if (i < 0 || i > n) throw input_error("stratum index outside [0, dim]" + where);
      int v;
      std::vector<int> vs;
      while (ls >> v) vs.push_back(v);
      if (!ls.eof()) throw input_error("malformed stratum line" + where);
      for (int u : vs) {
        auto it = level.find(u);
        if (it == level.end() || it->second > i) level[u] = i;
      }
    } else {
      throw input_error("unrecognized line" + where);
    }
  }
  if (!have_dim) throw input_error("missing dim header");
  SimplicialComplex k = SimplicialComplex::close(gens);
  for (const auto& [v, lev] : level)
    if (k.index_of(0, {v}) < 0)
      throw input_error("stratum vertex " + std::to_string(v) + " is not in the complex");
  return make_filtered(k, n, level);
}

void write_filtered(std::ostream& os, const FilteredComplex& x) {
  os << "dim " << x.n << "\n";
  for (const Simplex& s : x.K.maximal_cells()) {
    os << "s";
    for (int v : s) os << ' ' << v;
    os << "\n";
  }
  for (int i = 0; i < x.n; ++i) {
    std::vector<int> vs = x.skeleton_vertices(i);
    if (vs.empty()) continue;
    os << "stratum " << i << ":";
    for (int v : vs) os << ' ' << v;
    os << "\n";
  }
}

FilteredComplex load_filtered(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw input_error("cannot open " + path);
  return read_filtered(is);
}

void save_filtered(const std::string& path, const FilteredComplex& x) {
  std::ofstream os(path);
  if (!os) throw input_error("cannot open " + path + " for writing");
  write_filtered(os, x);
  if (!os) throw input_error("failed writing " + path);
}

}  // namespace ihtk
