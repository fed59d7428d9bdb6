#pragma once

// Finite simplicial complexes with a deterministic cell order, plus the PL
// constructions used downstream: barycentric subdivision, stars and links,
// derived neighborhoods with their skeletal filtrations, cones, cylinders,
// prisms and mapping tori.  Vertex ids are arbitrary ints; a cell is a
// strictly increasing id tuple, and cells are ordered lexicographically
// within each dimension so every derived matrix is reproducible.

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ihtk/chain.hpp"
#include "ihtk/smat.hpp"

namespace ihtk {

using Simplex = std::vector<int>;

inline int simplex_dim(const Simplex& s) { return static_cast<int>(s.size()) - 1; }
std::string simplex_str(const Simplex& s);
Simplex make_simplex(std::vector<int> verts);  // sorts; rejects duplicate ids

class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  /// Builds from an already face-closed family; validates the closure.
  explicit SimplicialComplex(std::vector<std::vector<Simplex>> cells);
  /// Smallest complex containing the generators.
  static SimplicialComplex close(const std::vector<Simplex>& generators);

  int dim() const { return static_cast<int>(cells_.size()) - 1; }
  int ncells(int d) const;
  const std::vector<Simplex>& cells(int d) const;
  int index_of(int d, const Simplex& s) const;  // -1 when absent
  bool contains(const Simplex& s) const;
  const std::vector<int>& vertices() const { return verts_; }  // sorted ids
  int vertex_count() const { return static_cast<int>(verts_.size()); }
  std::vector<int> f_vector() const;
  long long euler() const;
  std::vector<Simplex> maximal_cells() const;

  /// Boundary of degree d with facet signs (-1)^j; shape ncells(d-1) x ncells(d).
  IntMat boundary_matrix(int d) const;
  ChainComplex chain_complex(const Ring& ring) const;

  bool operator==(const SimplicialComplex& o) const { return cells_ == o.cells_; }
  bool operator!=(const SimplicialComplex& o) const { return !(*this == o); }

 private:
  std::vector<std::vector<Simplex>> cells_;      // cells_[d] lex sorted
  std::vector<std::map<Simplex, int>> index_;
  std::vector<int> verts_;
  void build_index();
};

/// Member flags over a parent complex, one bit per cell.  The parent is
/// passed to each operation rather than stored, so handles copy freely.
struct Subcomplex {
  std::vector<std::vector<char>> flags;

  static Subcomplex none(const SimplicialComplex& k);
  static Subcomplex whole(const SimplicialComplex& k);

  bool has(int d, int i) const;
  void set(int d, int i);
  /// Flags the cell and all of its faces.
  void add_closed(const SimplicialComplex& k, const Simplex& s);
  int count(int d) const;
  long long total() const;
  int dim() const;  // largest flagged dimension, -1 when empty
  bool empty() const;
  bool closed(const SimplicialComplex& k) const;  // face closure holds
  bool full(const SimplicialComplex& k) const;    // spans all cells on its vertices
  std::vector<int> vertex_list(const SimplicialComplex& k) const;
  /// Standard-basis columns of the flagged cells, one matrix per degree.
  std::vector<IntMat> span(const SimplicialComplex& k) const;
  SimplicialComplex extract(const SimplicialComplex& k) const;
  bool subset_of(const Subcomplex& o) const;
  Subcomplex intersect(const Subcomplex& o) const;
  Subcomplex unite(const Subcomplex& o) const;
  bool operator==(const Subcomplex& o) const { return flags == o.flags; }
};

/// Full subcomplex spanned by the given vertex ids.
Subcomplex full_subcomplex(const SimplicialComplex& k, const std::vector<int>& verts);

/// Closed star of a (closed) subcomplex and its link: the star collects all
/// faces of cells sharing a vertex with a, the link keeps the star cells
/// avoiding a's vertices.
std::pair<Subcomplex, Subcomplex> star_link(const SimplicialComplex& k, const Subcomplex& a);

struct VertexMap {
  std::map<int, int> f;
  int operator()(int v) const;  // input_error when undefined
  bool defined(int v) const;
};

/// Image cell with orientation sign; sign 0 marks a degenerate image.
struct MappedCell {
  Simplex image;
  int sign = 0;
};
MappedCell push_cell(const VertexMap& vm, const Simplex& s);
bool is_simplicial(const SimplicialComplex& k, const SimplicialComplex& l, const VertexMap& vm);
std::vector<IntMat> chain_map_matrices(const SimplicialComplex& k, const SimplicialComplex& l,
                                       const VertexMap& vm);
ChainMap chain_map(const ChainComplex& cs, const SimplicialComplex& k, const ChainComplex& cd,
                   const SimplicialComplex& l, const VertexMap& vm);

/// Barycentric subdivision.  New vertex ids are dimension-major: the
/// barycenter of the i-th d-cell gets id offset[d] + i, so the members of a
/// face chain are increasing and each sd cell lists its chain bottom-up.
struct Subdivision {
  SimplicialComplex base;
  SimplicialComplex sd;
  std::vector<int> offset;

  int vertex_id(int d, int i) const { return offset[d] + i; }
  std::pair<int, int> cell_of(int v) const;
  const Simplex& original_cell(int v) const;
  /// sd a as a subcomplex of sd: a chain lies in it iff its top cell is in a.
  Subcomplex image(const Subcomplex& a) const;
};
Subdivision barycentric_subdivision(const SimplicialComplex& k);

inline constexpr int kEmptyFaceDim = std::numeric_limits<int>::min();

/// Complex with nested full skeleta of a formal dimension n, encoded by
/// vertex levels: skeleton i is the full subcomplex on vertices of level
/// <= i.  Absent vertices default to level n.
struct FilteredComplex {
  SimplicialComplex K;
  int n = 0;
  std::map<int, int> levels;
  bool subdivided_input = false;

  int level(int v) const;
  int level(const Simplex& s) const;  // max over the vertices
  /// Dimension of s ∩ skeleton(i); kEmptyFaceDim when the face is empty.
  int skeleton_face_dim(const Simplex& s, int i) const;
  bool skeleton_nonempty(int i) const;
  std::vector<int> skeleton_vertices(int i) const;
  Subcomplex skeleton(int i) const;
  int bottom() const;  // smallest vertex level
  std::vector<int> bottom_stratum_vertices() const;
  bool plain() const;  // every vertex at level n
  bool codim1_empty() const;  // no vertex at level n-1
  void validate() const;
};

FilteredComplex trivial_filtration(const SimplicialComplex& k, int n = -1);
FilteredComplex make_filtered(const SimplicialComplex& k, int n, const std::map<int, int>& levels);
/// From explicit skeleta; applies one barycentric subdivision when a
/// skeleton fails to be full and records that in subdivided_input.
FilteredComplex make_filtered(const SimplicialComplex& k, int n,
                              const std::vector<Subcomplex>& skeleta);
FilteredComplex subdivide_filtered(const FilteredComplex& x, Subdivision* out = nullptr);
/// Extraction of a closed subcomplex with inherited levels, optionally with
/// a new formal dimension and levels shifted down.
FilteredComplex restrict_filtered(const FilteredComplex& x, const Subcomplex& a,
                                  int formal_dim = -1, int level_shift = 0);

struct Cone {
  FilteredComplex C;
  int apex = -1;
};
/// Closed cone: a fresh apex (largest id + 1) joined to every cell.  The
/// apex is the new bottom skeleton; old levels shift up by one.
Cone cone(const FilteredComplex& x);

struct SignedSimplex {
  int sign = 0;
  Simplex cell;
};
/// Stacked decomposition of the prism over an abstract i-simplex with
/// bottom ids 0..i and top ids i+1..2i+1: piece l is [v_0..v_l, w_l..w_i]
/// with sign (-1)^l.
std::vector<SignedSimplex> prism_decomposition(int i);

/// K x I triangulated by stacked prisms; layer-major vertex ids
/// layer * V + rank(v).
struct Cylinder {
  SimplicialComplex base;
  SimplicialComplex C;
  int V = 0;
  std::vector<int> vlist;
  std::map<int, int> vrank;
  VertexMap end0, end1, proj;

  int vid(int layer, int v) const;
  /// Prism chain map C_d(base) -> C_{d+1}(C); satisfies
  /// bd F + F bd = end1 - end0 degreewise.
  IntMat prism_matrix(int d) const;
  /// Product filtration: levels shift up by one, formal dimension n + 1.
  FilteredComplex filtered(const FilteredComplex& x) const;
};
Cylinder cylinder(const SimplicialComplex& k);

/// m layers of stacked prisms over K, the last glued back through phi.
/// Vertex ids are layer-major; the projection to the m-gon circle is
/// simplicial, and phi = identity reproduces the plain product.
struct MappingTorus {
  SimplicialComplex fiber;
  SimplicialComplex total;
  SimplicialComplex circle;
  VertexMap phi;
  int m = 0, V = 0;
  std::vector<int> vlist;
  std::map<int, int> vrank;
  VertexMap proj;

  int vid(int layer, int v) const;
  VertexMap fiber_inclusion(int layer) const;
  /// Product filtration: levels shift up by one; phi must preserve levels.
  FilteredComplex filtered(const FilteredComplex& x) const;
};
MappingTorus mapping_torus(const SimplicialComplex& k, const VertexMap& phi, int m);
MappingTorus product_with_circle(const SimplicialComplex& k, int m);

/// Closed derived neighborhood N of the full subcomplex Y spanned by the
/// given vertices, taken in the first barycentric subdivision of the
/// ambient complex: its cells are the chains whose smallest member meets Y.
/// The frontier collects the chains avoiding Y entirely; the retraction
/// sends the barycenter of s to the barycenter of s ∩ Y and is the identity
/// on the subdivided Y.  J[s] is the retraction preimage of the subdivided
/// s-skeleton of Y: the chains whose top cell meets Y in dimension <= s.
struct RegularNeighborhood {
  FilteredComplex N;
  Subcomplex frontier;
  Subcomplex base;
  VertexMap retraction;
  std::vector<Subcomplex> J;
  SimplicialComplex Y;
  std::map<int, Simplex> carrier;    // N vertex -> ambient cell
  std::map<int, Simplex> base_part;  // N vertex -> carrier ∩ Y, never empty

  int base_dim() const { return static_cast<int>(J.size()) - 1; }
  /// Cells whose top member meets Y inside the given cell of Y.
  Subcomplex piece(const Simplex& y_cell) const;
};
RegularNeighborhood regular_neighborhood(const FilteredComplex& x,
                                         const std::vector<int>& base_vertices);

/// The frontier as a filtered complex of formal dimension n - 1 with the
/// restricted skeletal filtration.
struct DeletedNeighborhood {
  FilteredComplex D;
  std::vector<Subcomplex> J;
  std::map<int, Simplex> base_part;

  Subcomplex piece(const Simplex& y_cell) const;
};
DeletedNeighborhood deleted_neighborhood(const RegularNeighborhood& rn);

// Text interchange: header line "dim n", one line "s v0 v1 ... vk" per
// maximal cell, cumulative vertex lines "stratum i: v..." for each
// nonempty proper skeleton.  Writing then reading reproduces the complex
// exactly, and rewriting is byte-identical.
FilteredComplex read_filtered(std::istream& is);
void write_filtered(std::ostream& os, const FilteredComplex& x);
FilteredComplex load_filtered(const std::string& path);
void save_filtered(const std::string& path, const FilteredComplex& x);

}  // namespace ihtk
