#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ihtk/echelon.hpp"
#include "ihtk/smat.hpp"
#include "ihtk/snf.hpp"

namespace ihtk {

/// True when every entry vanishes over the ring (mod p for prime fields).
bool zero_over(const IntMat& m, const Ring& ring);

/// Bounded chain complex of finitely generated free modules.  bd[d] maps
/// degree d to degree d-1 and has shape dims[d-1] x dims[d]; bd[0] has zero
/// rows.  Entries are integers; over F_p they are read mod p.
struct ChainComplex {
  Ring ring = Ring::Z();
  std::vector<int> dims;
  std::vector<IntMat> bd;

  int top() const { return static_cast<int>(dims.size()) - 1; }
  int dim(int d) const {
    return (d < 0 || d > top()) ? 0 : dims[d];
  }
  IntMat boundary(int d) const;  // shape-correct zero matrix outside range
  void validate() const;         // shapes and dd = 0 over the ring
};

/// Betti numbers and torsion per degree.  Torsion orders are > 1 and listed
/// in divisibility order; they are only produced over Z.
struct HomologyResult {
  Ring ring = Ring::Z();
  std::vector<int> betti;
  std::vector<std::vector<Int>> torsion;

  int top() const { return static_cast<int>(betti.size()) - 1; }
  bool operator==(const HomologyResult& o) const {
    return ring == o.ring && betti == o.betti && torsion == o.torsion;
  }
  bool operator!=(const HomologyResult& o) const { return !(*this == o); }
  std::string to_string() const;
};

/// Homology of the complex over its ring, via diagonal Smith data of the
/// boundary matrices.
HomologyResult homology(const ChainComplex& c);

/// Same computation forced through the dense textbook Smith path; used as an
/// independent recomputation by verification modes.
HomologyResult homology_textbook(const ChainComplex& c);

/// Finitely generated abelian group: Z^betti + sum Z/orders[i].
struct GroupDesc {
  int betti = 0;
  std::vector<Int> orders;  // each > 1, divisibility order
  int ngens() const { return betti + static_cast<int>(orders.size()); }
  bool operator==(const GroupDesc& o) const {
    return betti == o.betti && orders == o.orders;
  }
};

/// Canonical integral homology basis of a complex.  Generator order per
/// degree: free generators first, then torsion generators.
class HomologyBasisZ {
 public:
  explicit HomologyBasisZ(const ChainComplex& c);

  const ChainComplex& complex() const { return *c_; }
  const GroupDesc& group(int d) const;
  /// Representative chains, one column per generator (free then torsion).
  const IntMat& reps(int d) const;
  /// Class coordinates of a cycle; torsion coordinates canonical in
  /// [0, order).  Throws verify_error if the chain is not a cycle.
  std::vector<Int> coords(int d, const SCol<Int>& cycle) const;

 private:
  struct Deg {
    GroupDesc g;
    IntMat kernel;  // dims[d] x k
    IntMat u;       // k x k: change of basis, y = u x
    std::vector<Int> diag;
    int rho = 0;                     // rank of the boundary image
    std::vector<int> gen_rows;       // rows of y per generator
    IntMat reps;
    std::shared_ptr<ZEchelon> kech;  // solver for kernel coordinates
  };
  const ChainComplex* c_;
  std::vector<Deg> deg_;
  GroupDesc zero_{};
  IntMat empty_{};
};

/// Canonical homology basis over a field.
class HomologyBasisF {
 public:
  HomologyBasisF(const ChainComplex& c, FieldOps f);

  const ChainComplex& complex() const { return *c_; }
  const FieldOps& field() const { return f_; }
  int betti(int d) const;
  /// Representative cycles, one column per basis class.
  const RatMat& reps(int d) const;
  /// Class coordinates of a cycle, length betti(d).
  std::vector<Rat> coords(int d, const SCol<Rat>& cycle) const;

 private:
  struct Deg {
    RatMat kernel;
    std::shared_ptr<FEchelon> kech;   // coordinates in the cycle space
    std::shared_ptr<FEchelon> bech;   // boundaries then representatives
    std::vector<int> rep_ids;         // insertion ids of representatives
    RatMat reps;
    int betti = 0;
  };
  const ChainComplex* c_;
  FieldOps f_;
  std::vector<Deg> deg_;
  RatMat empty_{};
};

/// Degreewise map of chain complexes; m[d] has shape dst.dims[d] x
/// src.dims[d].  validate() checks commutation with the boundaries over the
/// destination ring.
struct ChainMap {
  const ChainComplex* src = nullptr;
  const ChainComplex* dst = nullptr;
  std::vector<IntMat> m;

  IntMat mat(int d) const;  // shape-correct zero matrix outside range
  void validate() const;
};

/// Map between graded groups in canonical coordinates: one matrix per
/// degree, columns indexed by source generators.
struct GradedClassMap {
  std::vector<GroupDesc> src, dst;
  std::vector<IntMat> m;
};

/// Induced map on integral homology in the canonical bases.
GradedClassMap induced_map(const ChainMap& f, const HomologyBasisZ& bs,
                           const HomologyBasisZ& bd);

/// Induced map on field homology: matrix per degree in the canonical bases.
std::vector<RatMat> induced_map_f(const ChainMap& f, const HomologyBasisF& bs,
                                  const HomologyBasisF& bd);

/// Chain complex carried by independent columns inside an ambient complex.
/// basis[d] holds the chains (ambient coordinates); cc is the complex in
/// basis coordinates.
struct SpanComplex {
  ChainComplex cc;
  std::vector<IntMat> basis;
};

/// Restrict to a boundary-stable span, over Z (span columns must be
/// independent; the span lattice must be saturated for meaningful torsion).
SpanComplex restrict_to_span_z(const ChainComplex& c,
                               const std::vector<IntMat>& span);

/// Quotient of a complex by a boundary-stable saturated span, over Z.
struct QuotientZ {
  ChainComplex cc;
  std::vector<IntMat> lift;  // dims[d] x q: chain lift of each quotient gen
  std::vector<IntMat> proj;  // q x dims[d]: quotient coordinates
  SCol<Int> project(int d, const SCol<Int>& ambient) const;
};
QuotientZ quotient_by_span_z(const ChainComplex& c,
                             const std::vector<IntMat>& span);

/// Field versions of the span restriction and quotient.  The stored model
/// complexes clear denominators by one scalar per degree; this leaves every
/// kernel, image and homology basis unchanged over the field, but the model
/// boundary matrices must not be compared across objects.
struct SpanComplexF {
  ChainComplex cc;            // scaled integral model over the field
  std::vector<RatMat> basis;  // ambient coordinates of the span columns
  std::vector<RatMat> bd;     // exact boundary in span coordinates
};
SpanComplexF restrict_to_span_f(const ChainComplex& c, FieldOps f,
                                const std::vector<RatMat>& span);

struct QuotientF {
  FieldOps f;
  std::vector<std::vector<int>> free_rows;  // ambient rows representing gens
  std::vector<std::shared_ptr<FEchelon>> span_ech;
  std::vector<int> qdims;
  ChainComplex cc;  // scaled integral model over the field
  SCol<Rat> project(int d, const SCol<Rat>& ambient) const;
  SCol<Rat> lift(int d, const SCol<Rat>& qvec) const;
};
QuotientF quotient_by_span_f(const ChainComplex& c, FieldOps f,
                             const std::vector<RatMat>& span);

/// Connecting map of the pair (C, A): H_d(C/A) -> H_{d-1}(A), computed by
/// lifting a relative cycle and taking its boundary.  Over Z.
struct ConnectingZ {
  std::vector<IntMat> m;  // per degree d: map H_d(C/A) -> H_{d-1}(A)
};
ConnectingZ connecting_pair_z(const ChainComplex& c,
                              const std::vector<IntMat>& span_a,
                              const QuotientZ& q, const HomologyBasisZ& hq,
                              const SpanComplex& a, const HomologyBasisZ& ha);

/// Field connecting map of the pair (C, A).
struct ConnectingF {
  std::vector<RatMat> m;
};
ConnectingF connecting_pair_f(const ChainComplex& c, FieldOps f,
                              const QuotientF& q, const HomologyBasisF& hq,
                              const SpanComplexF& a, const HomologyBasisF& ha);

/// One node of an exactness check: composable maps f then g with the listed
/// groups.  check_exact_z verifies im(f) = ker(g) as subgroups (lattice
/// equality after lifting torsion relations); check_exact_f does the field
/// rank argument.  Both also require g f = 0.
struct ExactNodeZ {
  GroupDesc gx, gy, gz;
  IntMat f;  // gy.ngens x gx.ngens
  IntMat g;  // gz.ngens x gy.ngens
};
void check_exact_z(const std::vector<ExactNodeZ>& nodes);  // throws verify_error

struct ExactNodeF {
  int dx = 0, dy = 0, dz = 0;
  RatMat f, g;
};
void check_exact_f(const FieldOps& fld, const std::vector<ExactNodeF>& nodes);

/// Class-map composition with canonical torsion reduction.
IntMat compose_class_maps(const GroupDesc& gz, const IntMat& g,
                          const IntMat& f);

/// Canonicalize a class matrix: torsion rows reduced into [0, order).
void canonicalize_class_matrix(const GroupDesc& dst, IntMat& m);

/// Long exact homology sequence of a boundary-stable pair (C, A), with all
/// maps as class matrices in the canonical bases.  Basis construction is
/// deterministic, so these matrices are directly comparable with any other
/// computation over the same complexes.
struct LesZ {
  std::vector<GroupDesc> ga, gc, gq;  // per degree: sub, total, relative
  std::vector<IntMat> i, j, d;        // d[k]: H_k(rel) -> H_{k-1}(sub)
  std::vector<ExactNodeZ> nodes() const;
};
LesZ les_pair_z(const ChainComplex& c, const std::vector<IntMat>& span_a);

struct LesF {
  std::vector<int> ba, bc, bq;
  std::vector<RatMat> i, j, d;
  std::vector<ExactNodeF> nodes() const;
};
LesF les_pair_f(const ChainComplex& c, FieldOps f,
                const std::vector<RatMat>& span_a);

/// Saturated span of A/B inside the quotient complex C/B, for B ⊆ A.
std::vector<IntMat> relative_span_z(const ChainComplex& c,
                                    const std::vector<IntMat>& span_a,
                                    const QuotientZ& qb);

/// Mayer-Vietoris exactness data for C = U + V with W = U ∩ V, all three
/// given as degreewise spans (unit subcomplex columns in practice).  Middle
/// groups are degreewise direct sums H(U) ⊕ H(V) with generators ordered
/// free-then-torsion; at most one summand may carry torsion per degree.
struct MvZ {
  std::vector<GroupDesc> gw, gm, gx;
  std::vector<IntMat> f, g, d;
  std::vector<ExactNodeZ> nodes() const;
};
MvZ mayer_vietoris_z(const ChainComplex& c, const std::vector<IntMat>& span_u,
                     const std::vector<IntMat>& span_v,
                     const std::vector<IntMat>& span_w);

}  // namespace ihtk
