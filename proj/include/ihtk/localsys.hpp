#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ihtk/perverse.hpp"
#include "ihtk/simplicial.hpp"

namespace ihtk {

/// Local coefficient system on the top stratum, presented by invertible
/// integer matrices on oriented edges of the dual carrier: the full
/// subcomplex of the barycentric subdivision spanned by barycenters of
/// simplices whose interiors lie in the top stratum.  Unlisted edges carry
/// the identity; the reverse orientation carries the inverse.
struct LocalSystem {
  SimplicialComplex carrier;
  Ring ring = Ring::Z();
  int stalk_rank = 1;
  std::map<std::pair<int, int>, IntMat> rho;

  /// Transport along the oriented carrier edge u -> v (identity at u == v).
  IntMat transport(int u, int v) const;
};

/// Dual carrier of the top stratum; optionally hands back the subdivision
/// used for barycenter ids.
SimplicialComplex top_stratum_carrier(const FilteredComplex& f,
                                      Subdivision* sd = nullptr);

/// All edges on the carrier, shapes square of the stalk rank, invertibility
/// over the ring, mutual inverses across orientations, and flatness: the
/// cyclic product around every carrier 2-simplex is the identity.  The
/// first failing 2-simplex is named in the error.
void validate_local_system(const LocalSystem& sys);

LocalSystem trivial_local_system(const FilteredComplex& f, const Ring& ring,
                                 int rank);

/// Text format: `rank r`, then `edge u v : r*r ints (row-major)` per
/// listed edge; unlisted edges default to the identity.
LocalSystem read_local_system(std::istream& is,
                              const SimplicialComplex& carrier,
                              const Ring& ring);
void write_local_system(std::ostream& os, const LocalSystem& sys);
LocalSystem load_local_system(const std::string& path,
                              const FilteredComplex& f, const Ring& ring);
void save_local_system(const std::string& path, const LocalSystem& sys);

/// Every facet of every allowable simplex has its barycenter in the top
/// stratum, so one-edge transport in the carrier is total on intersection
/// chains.  Holds whenever the codimension-one skeleton is empty.
bool facet_interior_check(const FilteredComplex& f, const Perversity& p);

/// Allowable chains with coefficients in the system, boundary twisted by
/// transport from each simplex's barycenter to each facet's barycenter,
/// restricted to chains whose boundary stays allowable.
ChainComplex twisted_IC(const FilteredComplex& f, const Perversity& p,
                        const LocalSystem& sys);
HomologyResult twisted_IH(const FilteredComplex& f, const Perversity& p,
                          const LocalSystem& sys);

/// Graded system of fiber homology groups over a base complex: transport
/// matrices per oriented base edge and per degree, with the groups of the
/// fiber recorded once.  Unlisted edges act by the identity.
struct StalkSystem {
  SimplicialComplex base;
  Ring ring = Ring::Z();
  HomologyResult stalk;
  std::map<std::pair<int, int>, std::vector<IntMat>> rho;

  int top_degree() const { return static_cast<int>(stalk.betti.size()) - 1; }
  int rank(int q) const;
  IntMat transport(int u, int v, int q) const;
  /// Composite transport around a closed vertex path, one matrix per
  /// degree; for a circle base this is the generator monodromy.
  std::vector<IntMat> loop_monodromy(const std::vector<int>& loop) const;
};

/// Invertibility over the ring plus flatness around base 2-simplices.
void validate_stalk_system(const StalkSystem& sys);

StalkSystem trivial_stalk_system(const SimplicialComplex& base,
                                 const Ring& ring,
                                 const HomologyResult& stalk);

/// System on the circle through the given vertex loop whose generator acts
/// by the given matrices (one per degree of the stalk); the action sits on
/// the closing edge, all other edges act by the identity.
StalkSystem stalk_system_from_gluing(const HomologyResult& stalk,
                                     const std::vector<IntMat>& phi,
                                     const std::vector<int>& loop,
                                     const Ring& ring);

/// Cellular chains of the base with twisted coefficients in degree q: one
/// free rank-r summand per simplex, boundary = simplicial boundary with
/// transport from the leading (least) vertex of the simplex to the leading
/// vertex of each facet.  A flatness failure surfaces as a boundary that
/// does not square to zero.
ChainComplex twisted_cellular_complex(const SimplicialComplex& b,
                                      const StalkSystem& sys, int q);

/// Degreewise map from a system of fiber groups to the system of groups of
/// the cone on the same fiber: identity wherever the cone group survives,
/// zero where it vanishes; checked to commute with the edge transports.
std::vector<IntMat> stalk_comparison_map(const StalkSystem& link,
                                         const StalkSystem& cone);

}  // namespace ihtk
