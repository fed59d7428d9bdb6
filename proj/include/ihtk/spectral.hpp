#pragma once

#include <memory>
#include <vector>

#include "ihtk/chain.hpp"
#include "ihtk/localsys.hpp"
#include "ihtk/perverse.hpp"
#include "ihtk/simplicial.hpp"

namespace ihtk {

/// Increasing exhaustive filtration of a chain complex over a field by
/// boundary-stable subspaces.  span[s][d] holds ambient-coordinate columns
/// spanning the stage-s subspace in degree d; stage steps()-1 must span the
/// whole complex.  Only field coefficients are supported: the page
/// extraction below is linear algebra over the coefficient field.
struct FilteredChainComplex {
  ChainComplex c;
  std::vector<std::vector<RatMat>> span;

  int steps() const { return static_cast<int>(span.size()); }
  /// input_error on a non-field ring, shape mismatch, a stage that is not
  /// contained in the next, a stage not closed under the boundary, or a top
  /// stage that fails to span the complex.
  void validate() const;
};

/// First-quadrant homology spectral sequence of a filtered complex over a
/// field.  Pages are indexed r = 1..rmax with E^1_{p,q} = H_{p+q} of the
/// stage quotient F_p/F_{p-1}; the page data lives on the rectangle
/// p in [0, steps), q in [0, top].  For each page cell the basis classes
/// are stored through explicit representative chains in ambient
/// coordinates, together with the subspace they are taken modulo, so that
/// class coordinates of further chains can be recovered exactly.
struct SpectralSequence {
  Ring ring = Ring::Q();
  int steps = 0;
  int top = 0;
  int rmax = 1;

  /// dim[r][p][q], rep[r][p][q], den[r][p][q], d[r][p][q]; index r starts
  /// at 1 (index 0 is kept empty).  rep columns are representative chains,
  /// den columns span the subspace the representatives are independent
  /// modulo, and d is the page differential into (p-r, q+r-1) written in
  /// the stored bases.
  std::vector<std::vector<std::vector<int>>> dim;
  std::vector<std::vector<std::vector<RatMat>>> rep;
  std::vector<std::vector<std::vector<RatMat>>> den;
  std::vector<std::vector<std::vector<RatMat>>> d;

  /// abutment[i][p]: dimension of the p-th graded piece of H_i of the total
  /// complex under the induced filtration; row sums are the betti numbers.
  std::vector<std::vector<int>> abutment;

  int dim_at(int r, int p, int q) const;
  const RatMat& d_at(int r, int p, int q) const;
};

/// Extract every page of the spectral sequence of a filtration, through
/// page rmax = max(steps - 1, top) + 1.  The construction verifies its own
/// page laws and throws verify_error if any fails: composable page
/// differentials compose to zero, the next page has the homology dimensions
/// of the current one, cells with negative complementary degree vanish, and
/// the final page matches the graded dimensions of the filtered homology.
SpectralSequence compute_pages(const FilteredChainComplex& fc);

/// Class coordinates of an ambient chain in the stored basis of page cell
/// (r, p, q): the chain must be a page cycle there (it lies in stage p and
/// its boundary in stage p-r); verify_error otherwise.
RatMat page_coords(const SpectralSequence& ss, const FieldOps& f, int r,
                   int p, int q, const RatMat& chains);

/// Intersection chains of a derived neighborhood filtered by the retraction
/// preimages J^s of the core skeleta.
struct SkeletalFiltration {
  Perversity p;
  Ring ring = Ring::Q();
  IntersectionComplex ic;
  FilteredChainComplex fc;  // spans: intersection chains supported on J^s
};

/// Skeletal filtration of the neighborhood's intersection chains over a
/// field.  Validates that the stored retraction is a simplicial self-map
/// fixing the core pointwise (input_error otherwise) and that the span
/// tower passes FilteredChainComplex::validate.
SkeletalFiltration skeletal_filtration(const RegularNeighborhood& rn,
                                       const Perversity& pv,
                                       const Ring& field);

/// Same filtration for the deleted neighborhood (the frontier, one formal
/// dimension down, with the perversity restricted to match).
SkeletalFiltration skeletal_filtration_deleted(const RegularNeighborhood& rn,
                                               const DeletedNeighborhood& dn,
                                               const Perversity& pv,
                                               const Ring& field);

/// Independent recomputation of the first-page differential as the
/// connecting map of the triple (J^p, J^{p-1}, J^{p-2}): lift a class of
/// H(F_p/F_{p-1}), take its boundary, and read the class in H of the
/// previous stage quotient.  Both sides are written in the same bases, so
/// agreement is exact matrix equality including signs.
struct D1Comparison {
  struct Cell {
    int p = 0, q = 0;
    RatMat d1, conn;
    bool equal = false;
  };
  std::vector<Cell> cells;
  bool ok = true;
};
D1Comparison d1_cross_check(const SkeletalFiltration& sf,
                            const SpectralSequence& ss);

/// Dimensionwise comparison of the second page with the cellular homology
/// of the base in the graded stalk system: got[p][q] = dim E^2_{p,q},
/// want[p][q] = dim H_p of the stalk-q twisted cellular complex.  The
/// system must share the coefficient field (input_error otherwise).
struct E2Comparison {
  std::vector<std::vector<int>> got, want;
  bool ok = true;
};
E2Comparison e2_vs_twisted(const SpectralSequence& ss,
                           const StalkSystem& sys);

/// Per-cell direct sum decomposition of the first page: for each p-cell y
/// of the core, the piece over y contributes its relative intersection
/// homology against its part over the (p-1)-skeleton, and the dimensions
/// must add up to dim E^1_{p,q}.
struct E1Decomposition {
  struct Row {
    int p = 0, q = 0;
    int lhs = 0;                //  dim E^1_{p,q}
    std::vector<int> pieces;    //  one relative dimension per p-cell of Y
    bool equal = false;
  };
  std::vector<Row> rows;
  bool ok = true;
};
E1Decomposition e1_decomposition(const RegularNeighborhood& rn,
                                 const SkeletalFiltration& sf,
                                 const SpectralSequence& ss);

/// The inclusion of the deleted neighborhood induces a map of spectral
/// sequences.  maps holds the page maps in the stored page bases; at the
/// second page the map must be invertible for q below the cone-formula
/// cutoff (codim - 1 - p(codim)) and the zero matrix at and above it,
/// mirroring the stalk comparison map of the two coefficient systems.
/// Commutation with the page differentials is verified internally
/// (verify_error on failure).
struct SsComparison {
  SkeletalFiltration del, full;
  SpectralSequence sdel, sfull;

  struct PageMap {
    int r = 0, p = 0, q = 0;
    RatMat m;
  };
  std::vector<PageMap> maps;

  int cutoff = 0;
  struct Verdict {
    int p = 0, q = 0;
    bool expect_zero = false;
    bool ok = false;
  };
  std::vector<Verdict> verdicts;
  bool ok = true;

  const RatMat& map_at(int r, int p, int q) const;
};
SsComparison ss_map_deleted_to_full(const RegularNeighborhood& rn,
                                    const Perversity& pv, const Ring& field);

}  // namespace ihtk
