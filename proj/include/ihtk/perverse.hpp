#pragma once

#include <string>
#include <vector>

#include "ihtk/chain.hpp"
#include "ihtk/simplicial.hpp"

namespace ihtk {

/// Perversity function p(k), k = 0..n: p(0)=p(1)=p(2)=0 and
/// p(k) <= p(k+1) <= p(k)+1.  Steeper growth is rejected at validation.
struct Perversity {
  int n = 0;
  std::vector<int> p;  // size n+1

  int operator()(int k) const { return p.at(k); }
  std::string str() const;

  /// Same function on a smaller formal dimension (for links and subspaces).
  Perversity restricted(int m) const;

  /// Pointwise comparison on the shared range.
  bool leq(const Perversity& o) const;

  bool operator==(const Perversity& o) const { return n == o.n && p == o.p; }
  bool operator!=(const Perversity& o) const { return !(*this == o); }
};

/// Check the growth constraints; errors name the first failing k.
Perversity validate_perversity(int n, const std::vector<int>& values);

/// Aliases: zero, lower-middle, upper-middle, top.
Perversity named_perversity(const std::string& name, int n);

/// Alias or comma list "0,0,0,1" with exactly n+1 values.
Perversity parse_perversity(const std::string& text, int n);

/// Every valid perversity for formal dimension n, lexicographic order.
std::vector<Perversity> all_perversities(int n);

/// Raw allowability predicate per simplex; no closure property is implied.
struct AllowabilityTable {
  std::vector<std::vector<char>> a;  // [d][cell index]

  bool get(int d, int i) const {
    return d >= 0 && d < static_cast<int>(a.size()) && a[d][i] != 0;
  }
  int count(int d) const;
  std::vector<int> indices(int d) const;  // allowable cell indices, ascending
};

/// dim(s ∩ X_{n-k}) <= dim(s) - k + p(k) for every k >= 2 with X_{n-k}
/// nonempty; missing intersections count as dimension -infinity.
bool is_allowable(const FilteredComplex& F, const Perversity& p,
                  const Simplex& s);

AllowabilityTable allowability_table(const FilteredComplex& F,
                                     const Perversity& p);

/// The chains spanned by allowable simplices whose boundaries stay spanned
/// by allowable simplices, presented in their own basis with an explicit
/// embedding into the simplicial chains.
struct IntersectionComplex {
  Ring ring = Ring::Z();
  ChainComplex cc;            // boundary in intersection-chain coordinates
  std::vector<IntMat> basis;  // C_d coords x rank(IC_d); over F_p residues
  AllowabilityTable allow;

  int rank(int d) const {
    return (d < 0 || d >= static_cast<int>(basis.size())) ? 0 : basis[d].nc;
  }
};

IntersectionComplex intersection_chain_complex(const FilteredComplex& F,
                                               const Perversity& p,
                                               const Ring& ring);

HomologyResult IH(const FilteredComplex& F, const Perversity& p,
                  const Ring& ring);

/// Basis, in intersection-chain coordinates, of the chains supported on a
/// closed subcomplex (saturated over Z; field kernel over F_p).
std::vector<IntMat> ic_subcomplex_span(const IntersectionComplex& ic,
                                       const FilteredComplex& F,
                                       const Subcomplex& A);

/// Homology of IC(F)/IC(A) for a closed subcomplex A carrying the ambient
/// filtration indices verbatim.
HomologyResult relative_IH(const FilteredComplex& F, const Subcomplex& A,
                           const Perversity& p, const Ring& ring);

/// Map on intersection homology induced by a simplicial map that preserves
/// strata by codimension (equal formal dimensions reduce this to literal
/// preservation of each X_i - X_{i-1}; a cylinder or product projection
/// shifts all indices by one while keeping codimensions).  The perversity is
/// given for the larger formal dimension; image chains are verified
/// allowable before solving.
struct InducedIHMap {
  Ring ring = Ring::Z();
  std::vector<IntMat> chain;  // dst IC coords x src IC rank per degree
  // Integral case: canonical class matrices with their groups.
  std::vector<GroupDesc> src_h, dst_h;
  std::vector<IntMat> h;
  // Field case: matrices in the canonical field bases.
  std::vector<int> src_betti, dst_betti;
  std::vector<RatMat> hf;
};

InducedIHMap induced_IH_map(const FilteredComplex& X, const FilteredComplex& Y,
                            const VertexMap& f, const Perversity& p,
                            const Ring& ring);

/// Both sides of the cone identity computed independently: the homology of
/// the cone truncates the link's homology strictly below n-1-p(n) and
/// vanishes at and above it (degree 0 follows the link through the formula;
/// the special degree-0 convention only engages when p(n) >= n-1, which the
/// validated growth bounds exclude).
struct ConeFormulaReport {
  int n = 0;       // formal dimension of the cone
  int cutoff = 0;  // n - 1 - p(n)
  bool disconnected_link = false;
  bool degree0_convention_used = false;
  bool ok = false;
  std::vector<std::string> failures;
  HomologyResult cone_ih, link_ih;
};

ConeFormulaReport cone_formula_check(const FilteredComplex& L,
                                     const Perversity& p, const Ring& ring);

}  // namespace ihtk
