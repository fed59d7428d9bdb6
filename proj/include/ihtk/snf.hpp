#pragma once

#include <vector>

#include "ihtk/smat.hpp"

namespace ihtk {

/// Smith normal form u a v = diag(d).  diag has length min(nr, nc), entries
/// nonnegative with d[i] | d[i+1].  Transforms are square and unimodular;
/// they are only populated when requested.
struct Snf {
  std::vector<Int> diag;
  IntMat u, uinv, v, vinv;
  bool with_transforms = false;

  int rank() const {
    int r = 0;
    for (const Int& d : diag)
      if (d != 0) ++r;
    return r;
  }
  int rank_mod(const Int& p) const {
    int r = 0;
    for (const Int& d : diag)
      if (d % p != 0) ++r;
    return r;
  }
  /// Invariant factors > 1, in divisibility order.
  std::vector<Int> torsion() const {
    std::vector<Int> t;
    for (const Int& d : diag)
      if (d > 1) t.push_back(d);
    return t;
  }
};

/// Diagonal only.  Sparse elimination on unit pivots first, dense reduction
/// of the residual; suited to large boundary matrices.
std::vector<Int> smith_diagonal(const IntMat& a);

/// Full Smith form.  with_transforms routes through the dense elimination
/// so u, uinv, v, vinv are tracked; otherwise equivalent to smith_diagonal.
Snf smith_normal_form(const IntMat& a, bool with_transforms);

/// Dense elimination with global minimum-pivot selection, always tracking
/// transforms.  Independent of the sparse path; used for cross-checking.
Snf smith_textbook(const IntMat& a);

}  // namespace ihtk
