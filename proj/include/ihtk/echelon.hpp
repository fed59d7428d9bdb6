#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ihtk/smat.hpp"

namespace ihtk {

/// Incremental integer column echelon with expression tracking.
///
/// Columns are fed in one at a time and reduced against the current echelon
/// by unimodular column operations (gcd combinations at the pivot row, which
/// is the lowest nonzero row of each echelon column).  Every echelon column
/// keeps an expression over the inserted columns, so membership queries can
/// return exact integer coordinates.  A column that reduces to zero yields an
/// integer kernel relation among the inserted columns; the collected
/// relations form a lattice basis of the kernel.
class ZEchelon {
 public:
  explicit ZEchelon(int rows) : nr_(rows) {}

  /// Insert a column.  Returns its insertion index.
  int add(SCol<Int> c);

  /// Number of inserted columns so far.
  int inserted() const { return n_in_; }
  int rank() const { return static_cast<int>(piv_.size()); }
  int rows() const { return nr_; }

  /// Kernel relations discovered so far, one sparse coordinate vector (over
  /// insertion indices) per column that reduced to zero.
  const std::vector<SCol<Int>>& kernel() const { return kernel_; }

  /// Reduce v against the echelon.  Returns the residual; if coeffs is given
  /// it receives the integer combination of *inserted* columns c with
  /// v = residual + sum coeffs.  Empty residual means v lies in the span.
  SCol<Int> reduce(SCol<Int> v, SCol<Int>* coeffs = nullptr) const;

  /// Integer coordinates of v over the inserted columns, if v lies in the
  /// integer span.
  std::optional<SCol<Int>> solve(const SCol<Int>& v) const;

  /// Pivot rows currently used, ascending.
  std::vector<int> pivot_rows() const;

 private:
  struct ECol {
    SCol<Int> v;     // echelon column, lowest row = pivot
    SCol<Int> expr;  // expression over insertion indices
  };
  int nr_;
  int n_in_ = 0;
  std::map<int, ECol> piv_;  // pivot row -> column
  std::vector<SCol<Int>> kernel_;
};

/// Incremental field column echelon with expression tracking; same contract
/// as ZEchelon but with exact division, so reduction always eliminates the
/// pivot row completely.
class FEchelon {
 public:
  FEchelon(FieldOps f, int rows) : F_(f), nr_(rows) {}

  int add(SCol<Rat> c);
  int inserted() const { return n_in_; }
  int rank() const { return static_cast<int>(piv_.size()); }
  int rows() const { return nr_; }
  const std::vector<SCol<Rat>>& kernel() const { return kernel_; }

  SCol<Rat> reduce(SCol<Rat> v, SCol<Rat>* coeffs = nullptr) const;
  /// Like reduce, but eliminates every pivot row present in v rather than
  /// stopping at the first non-pivotal lowest row.  The residual is the
  /// canonical representative of v modulo the span, supported on non-pivot
  /// rows only.
  SCol<Rat> reduce_full(SCol<Rat> v, SCol<Rat>* coeffs = nullptr) const;
  std::optional<SCol<Rat>> solve(const SCol<Rat>& v) const;
  std::vector<int> pivot_rows() const;

  const FieldOps& field() const { return F_; }

 private:
  struct ECol {
    SCol<Rat> v;
    SCol<Rat> expr;
  };
  FieldOps F_;
  int nr_;
  int n_in_ = 0;
  std::map<int, ECol> piv_;
  std::vector<SCol<Rat>> kernel_;
};

/// Lattice-saturated kernel basis of an integer matrix: columns form a Z
/// basis of { x : A x = 0 }.
IntMat kernel_basis_z(const IntMat& a);

/// Field kernel basis of { x : A x = 0 } over F.
RatMat kernel_basis_f(const FieldOps& f, const RatMat& a);

/// Rank over Q (equivalently over Z after saturation).
int rank_q(const IntMat& a);

/// Rank over the given field.
int rank_f(const FieldOps& f, const RatMat& a);

/// Solve A x = b exactly over Z for every column of b.  Throws verify_error
/// if a column is not in the integer column span.
IntMat solve_columns_z(const IntMat& a, const IntMat& b);

/// Solve A x = b over the field for every column of b.
RatMat solve_columns_f(const FieldOps& f, const RatMat& a, const RatMat& b);

/// Canonical residue matrix of a field-valued matrix (denominators cleared
/// by the field ops; meaningful for prime fields and for integral rational
/// data).  Throws verify_error on a non-integral entry.
IntMat residue_int(const FieldOps& f, const RatMat& m);

}  // namespace ihtk
