#include "ihtk/smat.hpp"

namespace ihtk {

Int det(const IntMat& m) {
  if (m.nr != m.nc) throw std::domain_error("det of non-square matrix");
  int n = m.nr;
  if (n == 0) return 1;
  auto a = m.to_dense();
  // Bareiss fraction-free elimination; divisions below are exact.
  Int sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r)
        if (a[r][k] != 0) {
          swap_row = r;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

IntMat unimodular_inverse(const IntMat& m, const Ring& ring) {
  if (m.nr != m.nc) throw std::domain_error("inverse of non-square matrix");
  int n = m.nr;
  // Gauss-Jordan over Q (or F_p), then an integrality check: over Z the
  // inverse of a matrix exists in IntMat exactly when det = +-1.
  FieldOps F(ring.kind == RingKind::PrimeField ? ring : Ring::Q());
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n, Rat(0)));
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, Rat(0)));
  for (int c = 0; c < n; ++c)
    for (const auto& [r, v] : m.col[c]) a[r][c] = F.norm(Rat(v));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int cpiv = 0; cpiv < n; ++cpiv) {
    int piv = -1;
    for (int r = cpiv; r < n; ++r)
      if (!F.is_zero(a[r][cpiv])) {
        piv = r;
        break;
      }
    if (piv < 0) throw verify_error("matrix is singular over " + ring.name());
    std::swap(a[cpiv], a[piv]);
    std::swap(inv[cpiv], inv[piv]);
    Rat d = F.inv(a[cpiv][cpiv]);
    for (int j = 0; j < n; ++j) {
      a[cpiv][j] = F.mul(a[cpiv][j], d);
      inv[cpiv][j] = F.mul(inv[cpiv][j], d);
    }
    for (int r = 0; r < n; ++r) {
      if (r == cpiv || F.is_zero(a[r][cpiv])) continue;
      Rat k = a[r][cpiv];
      for (int j = 0; j < n; ++j) {
        a[r][j] = F.sub(a[r][j], F.mul(k, a[cpiv][j]));
        inv[r][j] = F.sub(inv[r][j], F.mul(k, inv[cpiv][j]));
      }
    }
  }
  IntMat out(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      const Rat& v = inv[r][c];
      if (v == 0) continue;
      if (boost::multiprecision::denominator(v) != 1)
        throw verify_error("inverse is not integral; determinant is not a unit");
      out.col[c].emplace_back(r, boost::multiprecision::numerator(v));
    }
  return out;
}

}  // namespace ihtk
