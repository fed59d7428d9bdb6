#include <doctest.h>

#include <random>

#include "ihtk/chain.hpp"
#include "ihtk/echelon.hpp"
#include "ihtk/smat.hpp"
#include "ihtk/snf.hpp"

using namespace ihtk;

namespace {

IntMat dense(const std::vector<std::vector<int>>& rows) {
  std::vector<std::vector<Int>> d;
  for (const auto& r : rows) d.emplace_back(r.begin(), r.end());
  return IntMat::from_dense(d);
}

IntMat diag_mat(int nr, int nc, const std::vector<Int>& d) {
  IntMat m(nr, nc);
  for (size_t i = 0; i < d.size(); ++i)
    if (d[i] != 0) m.col[i].emplace_back(static_cast<int>(i), d[i]);
  return m;
}

}  // namespace

TEST_CASE("determinant and unimodular inverse") {
  IntMat a = dense({{2, 1, 0}, {1, 1, 0}, {3, 5, 1}});
  CHECK(det(a) == 1);
  IntMat inv = unimodular_inverse(a, Ring::Z());
  CHECK(a.mul(inv) == IntMat::identity(3));
  CHECK(inv.mul(a) == IntMat::identity(3));

  IntMat b = dense({{2, 0}, {0, 1}});
  CHECK(det(b) == 2);
  CHECK_THROWS_AS(unimodular_inverse(b, Ring::Z()), verify_error);
  // Over F3 the determinant 2 is a unit.
  IntMat binv3 = unimodular_inverse(b, Ring::Fp(3));
  IntMat prod = b.mul(binv3);
  FieldOps f3(Ring::Fp(3));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(f3.norm(Rat(prod.get(i, j))) == (i == j ? 1 : 0));
}

TEST_CASE("integer echelon kernels are saturated") {
  IntMat a = dense({{2, 3, 5}});
  IntMat k = kernel_basis_z(a);
  CHECK(k.nc == 2);
  CHECK(a.mul(k).is_zero());
  std::vector<Int> d = smith_diagonal(k);
  for (const Int& v : d) CHECK(v == 1);

  // Solve inside the integer span: (4,4,6) = 1*(2,4,0) + 2*(1,0,3).
  ZEchelon ech(3);
  ech.add({{0, Int(2)}, {1, Int(4)}});
  ech.add({{0, Int(1)}, {2, Int(3)}});
  auto sol = ech.solve({{0, Int(4)}, {1, Int(4)}, {2, Int(6)}});
  REQUIRE(sol.has_value());
  CHECK(*sol == SCol<Int>{{0, Int(1)}, {1, Int(2)}});
  // A rational-span member off the lattice, and a vector off the span.
  CHECK(!ech.solve({{0, Int(1)}, {1, Int(2)}}).has_value());
  CHECK(!ech.solve({{1, Int(1)}}).has_value());
}

TEST_CASE("smith normal form on pinned examples") {
  CHECK(smith_diagonal(dense({{2, 4}, {6, 8}})) ==
        std::vector<Int>{Int(2), Int(4)});
  CHECK(smith_diagonal(dense({{6, 0, 0}, {0, 10, 0}, {0, 0, 15}})) ==
        std::vector<Int>{Int(1), Int(30), Int(30)});
  CHECK(smith_diagonal(IntMat(3, 3)) ==
        std::vector<Int>{Int(0), Int(0), Int(0)});
  CHECK(smith_diagonal(IntMat::identity(4)) ==
        std::vector<Int>(4, Int(1)));

  Snf s = smith_textbook(dense({{2, 4}, {6, 8}}));
  CHECK(s.diag == std::vector<Int>{Int(2), Int(4)});
  CHECK(s.u.mul(dense({{2, 4}, {6, 8}})).mul(s.v) == diag_mat(2, 2, s.diag));
}

TEST_CASE("smith transforms on random matrices") {
  std::mt19937 rng(20240915);
  std::uniform_int_distribution<int> dim(1, 9), val(-9, 9), keep(0, 3);
  for (int trial = 0; trial < 60; ++trial) {
    int m = dim(rng), n = dim(rng);
    IntMat a(m, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < m; ++r)
        if (keep(rng) == 0) a.set(r, c, Int(val(rng)));

    Snf s = smith_normal_form(a, true);
    CHECK(s.u.mul(a).mul(s.v) == diag_mat(m, n, s.diag));
    CHECK(s.u.mul(s.uinv) == IntMat::identity(m));
    CHECK(s.v.mul(s.vinv) == IntMat::identity(n));
    Int du = det(s.u), dv = det(s.v);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    for (size_t i = 0; i + 1 < s.diag.size(); ++i) {
      if (s.diag[i + 1] != 0) {
        REQUIRE(s.diag[i] != 0);
        CHECK(s.diag[i + 1] % s.diag[i] == 0);
      }
    }
    // The sparse path agrees with the dense one.
    CHECK(smith_diagonal(a) == s.diag);
    // Kernel basis saturation: invariant factors of the kernel are all 1.
    IntMat k = kernel_basis_z(a);
    CHECK(a.mul(k).is_zero());
    CHECK(k.nc == n - s.rank());
    for (const Int& v : smith_diagonal(k)) CHECK(v == 1);
  }
}

TEST_CASE("smith on a larger sparse matrix") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> val(-3, 3), pick(0, 9);
  IntMat a(40, 40);
  for (int c = 0; c < 40; ++c)
    for (int r = 0; r < 40; ++r)
      if (pick(rng) < 2) a.set(r, c, Int(val(rng)));
  CHECK(smith_diagonal(a) == smith_textbook(a).diag);
}

TEST_CASE("homology of a circle and a mod-k point") {
  ChainComplex circle;
  circle.ring = Ring::Z();
  circle.dims = {3, 3};
  circle.bd = {IntMat(0, 3),
               dense({{-1, 0, 1}, {1, -1, 0}, {0, 1, -1}})};
  circle.validate();
  HomologyResult h = homology(circle);
  CHECK(h.betti == std::vector<int>{1, 1});
  CHECK(h.torsion[0].empty());
  CHECK(h.torsion[1].empty());
  CHECK(homology_textbook(circle).betti == h.betti);

  ChainComplex mod3;
  mod3.ring = Ring::Z();
  mod3.dims = {1, 1};
  mod3.bd = {IntMat(0, 1), dense({{3}})};
  HomologyResult hz = homology(mod3);
  CHECK(hz.betti == std::vector<int>{0, 0});
  CHECK(hz.torsion[0] == std::vector<Int>{Int(3)});

  mod3.ring = Ring::Q();
  CHECK(homology(mod3).betti == std::vector<int>{0, 0});
  mod3.ring = Ring::Fp(3);
  CHECK(homology(mod3).betti == std::vector<int>{1, 1});
  CHECK(homology_textbook(mod3).betti == std::vector<int>{1, 1});
  mod3.ring = Ring::Fp(5);
  CHECK(homology(mod3).betti == std::vector<int>{0, 0});
}

TEST_CASE("integral homology basis coordinates") {
  ChainComplex circle;
  circle.ring = Ring::Z();
  circle.dims = {3, 3};
  circle.bd = {IntMat(0, 3),
               dense({{-1, 0, 1}, {1, -1, 0}, {0, 1, -1}})};
  HomologyBasisZ hb(circle);
  CHECK(hb.group(0).betti == 1);
  CHECK(hb.group(1).betti == 1);
  CHECK(hb.group(1).orders.empty());
  SCol<Int> rep = hb.reps(1).col[0];
  std::vector<Int> cv = hb.coords(1, rep);
  CHECK(cv == std::vector<Int>{Int(1)});
  SCol<Int> doubled = rep;
  for (auto& e : doubled) e.second *= 2;
  CHECK(hb.coords(1, doubled) == std::vector<Int>{Int(2)});
  CHECK_THROWS_AS(hb.coords(1, SCol<Int>{{0, Int(1)}}), verify_error);

  ChainComplex mod3;
  mod3.ring = Ring::Z();
  mod3.dims = {1, 1};
  mod3.bd = {IntMat(0, 1), dense({{3}})};
  HomologyBasisZ hm(mod3);
  CHECK(hm.group(0).betti == 0);
  CHECK(hm.group(0).orders == std::vector<Int>{Int(3)});
  CHECK(hm.coords(0, {{0, Int(1)}}) == std::vector<Int>{Int(1)});
  CHECK(hm.coords(0, {{0, Int(3)}}) == std::vector<Int>{Int(0)});
  CHECK(hm.coords(0, {{0, Int(-1)}}) == std::vector<Int>{Int(2)});
}

TEST_CASE("pair sequence of the interval against its endpoints") {
  // C: one edge e with vertices a, b; A: both vertices.
  ChainComplex c;
  c.ring = Ring::Z();
  c.dims = {2, 1};
  c.bd = {IntMat(0, 2), dense({{-1}, {1}})};
  std::vector<IntMat> span_a = {IntMat::identity(2), IntMat(1, 0)};

  SpanComplex a = restrict_to_span_z(c, span_a);
  QuotientZ q = quotient_by_span_z(c, span_a);
  CHECK(q.cc.dims == std::vector<int>{0, 1});

  HomologyBasisZ hc(c), ha(a.cc), hq(q.cc);
  CHECK(ha.group(0).betti == 2);
  CHECK(hc.group(0).betti == 1);
  CHECK(hq.group(1).betti == 1);
  CHECK(hq.group(0).betti == 0);

  ConnectingZ delta = connecting_pair_z(c, span_a, q, hq, a, ha);
  REQUIRE(delta.m[1].nr == 2);
  REQUIRE(delta.m[1].nc == 1);
  // The boundary of the lifted edge is b - a: opposite unit entries.
  Int s0 = delta.m[1].get(0, 0), s1 = delta.m[1].get(1, 0);
  CHECK(s0 + s1 == 0);
  CHECK((s0 == 1 || s0 == -1));

  ChainMap inc{&a.cc, &c, a.basis};
  inc.validate();
  ChainMap prj{&c, &q.cc, q.proj};
  prj.validate();
  GradedClassMap im = induced_map(inc, ha, hc);
  GradedClassMap pm = induced_map(prj, hc, hq);

  std::vector<ExactNodeZ> nodes;
  // H1(C) -> H1(C/A) -> H0(A)
  nodes.push_back({hc.group(1), hq.group(1), ha.group(0), pm.m[1], delta.m[1]});
  // H1(C/A) -> H0(A) -> H0(C)
  nodes.push_back({hq.group(1), ha.group(0), hc.group(0), delta.m[1], im.m[0]});
  // H0(A) -> H0(C) -> H0(C/A)
  nodes.push_back({ha.group(0), hc.group(0), hq.group(0), im.m[0], pm.m[0]});
  check_exact_z(nodes);
}

TEST_CASE("field quotient projection is canonical") {
  FieldOps f(Ring::Q());
  ChainComplex c;
  c.ring = Ring::Q();
  c.dims = {2, 1};
  c.bd = {IntMat(0, 2), dense({{-1}, {1}})};
  std::vector<RatMat> span = {to_rat(IntMat::identity(2)), RatMat(1, 0)};
  QuotientF q = quotient_by_span_f(c, f, span);
  CHECK(q.qdims == std::vector<int>{0, 1});

  HomologyBasisF hc(c, f), hq(q.cc, f);
  CHECK(hc.betti(0) == 1);
  CHECK(hq.betti(1) == 1);

  std::vector<RatMat> span_mixed = {RatMat(2, 1), RatMat(1, 0)};
  span_mixed[0].col[0] = {{0, Rat(1)}, {1, Rat(1)}};  // span of a + b
  QuotientF qm = quotient_by_span_f(c, f, span_mixed);
  CHECK(qm.qdims[0] == 1);
  // a and b project to the same class with opposite sign adjustments:
  SCol<Rat> pa = qm.project(0, {{0, Rat(1)}});
  SCol<Rat> pb = qm.project(0, {{1, Rat(1)}});
  REQUIRE(pa.size() == 1);
  REQUIRE(pb.size() == 1);
  CHECK(pa[0].second == -pb[0].second);
}

TEST_CASE("field pair sequence over F2") {
  FieldOps f2(Ring::Fp(2));
  ChainComplex c;
  c.ring = Ring::Fp(2);
  c.dims = {2, 1};
  c.bd = {IntMat(0, 2), dense({{-1}, {1}})};
  std::vector<RatMat> span = {to_rat(IntMat::identity(2)), RatMat(1, 0)};
  SpanComplexF a = restrict_to_span_f(c, f2, span);
  QuotientF q = quotient_by_span_f(c, f2, span);
  HomologyBasisF hc(c, f2), ha(a.cc, f2), hq(q.cc, f2);
  ConnectingF delta = connecting_pair_f(c, f2, q, hq, a, ha);

  ChainMap inc{&a.cc, &c, {}};
  inc.m = {to_int(a.basis[0]), to_int(a.basis[1])};
  ChainMap prj{&c, &q.cc, {}};
  prj.m = {IntMat(0, 2), IntMat(1, 1)};
  prj.m[1].set(0, 0, Int(1));
  std::vector<RatMat> im = induced_map_f(inc, ha, hc);
  std::vector<RatMat> pm = induced_map_f(prj, hc, hq);

  std::vector<ExactNodeF> nodes;
  nodes.push_back({hc.betti(1), hq.betti(1), ha.betti(0), pm[1], delta.m[1]});
  nodes.push_back({hq.betti(1), ha.betti(0), hc.betti(0), delta.m[1], im[0]});
  nodes.push_back({ha.betti(0), hc.betti(0), hq.betti(0), im[0], pm[0]});
  check_exact_f(f2, nodes);
}
