#include <doctest.h>

#include <sstream>

#include "ihtk/corpus.hpp"
#include "ihtk/localsys.hpp"

using namespace ihtk;

namespace {

using IV = std::vector<int>;

Perversity pz(int n) { return named_perversity("zero", n); }

IntMat m2(int a, int b, int c, int d) {
  return IntMat::from_dense({{Int(a), Int(b)}, {Int(c), Int(d)}});
}

IntMat m1(int a) { return IntMat::from_dense({{Int(a)}}); }

const IntMat kSwap = m2(0, 1, 1, 0);

// Trivially filtered solid triangle; its carrier is the whole subdivision,
// including 2-simplices, so flatness has something to bite on.
FilteredComplex disk2() {
  return trivial_filtration(SimplicialComplex::close({{0, 1, 2}}));
}

}  // namespace

TEST_CASE("dual carrier of the top stratum") {
  Subdivision sd;
  SimplicialComplex c = top_stratum_carrier(disk2(), &sd);
  CHECK(c.ncells(0) == 7);
  CHECK(c.ncells(1) == 12);
  CHECK(c.ncells(2) == 6);
  CHECK(sd.vertex_id(1, 0) == 3);
  CHECK(sd.vertex_id(2, 0) == 6);

  // Only the apex barycenter is cut out of a cone; nothing through the
  // apex survives as a carrier cell, comparable chains must avoid it.
  CorpusSpace cs = corpus_build("cone_s1");
  SimplicialComplex cc = top_stratum_carrier(cs.X);
  CHECK(cc.ncells(0) == 12);
  CHECK(!cc.contains({3}));  // barycenter id of the apex vertex
  CHECK(cc.contains({0}));

  CorpusSpace pt = corpus_build("pinched_torus");
  SimplicialComplex pc = top_stratum_carrier(pt.X);
  CHECK(pc.ncells(0) == pt.X.K.ncells(0) + pt.X.K.ncells(1) +
                            pt.X.K.ncells(2) - 1);
}

TEST_CASE("local system validation") {
  CHECK_NOTHROW(
      validate_local_system(trivial_local_system(disk2(), Ring::Z(), 2)));

  // A circle carrier has no 2-cells, so any invertible matrices pass.
  FilteredComplex s1 = trivial_filtration(circle_complex(3));
  LocalSystem neg = trivial_local_system(s1, Ring::Z(), 1);
  neg.rho[{0, 3}] = m1(-1);
  CHECK_NOTHROW(validate_local_system(neg));

  // Swap and shear do not commute around the carrier triangle (0, 3, 6).
  LocalSystem bad = trivial_local_system(disk2(), Ring::Z(), 2);
  bad.rho[{0, 3}] = kSwap;
  bad.rho[{3, 6}] = m2(1, 1, 0, 1);
  CHECK_THROWS_WITH_AS(validate_local_system(bad),
                       "system is not flat at 2-simplex 0 3 6", input_error);

  LocalSystem shape = trivial_local_system(disk2(), Ring::Z(), 2);
  shape.rho[{0, 3}] = m1(1);
  CHECK_THROWS_AS(validate_local_system(shape), input_error);

  LocalSystem offc = trivial_local_system(disk2(), Ring::Z(), 2);
  offc.rho[{0, 1}] = kSwap;  // barycenters of two vertices: not an edge
  CHECK_THROWS_AS(validate_local_system(offc), input_error);

  LocalSystem noninv = trivial_local_system(disk2(), Ring::Z(), 2);
  noninv.rho[{0, 3}] = m2(2, 0, 0, 1);
  CHECK_THROWS_AS(validate_local_system(noninv), input_error);
  noninv.ring = Ring::Fp(2);
  CHECK_THROWS_AS(validate_local_system(noninv), input_error);
  noninv.ring = Ring::Fp(3);  // det 2 is a unit mod 3
  noninv.rho.clear();
  noninv.rho[{0, 3}] = m2(2, 0, 0, 1);
  // flatness around triangles through edge (0,3) now needs the inverse,
  // which exists mod 3; the lone twist breaks flatness though.
  CHECK_THROWS_AS(validate_local_system(noninv), input_error);

  LocalSystem mut = trivial_local_system(disk2(), Ring::Z(), 2);
  mut.rho[{0, 3}] = kSwap;
  mut.rho[{3, 0}] = m2(1, 1, 0, 1);
  CHECK_THROWS_AS(validate_local_system(mut), input_error);
}

TEST_CASE("local system file round trip") {
  FilteredComplex s1 = trivial_filtration(circle_complex(3));
  SimplicialComplex carrier = top_stratum_carrier(s1);
  LocalSystem sys;
  sys.carrier = carrier;
  sys.ring = Ring::Z();
  sys.stalk_rank = 1;
  sys.rho[{0, 3}] = m1(-1);

  std::ostringstream os;
  write_local_system(os, sys);
  CHECK(os.str() == "rank 1\nedge 0 3 : -1\n");

  std::istringstream is(os.str());
  LocalSystem back = read_local_system(is, carrier, Ring::Z());
  CHECK(back.stalk_rank == 1);
  REQUIRE(back.rho.count({0, 3}) == 1);
  CHECK(back.rho.at({0, 3}) == m1(-1));

  auto fails = [&](const std::string& text) {
    std::istringstream bad(text);
    CHECK_THROWS_AS(read_local_system(bad, carrier, Ring::Z()), input_error);
  };
  fails("edge 0 3 : -1\n");                    // edge before rank
  fails("rank 1\nrank 1\n");                   // repeated rank
  fails("rank 1\nedge 0 3 -1\n");              // missing colon
  fails("rank 2\nedge 0 3 : 1 0 0\n");         // wrong entry count
  fails("rank 1\nwhat 0 3 : 1\n");             // unknown directive
  fails("rank 1\nedge 0 3 : -1\nedge 0 3 : 1\n");  // repeated edge
  fails("rank 0\n");                           // bad rank
}

TEST_CASE("facet barycenters of allowable simplices stay in the top stratum") {
  for (const std::string& name : corpus_names()) {
    CorpusSpace s = corpus_build(name);
    CHECK(s.X.codim1_empty());
    for (const Perversity& q : all_perversities(s.X.n))
      CHECK(facet_interior_check(s.X, q));
  }

  // A codimension-one stratum breaks the lemma: the whole segment is
  // allowable but one endpoint sits in the bottom skeleton.
  FilteredComplex seg =
      make_filtered(SimplicialComplex::close({{0, 1}}), 1,
                    std::map<int, int>{{0, 0}});
  CHECK(!seg.codim1_empty());
  CHECK(!facet_interior_check(seg, pz(1)));
  LocalSystem triv = trivial_local_system(seg, Ring::Z(), 1);
  CHECK_THROWS_AS(twisted_IC(seg, pz(1), triv), verify_error);
}

TEST_CASE("twisted chains with the trivial system match untwisted chains") {
  for (const char* name : {"cone_s1", "cone_t2", "pinched_torus", "susp_t2",
                           "twisted_cone_bundle", "rp2_6"}) {
    CorpusSpace s = corpus_build(name);
    for (const Perversity& q : all_perversities(s.X.n)) {
      HomologyResult plain = IH(s.X, q, Ring::Z());
      LocalSystem r1 = trivial_local_system(s.X, Ring::Z(), 1);
      CHECK(twisted_IH(s.X, q, r1) == plain);

      LocalSystem r2 = trivial_local_system(s.X, Ring::Z(), 2);
      HomologyResult doubled = twisted_IH(s.X, q, r2);
      for (size_t d = 0; d < plain.betti.size(); ++d) {
        CHECK(doubled.betti[d] == 2 * plain.betti[d]);
        CHECK(doubled.torsion[d].size() == 2 * plain.torsion[d].size());
      }
    }
  }
  CorpusSpace rp2 = corpus_build("rp2_6");
  LocalSystem f2 = trivial_local_system(rp2.X, Ring::Fp(2), 1);
  CHECK(twisted_IH(rp2.X, pz(2), f2).betti == IV{1, 1, 1});

  CorpusSpace cs = corpus_build("cone_s1");
  CorpusSpace ct = corpus_build("cone_t2");
  LocalSystem wrong = trivial_local_system(ct.X, Ring::Z(), 1);
  CHECK_THROWS_AS(twisted_IC(cs.X, pz(2), wrong), input_error);
}

TEST_CASE("rank one twist on the circle") {
  FilteredComplex s1 = trivial_filtration(circle_complex(3));
  Perversity p = pz(1);

  auto twisted = [&](const Ring& ring) {
    LocalSystem sys = trivial_local_system(s1, ring, 1);
    sys.rho[{0, 3}] = m1(-1);
    validate_local_system(sys);
    return twisted_IH(s1, p, sys);
  };

  HomologyResult hq = twisted(Ring::Q());
  CHECK(hq.betti == IV{0, 0});

  HomologyResult hz = twisted(Ring::Z());
  CHECK(hz.betti == IV{0, 0});
  REQUIRE(hz.torsion[0].size() == 1);
  CHECK(hz.torsion[0][0] == 2);
  CHECK(hz.torsion[1].empty());

  CHECK(twisted(Ring::Fp(2)).betti == IV{1, 1});
  CHECK(twisted(Ring::Fp(3)).betti == IV{0, 0});

  // Through the file format, then recomputed.
  LocalSystem sys = trivial_local_system(s1, Ring::Z(), 1);
  sys.rho[{0, 3}] = m1(-1);
  std::ostringstream os;
  write_local_system(os, sys);
  std::istringstream is(os.str());
  LocalSystem back = read_local_system(is, sys.carrier, Ring::Z());
  CHECK(twisted_IH(s1, p, back) == hz);
}

TEST_CASE("twisted cellular complex of a base") {
  // A point carries the stalk in degree zero.
  SimplicialComplex pt = SimplicialComplex::close({{0}});
  HomologyResult st3;
  st3.ring = Ring::Z();
  st3.betti = {3};
  st3.torsion = {{}};
  ChainComplex cp = twisted_cellular_complex(pt, trivial_stalk_system(pt, Ring::Z(), st3), 0);
  CHECK(cp.dims == IV{3});
  CHECK(homology(cp).betti == IV{3});

  // Swap coefficients on a circle: invariants in degree one, coinvariants
  // in degree zero, each of rank one.
  HomologyResult st2;
  st2.ring = Ring::Z();
  st2.betti = {2};
  st2.torsion = {{}};
  std::vector<int> loop{0, 1, 2, 3, 4};
  StalkSystem sw = stalk_system_from_gluing(st2, {kSwap}, loop, Ring::Z());
  ChainComplex csw = twisted_cellular_complex(sw.base, sw, 0);
  CHECK(csw.dims == IV{10, 10});
  HomologyResult hsw = homology(csw);
  CHECK(hsw.betti == IV{1, 1});
  CHECK(hsw.torsion[0].empty());
  StalkSystem swq = sw;
  swq.ring = Ring::Q();
  ChainComplex cswq = twisted_cellular_complex(swq.base, swq, 0);
  CHECK(homology(cswq).betti == IV{1, 1});

  // Trivial coefficients reproduce the ordinary homology of the base.
  SimplicialComplex t7 = torus7_complex();
  HomologyResult st1;
  st1.ring = Ring::Z();
  st1.betti = {1};
  st1.torsion = {{}};
  ChainComplex ct = twisted_cellular_complex(t7, trivial_stalk_system(t7, Ring::Z(), st1), 0);
  CHECK(homology(ct) == homology(t7.chain_complex(Ring::Z())));

  // A vanishing stalk degree gives the zero complex.
  CHECK(twisted_cellular_complex(t7, trivial_stalk_system(t7, Ring::Z(), st1), 3).dims ==
        IV{0, 0, 0});

  // A non-flat system surfaces as a boundary that fails to square to zero.
  SimplicialComplex disk = SimplicialComplex::close({{0, 1, 2}});
  StalkSystem bad;
  bad.base = disk;
  bad.ring = Ring::Z();
  bad.stalk = st2;
  bad.rho[{0, 1}] = {kSwap};
  bad.rho[{1, 2}] = {m2(1, 1, 0, 1)};
  CHECK_THROWS_AS(validate_stalk_system(bad), input_error);
  CHECK_THROWS_AS(twisted_cellular_complex(disk, bad, 0), verify_error);
}

TEST_CASE("stalk systems from gluing data") {
  HomologyResult st2;
  st2.ring = Ring::Z();
  st2.betti = {2};
  st2.torsion = {{}};

  StalkSystem triv =
      stalk_system_from_gluing(st2, {IntMat::identity(2)}, {0, 1, 2}, Ring::Z());
  CHECK(triv.rho.empty());
  CHECK(triv.loop_monodromy({0, 1, 2})[0] == IntMat::identity(2));

  // The gluing automorphism of the twisted bundle's fiber: swapping the two
  // circles of the coned pair permutes the degree-zero classes.
  Cone c2 = cone(trivial_filtration(two_circles_complex()));
  VertexMap swv;
  for (int v = 0; v < 6; ++v) swv.f[v] = (v + 3) % 6;
  swv.f[c2.apex] = c2.apex;
  InducedIHMap msw = induced_IH_map(c2.C, c2.C, swv, pz(2), Ring::Z());
  HomologyResult cstalk;
  cstalk.ring = Ring::Z();
  cstalk.betti = {2, 0, 0};
  cstalk.torsion = {{}, {}, {}};
  std::vector<IntMat> phi{msw.h[0], IntMat::identity(0), IntMat::identity(0)};
  StalkSystem sc = stalk_system_from_gluing(cstalk, phi, {6, 13, 20}, Ring::Z());
  CHECK(sc.base.contains({6, 13}));
  CHECK(sc.loop_monodromy({6, 13, 20})[0] == msw.h[0]);
  CHECK(msw.h[0].mul(msw.h[0]) == IntMat::identity(2));
  CHECK(msw.h[0].get(0, 0) + msw.h[0].get(1, 1) == 0);

  // Same swap on the bare pair of circles, acting on degree one.
  FilteredComplex pair = trivial_filtration(two_circles_complex());
  VertexMap swb;
  for (int v = 0; v < 6; ++v) swb.f[v] = (v + 3) % 6;
  InducedIHMap mswb = induced_IH_map(pair, pair, swb, pz(1), Ring::Z());
  HomologyResult lstalk;
  lstalk.ring = Ring::Z();
  lstalk.betti = {2, 2};
  lstalk.torsion = {{}, {}};
  StalkSystem sl = stalk_system_from_gluing(lstalk, {mswb.h[0], mswb.h[1]},
                                            {6, 13, 20}, Ring::Z());
  CHECK(sl.loop_monodromy({6, 13, 20})[1] == mswb.h[1]);
  CHECK(mswb.h[1].mul(mswb.h[1]) == IntMat::identity(2));
  CHECK(det(mswb.h[1]) == -1);

  CHECK_THROWS_AS(
      stalk_system_from_gluing(st2, {m2(2, 0, 0, 1)}, {0, 1, 2}, Ring::Z()),
      input_error);
  CHECK_THROWS_AS(stalk_system_from_gluing(st2, {}, {0, 1, 2}, Ring::Z()),
                  input_error);
  CHECK_THROWS_AS(
      stalk_system_from_gluing(st2, {kSwap}, {0, 1, 0}, Ring::Z()),
      input_error);
  CHECK_THROWS_AS(stalk_system_from_gluing(st2, {kSwap}, {0, 1}, Ring::Z()),
                  input_error);
}

TEST_CASE("comparison from fiber groups to cone fiber groups") {
  std::vector<int> loop{6, 13, 20};

  // Pair of circles: identity in degree zero, zero map on the cycles.
  Cone c2 = cone(trivial_filtration(two_circles_complex()));
  VertexMap swv;
  for (int v = 0; v < 6; ++v) swv.f[v] = (v + 3) % 6;
  swv.f[c2.apex] = c2.apex;
  InducedIHMap msw = induced_IH_map(c2.C, c2.C, swv, pz(2), Ring::Z());
  FilteredComplex pair = trivial_filtration(two_circles_complex());
  VertexMap swb;
  for (int v = 0; v < 6; ++v) swb.f[v] = (v + 3) % 6;
  InducedIHMap mswb = induced_IH_map(pair, pair, swb, pz(1), Ring::Z());

  HomologyResult lstalk;
  lstalk.ring = Ring::Z();
  lstalk.betti = {2, 2};
  lstalk.torsion = {{}, {}};
  HomologyResult cstalk;
  cstalk.ring = Ring::Z();
  cstalk.betti = {2, 0, 0};
  cstalk.torsion = {{}, {}, {}};
  StalkSystem slink = stalk_system_from_gluing(lstalk, {mswb.h[0], mswb.h[1]},
                                               loop, Ring::Z());
  StalkSystem scone = stalk_system_from_gluing(
      cstalk, {msw.h[0], IntMat::identity(0), IntMat::identity(0)}, loop,
      Ring::Z());
  std::vector<IntMat> cmp = stalk_comparison_map(slink, scone);
  REQUIRE(cmp.size() == 3);
  CHECK(cmp[0] == IntMat::identity(2));
  CHECK(cmp[1] == IntMat(0, 2));
  CHECK(cmp[2] == IntMat(0, 0));

  // Torus fiber with trivial transports, both middle cutoffs.
  SimplicialComplex circle = circle_complex(3);
  HomologyResult t2;
  t2.ring = Ring::Z();
  t2.betti = {1, 2, 1};
  t2.torsion = {{}, {}, {}};
  HomologyResult ct_lo;
  ct_lo.ring = Ring::Z();
  ct_lo.betti = {1, 2, 0, 0};
  ct_lo.torsion = {{}, {}, {}, {}};
  HomologyResult ct_hi;
  ct_hi.ring = Ring::Z();
  ct_hi.betti = {1, 0, 0, 0};
  ct_hi.torsion = {{}, {}, {}, {}};
  StalkSystem base_t2 = trivial_stalk_system(circle, Ring::Z(), t2);
  std::vector<IntMat> lo =
      stalk_comparison_map(base_t2, trivial_stalk_system(circle, Ring::Z(), ct_lo));
  CHECK(lo[0] == IntMat::identity(1));
  CHECK(lo[1] == IntMat::identity(2));
  CHECK(lo[2] == IntMat(0, 1));
  CHECK(lo[3] == IntMat(0, 0));
  std::vector<IntMat> hi =
      stalk_comparison_map(base_t2, trivial_stalk_system(circle, Ring::Z(), ct_hi));
  CHECK(hi[1] == IntMat(0, 2));

  // Mismatched groups cannot come from coning.
  HomologyResult odd;
  odd.ring = Ring::Z();
  odd.betti = {1, 1, 0, 0};
  odd.torsion = {{}, {}, {}, {}};
  CHECK_THROWS_AS(
      stalk_comparison_map(base_t2, trivial_stalk_system(circle, Ring::Z(), odd)),
      input_error);

  // Equivariance: an identity comparison cannot intertwine a swapped link
  // with an untwisted cone.
  HomologyResult flat2;
  flat2.ring = Ring::Z();
  flat2.betti = {2};
  flat2.torsion = {{}};
  HomologyResult flat2c;
  flat2c.ring = Ring::Z();
  flat2c.betti = {2, 0};
  flat2c.torsion = {{}, {}};
  StalkSystem twl = stalk_system_from_gluing(flat2, {kSwap}, loop, Ring::Z());
  StalkSystem twc = trivial_stalk_system(twl.base, Ring::Z(), flat2c);
  CHECK_THROWS_AS(stalk_comparison_map(twl, twc), verify_error);
}

TEST_CASE("path independence of flat transport around base squares") {
  // Coboundary twist by the vertex parity: flat by construction, with a
  // genuinely nontrivial matrix on every parity-changing edge.
  SimplicialComplex t7 = torus7_complex();
  HomologyResult st2;
  st2.ring = Ring::Z();
  st2.betti = {2};
  st2.torsion = {{}};
  StalkSystem sys;
  sys.base = t7;
  sys.ring = Ring::Z();
  sys.stalk = st2;
  for (const Simplex& e : t7.cells(1))
    if (e[0] % 2 != e[1] % 2) sys.rho[{e[0], e[1]}] = {kSwap};
  CHECK_NOTHROW(validate_stalk_system(sys));

  // Each square of the doubly periodic base splits into the triangles
  // (i, i+1, i+3) and (i, i+2, i+3); the two rims must transport equally.
  int nontrivial = 0;
  for (int i = 0; i < 7; ++i) {
    int a = i, b = (i + 1) % 7, c = (i + 2) % 7, d = (i + 3) % 7;
    IntMat p1 = sys.transport(b, d, 0).mul(sys.transport(a, b, 0));
    IntMat p2 = sys.transport(c, d, 0).mul(sys.transport(a, c, 0));
    CHECK(p1 == p2);
    if (p1 != IntMat::identity(2)) ++nontrivial;
  }
  CHECK(nontrivial > 0);
}
