#include <doctest.h>

#include <sstream>

#include "ihtk/corpus.hpp"
#include "ihtk/simplicial.hpp"

using namespace ihtk;

namespace {

HomologyResult hom(const SimplicialComplex& k, const Ring& r = Ring::Z()) {
  ChainComplex c = k.chain_complex(r);
  c.validate();
  return homology(c);
}

using IV = std::vector<int>;

}  // namespace

TEST_CASE("closure and canonical order") {
  SimplicialComplex tri = SimplicialComplex::close({{2, 0, 1}});
  CHECK(tri.f_vector() == IV{3, 3, 1});
  CHECK(tri.cells(1) == std::vector<Simplex>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(tri.contains({0, 2}));
  CHECK(!tri.contains({0, 3}));

  SimplicialComplex empty = SimplicialComplex::close({});
  CHECK(empty.dim() == -1);
  CHECK(empty.euler() == 0);

  CHECK_THROWS_AS(SimplicialComplex::close({{0, 1, 0}}), input_error);

  SimplicialComplex t7 = torus7_complex();
  CHECK(t7.f_vector() == IV{7, 21, 14});
  CHECK(t7.euler() == 0);
  CHECK(t7.maximal_cells().size() == 14);
}

TEST_CASE("ordinary homology of the corpus complexes") {
  CHECK(hom(sphere2_complex()).betti == IV{1, 0, 1});
  CHECK(hom(torus7_complex()).betti == IV{1, 2, 1});

  HomologyResult rp2 = hom(rp2_complex());
  CHECK(rp2.betti == IV{1, 0, 0});
  CHECK(rp2.torsion[1] == std::vector<Int>{2});
  CHECK(rp2_complex().f_vector() == IV{6, 15, 10});

  CHECK(hom(corpus_build("pinched_torus").X.K).betti == IV{1, 1, 1});
  CHECK(hom(corpus_build("susp_t2").X.K).betti == IV{1, 0, 2, 1});
  CHECK(hom(corpus_build("cone_t2").X.K).betti == IV{1, 0, 0, 0});
  CHECK(hom(corpus_build("twisted_cone_bundle").X.K).betti == IV{1, 1, 0, 0});
}

TEST_CASE("barycentric subdivision") {
  Subdivision se = barycentric_subdivision(SimplicialComplex::close({{0, 1}}));
  CHECK(se.sd.f_vector() == IV{3, 2});
  CHECK(se.vertex_id(1, 0) == 2);
  CHECK(se.original_cell(2) == Simplex{0, 1});
  CHECK(se.cell_of(0) == std::pair<int, int>{0, 0});

  Subdivision sc = barycentric_subdivision(circle_complex(3));
  CHECK(sc.sd.f_vector() == IV{6, 6});

  Subdivision st = barycentric_subdivision(torus7_complex());
  CHECK(st.sd.vertex_count() == 42);
  CHECK(st.sd.euler() == 0);
  CHECK(hom(st.sd).betti == IV{1, 2, 1});

  HomologyResult rp2 = hom(barycentric_subdivision(rp2_complex()).sd);
  CHECK(rp2.betti == IV{1, 0, 0});
  CHECK(rp2.torsion[1] == std::vector<Int>{2});

  SimplicialComplex c3 = circle_complex(3);
  Subcomplex path = full_subcomplex(c3, {0, 1});
  Subcomplex im = barycentric_subdivision(c3).image(path);
  CHECK(im.total() == 5);
  CHECK(im.closed(barycentric_subdivision(c3).sd));
}

TEST_CASE("euler characteristic is stable under subdivision") {
  for (const std::string& name : corpus_names()) {
    CorpusSpace s = corpus_build(name);
    CHECK(barycentric_subdivision(s.X.K).sd.euler() == s.X.K.euler());
  }
}

TEST_CASE("star and link") {
  SimplicialComplex tri = SimplicialComplex::close({{0, 1, 2}});
  Subcomplex v = Subcomplex::none(tri);
  v.add_closed(tri, {0});
  auto [star, link] = star_link(tri, v);
  CHECK(star == Subcomplex::whole(tri));
  CHECK(link.count(0) == 2);
  CHECK(link.count(1) == 1);
  CHECK(link.has(1, tri.index_of(1, {1, 2})));

  std::vector<Simplex> fan;
  for (int i = 1; i <= 5; ++i) fan.push_back({0, i, i + 1});
  fan.push_back({0, 1, 6});
  SimplicialComplex disk = SimplicialComplex::close(fan);
  Subcomplex c = Subcomplex::none(disk);
  c.add_closed(disk, {0});
  auto [dstar, dlink] = star_link(disk, c);
  CHECK(dstar == Subcomplex::whole(disk));
  CHECK(dlink.count(0) == 6);
  CHECK(dlink.count(1) == 6);
  CHECK(dlink.closed(disk));
  CHECK(hom(dlink.extract(disk)).betti == IV{1, 1});

  // Vertex star in the subdivided suspension: the link is a subdivided torus.
  SimplicialComplex susp = corpus_build("susp_t2").X.K;
  Subdivision sd = barycentric_subdivision(susp);
  Subcomplex apex = Subcomplex::none(sd.sd);
  apex.add_closed(sd.sd, {sd.vertex_id(0, susp.index_of(0, {7}))});
  auto [sstar, slink] = star_link(sd.sd, apex);
  CHECK(slink.count(0) == 42);
  CHECK(slink.count(1) == 126);
  CHECK(slink.count(2) == 84);
  CHECK(hom(slink.extract(sd.sd)).betti == IV{1, 2, 1});
}

TEST_CASE("prism decomposition telescopes") {
  auto p0 = prism_decomposition(0);
  REQUIRE(p0.size() == 1);
  CHECK(p0[0].sign == 1);
  CHECK(p0[0].cell == Simplex{0, 1});

  auto p1 = prism_decomposition(1);
  REQUIRE(p1.size() == 2);
  CHECK(p1[0].sign == 1);
  CHECK(p1[0].cell == Simplex{0, 2, 3});
  CHECK(p1[1].sign == -1);
  CHECK(p1[1].cell == Simplex{0, 1, 3});

  for (int i = 0; i <= 6; ++i) {
    Simplex full;
    for (int t = 0; t <= i; ++t) full.push_back(t);
    SimplicialComplex k = SimplicialComplex::close({full});
    Cylinder cyl = cylinder(k);
    ChainComplex ck = k.chain_complex(Ring::Z());
    ChainComplex cc = cyl.C.chain_complex(Ring::Z());
    cc.validate();
    std::vector<IntMat> bot = chain_map_matrices(k, cyl.C, cyl.end0);
    std::vector<IntMat> top = chain_map_matrices(k, cyl.C, cyl.end1);
    for (int d = 0; d <= i; ++d) {
      IntMat lhs = cc.boundary(d + 1).mul(cyl.prism_matrix(d));
      if (d > 0) lhs = lhs.add(cyl.prism_matrix(d - 1).mul(ck.boundary(d)));
      CHECK(lhs == top[d].sub(bot[d]));
    }
  }
}

TEST_CASE("cylinder") {
  Cylinder cyl = cylinder(SimplicialComplex::close({{0, 1}}));
  CHECK(cyl.C.f_vector() == IV{4, 5, 2});
  CHECK(hom(cyl.C).betti == IV{1, 0, 0});
  CHECK(is_simplicial(cyl.C, cyl.base, cyl.proj));
  CHECK(is_simplicial(cyl.base, cyl.C, cyl.end0));
  CHECK(is_simplicial(cyl.base, cyl.C, cyl.end1));

  FilteredComplex fx = make_filtered(cyl.base, 1, std::map<int, int>{{0, 0}});
  FilteredComplex fc = cyl.filtered(fx);
  CHECK(fc.n == 2);
  CHECK(fc.level(cyl.vid(0, 0)) == 1);
  CHECK(fc.level(cyl.vid(1, 0)) == 1);
  CHECK(fc.level(cyl.vid(1, 1)) == 2);
}

TEST_CASE("products and mapping tori") {
  MappingTorus pent = product_with_circle(SimplicialComplex::close({{0}}), 5);
  CHECK(pent.total.f_vector() == IV{5, 5});
  CHECK(hom(pent.total).betti == IV{1, 1});
  CHECK(pent.total == pent.circle);

  MappingTorus ann = product_with_circle(SimplicialComplex::close({{0, 1}}), 3);
  CHECK(ann.total.f_vector() == IV{6, 12, 6});
  CHECK(hom(ann.total).betti == IV{1, 1, 0});

  MappingTorus tor = product_with_circle(circle_complex(3), 3);
  CHECK(tor.total.f_vector() == IV{9, 27, 18});
  CHECK(hom(tor.total).betti == IV{1, 2, 1});
  CHECK(is_simplicial(tor.total, tor.circle, tor.proj));
  CHECK(is_simplicial(tor.fiber, tor.total, tor.fiber_inclusion(1)));

  VertexMap swap;
  swap.f[0] = 1;
  swap.f[1] = 0;
  MappingTorus dbl = mapping_torus(SimplicialComplex::close({{0}, {1}}), swap, 3);
  CHECK(dbl.total.f_vector() == IV{6, 6});
  CHECK(hom(dbl.total).betti == IV{1, 1});

  SimplicialComplex c3 = circle_complex(3);
  VertexMap id;
  for (int v : c3.vertices()) id.f[v] = v;
  CHECK(mapping_torus(c3, id, 3).total == tor.total);

  VertexMap dblmap;
  for (int v = 0; v < 7; ++v) dblmap.f[v] = (2 * v) % 7;
  MappingTorus t7m = mapping_torus(torus7_complex(), dblmap, 3);
  CHECK(t7m.total.euler() == 0);
  CHECK(is_simplicial(t7m.total, t7m.circle, t7m.proj));
  ChainComplex a = torus7_complex().chain_complex(Ring::Z());
  ChainMap fm = chain_map(a, torus7_complex(), a, torus7_complex(), dblmap);
  fm.validate();

  CHECK_THROWS_AS(product_with_circle(circle_complex(3), 2), input_error);
  VertexMap bad;
  bad.f[0] = 0;
  bad.f[1] = 1;
  bad.f[2] = 0;
  CHECK_THROWS_AS(mapping_torus(circle_complex(3), bad, 3), input_error);
}

TEST_CASE("cones") {
  Cone c2 = cone(trivial_filtration(SimplicialComplex::close({{0}, {1}})));
  CHECK(c2.apex == 2);
  CHECK(c2.C.K.f_vector() == IV{3, 2});

  Cone cf = cone(trivial_filtration(circle_complex(3)));
  CHECK(cf.apex == 3);
  CHECK(cf.C.K.f_vector() == IV{4, 6, 3});
  CHECK(hom(cf.C.K).betti == IV{1, 0, 0});
  CHECK(cf.C.n == 2);
  CHECK(cf.C.level(cf.apex) == 0);
  CHECK(cf.C.level(0) == 2);
  CHECK(cf.C.codim1_empty());

  CorpusSpace ct = corpus_build("cone_t2");
  CHECK(ct.X.K.vertex_count() == 8);
  CHECK(ct.X.K.euler() == 1);
  CHECK(*ct.apex == 7);
}

TEST_CASE("filtration bookkeeping") {
  CorpusSpace cs = corpus_build("cone_s1");
  CHECK(cs.X.n == 2);
  CHECK(cs.X.bottom() == 0);
  CHECK(cs.X.bottom_stratum_vertices() == IV{3});
  CHECK(cs.X.skeleton_face_dim({0, 1, 3}, 0) == 0);
  CHECK(cs.X.skeleton_face_dim({0, 1, 3}, 2) == 2);
  CHECK(cs.X.skeleton_face_dim({0, 1}, 1) == kEmptyFaceDim);
  CHECK(cs.X.skeleton(0).total() == 1);
  CHECK(cs.X.skeleton(1).total() == 1);
  CHECK(cs.X.skeleton(2) == Subcomplex::whole(cs.X.K));
  CHECK(!cs.X.plain());
  CHECK(corpus_build("torus7").X.plain());

  FilteredComplex sub = subdivide_filtered(cs.X);
  CHECK(sub.n == 2);
  CHECK(sub.K.vertex_count() == 13);
  CHECK(sub.skeleton_vertices(0).size() == 1);
  CHECK(hom(sub.K).betti == IV{1, 0, 0});

  // Non-full skeleton input triggers one subdivision.
  SimplicialComplex c3 = circle_complex(3);
  Subcomplex sk = Subcomplex::none(c3);
  sk.add_closed(c3, {0});
  sk.add_closed(c3, {1});
  CHECK(!sk.full(c3));
  FilteredComplex f = make_filtered(c3, 1, std::vector<Subcomplex>{sk});
  CHECK(f.subdivided_input);
  CHECK(f.K.ncells(0) == 6);
  CHECK(f.skeleton_vertices(0) == IV{0, 1});

  Subcomplex fullsk = full_subcomplex(c3, {0, 1});
  FilteredComplex g = make_filtered(c3, 1, std::vector<Subcomplex>{fullsk});
  CHECK(!g.subdivided_input);
  CHECK(g.K == c3);
  CHECK(g.level(0) == 0);
  CHECK(g.level(2) == 1);

  CHECK_THROWS_AS(make_filtered(c3, 0, std::map<int, int>{}), input_error);
  CHECK_THROWS_AS(make_filtered(c3, 1, std::map<int, int>{{0, 5}}), input_error);
}

TEST_CASE("derived neighborhood of the cone point") {
  CorpusSpace cs = corpus_build("cone_s1");
  RegularNeighborhood rn = regular_neighborhood(cs.X, {3});
  CHECK(rn.N.K.vertex_count() == 7);
  CHECK(rn.N.n == 2);
  CHECK(rn.base_dim() == 0);
  REQUIRE(rn.J.size() == 1);
  CHECK(rn.J[0] == Subcomplex::whole(rn.N.K));
  CHECK(rn.frontier.count(0) == 6);
  CHECK(rn.frontier.count(1) == 6);
  CHECK(rn.frontier.closed(rn.N.K));
  CHECK(rn.frontier.intersect(rn.base).empty());
  CHECK(hom(rn.frontier.extract(rn.N.K)).betti == IV{1, 1});
  CHECK(hom(rn.N.K).betti == IV{1, 0, 0});

  int bapex = rn.base.vertex_list(rn.N.K)[0];
  CHECK(rn.N.level(bapex) == 0);
  for (int v : rn.N.K.vertices()) CHECK(rn.retraction(v) == bapex);
  CHECK(is_simplicial(rn.N.K, rn.N.K, rn.retraction));
  CHECK(rn.piece({3}) == Subcomplex::whole(rn.N.K));
  CHECK(rn.Y.f_vector() == IV{1});
}

TEST_CASE("derived neighborhood of the pinch point") {
  CorpusSpace ps = corpus_build("pinched_torus");
  RegularNeighborhood rn = regular_neighborhood(ps.X, {*ps.apex});
  CHECK(rn.frontier.count(0) == 12);
  CHECK(rn.frontier.count(1) == 12);
  CHECK(hom(rn.frontier.extract(rn.N.K)).betti == IV{2, 2});

  DeletedNeighborhood dn = deleted_neighborhood(rn);
  CHECK(dn.D.n == 1);
  CHECK(dn.D.plain());
  CHECK(hom(dn.D.K).betti == IV{2, 2});
  REQUIRE(dn.J.size() == 1);
  CHECK(dn.J[0] == Subcomplex::whole(dn.D.K));
}

TEST_CASE("derived neighborhood of a circle base") {
  CorpusSpace t = corpus_build("twisted_cone_bundle");
  CHECK(t.X.n == 3);
  CHECK(t.X.bottom() == 1);
  CHECK(t.base_circle == IV{6, 13, 20});
  CHECK(t.X.codim1_empty());
  RegularNeighborhood rn = regular_neighborhood(t.X, t.base_circle);
  CHECK(rn.base_dim() == 1);
  CHECK(rn.J[1] == Subcomplex::whole(rn.N.K));
  CHECK(rn.J[0].total() < rn.J[1].total());
  CHECK(rn.J[0].subset_of(rn.J[1]));
  CHECK(hom(rn.N.K).betti == IV{1, 1, 0, 0});
  CHECK(hom(rn.frontier.extract(rn.N.K)).betti == IV{1, 2, 1});
  for (int v : rn.base.vertex_list(rn.N.K)) CHECK(rn.retraction(v) == v);
  CHECK(is_simplicial(rn.N.K, rn.N.K, rn.retraction));
  CHECK(hom(rn.base.extract(rn.N.K)).betti == IV{1, 1});

  // Pieces over base cells cover the top filtration step.
  Subcomplex cover = rn.J[0];
  for (const Simplex& e : rn.Y.cells(1)) cover = cover.unite(rn.piece(e));
  CHECK(cover == Subcomplex::whole(rn.N.K));

  DeletedNeighborhood dn = deleted_neighborhood(rn);
  CHECK(dn.D.n == 2);
  CHECK(hom(dn.D.K).betti == IV{1, 2, 1});
}

TEST_CASE("derived neighborhood of the product base") {
  CorpusSpace s = corpus_build("s1_x_cone_t2");
  CHECK(s.X.n == 4);
  CHECK(s.base_circle.size() == 3);
  CHECK(hom(s.X.K).betti == IV{1, 1, 0, 0, 0});
  RegularNeighborhood rn = regular_neighborhood(s.X, s.base_circle);
  CHECK(rn.base_dim() == 1);
  CHECK(rn.J[0].total() < rn.J[1].total());
  CHECK(rn.J[1] == Subcomplex::whole(rn.N.K));
  SimplicialComplex fr = rn.frontier.extract(rn.N.K);
  CHECK(fr.euler() == 0);
  CHECK(hom(fr).betti == IV{1, 3, 3, 1});
}

TEST_CASE("interchange format round trips") {
  for (const std::string& name :
       {std::string("cone_s1"), std::string("pinched_torus"),
        std::string("twisted_cone_bundle"), std::string("torus7")}) {
    CorpusSpace s = corpus_build(name);
    std::stringstream ss;
    write_filtered(ss, s.X);
    std::stringstream in(ss.str());
    FilteredComplex r = read_filtered(in);
    CHECK(r.K == s.X.K);
    CHECK(r.n == s.X.n);
    for (int v : r.K.vertices()) CHECK(r.level(v) == s.X.level(v));
    std::stringstream again;
    write_filtered(again, r);
    CHECK(again.str() == ss.str());
  }

  std::stringstream nodim("s 0 1\n");
  CHECK_THROWS_AS(read_filtered(nodim), input_error);
  std::stringstream unknown("dim 1\nt 0 1\n");
  CHECK_THROWS_AS(read_filtered(unknown), input_error);
  std::stringstream dup("dim 1\ns 0 0\n");
  CHECK_THROWS_AS(read_filtered(dup), input_error);
  std::stringstream strat("dim 1\ns 0 1\nstratum 0: 7\n");
  CHECK_THROWS_AS(read_filtered(strat), input_error);
  CHECK_THROWS_AS(corpus_build("nope"), input_error);
}
