#include <doctest.h>

#include <algorithm>
#include <vector>

#include "ihtk/corpus.hpp"
#include "ihtk/echelon.hpp"
#include "ihtk/spectral.hpp"

using namespace ihtk;

namespace {

using IV = std::vector<int>;

Perversity pz(int n) { return named_perversity("zero", n); }

// One-stage filtration by the whole complex.
FilteredChainComplex whole_filtration(const ChainComplex& c) {
  FilteredChainComplex fc;
  fc.c = c;
  std::vector<RatMat> stage(c.top() + 1);
  for (int d = 0; d <= c.top(); ++d)
    stage[d] = to_rat(IntMat::identity(c.dim(d)));
  fc.span.push_back(stage);
  return fc;
}

HomologyResult free_result(const Ring& r, const IV& betti) {
  HomologyResult h;
  h.ring = r;
  h.betti = betti;
  h.torsion.assign(betti.size(), {});
  return h;
}

bool all_later_pages_vanish(const SpectralSequence& ss) {
  FieldOps f(ss.ring);
  for (int r = 2; r <= ss.rmax; ++r)
    for (int p = 0; p < ss.steps; ++p)
      for (int q = 0; q + p <= ss.top; ++q)
        for (const auto& col : ss.d[r][p][q].col)
          for (const auto& [row, v] : col)
            if (f.norm(v) != 0) return false;
  return true;
}

IV abutment_totals(const SpectralSequence& ss) {
  IV out;
  for (const auto& row : ss.abutment) {
    int t = 0;
    for (int x : row) t += x;
    out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("filtration validation") {
  SimplicialComplex c3 = circle_complex(3);
  ChainComplex cz = c3.chain_complex(Ring::Z());
  ChainComplex cq = c3.chain_complex(Ring::Q());

  FilteredChainComplex bad = whole_filtration(cz);
  CHECK_THROWS_AS(bad.validate(), input_error);

  FilteredChainComplex ok = whole_filtration(cq);
  ok.validate();

  // stage covering only one degree
  FilteredChainComplex short_stage = ok;
  short_stage.span[0].pop_back();
  CHECK_THROWS_AS(short_stage.validate(), input_error);

  // wrong ambient rows
  FilteredChainComplex wrong_rows = ok;
  wrong_rows.span[0][0] = RatMat(2, 2);
  CHECK_THROWS_AS(wrong_rows.validate(), input_error);

  // a stage must sit inside the next one
  FilteredChainComplex not_nested = ok;
  {
    std::vector<RatMat> s0(2);
    s0[0] = to_rat(IntMat::identity(3));
    s0[1] = RatMat(3, 0);
    std::vector<RatMat> s1(2);
    s1[0] = RatMat(3, 1);
    s1[0].col[0].emplace_back(0, Rat(1));
    s1[1] = to_rat(IntMat::identity(3));
    not_nested.span = {s0, s1};
  }
  CHECK_THROWS_AS(not_nested.validate(), input_error);

  // an edge without its endpoints is not boundary stable
  FilteredChainComplex leaky = ok;
  {
    std::vector<RatMat> s0(2);
    s0[0] = RatMat(3, 0);
    s0[1] = RatMat(3, 1);
    s0[1].col[0].emplace_back(0, Rat(1));
    leaky.span.insert(leaky.span.begin(), s0);
  }
  CHECK_THROWS_AS(leaky.validate(), input_error);

  // the last stage must span everything
  FilteredChainComplex partial = ok;
  partial.span[0][1] = RatMat(3, 0);
  CHECK_THROWS_AS(partial.validate(), input_error);
}

TEST_CASE("one-stage filtration reproduces homology") {
  ChainComplex c = sphere2_complex().chain_complex(Ring::Q());
  SpectralSequence ss = compute_pages(whole_filtration(c));
  CHECK(ss.steps == 1);
  CHECK(ss.top == 2);
  CHECK(ss.rmax == 3);
  CHECK(ss.dim_at(1, 0, 0) == 1);
  CHECK(ss.dim_at(1, 0, 1) == 0);
  CHECK(ss.dim_at(1, 0, 2) == 1);
  // pages never move
  for (int r = 1; r <= ss.rmax; ++r) {
    CHECK(ss.dim_at(r, 0, 0) == 1);
    CHECK(ss.dim_at(r, 0, 2) == 1);
  }
  CHECK(ss.dim_at(99, 0, 2) == 1);  // pages are stable past rmax
  CHECK(all_later_pages_vanish(ss));
  CHECK(ss.abutment == std::vector<IV>{{1}, {0}, {1}});

  // representatives have identity coordinates in their own cell
  FieldOps f(Ring::Q());
  RatMat self = page_coords(ss, f, 1, 0, 2, ss.rep[1][0][2]);
  CHECK(self.nr == 1);
  CHECK(self.get(0, 0) == Rat(1));

  // a non-cycle chain is rejected
  RatMat edge(c.dim(1), 1);
  edge.col[0].emplace_back(0, Rat(1));
  CHECK_THROWS_AS(page_coords(ss, f, 1, 0, 1, edge), verify_error);
  CHECK_THROWS_AS(page_coords(ss, f, 1, 0, 9, edge), input_error);
  CHECK_THROWS_AS(page_coords(ss, f, 0, 0, 1, edge), input_error);
}

TEST_CASE("two-stage circle filtered by a vertex") {
  SimplicialComplex c3 = circle_complex(3);
  ChainComplex c = c3.chain_complex(Ring::Q());
  FilteredChainComplex fc;
  fc.c = c;
  std::vector<RatMat> s0(2);
  s0[0] = RatMat(3, 1);
  s0[0].col[0].emplace_back(c3.index_of(0, {0}), Rat(1));
  s0[1] = RatMat(3, 0);
  std::vector<RatMat> s1(2);
  s1[0] = to_rat(IntMat::identity(3));
  s1[1] = to_rat(IntMat::identity(3));
  fc.span = {s0, s1};

  SpectralSequence ss = compute_pages(fc);
  CHECK(ss.steps == 2);
  CHECK(ss.rmax == 2);
  CHECK(ss.dim_at(1, 0, 0) == 1);
  CHECK(ss.dim_at(1, 1, 0) == 1);
  CHECK(ss.dim_at(1, 0, 1) == 0);
  CHECK(ss.dim_at(1, 1, 1) == 0);
  // the only possible differential vanishes and the page survives
  CHECK(ss.d_at(1, 1, 0).nr == 1);
  CHECK(ss.d_at(1, 1, 0).col[0].empty());
  CHECK(ss.dim_at(2, 0, 0) == 1);
  CHECK(ss.dim_at(2, 1, 0) == 1);
  CHECK(ss.abutment == std::vector<IV>{{1, 0}, {0, 1}});
}

TEST_CASE("skeletal filtration of a point base") {
  CorpusSpace cs = corpus_build("cone_s1");
  RegularNeighborhood rn = regular_neighborhood(cs.X, {*cs.apex});
  SkeletalFiltration sf = skeletal_filtration(rn, pz(2), Ring::Q());
  CHECK(sf.fc.steps() == 1);
  SpectralSequence ss = compute_pages(sf.fc);
  CHECK(ss.dim_at(1, 0, 0) == 1);
  CHECK(ss.dim_at(1, 0, 1) == 0);
  CHECK(ss.dim_at(1, 0, 2) == 0);
  CHECK(abutment_totals(ss) == IV{1, 0, 0});

  DeletedNeighborhood dn = deleted_neighborhood(rn);
  SkeletalFiltration sfd = skeletal_filtration_deleted(rn, dn, pz(2), Ring::Q());
  CHECK(sfd.p.n == 1);
  SpectralSequence ssd = compute_pages(sfd.fc);
  CHECK(ssd.dim_at(1, 0, 0) == 1);
  CHECK(ssd.dim_at(1, 0, 1) == 1);
  CHECK(abutment_totals(ssd) == IV{1, 1});

  // the deleted tower belongs to its own filtration, not the full one
  CHECK_THROWS_AS(d1_cross_check(sfd, ss), input_error);

  E1Decomposition dec = e1_decomposition(rn, sf, ss);
  CHECK(dec.ok);
  REQUIRE(dec.rows.size() == 1);
  CHECK(dec.rows[0].lhs == 1);
  CHECK(dec.rows[0].pieces == IV{1});

  SUBCASE("retraction validation") {
    RegularNeighborhood broken = rn;
    broken.retraction.f.erase(broken.retraction.f.begin());
    CHECK_THROWS_WITH_AS(skeletal_filtration(broken, pz(2), Ring::Q()),
                         doctest::Contains("undefined"), input_error);

    // freeze a top-cell barycenter and push one of its faces toward a
    // different top cell: the connecting edge maps to incomparable
    // barycenters, which is not a cell of the subdivision
    RegularNeighborhood skewed = rn;
    int x = -1, y = -1, z = -1;
    for (const auto& [v, s] : skewed.carrier)
      if (x < 0 && s.size() == 2) x = v;
    REQUIRE(x >= 0);
    const Simplex sx = skewed.carrier.at(x);
    for (const auto& [v, s] : skewed.carrier) {
      if (s.size() != 3) continue;
      bool over = std::includes(s.begin(), s.end(), sx.begin(), sx.end());
      if (over && y < 0) y = v;
      if (!over && z < 0) z = v;
    }
    REQUIRE(y >= 0);
    REQUIRE(z >= 0);
    skewed.retraction.f[y] = y;
    skewed.retraction.f[x] = z;
    CHECK_THROWS_WITH_AS(skeletal_filtration(skewed, pz(2), Ring::Q()),
                         doctest::Contains("not a simplicial self-map"),
                         input_error);

    // collapsing everything to one frontier vertex stays simplicial but
    // moves the core
    RegularNeighborhood crushed = rn;
    int u = crushed.frontier.vertex_list(crushed.N.K)[0];
    for (auto& [v, w] : crushed.retraction.f) w = u;
    CHECK_THROWS_WITH_AS(skeletal_filtration(crushed, pz(2), Ring::Q()),
                         doctest::Contains("moves the core vertex"),
                         input_error);

    CHECK_THROWS_AS(skeletal_filtration(rn, pz(2), Ring::Z()), input_error);
  }
}

TEST_CASE("pinched torus point base and its deleted comparison") {
  CorpusSpace ps = corpus_build("pinched_torus");
  RegularNeighborhood rn = regular_neighborhood(ps.X, {*ps.apex});

  for (const Ring& ring : {Ring::Q(), Ring::Fp(2)}) {
    CAPTURE(ring.name());
    SsComparison cmp = ss_map_deleted_to_full(rn, pz(2), ring);
    CHECK(cmp.cutoff == 1);
    CHECK(cmp.ok);
    CHECK(cmp.sfull.dim_at(2, 0, 0) == 2);
    CHECK(cmp.sfull.dim_at(2, 0, 1) == 0);
    CHECK(cmp.sdel.dim_at(2, 0, 0) == 2);
    CHECK(cmp.sdel.dim_at(2, 0, 1) == 2);
    REQUIRE(cmp.verdicts.size() == 2);
    CHECK(cmp.verdicts[0].expect_zero == false);
    CHECK(cmp.verdicts[0].ok);
    CHECK(cmp.verdicts[1].expect_zero == true);
    CHECK(cmp.verdicts[1].ok);
    // the q = 0 page map is an invertible 2 x 2 matrix
    FieldOps f(ring);
    CHECK(rank_f(f, cmp.map_at(2, 0, 0)) == 2);
    CHECK(cmp.map_at(2, 0, 1).nr == 0);
  }
}

TEST_CASE("twisted bundle pages against the twisted cellular complex") {
  CorpusSpace t = corpus_build("twisted_cone_bundle");
  RegularNeighborhood rn = regular_neighborhood(t.X, t.base_circle);
  SkeletalFiltration sf = skeletal_filtration(rn, pz(3), Ring::Q());
  CHECK(sf.fc.steps() == 2);
  SpectralSequence ss = compute_pages(sf.fc);

  CHECK(ss.dim_at(2, 0, 0) == 1);
  CHECK(ss.dim_at(2, 1, 0) == 1);
  CHECK(ss.dim_at(2, 0, 1) == 0);
  CHECK(ss.dim_at(2, 1, 1) == 0);
  CHECK(abutment_totals(ss) == IV{1, 1, 0, 0});

  // cone-fiber stalks swap under the monodromy
  IntMat swap = IntMat::from_dense({{Int(0), Int(1)}, {Int(1), Int(0)}});
  StalkSystem cone_sys = stalk_system_from_gluing(
      free_result(Ring::Q(), {2, 0, 0}),
      {swap, IntMat(0, 0), IntMat(0, 0)}, {6, 13, 20}, Ring::Q());
  E2Comparison e2 = e2_vs_twisted(ss, cone_sys);
  CHECK(e2.ok);
  CHECK(e2.want[0][0] == 1);
  CHECK(e2.want[1][0] == 1);
  CHECK(e2.want[0][1] == 0);

  D1Comparison d1 = d1_cross_check(sf, ss);
  CHECK(d1.ok);
  CHECK(!d1.cells.empty());

  E1Decomposition dec = e1_decomposition(rn, sf, ss);
  CHECK(dec.ok);
  CHECK(!dec.rows.empty());

  DeletedNeighborhood dn = deleted_neighborhood(rn);
  SkeletalFiltration sfd = skeletal_filtration_deleted(rn, dn, pz(3), Ring::Q());
  SpectralSequence ssd = compute_pages(sfd.fc);
  StalkSystem link_sys = stalk_system_from_gluing(
      free_result(Ring::Q(), {2, 2}), {swap, swap}, {6, 13, 20}, Ring::Q());
  E2Comparison e2d = e2_vs_twisted(ssd, link_sys);
  CHECK(e2d.ok);
  CHECK(e2d.want[0][0] == 1);
  CHECK(e2d.want[1][0] == 1);
  CHECK(e2d.want[0][1] == 1);
  CHECK(e2d.want[1][1] == 1);
  CHECK(d1_cross_check(sfd, ssd).ok);

  CHECK_THROWS_AS(e2_vs_twisted(ss, stalk_system_from_gluing(
                                        free_result(Ring::Fp(2), {2, 0, 0}),
                                        {swap, IntMat(0, 0), IntMat(0, 0)},
                                        {6, 13, 20}, Ring::Fp(2))),
                  input_error);

  SUBCASE("deleted-to-full comparison") {
    SsComparison cmp = ss_map_deleted_to_full(rn, pz(3), Ring::Q());
    CHECK(cmp.cutoff == 1);
    CHECK(cmp.ok);
    for (const auto& v : cmp.verdicts) {
      CAPTURE(v.p);
      CAPTURE(v.q);
      CHECK(v.expect_zero == (v.q >= 1));
      CHECK(v.ok);
    }
    // identity degrees carry 1 x 1 invertible maps
    FieldOps f(Ring::Q());
    CHECK(rank_f(f, cmp.map_at(2, 0, 0)) == 1);
    CHECK(rank_f(f, cmp.map_at(2, 1, 0)) == 1);
  }

  SUBCASE("pages are deterministic") {
    SpectralSequence again = compute_pages(sf.fc);
    CHECK(again.dim == ss.dim);
    for (int r = 1; r <= ss.rmax; ++r)
      for (int p = 0; p < ss.steps; ++p)
        for (int q = 0; q + p <= ss.top; ++q) {
          CHECK(again.d[r][p][q].col == ss.d[r][p][q].col);
          CHECK(again.rep[r][p][q].col == ss.rep[r][p][q].col);
        }
  }
}

TEST_CASE("three-stage tower over a torus core") {
  MappingTorus mt = product_with_circle(torus7_complex(), 3);
  FilteredComplex x3 = trivial_filtration(mt.total);
  std::vector<int> base;
  for (int v = 0; v < 7; ++v) base.push_back(v);
  RegularNeighborhood rn = regular_neighborhood(x3, base);
  REQUIRE(rn.J.size() == 3);
  CHECK(rn.J[0].total() < rn.J[1].total());
  CHECK(rn.J[1].total() < rn.J[2].total());
  CHECK(rn.J[2] == Subcomplex::whole(rn.N.K));

  SkeletalFiltration sf = skeletal_filtration(rn, pz(3), Ring::Q());
  CHECK(sf.fc.steps() == 3);
  SpectralSequence ss = compute_pages(sf.fc);
  CHECK(abutment_totals(ss) == IV{1, 2, 1, 0});
  D1Comparison d1 = d1_cross_check(sf, ss);
  CHECK(d1.ok);
  bool saw_p2 = false;
  for (const auto& cell : d1.cells) saw_p2 = saw_p2 || cell.p == 2;
  CHECK(saw_p2);
}

TEST_CASE("product bundle pages collapse to the Kunneth dimensions") {
  CorpusSpace s = corpus_build("s1_x_cone_t2");
  RegularNeighborhood rn = regular_neighborhood(s.X, s.base_circle);
  SkeletalFiltration sf = skeletal_filtration(rn, pz(4), Ring::Q());
  SpectralSequence ss = compute_pages(sf.fc);

  CHECK(ss.dim_at(2, 0, 0) == 1);
  CHECK(ss.dim_at(2, 0, 1) == 2);
  CHECK(ss.dim_at(2, 1, 0) == 1);
  CHECK(ss.dim_at(2, 1, 1) == 2);
  for (int p = 0; p < ss.steps; ++p)
    for (int q = 2; q + p <= ss.top; ++q) CHECK(ss.dim_at(2, p, q) == 0);
  CHECK(all_later_pages_vanish(ss));
  CHECK(abutment_totals(ss) == IV{1, 3, 2, 0, 0});

  StalkSystem cone_sys = trivial_stalk_system(
      circle_complex(3), Ring::Q(), free_result(Ring::Q(), {1, 2, 0, 0}));
  E2Comparison e2 = e2_vs_twisted(ss, cone_sys);
  CHECK(e2.ok);

  CHECK(d1_cross_check(sf, ss).ok);
}

TEST_CASE("deleted product bundle carries the torus fiber") {
  CorpusSpace s = corpus_build("s1_x_cone_t2");
  RegularNeighborhood rn = regular_neighborhood(s.X, s.base_circle);
  DeletedNeighborhood dn = deleted_neighborhood(rn);
  SkeletalFiltration sfd = skeletal_filtration_deleted(rn, dn, pz(4), Ring::Q());
  SpectralSequence ssd = compute_pages(sfd.fc);

  StalkSystem link_sys = trivial_stalk_system(
      circle_complex(3), Ring::Q(), free_result(Ring::Q(), {1, 2, 1}));
  E2Comparison e2 = e2_vs_twisted(ssd, link_sys);
  CHECK(e2.ok);
  CHECK(abutment_totals(ssd) == IV{1, 3, 3, 1});
}

TEST_CASE("page map cutoff follows the perversity") {
  CorpusSpace s = corpus_build("s1_x_cone_t2");
  RegularNeighborhood rn = regular_neighborhood(s.X, s.base_circle);

  SsComparison lo = ss_map_deleted_to_full(rn, pz(4), Ring::Q());
  CHECK(lo.cutoff == 2);
  CHECK(lo.ok);
  FieldOps f(Ring::Q());
  CHECK(rank_f(f, lo.map_at(2, 0, 0)) == 1);
  CHECK(rank_f(f, lo.map_at(2, 0, 1)) == 2);
  CHECK(rank_f(f, lo.map_at(2, 1, 1)) == 2);

  SsComparison hi =
      ss_map_deleted_to_full(rn, named_perversity("top", 4), Ring::Q());
  CHECK(hi.cutoff == 1);
  CHECK(hi.ok);
  bool saw_zero_q1 = false;
  for (const auto& v : hi.verdicts)
    if (v.q == 1) {
      CHECK(v.expect_zero);
      saw_zero_q1 = saw_zero_q1 || v.ok;
    }
  CHECK(saw_zero_q1);
}
