#include "ihtk/checks.hpp"

#include <algorithm>

#include "ihtk/corpus.hpp"
#include "ihtk/spectral.hpp"

namespace ihtk {

namespace {

void add_row(std::vector<CheckRow>& rows, const std::string& name, bool ok,
             const std::string& detail = "") {
  rows.push_back({name, ok, detail});
}

/// Runs f and converts a verification throw into a failing row.
template <class F>
void guarded(std::vector<CheckRow>& rows, const std::string& name, F&& f) {
  try {
    f();
  } catch (const verify_error& e) {
    add_row(rows, name, false, e.what());
  }
}

std::string betti_text(const std::vector<int>& b) {
  std::string s = "(";
  for (size_t i = 0; i < b.size(); ++i)
    s += (i ? "," : "") + std::to_string(b[i]);
  return s + ")";
}

/// a + kb * b over the integers, columnwise.
IntMat imat_add(const IntMat& a, const IntMat& b, const Int& kb) {
  IntMat out = a;
  for (int j = 0; j < out.nc; ++j)
    out.col[j] = col_axpy(out.col[j], kb, b.col[j]);
  return out;
}

}  // namespace

std::vector<CheckRow> check_cone_formula() {
  std::vector<CheckRow> rows;
  struct LinkCase {
    std::string name;
    SimplicialComplex k;
    int dim;
  };
  std::vector<LinkCase> links = {{"s1", circle_complex(3), 1},
                                 {"t2", torus7_complex(), 2},
                                 {"s1+s1", two_circles_complex(), 1}};
  for (const LinkCase& lc : links) {
    FilteredComplex l = trivial_filtration(lc.k, lc.dim);
    for (const Perversity& p : all_perversities(lc.dim + 1)) {
      std::string name = "cone-formula " + lc.name + " " + betti_text(p.p);
      guarded(rows, name, [&] {
        ConeFormulaReport r = cone_formula_check(l, p, Ring::Z());
        add_row(rows, name, r.ok,
                r.ok ? "" : (r.failures.empty() ? "mismatch" : r.failures[0]));
      });
    }
  }
  return rows;
}

std::vector<CheckRow> check_exactness() {
  std::vector<CheckRow> rows;
  for (const std::string& name : corpus_names()) {
    CorpusSpace cs = corpus_build(name);
    // pair of the complex against the closed star of its least vertex
    Subcomplex seed = Subcomplex::none(cs.X.K);
    seed.add_closed(cs.X.K, {cs.X.K.vertices().front()});
    auto [star, link] = star_link(cs.X.K, seed);
    guarded(rows, "les " + name, [&] {
      LesZ les = les_pair_z(cs.X.K.chain_complex(Ring::Z()), star.span(cs.X.K));
      check_exact_z(les.nodes());
      add_row(rows, "les " + name, true);
    });
    // same pair on the intersection chains when the space is stratified
    if (!cs.X.plain()) {
      guarded(rows, "les-ic " + name, [&] {
        IntersectionComplex ic = intersection_chain_complex(
            cs.X, named_perversity("zero", cs.X.n), Ring::Z());
        Subcomplex bottom = cs.X.skeleton(cs.X.bottom());
        LesZ les = les_pair_z(ic.cc, ic_subcomplex_span(ic, cs.X, bottom));
        check_exact_z(les.nodes());
        add_row(rows, "les-ic " + name, true);
      });
    }
    // cover by the star and the closure of the cells it misses
    guarded(rows, "mv " + name, [&] {
      Subcomplex rest = Subcomplex::none(cs.X.K);
      for (const Simplex& s : cs.X.K.maximal_cells()) {
        bool meets = false;
        for (int v : s) meets = meets || seed.has(0, cs.X.K.index_of(0, {v}));
        if (!meets) rest.add_closed(cs.X.K, s);
      }
      if (!(star.unite(rest) == Subcomplex::whole(cs.X.K)))
        rest = Subcomplex::whole(cs.X.K);  // degenerate split: the star covers everything
      MvZ mv = mayer_vietoris_z(cs.X.K.chain_complex(Ring::Z()),
                                star.span(cs.X.K), rest.span(cs.X.K),
                                star.intersect(rest).span(cs.X.K));
      check_exact_z(mv.nodes());
      add_row(rows, "mv " + name, true);
    });
  }
  return rows;
}

std::vector<CheckRow> check_prism() {
  std::vector<CheckRow> rows;
  for (int i = 0; i <= 4; ++i) {
    std::string name = "prism pieces dim " + std::to_string(i);
    bool ok = static_cast<int>(prism_decomposition(i).size()) == i + 1;
    add_row(rows, name, ok, ok ? "" : "wrong piece count");
  }
  for (const std::string& name : corpus_names()) {
    CorpusSpace cs = corpus_build(name);
    Cylinder cy = cylinder(cs.X.K);
    FilteredComplex cyf = cy.filtered(cs.X);
    Perversity pc = named_perversity("zero", cyf.n);
    AllowabilityTable at =
        allowability_table(cs.X, named_perversity("zero", cs.X.n));
    std::vector<IntMat> e0 = chain_map_matrices(cs.X.K, cy.C, cy.end0);
    std::vector<IntMat> e1 = chain_map_matrices(cs.X.K, cy.C, cy.end1);
    ChainComplex cb = cs.X.K.chain_complex(Ring::Z());
    ChainComplex cc = cy.C.chain_complex(Ring::Z());
    bool chain_ok = true, allow_ok = true;
    int dmax = std::min(4, cs.X.K.dim());
    for (int d = 0; d <= dmax; ++d) {
      IntMat F = cy.prism_matrix(d);
      IntMat lhs = cc.boundary(d + 1).mul(F);
      if (d > 0)
        lhs = imat_add(lhs, cy.prism_matrix(d - 1).mul(cb.boundary(d)), Int(1));
      IntMat rhs = imat_add(e1[d], e0[d], Int(-1));
      chain_ok = chain_ok && lhs.col == rhs.col;
      for (int c : at.indices(d))
        for (const auto& [r, v] : F.col[c])
          allow_ok = allow_ok && is_allowable(cyf, pc, cy.C.cells(d + 1)[r]);
    }
    add_row(rows, "prism " + name, chain_ok && allow_ok,
            chain_ok ? (allow_ok ? "" : "prism cell not allowable")
                     : "chain identity fails");
  }
  return rows;
}

std::vector<CheckRow> check_subdivision() {
  std::vector<CheckRow> rows;
  std::vector<std::string> pvs = {"zero", "lower-middle", "upper-middle"};
  for (const std::string& name : corpus_names()) {
    CorpusSpace cs = corpus_build(name);
    FilteredComplex sd = subdivide_filtered(cs.X);
    for (const std::string& pn : pvs) {
      Perversity p = named_perversity(pn, cs.X.n);
      std::string row = "subdivision " + name + " " + pn;
      guarded(rows, row, [&] {
        HomologyResult a = IH(cs.X, p, Ring::Z());
        HomologyResult b = IH(sd, p, Ring::Z());
        add_row(rows, row, a == b,
                a == b ? ""
                       : "coarse " + betti_text(a.betti) + " vs subdivided " +
                             betti_text(b.betti));
      });
    }
  }
  return rows;
}

std::vector<CheckRow> check_e2() {
  std::vector<CheckRow> rows;
  for (const std::string& name :
       {std::string("s1_x_cone_t2"), std::string("twisted_cone_bundle")}) {
    std::string row = "e2 " + name;
    guarded(rows, row, [&] {
      CorpusSpace cs = corpus_build(name);
      Perversity pv = named_perversity("zero", cs.X.n);
      RegularNeighborhood rn = regular_neighborhood(cs.X, cs.base_circle);
      SkeletalFiltration sf = skeletal_filtration(rn, pv, Ring::Q());
      SpectralSequence ss = compute_pages(sf.fc);
      FiberSystems fs = fiber_systems(cs, pv, Ring::Q());
      E2Comparison e2 = e2_vs_twisted(ss, fs.cone);
      bool collapse = true;
      for (int r = 2; r <= ss.rmax; ++r)
        for (int p = 0; p < ss.steps; ++p)
          for (int q = 0; q + p <= ss.top; ++q)
            for (const auto& col : ss.d[r][p][q].col)
              collapse = collapse && col.empty();
      add_row(rows, row, e2.ok && collapse,
              e2.ok ? (collapse ? "" : "pages move after the second")
                    : "second page differs from twisted cellular homology");
    });
  }
  return rows;
}

std::vector<CheckRow> check_ss_map() {
  std::vector<CheckRow> rows;
  struct Case {
    std::string space;
    bool apex_base;
  };
  for (const Case& c : {Case{"pinched_torus", true}, Case{"s1_x_cone_t2", false},
                        Case{"twisted_cone_bundle", false}}) {
    std::string row = "ss-map " + c.space;
    guarded(rows, row, [&] {
      CorpusSpace cs = corpus_build(c.space);
      Perversity pv = named_perversity("zero", cs.X.n);
      std::vector<int> base =
          c.apex_base ? std::vector<int>{*cs.apex} : cs.base_circle;
      RegularNeighborhood rn = regular_neighborhood(cs.X, base);
      SsComparison cmp = ss_map_deleted_to_full(rn, pv, Ring::Q());
      add_row(rows, row, cmp.ok,
              cmp.ok ? "" : "verdict failure against the cutoff");
    });
  }
  return rows;
}

}  // namespace ihtk
