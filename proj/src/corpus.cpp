#include "ihtk/corpus.hpp"

#include "ihtk/exact.hpp"

namespace ihtk {

SimplicialComplex circle_complex(int m) {
  if (m < 3) throw input_error("circle needs at least 3 vertices");
  std::vector<Simplex> edges;
  for (int l = 0; l + 1 < m; ++l) edges.push_back({l, l + 1});
  edges.push_back({0, m - 1});
  return SimplicialComplex::close(edges);
}

SimplicialComplex two_circles_complex() {
  return SimplicialComplex::close(
      {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

SimplicialComplex sphere2_complex() {
  return SimplicialComplex::close({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

SimplicialComplex torus7_complex() {
  std::vector<Simplex> tris;
  for (int i = 0; i < 7; ++i) {
    tris.push_back(make_simplex({i, (i + 1) % 7, (i + 3) % 7}));
    tris.push_back(make_simplex({i, (i + 2) % 7, (i + 3) % 7}));
  }
  return SimplicialComplex::close(tris);
}

SimplicialComplex rp2_complex() {
  return SimplicialComplex::close({{0, 1, 3},
                                   {0, 1, 4},
                                   {0, 2, 3},
                                   {0, 2, 5},
                                   {0, 4, 5},
                                   {1, 2, 4},
                                   {1, 2, 5},
                                   {1, 3, 5},
                                   {2, 3, 4},
                                   {3, 4, 5}});
}

namespace {

CorpusSpace plain_space(std::string name, SimplicialComplex k) {
  CorpusSpace s;
  s.name = std::move(name);
  s.X = trivial_filtration(k);
  return s;
}

CorpusSpace cone_space(std::string name, const SimplicialComplex& link) {
  Cone c = cone(trivial_filtration(link));
  CorpusSpace s;
  s.name = std::move(name);
  s.X = c.C;
  s.apex = c.apex;
  return s;
}

CorpusSpace pinched_torus_space() {
  // Annulus with both boundary circles coned to one vertex.
  MappingTorus ann = product_with_circle(SimplicialComplex::close({{0, 1}}), 3);
  int p = 6;
  std::vector<Simplex> gens;
  for (const Simplex& s : ann.total.maximal_cells()) gens.push_back(s);
  for (int side = 0; side < 2; ++side)
    for (int l = 0; l < 3; ++l) {
      Simplex e = {ann.vid(l, side), ann.vid((l + 1) % 3, side)};
      gens.push_back(make_simplex({e[0], e[1], p}));
    }
  CorpusSpace s;
  s.name = "pinched_torus";
  s.X = make_filtered(SimplicialComplex::close(gens), 2, std::map<int, int>{{p, 0}});
  s.apex = p;
  return s;
}

CorpusSpace susp_t2_space() {
  SimplicialComplex t2 = torus7_complex();
  std::vector<Simplex> gens;
  for (const Simplex& tri : t2.cells(2))
    for (int a : {7, 8}) {
      Simplex s = tri;
      s.push_back(a);
      gens.push_back(s);
    }
  CorpusSpace s;
  s.name = "susp_t2";
  s.X = make_filtered(SimplicialComplex::close(gens), 3,
                      std::map<int, int>{{7, 0}, {8, 0}});
  return s;
}

CorpusSpace bundle_space(std::string name, const FilteredComplex& fiber, const VertexMap& phi) {
  MappingTorus mt = mapping_torus(fiber.K, phi, 3);
  CorpusSpace s;
  s.name = std::move(name);
  s.X = mt.filtered(fiber);
  s.monodromy = phi;
  s.bundle = std::move(mt);
  s.base_circle = s.X.bottom_stratum_vertices();
  return s;
}

}  // namespace

std::vector<std::string> corpus_names() {
  return {"sphere2",       "torus7",  "rp2_6",         "cone_s1",
          "cone_t2",       "pinched_torus", "susp_t2", "s1_x_cone_t2",
          "twisted_cone_bundle"};
}

CorpusSpace corpus_build(const std::string& name) {
  if (name == "sphere2") return plain_space(name, sphere2_complex());
  if (name == "torus7") return plain_space(name, torus7_complex());
  if (name == "rp2_6") return plain_space(name, rp2_complex());
  if (name == "cone_s1") return cone_space(name, circle_complex());
  if (name == "cone_t2") return cone_space(name, torus7_complex());
  if (name == "pinched_torus") return pinched_torus_space();
  if (name == "susp_t2") return susp_t2_space();
  if (name == "s1_x_cone_t2") {
    Cone c = cone(trivial_filtration(torus7_complex()));
    VertexMap id;
    for (int v : c.C.K.vertices()) id.f[v] = v;
    return bundle_space(name, c.C, id);
  }
  if (name == "twisted_cone_bundle") {
    Cone c = cone(trivial_filtration(two_circles_complex()));
    VertexMap swap;
    for (int v = 0; v < 6; ++v) swap.f[v] = (v + 3) % 6;
    swap.f[c.apex] = c.apex;
    return bundle_space(name, c.C, swap);
  }
  throw input_error("unknown corpus space: " + name);
}

FilteredComplex bundle_fiber(const CorpusSpace& cs) {
  if (!cs.bundle) throw input_error("space carries no bundle data: " + cs.name);
  const MappingTorus& mt = *cs.bundle;
  FilteredComplex f;
  f.K = mt.fiber;
  f.n = cs.X.n - 1;
  for (int v : mt.fiber.vertices()) f.levels[v] = cs.X.level(mt.vid(0, v)) - 1;
  f.validate();
  return f;
}

namespace {

IntMat integral_matrix(const RatMat& m) {
  IntMat out(m.nr, m.nc);
  for (int j = 0; j < m.nc; ++j)
    for (const auto& [i, v] : m.col[j]) {
      if (boost::multiprecision::denominator(v) != 1)
        throw input_error("induced stalk transport is not integral");
      out.col[j].emplace_back(i, boost::multiprecision::numerator(v));
    }
  return out;
}

}  // namespace

FiberSystems fiber_systems(const CorpusSpace& cs, const Perversity& pv,
                           const Ring& field) {
  if (!cs.bundle || !cs.monodromy)
    throw input_error("space carries no bundle data: " + cs.name);
  FilteredComplex fib = bundle_fiber(cs);
  Perversity pf = pv.restricted(fib.n);

  std::vector<int> link_verts;
  for (int v : fib.K.vertices())
    if (fib.level(v) > 0) link_verts.push_back(v);
  FilteredComplex lk =
      restrict_filtered(fib, full_subcomplex(fib.K, link_verts), fib.n - 1, 1);
  Perversity pl = pv.restricted(lk.n);

  auto action = [&](const FilteredComplex& space, const Perversity& p) {
    InducedIHMap im = induced_IH_map(space, space, *cs.monodromy, p, field);
    std::vector<IntMat> phi;
    phi.reserve(im.hf.size());
    for (const RatMat& m : im.hf) phi.push_back(integral_matrix(m));
    return phi;
  };

  return {stalk_system_from_gluing(IH(fib, pf, field), action(fib, pf),
                                   cs.base_circle, field),
          stalk_system_from_gluing(IH(lk, pl, field), action(lk, pl),
                                   cs.base_circle, field)};
}

}  // namespace ihtk
