#pragma once

// Built-in example spaces.  Every builder is deterministic, so all derived
// matrices and reports are reproducible bit for bit.

#include <optional>
#include <string>
#include <vector>

#include "ihtk/localsys.hpp"
#include "ihtk/simplicial.hpp"

namespace ihtk {

// Small building blocks reused across the corpus and the checkers.
SimplicialComplex circle_complex(int m = 3);  // m-gon, vertex ids 0..m-1
SimplicialComplex two_circles_complex();      // 3-gons on 0..2 and 3..5
SimplicialComplex sphere2_complex();          // boundary of the 3-simplex
SimplicialComplex torus7_complex();           // 7-vertex torus
SimplicialComplex rp2_complex();              // 6-vertex projective plane

struct CorpusSpace {
  std::string name;
  FilteredComplex X;
  std::optional<int> apex;             // cone-like spaces
  std::optional<MappingTorus> bundle;  // circle-bundle spaces
  std::optional<VertexMap> monodromy;  // gluing map of the bundle
  std::vector<int> base_circle;        // bottom-circle vertex ids of a bundle
};

std::vector<std::string> corpus_names();
CorpusSpace corpus_build(const std::string& name);

/// Fiber of a corpus circle bundle as a filtered complex: the layer-0 copy
/// with the total-space levels shifted back down by one.
FilteredComplex bundle_fiber(const CorpusSpace& cs);

/// Graded coefficient systems of a corpus circle bundle on its bottom
/// circle: groups of the fiber (cut off by the perversity) and of its
/// boundary link, with the generator acting by the maps the gluing induces
/// on them.  The action must come out integral in the canonical bases.
struct FiberSystems {
  StalkSystem cone;
  StalkSystem link;
};
FiberSystems fiber_systems(const CorpusSpace& cs, const Perversity& pv,
                           const Ring& field);

}  // namespace ihtk
