#pragma once

// Aggregated law checkers over the example corpus, shared by the
// command-line tool and the acceptance runner.  Each suite returns one row
// per verified instance in a fixed order; a verification throw inside one
// instance becomes a failing row rather than aborting the suite.

#include <string>
#include <vector>

namespace ihtk {

struct CheckRow {
  std::string name;
  bool ok = true;
  std::string detail;
};

/// Both sides of the cone identity for the corpus links, every valid
/// perversity of the cone dimension, over the integers.
std::vector<CheckRow> check_cone_formula();

/// Long exact sequences of pairs (simplicial and intersection-chain) and
/// Mayer-Vietoris covers for every corpus space, over the integers.
std::vector<CheckRow> check_exactness();

/// Prism piece counts, the cylinder chain identity
/// boundary(F) + F(boundary) = top - bottom through dimension four, and
/// allowability of every prism cell over an allowable cell.
std::vector<CheckRow> check_prism();

/// Intersection homology is unchanged by barycentric subdivision for every
/// corpus space and the zero and both middle perversities.
std::vector<CheckRow> check_subdivision();

/// Second page of both circle bundles equals the twisted cellular homology
/// of the base with the computed fiber systems, and the pages collapse.
std::vector<CheckRow> check_e2();

/// Deleted-to-full page map verdicts against the perversity cutoff for the
/// pinched torus and both circle bundles.
std::vector<CheckRow> check_ss_map();

}  // namespace ihtk
