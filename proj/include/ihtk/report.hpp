#pragma once

// JSON serialization of computation results.  All emitters are
// deterministic: the same inputs produce byte-identical text, so reports
// can be compared as golden files.

#include <string>

#include <json.hpp>

#include "ihtk/chain.hpp"
#include "ihtk/perverse.hpp"
#include "ihtk/spectral.hpp"

namespace ihtk {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "ihtk-report/1";
inline constexpr const char* kGoldenSchema = "ihtk-golden/1";

/// Canonical text for an exact scalar: "7", "-3", "1/2".
std::string rat_text(const Rat& x);

/// Dense row-major dump: {"rows", "cols", "data": ["0", "1/2", ...]}.
Json matrix_json(const RatMat& m);
Json matrix_json(const IntMat& m);

/// {"ring", "betti": [...], "torsion": [["2","4"], ...]}.
Json homology_json(const HomologyResult& h);

/// Perversity values p(0)..p(n) as a plain array.
Json perversity_json(const Perversity& p);

/// Pages, differentials, and abutment of one spectral sequence.  Cells and
/// differentials are listed in ascending (r, p, q) order and only where
/// they are nonzero.
Json spectral_json(const SpectralSequence& ss);

/// Verdict block of a deleted-to-full comparison: cutoff, per-cell
/// verdicts, and the second-page matrices.
Json ss_map_json(const SsComparison& cmp);

/// {"got": [[...]], "want": [[...]], "ok"} grid comparison.
Json e2_json(const E2Comparison& cmp);

/// New report envelope: {"schema", "command"}.
Json report_envelope(const std::string& command);

/// dump(2) with a trailing newline.
std::string render_report(const Json& j);

/// Writes to the path, or to stdout when the path is empty.
void emit_report(const Json& j, const std::string& path);

}  // namespace ihtk
