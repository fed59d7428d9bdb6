// Command-line surface: intersection homology of the example corpus,
// neighborhood spectral sequences, and aggregated law checkers with
// machine-readable JSON reports.
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ihtk/checks.hpp"
#include "ihtk/corpus.hpp"
#include "ihtk/localsys.hpp"
#include "ihtk/report.hpp"
#include "ihtk/spectral.hpp"

namespace ihtk {
namespace {

Ring parse_ring(const std::string& text) {
  if (text == "Z") return Ring::Z();
  if (text == "Q") return Ring::Q();
  if (text.size() > 1 && text[0] == 'F') {
    Int p = 0;
    try {
      p = Int(text.substr(1));
    } catch (const std::exception&) {
      throw input_error("cannot read a field modulus from: " + text);
    }
    return Ring::Fp(p);
  }
  throw input_error("unknown ring (use Z, Q, or F<prime>): " + text);
}

Ring parse_field(const std::string& text) {
  Ring r = parse_ring(text);
  if (!r.is_field()) throw input_error("a field is required, got: " + text);
  return r;
}

std::vector<int> resolve_base(const CorpusSpace& cs, const std::string& flag) {
  if (flag == "apex" || (flag.empty() && cs.base_circle.empty())) {
    if (!cs.apex)
      throw input_error("space has no designated bottom vertex: " + cs.name);
    return {*cs.apex};
  }
  if (flag.empty()) return cs.base_circle;
  std::vector<int> out;
  std::stringstream ss(flag);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw input_error("cannot read base vertex id: " + item);
    }
  }
  if (out.empty()) throw input_error("empty base vertex list");
  return out;
}

// ---------------------------------------------------------------- ih ----

struct IhArgs {
  std::string space, perversity = "zero", ring = "Z", local_system, report;
  bool oracle = false;
};

int run_ih(const IhArgs& a) {
  CorpusSpace cs = corpus_build(a.space);
  Ring ring = parse_ring(a.ring);
  Perversity pv = parse_perversity(a.perversity, cs.X.n);

  ChainComplex cc;
  HomologyResult h;
  if (!a.local_system.empty()) {
    LocalSystem sys = load_local_system(a.local_system, cs.X, ring);
    cc = twisted_IC(cs.X, pv, sys);
    h = homology(cc);
  } else {
    cc = intersection_chain_complex(cs.X, pv, ring).cc;
    h = homology(cc);
  }

  Json rep = report_envelope("ih");
  rep["space"] = a.space;
  rep["formal_dimension"] = cs.X.n;
  rep["perversity"] = perversity_json(pv);
  rep["ring"] = ring.name();
  rep["local_system"] = a.local_system.empty() ? Json() : Json(a.local_system);
  rep["homology"] = homology_json(h);

  bool ok = true;
  if (a.oracle) {
    HomologyResult slow = homology_textbook(cc);
    ok = slow == h;
    Json o;
    o["homology"] = homology_json(slow);
    o["agrees"] = ok;
    rep["recomputation"] = std::move(o);
  } else {
    rep["recomputation"] = Json();
  }

  emit_report(rep, a.report);
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- ss ----

struct SsArgs {
  std::string space, base, perversity = "zero", field = "Q";
  std::string stalk_system, report;
};

StalkSystem load_stalk_system(const std::string& path, const Ring& field,
                              const std::vector<int>& loop) {
  std::ifstream is(path);
  if (!is) throw input_error("cannot open stalk system file: " + path);
  Json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw input_error("cannot parse stalk system file: " +
                      std::string(e.what()));
  }
  if (!j.contains("betti") || !j["betti"].is_array())
    throw input_error("stalk system file lacks a betti array");
  HomologyResult stalk;
  stalk.ring = field;
  for (const auto& b : j["betti"]) stalk.betti.push_back(b.get<int>());
  stalk.torsion.assign(stalk.betti.size(), {});
  std::vector<IntMat> phi;
  if (j.contains("action")) {
    for (const auto& mj : j["action"]) {
      int nr = mj.at("rows").get<int>(), nc = mj.at("cols").get<int>();
      IntMat m(nr, nc);
      const auto& data = mj.at("data");
      if (static_cast<int>(data.size()) != nr * nc)
        throw input_error("stalk action matrix shape mismatch");
      for (int i = 0; i < nr; ++i)
        for (int c = 0; c < nc; ++c) {
          Int v(data[i * nc + c].get<std::string>());
          if (v != 0) m.col[c].emplace_back(i, v);
        }
      phi.push_back(std::move(m));
    }
  } else {
    for (int b : stalk.betti) phi.push_back(IntMat::identity(b));
  }
  return stalk_system_from_gluing(stalk, phi, loop, field);
}

int run_ss(const SsArgs& a) {
  CorpusSpace cs = corpus_build(a.space);
  Ring field = parse_field(a.field);
  Perversity pv = parse_perversity(a.perversity, cs.X.n);
  std::vector<int> base = resolve_base(cs, a.base);

  RegularNeighborhood rn = regular_neighborhood(cs.X, base);
  SsComparison cmp = ss_map_deleted_to_full(rn, pv, field);
  D1Comparison d1_full = d1_cross_check(cmp.full, cmp.sfull);
  D1Comparison d1_del = d1_cross_check(cmp.del, cmp.sdel);

  Json rep = report_envelope("ss");
  rep["space"] = a.space;
  rep["base"] = base;
  rep["perversity"] = perversity_json(pv);
  rep["field"] = field.name();
  rep["neighborhood"] = spectral_json(cmp.sfull);
  rep["deleted"] = spectral_json(cmp.sdel);
  rep["map"] = ss_map_json(cmp);
  {
    Json d1;
    d1["neighborhood"] = d1_full.ok;
    d1["deleted"] = d1_del.ok;
    rep["d1_equals_connecting_map"] = std::move(d1);
  }

  bool ok = cmp.ok && d1_full.ok && d1_del.ok;
  bool is_bundle = cs.bundle && cs.monodromy && base == cs.base_circle;
  if (!a.stalk_system.empty() || is_bundle) {
    Json fib;
    if (!a.stalk_system.empty()) {
      std::vector<int> loop = base.size() >= 3 ? base : std::vector<int>{0, 1, 2};
      StalkSystem sys = load_stalk_system(a.stalk_system, field, loop);
      E2Comparison e2 = e2_vs_twisted(cmp.sfull, sys);
      fib["neighborhood"] = e2_json(e2);
      fib["deleted"] = Json();
      ok = ok && e2.ok;
    } else {
      FiberSystems fs = fiber_systems(cs, pv, field);
      E2Comparison e2f = e2_vs_twisted(cmp.sfull, fs.cone);
      E2Comparison e2d = e2_vs_twisted(cmp.sdel, fs.link);
      fib["neighborhood"] = e2_json(e2f);
      fib["deleted"] = e2_json(e2d);
      ok = ok && e2f.ok && e2d.ok;
    }
    rep["fiber_comparison"] = std::move(fib);
  } else {
    rep["fiber_comparison"] = Json();
  }
  rep["ok"] = ok;

  emit_report(rep, a.report);
  return ok ? 0 : 1;
}

// ------------------------------------------------------------- check ----

using Rows = std::vector<CheckRow>;

void add_row(Rows& rows, const std::string& name, bool ok,
             const std::string& detail = "") {
  rows.push_back({name, ok, detail});
}

/// Runs f and converts a verification throw into a failing row.
template <class F>
void guarded(Rows& rows, const std::string& name, F&& f) {
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

struct GoldenEntry {
  std::string space, perversity, ring;
  HomologyResult want;
};

std::vector<GoldenEntry> load_golden(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw input_error("cannot open golden file: " + path);
  Json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw input_error("cannot parse golden file: " + std::string(e.what()));
  }
  if (j.value("schema", "") != kGoldenSchema)
    throw input_error("unexpected golden schema in " + path);
  std::vector<GoldenEntry> out;
  for (const auto& e : j.at("entries")) {
    GoldenEntry g;
    g.space = e.at("space").get<std::string>();
    g.perversity = e.at("perversity").get<std::string>();
    g.ring = e.at("ring").get<std::string>();
    g.want.ring = parse_ring(g.ring);
    for (const auto& b : e.at("betti")) g.want.betti.push_back(b.get<int>());
    for (const auto& degree : e.at("torsion")) {
      std::vector<Int> row;
      for (const auto& t : degree) row.emplace_back(t.get<std::string>());
      g.want.torsion.push_back(std::move(row));
    }
    out.push_back(std::move(g));
  }
  return out;
}

void check_golden(Rows& rows, const std::string& path, bool oracle) {
  std::vector<GoldenEntry> entries;
  entries = load_golden(path);
  for (const GoldenEntry& g : entries) {
    std::string row = "golden " + g.space + " " + g.perversity + " " + g.ring;
    guarded(rows, row, [&] {
      CorpusSpace cs = corpus_build(g.space);
      Ring ring = parse_ring(g.ring);
      Perversity pv = parse_perversity(g.perversity, cs.X.n);
      ChainComplex cc = intersection_chain_complex(cs.X, pv, ring).cc;
      HomologyResult got = oracle ? homology_textbook(cc) : homology(cc);
      add_row(rows, row, got == g.want,
              got == g.want ? ""
                            : "expected " + betti_text(g.want.betti) +
                                  ", recomputed " + betti_text(got.betti));
    });
  }
}

struct CheckArgs {
  std::string suite, golden = "data/golden/ih_corpus.json", report;
  bool oracle = false;
};

int run_check(const CheckArgs& a) {
  const std::vector<std::string> known = {"cone-formula", "e2",       "exactness",
                                          "golden",       "prism",    "ss-map",
                                          "subdivision",  "all"};
  if (std::find(known.begin(), known.end(), a.suite) == known.end())
    throw input_error("unknown check suite: " + a.suite);

  Rows rows;
  bool all = a.suite == "all";
  auto append = [&rows](Rows more) {
    for (CheckRow& r : more) rows.push_back(std::move(r));
  };
  if (all || a.suite == "cone-formula") append(check_cone_formula());
  if (all || a.suite == "e2") append(check_e2());
  if (all || a.suite == "exactness") append(check_exactness());
  if (all || a.suite == "golden") check_golden(rows, a.golden, a.oracle);
  if (all || a.suite == "prism") append(check_prism());
  if (all || a.suite == "ss-map") append(check_ss_map());
  if (all || a.suite == "subdivision") append(check_subdivision());

  bool ok = true;
  Json results = Json::array();
  for (const CheckRow& r : rows) {
    ok = ok && r.ok;
    std::cout << (r.ok ? "ok   " : "FAIL ") << r.name
              << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
    Json row;
    row["name"] = r.name;
    row["ok"] = r.ok;
    row["detail"] = r.detail;
    results.push_back(std::move(row));
  }
  std::cout << (ok ? "suite passed: " : "suite FAILED: ") << a.suite << " ("
            << rows.size() << " checks)\n";

  if (!a.report.empty()) {
    Json rep = report_envelope("check");
    rep["suite"] = a.suite;
    rep["results"] = std::move(results);
    rep["ok"] = ok;
    emit_report(rep, a.report);
  }
  return ok ? 0 : 1;
}

}  // namespace
}  // namespace ihtk

int main(int argc, char** argv) {
  using namespace ihtk;
  CLI::App app{"Exact intersection homology and neighborhood spectral sequences"};
  app.require_subcommand(1);

  IhArgs ih;
  CLI::App* cih = app.add_subcommand(
      "ih", "Intersection homology of a corpus space");
  cih->add_option("SPACE", ih.space, "corpus space name")->required();
  cih->add_option("PERVERSITY", ih.perversity,
                  "alias or comma list (default zero)");
  cih->add_option("RING", ih.ring, "Z, Q, or F<prime> (default Z)");
  cih->add_option("--perversity", ih.perversity, "alias or comma list");
  cih->add_option("--ring", ih.ring, "Z, Q, or F<prime>");
  cih->add_option("--local-system", ih.local_system,
                  "edge transport file over the top stratum");
  cih->add_option("--report", ih.report, "write the JSON report here");
  cih->add_flag("--oracle", ih.oracle,
                "recompute through the dense Smith path and compare");

  SsArgs ss;
  CLI::App* css = app.add_subcommand(
      "ss", "Neighborhood spectral sequences of a bottom stratum");
  css->add_option("SPACE", ss.space, "corpus space name")->required();
  css->add_option("--base", ss.base,
                  "'apex' or comma-separated vertex ids (default: the "
                  "space's bottom circle or apex)");
  css->add_option("--perversity", ss.perversity, "alias or comma list");
  css->add_option("--field", ss.field, "Q or F<prime>");
  css->add_option("--stalk-system", ss.stalk_system,
                  "JSON fiber-group system for the second-page comparison");
  css->add_option("--report", ss.report, "write the JSON report here");

  CheckArgs ck;
  CLI::App* cck = app.add_subcommand("check", "Run a verification suite");
  cck->add_option("SUITE", ck.suite,
                  "cone-formula | e2 | exactness | golden | prism | ss-map | "
                  "subdivision | all")
      ->required();
  cck->add_option("--golden", ck.golden, "golden value file");
  cck->add_option("--report", ck.report, "write the JSON report here");
  cck->add_flag("--oracle", ck.oracle,
                "recompute golden entries through the dense Smith path");

  try {
    app.parse(argc, argv);
    if (cih->parsed()) return run_ih(ih);
    if (css->parsed()) return run_ss(ss);
    return run_check(ck);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const verify_error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
