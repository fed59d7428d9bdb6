#include "ihtk/report.hpp"

#include <fstream>
#include <iostream>

namespace ihtk {

std::string rat_text(const Rat& x) {
  Int num = boost::multiprecision::numerator(x);
  Int den = boost::multiprecision::denominator(x);
  std::string s = num.str();
  if (den != 1) s += "/" + den.str();
  return s;
}

Json matrix_json(const RatMat& m) {
  Json out;
  out["rows"] = m.nr;
  out["cols"] = m.nc;
  Json data = Json::array();
  std::vector<Rat> dense(static_cast<size_t>(m.nr) * m.nc, Rat(0));
  for (int j = 0; j < m.nc; ++j)
    for (const auto& [i, v] : m.col[j]) dense[static_cast<size_t>(i) * m.nc + j] = v;
  for (const Rat& v : dense) data.push_back(rat_text(v));
  out["data"] = std::move(data);
  return out;
}

Json matrix_json(const IntMat& m) { return matrix_json(to_rat(m)); }

Json homology_json(const HomologyResult& h) {
  Json out;
  out["ring"] = h.ring.name();
  out["betti"] = h.betti;
  Json tor = Json::array();
  for (const auto& degree : h.torsion) {
    Json row = Json::array();
    for (const Int& t : degree) row.push_back(t.str());
    tor.push_back(std::move(row));
  }
  out["torsion"] = std::move(tor);
  return out;
}

Json perversity_json(const Perversity& p) { return Json(p.p); }

Json spectral_json(const SpectralSequence& ss) {
  Json out;
  out["ring"] = ss.ring.name();
  out["filtration_steps"] = ss.steps;
  out["top_degree"] = ss.top;
  out["stable_page"] = ss.rmax;
  Json pages = Json::array();
  for (int r = 1; r <= ss.rmax; ++r) {
    Json page;
    page["page"] = r;
    Json cells = Json::array();
    Json diffs = Json::array();
    for (int p = 0; p < ss.steps; ++p)
      for (int q = 0; q + p <= ss.top; ++q) {
        if (ss.dim_at(r, p, q) > 0) {
          Json cell;
          cell["p"] = p;
          cell["q"] = q;
          cell["dim"] = ss.dim_at(r, p, q);
          cells.push_back(std::move(cell));
        }
        const RatMat& d = ss.d[r][p][q];
        bool nonzero = false;
        for (const auto& col : d.col) nonzero = nonzero || !col.empty();
        if (nonzero) {
          Json cell;
          cell["p"] = p;
          cell["q"] = q;
          cell["matrix"] = matrix_json(d);
          diffs.push_back(std::move(cell));
        }
      }
    page["cells"] = std::move(cells);
    page["differentials"] = std::move(diffs);
    pages.push_back(std::move(page));
  }
  out["pages"] = std::move(pages);
  Json ab = Json::array();
  for (size_t i = 0; i < ss.abutment.size(); ++i) {
    Json row;
    row["degree"] = static_cast<int>(i);
    row["by_filtration"] = ss.abutment[i];
    int total = 0;
    for (int x : ss.abutment[i]) total += x;
    row["total"] = total;
    ab.push_back(std::move(row));
  }
  out["abutment"] = std::move(ab);
  return out;
}

Json ss_map_json(const SsComparison& cmp) {
  Json out;
  out["cutoff"] = cmp.cutoff;
  out["ok"] = cmp.ok;
  Json verdicts = Json::array();
  for (const auto& v : cmp.verdicts) {
    Json row;
    row["p"] = v.p;
    row["q"] = v.q;
    row["expect_zero"] = v.expect_zero;
    row["ok"] = v.ok;
    verdicts.push_back(std::move(row));
  }
  out["verdicts"] = std::move(verdicts);
  Json mats = Json::array();
  for (const auto& pm : cmp.maps) {
    if (pm.r != 2) continue;
    Json row;
    row["p"] = pm.p;
    row["q"] = pm.q;
    row["matrix"] = matrix_json(pm.m);
    mats.push_back(std::move(row));
  }
  out["second_page_maps"] = std::move(mats);
  return out;
}

Json e2_json(const E2Comparison& cmp) {
  Json out;
  out["got"] = cmp.got;
  out["want"] = cmp.want;
  out["ok"] = cmp.ok;
  return out;
}

Json report_envelope(const std::string& command) {
  Json out;
  out["schema"] = kReportSchema;
  out["command"] = command;
  return out;
}

std::string render_report(const Json& j) { return j.dump(2) + "\n"; }

void emit_report(const Json& j, const std::string& path) {
  std::string text = render_report(j);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw input_error("cannot open report file: " + path);
  os << text;
}

}  // namespace ihtk
