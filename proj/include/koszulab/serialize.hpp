#pragma once

#include <json.hpp>

#include "koszulab/completion.hpp"
#include "koszulab/duality.hpp"
#include "koszulab/poly_io.hpp"

namespace koszulab {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

template <FieldElement K>
json polys_json(const std::vector<Poly<K>>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(format_poly(p));
  return out;
}

/// [degree, stage, dim] rows.
inline json table_json(const LocalCohomologyTable& t) {
  json out = json::array();
  for (const auto& e : t.entries) out.push_back({e.degree, e.stage, e.dim});
  return out;
}

inline json to_json(const LocalCohomologyTable& t) {
  json stable = json::array(), dims = json::array();
  for (const auto& [d, s] : t.stable) {
    stable.push_back({d, s});
    if (s) dims.push_back({d, t.dim(d, t.stage_max)});
  }
  return {{"index", t.index},       {"method", to_string(t.method)}, {"window", {t.lo, t.hi}},
          {"stage_max", t.stage_max}, {"table", table_json(t)},      {"stable", stable},
          {"stable_dims", dims}};
}

template <FieldElement K>
json to_json(const ProregularityCertificate<K>& c) {
  json w = json::array(), ex = json::array();
  for (const auto& [k, s] : c.witnesses) w.push_back({k.i, k.r, s});
  for (const auto& k : c.exhausted) ex.push_back({k.i, k.r});
  return {{"r_max", c.r_max}, {"s_max", c.s_max}, {"witnesses", w}, {"exhausted", ex}, {"verdict", to_string(c.verdict)}};
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "certified") return Verdict::Certified;
  if (s == "undecided") return Verdict::Undecided;
  throw InvalidArgument("unknown verdict '" + s + "'");
}

template <FieldElement K>
ProregularityCertificate<K> proregularity_from_json(const json& j, const Ring<K>& ring, const std::vector<Poly<K>>& t) {
  ProregularityCertificate<K> c{ring, t, j.at("r_max").get<std::uint32_t>(), j.at("s_max").get<std::uint32_t>(), {}, {},
                                verdict_from_string(j.at("verdict").get<std::string>())};
  for (const auto& w : j.at("witnesses")) c.witnesses[{w.at(0).get<std::size_t>(), w.at(1).get<std::uint32_t>()}] = w.at(2).get<std::uint32_t>();
  for (const auto& e : j.at("exhausted")) c.exhausted.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::uint32_t>()});
  return c;
}

template <FieldElement K>
json to_json(const EssentialNullityCertificate<K>& c) {
  json w = json::array(), ex = json::array();
  for (const auto& [r, s] : c.witnesses) w.push_back({r, s});
  for (auto r : c.exhausted) ex.push_back(r);
  return {{"index", c.index},   {"r_max", c.r_max},    {"s_max", c.s_max},
          {"witnesses", w},     {"exhausted", ex},     {"verdict", to_string(c.verdict)}};
}

template <FieldElement K>
EssentialNullityCertificate<K> essential_nullity_from_json(const json& j, const Ring<K>& ring,
                                                           const std::vector<Poly<K>>& t, const FpModule<K>& p) {
  EssentialNullityCertificate<K> c{ring,
                                   t,
                                   p,
                                   j.at("index").get<int>(),
                                   j.at("r_max").get<std::uint32_t>(),
                                   j.at("s_max").get<std::uint32_t>(),
                                   {},
                                   {},
                                   verdict_from_string(j.at("verdict").get<std::string>())};
  for (const auto& w : j.at("witnesses")) c.witnesses[w.at(0).get<std::uint32_t>()] = w.at(1).get<std::uint32_t>();
  for (const auto& e : j.at("exhausted")) c.exhausted.push_back(e.get<std::uint32_t>());
  return c;
}

inline json to_json(const MLReport& m) {
  json stages = json::array();
  for (const auto& p : m.per_stage) {
    json chains = json::array();
    for (const auto& [d, dims] : p.image_dims) chains.push_back({{"degree", d}, {"image_dims", dims}});
    stages.push_back({{"r", p.r}, {"exhausted", p.exhausted}, {"s", p.s}, {"chains", chains}});
  }
  return {{"index", m.index}, {"width", m.width}, {"s_max", m.s_max}, {"holds", m.holds()}, {"per_stage", stages}};
}

inline MLReport ml_report_from_json(const json& j) {
  MLReport m;
  m.index = j.at("index").get<int>();
  m.width = j.at("width").get<Degree>();
  m.s_max = j.at("s_max").get<std::uint32_t>();
  for (const auto& p : j.at("per_stage")) {
    MLIndexReport r;
    r.r = p.at("r").get<std::uint32_t>();
    r.exhausted = p.at("exhausted").get<bool>();
    r.s = p.at("s").get<std::uint32_t>();
    for (const auto& c : p.at("chains")) r.image_dims[c.at("degree").get<Degree>()] = c.at("image_dims").get<std::vector<std::size_t>>();
    m.per_stage.push_back(std::move(r));
  }
  return m;
}

template <FieldElement K>
json to_json(const LocalHomologyReport<K>& rep, Degree lo) {
  json nullity = json::array(), ml = json::array(), homology = json::object();
  for (const auto& c : rep.nullity) nullity.push_back(to_json(c));
  for (const auto& m : rep.ml) ml.push_back(to_json(m));
  for (const auto& [i, rows] : rep.homology_dims) {
    json table = json::array();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t k = 0; k < rows[r].size(); ++k) table.push_back({lo + static_cast<Degree>(k), r + 1, rows[r][k]});
    }
    homology[std::to_string(i)] = table;
  }
  return {{"r_max", rep.r_max},
          {"s_max", rep.s_max},
          {"h0_iso", rep.h0_iso},
          {"h0_compatible", rep.h0_compatible},
          {"adic_compatible", rep.adic_compatible},
          {"pro_zero", rep.pro_zero()},
          {"ml_holds", rep.ml_holds()},
          {"nullity", nullity},
          {"ml", ml},
          {"homology", homology}};
}

template <FieldElement K>
json to_json(const DualityReport<K>& rep) {
  json stages = json::array();
  for (const auto& s : rep.stages) {
    stages.push_back({{"r", s.r},
                      {"chain_map", s.chain_map},
                      {"invertible", s.invertible},
                      {"lhs_ranks", s.lhs_ranks},
                      {"rhs_ranks", s.rhs_ranks}});
  }
  return {{"r_range", {rep.r_lo, rep.r_hi}}, {"stages", stages}, {"naturality", rep.naturality}};
}

/// lhs rows are [degree, stage, dim] of H^i_m(M) at degree -d; rhs rows are [d, 0, dim] of Ext^{n-i}(M, omega).
inline json to_json(const DualityTable& t) {
  json lhs = json::object(), rhs = json::object(), verdicts = json::array(), euler = json::array();
  for (const auto& e : t.entries) {
    const std::string key = std::to_string(e.index);
    if (!lhs.contains(key)) {
      lhs[key] = json::array();
      rhs[key] = json::array();
    }
    lhs[key].push_back({-e.degree, t.stage_max, e.lhs});
    rhs[key].push_back({e.degree, 0, e.rhs});
    verdicts.push_back({e.index, e.degree, e.pass()});
  }
  for (const auto& [d, ok] : t.euler) euler.push_back({d, ok});
  return {{"num_variables", t.num_variables}, {"canonical_shift", t.canonical_shift}, {"window", {t.lo, t.hi}},
          {"stage_max", t.stage_max},         {"lhs", lhs},                           {"rhs", rhs},
          {"verdicts", verdicts},             {"euler", euler}};
}

}  // namespace koszulab
