#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "koszulab/serialize.hpp"

namespace koszulab::cli {

enum ExitCode : int { kExitOk = 0, kExitFail = 1, kExitUsage = 2, kExitUndecided = 3 };

struct JobSpec {
  std::string command;
  std::string ring;
  std::string ideal, poly, seq, module, target, complex_e, complex_f;
  std::string input;  // verify: path to a JSON report, "-" for stdin
  std::optional<int> index;
  std::uint32_t power = 1;
  bool saturate = false;
  std::uint32_t r = 1;
  std::uint32_t r_max = 3, s_max = 0, n_max = 4, stage_max = 8, length = 0;
  Degree width = 2;
  std::string window, r_range, method = "koszul-colim";
  bool json_output = false;
};

inline json inputs_json(const JobSpec& j) {
  return {{"ring", j.ring},
          {"ideal", j.ideal},
          {"poly", j.poly},
          {"seq", j.seq},
          {"module", j.module},
          {"target", j.target},
          {"E", j.complex_e},
          {"F", j.complex_f},
          {"index", j.index ? json(*j.index) : json(nullptr)},
          {"power", j.power},
          {"saturate", j.saturate},
          {"r", j.r},
          {"rmax", j.r_max},
          {"smax", j.s_max},
          {"nmax", j.n_max},
          {"stage_max", j.stage_max},
          {"length", j.length},
          {"width", j.width},
          {"window", j.window},
          {"rrange", j.r_range},
          {"method", j.method}};
}

inline JobSpec job_from_json(const json& report) {
  const json& in = report.at("inputs");
  JobSpec j;
  j.command = report.at("command").get<std::string>();
  j.ring = in.at("ring").get<std::string>();
  j.ideal = in.at("ideal").get<std::string>();
  j.poly = in.at("poly").get<std::string>();
  j.seq = in.at("seq").get<std::string>();
  j.module = in.at("module").get<std::string>();
  j.target = in.at("target").get<std::string>();
  j.complex_e = in.at("E").get<std::string>();
  j.complex_f = in.at("F").get<std::string>();
  if (!in.at("index").is_null()) j.index = in.at("index").get<int>();
  j.power = in.at("power").get<std::uint32_t>();
  j.saturate = in.at("saturate").get<bool>();
  j.r = in.at("r").get<std::uint32_t>();
  j.r_max = in.at("rmax").get<std::uint32_t>();
  j.s_max = in.at("smax").get<std::uint32_t>();
  j.n_max = in.at("nmax").get<std::uint32_t>();
  j.stage_max = in.at("stage_max").get<std::uint32_t>();
  j.length = in.at("length").get<std::uint32_t>();
  j.width = in.at("width").get<Degree>();
  j.window = in.at("window").get<std::string>();
  j.r_range = in.at("rrange").get<std::string>();
  j.method = in.at("method").get<std::string>();
  return j;
}

// ---------------------------------------------------------------------------
// Input grammar.

namespace detail {

inline std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

inline std::string_view trim(std::string_view s, std::size_t* offset = nullptr) {
  const std::size_t b = skip_space(s, 0);
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (offset) *offset += b;
  return s.substr(b, e - b);
}

/// Index one past the bracket closing the one at `open`.
inline std::size_t matching_close(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '[' || s[i] == '(') ++depth;
    if (s[i] == ']' || s[i] == ')') {
      if (--depth == 0) return i + 1;
    }
  }
  throw SyntaxError("unbalanced bracket", open);
}

inline long parse_integer(std::string_view s, std::size_t offset) {
  std::size_t off = offset;
  const std::string_view t = trim(s, &off);
  if (t.empty()) throw SyntaxError("expected an integer", off);
  std::size_t i = t[0] == '-' || t[0] == '+' ? 1 : 0;
  if (i == t.size()) throw SyntaxError("expected digits", off + i);
  for (std::size_t k = i; k < t.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(t[k]))) throw SyntaxError("expected a digit", off + k);
  }
  try {
    return std::stol(std::string(t));
  } catch (const std::out_of_range&) {
    throw SyntaxError("integer out of range", off);
  }
}

inline std::vector<long> parse_integer_list(std::string_view s, std::size_t offset) {
  std::size_t off = offset;
  const std::string_view t = trim(s, &off);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw SyntaxError("expected [ ... ]", off);
  std::vector<long> out;
  const std::string_view inner = t.substr(1, t.size() - 2);
  if (trim(inner).empty()) return out;
  for (const auto& [piece, o] : split_top_level(inner)) out.push_back(parse_integer(piece, off + 1 + o));
  return out;
}

}  // namespace detail

/// "lo..hi".
inline std::pair<long, long> parse_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) throw SyntaxError("expected lo..hi", 0);
  const long lo = detail::parse_integer(text.substr(0, dots), 0);
  const long hi = detail::parse_integer(text.substr(dots + 2), dots + 2);
  if (lo > hi) throw BadBounds("empty range " + std::string(text));
  return {lo, hi};
}

/// Field prefix of a ring text: Q or F<p>.
inline FieldDescriptor parse_field(std::string_view text) {
  std::size_t off = 0;
  const std::string_view t = detail::trim(text, &off);
  if (!t.empty() && t[0] == 'Q') return FieldDescriptor::rationals();
  if (t.empty() || t[0] != 'F') throw SyntaxError("ring must start with Q or F followed by a prime", off);
  std::size_t i = 1;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i == 1) throw SyntaxError("expected a characteristic after F", off + 1);
  if (i - 1 > 19) throw InvalidArgument("characteristic too large");
  return FieldDescriptor::prime(std::stoull(std::string(t.substr(1, i - 1))));
}

/// Q[x,y] or F<p>[x,y,z], optionally followed by :grevlex or :lex, then optionally /(f, g).
template <FieldElement K>
Ring<K> parse_ring(std::string_view text) {
  const FieldDescriptor field = parse_field(text);
  std::size_t i = text.find('[');
  if (i == std::string_view::npos) throw SyntaxError("expected [ after the field", text.size());
  const std::size_t close = text.find(']', i);
  if (close == std::string_view::npos) throw SyntaxError("expected ]", text.size());
  std::vector<std::string> vars;
  for (const auto& [piece, off] : split_top_level(text.substr(i + 1, close - i - 1))) {
    std::size_t o = i + 1 + off;
    const std::string_view v = detail::trim(piece, &o);
    if (v.empty() || !std::isalpha(static_cast<unsigned char>(v[0]))) throw SyntaxError("bad variable name", o);
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!std::isalnum(static_cast<unsigned char>(v[k])) && v[k] != '_') throw SyntaxError("bad variable name", o + k);
    }
    vars.emplace_back(v);
  }
  if (vars.empty()) throw SyntaxError("ring needs at least one variable", i + 1);
  for (std::size_t a = 0; a < vars.size(); ++a) {
    for (std::size_t b = a + 1; b < vars.size(); ++b) {
      if (vars[a] == vars[b]) throw InvalidArgument("repeated variable '" + vars[a] + "'");
    }
  }
  if (vars.size() > kMaxVariables) throw InvalidArgument("at most " + std::to_string(kMaxVariables) + " variables");
  MonomialOrder order = MonomialOrder::GRevLex;
  std::size_t pos = detail::skip_space(text, close + 1);
  if (pos < text.size() && text[pos] == ':') {
    std::size_t e = pos + 1;
    while (e < text.size() && std::isalpha(static_cast<unsigned char>(text[e]))) ++e;
    const std::string_view name = text.substr(pos + 1, e - pos - 1);
    if (name == "lex") order = MonomialOrder::Lex;
    else if (name != "grevlex") throw SyntaxError("unknown monomial order '" + std::string(name) + "'", pos + 1);
    pos = detail::skip_space(text, e);
  }
  Ring<K> ring = Ring<K>::polynomial(field, vars, order);
  if (pos < text.size() && text[pos] == '/') {
    const std::size_t open = detail::skip_space(text, pos + 1);
    if (open >= text.size() || text[open] != '(') throw SyntaxError("expected ( after /", open);
    const std::size_t end = detail::matching_close(text, open);
    ring = ring.quotient_by(parse_poly_list(text.substr(open + 1, end - open - 2), ring, open + 1));
    pos = detail::skip_space(text, end);
  }
  if (pos != text.size()) throw SyntaxError("unexpected trailing text", pos);
  return ring;
}

/// Row-major [[a, b], [c, d]].
template <FieldElement K>
std::vector<std::vector<Poly<K>>> parse_matrix_rows(std::string_view text, const Ring<K>& ring, std::size_t offset) {
  std::size_t off = offset;
  const std::string_view t = detail::trim(text, &off);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw SyntaxError("expected [[ ... ]]", off);
  std::vector<std::vector<Poly<K>>> rows;
  const std::string_view inner = t.substr(1, t.size() - 2);
  if (detail::trim(inner).empty()) return rows;
  for (const auto& [piece, o] : split_top_level(inner)) {
    std::size_t ro = off + 1 + o;
    const std::string_view row = detail::trim(piece, &ro);
    if (row.size() < 2 || row.front() != '[' || row.back() != ']') throw SyntaxError("expected a row [ ... ]", ro);
    rows.push_back(parse_poly_list(row.substr(1, row.size() - 2), ring, ro + 1));
  }
  for (const auto& r : rows) {
    if (r.size() != rows[0].size()) throw SyntaxError("rows of different lengths", off);
  }
  return rows;
}

/// free N | free [d1, ...] | coker [[...]] [twists [d1, ...]]. Twists are the generator degrees.
template <FieldElement K>
FpModule<K> parse_module(std::string_view text, const Ring<K>& ring) {
  std::size_t off = 0;
  const std::string_view t = detail::trim(text, &off);
  if (t.starts_with("free")) {
    const std::string_view rest = t.substr(4);
    if (detail::trim(rest).starts_with("[")) {
      std::vector<Degree> degs;
      for (long d : detail::parse_integer_list(rest, off + 4)) degs.push_back(d);
      return FpModule<K>::free(ring, degs);
    }
    const long n = detail::parse_integer(rest, off + 4);
    if (n < 0) throw SyntaxError("negative rank", off + 4);
    return FpModule<K>::free(ring, std::vector<Degree>(static_cast<std::size_t>(n), 0));
  }
  if (!t.starts_with("coker")) throw SyntaxError("module must be 'free ...' or 'coker [[...]]'", off);
  const std::size_t open = detail::skip_space(t, 5);
  if (open >= t.size() || t[open] != '[') throw SyntaxError("expected [[ after coker", off + open);
  const std::size_t end = detail::matching_close(t, open);
  auto rows = parse_matrix_rows(t.substr(open, end - open), ring, off + open);
  std::vector<Degree> degs(rows.size(), 0);
  std::size_t pos = detail::skip_space(t, end);
  if (pos < t.size()) {
    if (!t.substr(pos).starts_with("twists")) throw SyntaxError("expected 'twists [...]'", off + pos);
    const auto tw = detail::parse_integer_list(t.substr(pos + 6), off + pos + 6);
    if (tw.size() != rows.size()) throw SyntaxError("twist count must equal the number of rows", off + pos + 6);
    for (std::size_t k = 0; k < tw.size(); ++k) degs[k] = tw[k];
  }
  if (rows.empty()) throw SyntaxError("coker needs at least one row", off + open);
  return FpModule<K>(Matrix<K>::from_rows(ring, rows, degs));
}

/// koszul f, g | module <module> | map [[...]] (free two-term complex in degrees -1, 0), optionally "shift k".
template <FieldElement K>
FreeComplex<K> parse_complex(std::string_view text, const Ring<K>& ring) {
  std::size_t off = 0;
  std::string_view t = detail::trim(text, &off);
  int shift_by = 0;
  const std::size_t sh = t.rfind(" shift ");
  if (sh != std::string_view::npos) {
    shift_by = static_cast<int>(detail::parse_integer(t.substr(sh + 7), off + sh + 7));
    t = t.substr(0, sh);
  }
  FreeComplex<K> c;
  if (t.starts_with("koszul")) {
    c = koszul_complex(ring, parse_poly_list(t.substr(6), ring, off + 6), 1);
  } else if (t.starts_with("module")) {
    c = FreeComplex<K>::concentrated(parse_module(t.substr(6), ring), 0);
  } else if (t.starts_with("map")) {
    auto rows = parse_matrix_rows(t.substr(3), ring, off + 3);
    if (rows.empty()) throw SyntaxError("map needs at least one row", off + 3);
    c = two_term(Matrix<K>::from_rows(ring, rows), -1);
  } else {
    throw SyntaxError("complex must be 'koszul ...', 'module ...' or 'map [[...]]'", off);
  }
  return shift_by == 0 ? c : shift(c, shift_by);
}

// ---------------------------------------------------------------------------
// Commands.

struct Outcome {
  json result;
  std::string verdict;  // ok | certified | pass | stable | partially-stable | undecided | fail
};

inline int exit_for(const std::string& verdict) {
  if (verdict == "undecided") return kExitUndecided;
  if (verdict == "fail") return kExitFail;
  return kExitOk;
}

namespace detail {

template <FieldElement K>
std::vector<Poly<K>> sequence(const JobSpec& j, const Ring<K>& ring) {
  if (j.seq.empty()) throw InvalidArgument("--seq is required");
  return parse_poly_list(j.seq, ring);
}

template <FieldElement K>
FpModule<K> module_or(const JobSpec& j, const Ring<K>& ring, const char* fallback) {
  return parse_module(j.module.empty() ? std::string_view(fallback) : std::string_view(j.module), ring);
}

inline std::pair<long, long> window_or(const JobSpec& j, long lo, long hi) {
  return j.window.empty() ? std::pair<long, long>{lo, hi} : parse_range(j.window);
}

template <FieldElement K>
json hilbert_rows(const FpModule<K>& m, long lo, long hi) {
  json out = json::array();
  for (const auto& [d, v] : m.hilbert_function(lo, hi)) out.push_back({d, 0, v});
  return out;
}

inline std::uint32_t s_max_or_default(const JobSpec& j) { return j.s_max == 0 ? j.r_max + 4 : j.s_max; }

}  // namespace detail

template <FieldElement K>
Outcome execute(const JobSpec& j, const Ring<K>& ring) {
  const std::string& c = j.command;
  if (c == "gb") {
    const Ideal<K> ideal(ring, parse_poly_list(j.ideal, ring));
    return {{{"generators", polys_json(ideal.generators())}, {"groebner_basis", polys_json(ideal.groebner_basis())}}, "ok"};
  }
  if (c == "nf") {
    const Ideal<K> ideal(ring, parse_poly_list(j.ideal, ring));
    const Poly<K> nf = ideal.normal_form(parse_poly(j.poly, ring));
    return {{{"normal_form", format_poly(nf)}, {"member", nf.is_zero()}}, "ok"};
  }
  if (c == "quotient") {
    const Ideal<K> ideal(ring, parse_poly_list(j.ideal, ring));
    const Poly<K> f = parse_poly(j.poly, ring);
    if (j.saturate) {
      const auto sat = saturation(ideal, f);
      return {{{"saturation", polys_json(sat.ideal.groebner_basis())}, {"exponent", sat.exponent}}, "ok"};
    }
    const Ideal<K> q = ideal_quotient(ideal, f, j.power);
    return {{{"power", j.power}, {"quotient", polys_json(q.groebner_basis())}}, "ok"};
  }
  if (c == "resolve") {
    const FpModule<K> m = parse_module(j.module, ring);
    const std::size_t len = j.length == 0 ? ring.num_variables() + 1 : j.length;
    const Resolution<K> res = free_resolution(m, len);
    json ranks = json::array(), degrees = json::array(), maps = json::array();
    for (std::size_t k = 0; k <= res.length(); ++k) {
      ranks.push_back(res.degrees(k).size());
      degrees.push_back(res.degrees(k));
    }
    for (const auto& mat : res.maps) maps.push_back(mat.to_string());
    return {{{"ranks", ranks}, {"degrees", degrees}, {"maps", maps}}, "ok"};
  }
  if (c == "ext" || c == "hilbert") {
    FpModule<K> m = parse_module(j.module, ring);
    json r = json::object();
    if (c == "ext") {
      const int i = j.index.value_or(0);
      m = ext_module(m, parse_module(j.target.empty() ? std::string_view("free 1") : std::string_view(j.target), ring), i);
      r["index"] = i;
      r["presentation"] = m.to_string();
    }
    if (m.is_graded()) {
      const auto [lo, hi] = detail::window_or(j, 0, 6);
      r["hilbert"] = detail::hilbert_rows(m, lo, hi);
    }
    return {r, "ok"};
  }
  if (c == "koszul") {
    std::optional<FpModule<K>> coeff;
    if (!j.module.empty()) coeff = parse_module(j.module, ring);
    const FreeComplex<K> k = koszul_complex(ring, detail::sequence(j, ring), j.r, coeff);
    json terms = json::array(), diffs = json::array();
    for (int n = k.lo(); n <= k.hi(); ++n) {
      terms.push_back({{"degree", n}, {"generator_degrees", k.degrees(n)}});
      if (n < k.hi()) diffs.push_back({{"degree", n}, {"matrix", k.differential(n).to_string()}});
    }
    const bool ok = k.is_complex();
    return {{{"r", j.r}, {"terms", terms}, {"differentials", diffs}, {"d_squared_zero", ok}}, ok ? "pass" : "fail"};
  }
  if (c == "proreg") {
    const auto cert = proregularity_check(ring, detail::sequence(j, ring), j.r_max, detail::s_max_or_default(j));
    return {to_json(cert), to_string(cert.verdict)};
  }
  if (c == "essnull") {
    const auto cert = essential_nullity_check(ring, detail::sequence(j, ring), detail::module_or(j, ring, "free 1"),
                                              j.index.value_or(1), j.r_max, detail::s_max_or_default(j));
    return {to_json(cert), to_string(cert.verdict)};
  }
  if (c == "localcoh") {
    const FpModule<K> m = parse_module(j.module, ring);
    std::vector<Poly<K>> t;
    if (j.seq.empty()) {
      for (std::size_t v = 0; v < ring.num_variables(); ++v) t.push_back(ring.variable(v));
    } else {
      t = parse_poly_list(j.seq, ring);
    }
    LcMethod method;
    if (j.method == "koszul-colim") method = LcMethod::KoszulColim;
    else if (j.method == "ext-colim") method = LcMethod::ExtColim;
    else throw InvalidArgument("unknown method '" + j.method + "'");
    const auto [lo, hi] = detail::window_or(j, -6, 2);
    const auto table = local_cohomology_graded(m, t, j.index.value_or(0), lo, hi, j.stage_max, method);
    return {to_json(table), table.all_stable() ? "stable" : "partially-stable"};
  }
  if (c == "complete") {
    const FpModule<K> m = parse_module(j.module, ring);
    const auto tower = adic_tower(m, Ideal<K>(ring, parse_poly_list(j.ideal, ring)), j.n_max);
    json r = {{"n_max", tower.n_max}, {"surjective", tower.surjective}};
    if (m.is_graded()) {
      const auto [lo, hi] = detail::window_or(j, 0, 6);
      json rows = json::array();
      for (std::uint32_t n = 1; n <= tower.n_max; ++n) {
        for (const auto& [d, v] : tower.stage(n).hilbert_function(lo, hi)) rows.push_back({d, n, v});
      }
      r["stages"] = rows;
    }
    return {r, tower.surjective ? "pass" : "fail"};
  }
  if (c == "lochom") {
    const auto [lo, hi] = detail::window_or(j, 0, 6);
    const auto rep = local_homology_tower(ring, detail::sequence(j, ring), detail::module_or(j, ring, "free 1"), j.r_max,
                                          j.s_max, j.width, lo, hi);
    const std::string v = !rep.h0_holds() ? "fail" : (rep.pro_zero() && rep.ml_holds() ? "pass" : "undecided");
    return {to_json(rep, lo), v};
  }
  if (c == "gmadj") {
    const auto [lo, hi] = j.r_range.empty() ? std::pair<long, long>{1, 2} : parse_range(j.r_range);
    if (lo < 1) throw BadBounds("r range must start at 1 or later");
    const FreeComplex<K> e = parse_complex(j.complex_e.empty() ? "module free 1" : j.complex_e, ring);
    const FreeComplex<K> f = parse_complex(j.complex_f.empty() ? "module free 1" : j.complex_f, ring);
    const auto rep = gm_adjunction_check(e, f, detail::sequence(j, ring), static_cast<std::uint32_t>(lo),
                                         static_cast<std::uint32_t>(hi));
    return {to_json(rep), rep.passed() ? "pass" : "fail"};
  }
  if (c == "duality") {
    const auto [lo, hi] = detail::window_or(j, -6, 6);
    try {
      const auto table = graded_local_duality_check(parse_module(j.module, ring), lo, hi, j.stage_max);
      return {to_json(table), table.passed() ? "pass" : "fail"};
    } catch (const UnstableWindow& e) {
      return {{{"unstable", e.what()}}, "undecided"};
    }
  }
  throw InvalidArgument("unknown command '" + c + "'");
}

/// Re-checks a report. Certificates are verified from their witnesses; other reports are recomputed.
template <FieldElement K>
json verify_report(const json& report, const JobSpec& j, const Ring<K>& ring, std::string& verdict) {
  const json& recorded = report.at("result");
  const std::string claimed = report.at("verdict").get<std::string>();
  bool valid = false;
  if (j.command == "proreg") {
    const auto cert = proregularity_from_json(recorded, ring, detail::sequence(j, ring));
    valid = verify_proregularity(cert) && to_string(cert.verdict) == claimed &&
            (cert.verdict == Verdict::Certified) == cert.exhausted.empty();
  } else if (j.command == "essnull") {
    const auto cert = essential_nullity_from_json(recorded, ring, detail::sequence(j, ring), detail::module_or(j, ring, "free 1"));
    valid = verify_essential_nullity(cert) && to_string(cert.verdict) == claimed &&
            (cert.verdict == Verdict::Certified) == cert.exhausted.empty();
  } else if (j.command == "lochom") {
    const auto t = detail::sequence(j, ring);
    const FpModule<K> p = detail::module_or(j, ring, "free 1");
    bool nullity_ok = true, pro_zero = true, ml_ok = true, ml_holds = true;
    for (const auto& c : recorded.at("nullity")) {
      const auto cert = essential_nullity_from_json(c, ring, t, p);
      nullity_ok = nullity_ok && verify_essential_nullity(cert) && cert.exhausted.empty() == (cert.verdict == Verdict::Certified);
      pro_zero = pro_zero && cert.verdict == Verdict::Certified;
    }
    for (const auto& m : recorded.at("ml")) {
      const MLReport rep = ml_report_from_json(m);
      ml_ok = ml_ok && verify_ml_report(rep);
      ml_holds = ml_holds && rep.holds();
    }
    bool h0 = recorded.at("adic_compatible").get<bool>();
    for (bool b : recorded.at("h0_iso")) h0 = h0 && b;
    for (bool b : recorded.at("h0_compatible")) h0 = h0 && b;
    const std::string v = !h0 ? "fail" : (pro_zero && ml_holds ? "pass" : "undecided");
    valid = nullity_ok && ml_ok && v == claimed && recorded.at("pro_zero").get<bool>() == pro_zero &&
            recorded.at("ml_holds").get<bool>() == ml_holds;
  } else {
    const Outcome again = execute(j, ring);
    valid = again.result == recorded && again.verdict == claimed;
  }
  verdict = valid ? claimed : "fail";
  return {{"certificate", j.command}, {"valid", valid}, {"recorded_verdict", claimed}};
}

// ---------------------------------------------------------------------------
// Rendering and dispatch.

inline void render_text(const json& report, std::ostream& out) {
  out << "command: " << report.at("command").get<std::string>() << "\n";
  out << "verdict: " << report.at("verdict").get<std::string>() << "\n";
  for (const auto& [key, value] : report.at("result").items()) {
    if (key == "verdict") continue;
    if (value.is_string()) out << key << ": " << value.get<std::string>() << "\n";
    else if (value.is_array() && !value.empty() && value.front().is_array()) {
      out << key << ":\n";
      for (const auto& row : value) out << "  " << row.dump() << "\n";
    } else out << key << ": " << value.dump() << "\n";
  }
}

template <class F>
auto with_field(const std::string& ring_text, F&& body) {
  const FieldDescriptor field = parse_field(ring_text);
  if (field.kind() == FieldKind::Rationals) return body(parse_ring<Rational>(ring_text));
  return body(parse_ring<Zp>(ring_text));
}

inline json load_report(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read '" + path + "'");
    buf << in.rdbuf();
  }
  json report;
  try {
    report = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
  if (!report.is_object() || report.value("schema", 0) != kSchemaVersion) throw InvalidArgument("unsupported report schema");
  return report;
}

/// Runs one job, writing the report to `out` and diagnostics to `err`.
inline int run_command(const JobSpec& job, std::ostream& out, std::ostream& err) {
  try {
    json report = {{"schema", kSchemaVersion}, {"command", job.command}};
    std::string verdict;
    if (job.command == "verify") {
      const json recorded = job.input.empty() ? throw InvalidArgument("verify needs an input report") : load_report(job.input);
      JobSpec inner;
      try {
        inner = job_from_json(recorded);
        (void)recorded.at("result");
        (void)recorded.at("verdict").get<std::string>();
      } catch (const json::exception& e) {
        throw InvalidArgument(std::string("incomplete report: ") + e.what());
      }
      report["inputs"] = inputs_json(inner);
      report["result"] = with_field(inner.ring, [&](const auto& ring) {
        try {
          return verify_report(recorded, inner, ring, verdict);
        } catch (const json::exception& e) {
          throw InvalidArgument(std::string("malformed certificate: ") + e.what());
        }
      });
    } else {
      if (job.ring.empty()) throw InvalidArgument("--ring is required");
      report["inputs"] = inputs_json(job);
      const Outcome o = with_field(job.ring, [&](const auto& ring) { return execute(job, ring); });
      report["result"] = o.result;
      verdict = o.verdict;
    }
    report["verdict"] = verdict;
    if (job.json_output) out << report.dump(2) << "\n";
    else render_text(report, out);
    return exit_for(verdict);
  } catch (const UnstableWindow& e) {
    err << "koszulab: " << e.what() << "\n";
    return kExitUndecided;
  } catch (const Error& e) {
    err << "koszulab: " << e.what() << "\n";
    return kExitUsage;
  }
}

/// Parses argv into a job. Returns an exit code when parsing ends the run (help or usage error).
inline std::variant<JobSpec, int> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // "--window -6..0" reads as an option cluster to most parsers; fuse such values with their flag.
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if ((a == "--window" || a == "--rrange") && k + 1 < argc && argv[k + 1][0] == '-') {
      args.push_back(a + "=" + argv[++k]);
    } else {
      args.push_back(a);
    }
  }
  std::reverse(args.begin(), args.end());

  JobSpec job;
  CLI::App app{"Exact commutative algebra: Koszul towers, local cohomology, completion and duality checks", "koszulab"};
  app.require_subcommand(1);
  struct Cmd {
    const char* name;
    const char* help;
  };
  const std::vector<Cmd> cmds{
      {"gb", "reduced Groebner basis of an ideal"},
      {"nf", "normal form and membership"},
      {"quotient", "ideal quotient (I : f^k) or saturation"},
      {"resolve", "free resolution of a module"},
      {"ext", "Ext^i(M, N) with its Hilbert function"},
      {"hilbert", "Hilbert function of a graded module"},
      {"koszul", "Koszul complex K(t^r) with optional coefficients"},
      {"proreg", "proregularity certificate"},
      {"essnull", "essential-nullity certificate for H_i(t^r, P)"},
      {"localcoh", "graded local cohomology table"},
      {"complete", "adic completion tower"},
      {"lochom", "local homology tower verifier for free P"},
      {"gmadj", "finite-level hom-tensor adjunction check"},
      {"duality", "graded local duality table"},
      {"verify", "re-verify a JSON report"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : cmds) {
    CLI::App* s = app.add_subcommand(c.name, c.help);
    subs[c.name] = s;
    s->add_flag("--json", job.json_output, "emit the JSON report");
    if (std::string(c.name) == "verify") {
      s->add_option("input", job.input, "report file, or - for stdin")->required();
      continue;
    }
    s->add_option("--ring", job.ring, "Q[x,y] or F32003[x,y] with optional :lex and /(relations)")->required();
  }
  auto opt = [&](std::initializer_list<const char*> names, auto&& add) {
    for (const char* n : names) add(subs.at(n));
  };
  opt({"gb", "nf", "quotient", "complete"}, [&](CLI::App* s) { s->add_option("--ideal", job.ideal, "comma-separated generators")->required(); });
  opt({"nf", "quotient"}, [&](CLI::App* s) { s->add_option("--poly", job.poly, "polynomial")->required(); });
  subs["quotient"]->add_option("--power", job.power, "exponent k")->check(CLI::PositiveNumber);
  subs["quotient"]->add_flag("--saturate", job.saturate, "compute (I : f^infinity)");
  opt({"resolve", "ext", "hilbert", "localcoh", "complete", "duality"},
      [&](CLI::App* s) { s->add_option("--module", job.module, "free N | free [d..] | coker [[...]] [twists [d..]]")->required(); });
  opt({"koszul", "essnull", "lochom"}, [&](CLI::App* s) { s->add_option("--module", job.module, "coefficient module"); });
  subs["resolve"]->add_option("--length", job.length, "number of syzygy steps");
  subs["ext"]->add_option("--target", job.target, "second argument N (default free 1)");
  opt({"ext", "essnull", "localcoh"}, [&](CLI::App* s) { s->add_option("--index", job.index, "homological index"); });
  opt({"koszul", "proreg", "essnull", "lochom", "gmadj"}, [&](CLI::App* s) { s->add_option("--seq", job.seq, "comma-separated sequence")->required(); });
  subs["localcoh"]->add_option("--seq", job.seq, "sequence (default: the variables)");
  subs["koszul"]->add_option("--r", job.r, "stage")->check(CLI::PositiveNumber);
  opt({"proreg", "essnull", "lochom"}, [&](CLI::App* s) {
    s->add_option("--rmax", job.r_max, "largest stage r")->check(CLI::PositiveNumber);
    s->add_option("--smax", job.s_max, "search bound for s (default rmax + 4)");
  });
  subs["lochom"]->add_option("--width", job.width, "Mittag-Leffler probe width")->check(CLI::NonNegativeNumber);
  opt({"ext", "hilbert", "localcoh", "complete", "lochom", "duality"},
      [&](CLI::App* s) { s->add_option("--window", job.window, "degree window lo..hi"); });
  opt({"localcoh", "duality"}, [&](CLI::App* s) { s->add_option("--stage-max", job.stage_max, "last colimit stage"); });
  subs["localcoh"]->add_option("--method", job.method, "koszul-colim | ext-colim")->check(CLI::IsMember({"koszul-colim", "ext-colim"}));
  subs["complete"]->add_option("--nmax", job.n_max, "last adic stage")->check(CLI::PositiveNumber);
  subs["gmadj"]->add_option("--E", job.complex_e, "koszul f,.. | module M | map [[...]], optional 'shift k'");
  subs["gmadj"]->add_option("--F", job.complex_f, "same grammar as --E");
  subs["gmadj"]->add_option("--rrange", job.r_range, "stages lo..hi (default 1..2)");

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "koszulab: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const auto& [name, s] : subs) {
    if (s->parsed()) job.command = name;
  }
  return job;
}

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  auto parsed = parse_args(argc, argv, out, err);
  if (std::holds_alternative<int>(parsed)) return std::get<int>(parsed);
  return run_command(std::get<JobSpec>(parsed), out, err);
}

}  // namespace koszulab::cli
