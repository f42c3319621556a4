#include "loopcurv/json_io.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace loopcurv {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> ok,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : ok)
      if (it.key() == k) known = true;
    if (!known) fail(where, "unknown key '" + it.key() + "'");
  }
}

Rat parse_rat(const Json& j, const std::string& where) {
  if (j.is_number_integer())
    return Rat(static_cast<long>(j.get<long long>()));
  if (!j.is_string()) fail(where, "expected a rational string \"p/q\"");
  try {
    return rat_from_string(j.get<std::string>());
  } catch (const InputError& e) {
    fail(where, e.what());
  }
}

}  // namespace

LoopField parse_field_json(const Json& j, const LieAlgebraSpec& L) {
  if (!j.is_object()) fail("field", "expected an object");
  reject_unknown_keys(j, {"components"}, "field");
  if (!j.contains("components") || !j["components"].is_array())
    fail("field", "missing \"components\" array");
  const Json& comps = j["components"];
  if (static_cast<int>(comps.size()) != L.dim)
    fail("field", "expected " + std::to_string(L.dim) +
                      " component arrays, got " + std::to_string(comps.size()));

  std::vector<TrigPoly> out(static_cast<std::size_t>(L.dim));
  for (int c = 0; c < L.dim; ++c) {
    const std::string where = "components[" + std::to_string(c) + "]";
    if (!comps[c].is_array()) fail(where, "expected an array of terms");
    int idx = 0;
    for (const Json& term : comps[c]) {
      const std::string twhere = where + "[" + std::to_string(idx++) + "]";
      if (!term.is_object()) fail(twhere, "expected an object");
      reject_unknown_keys(term, {"freq", "kind", "coeff"}, twhere);
      if (!term.contains("kind") || !term["kind"].is_string())
        fail(twhere, "missing \"kind\"");
      if (!term.contains("coeff")) fail(twhere, "missing \"coeff\"");
      const std::string kind = term["kind"].get<std::string>();
      const Rat coeff = parse_rat(term["coeff"], twhere + ".coeff");
      long freq = 0;
      if (term.contains("freq")) {
        if (!term["freq"].is_number_integer())
          fail(twhere + ".freq", "expected an integer");
        freq = term["freq"].get<long>();
        if (freq < 0) fail(twhere + ".freq", "negative frequency");
      }
      if (kind == "const") {
        if (freq != 0) fail(twhere, "constant terms take no frequency");
        out[c] += TrigPoly::constant(CCoeff(Coeff(coeff)));
      } else if (kind == "cos" || kind == "sin") {
        if (freq < 1)
          fail(twhere, "\"" + kind + "\" terms need freq >= 1");
        if (kind == "cos")
          out[c] += TrigPoly::cosine(static_cast<int>(freq),
                                     CCoeff(Coeff(coeff)));
        else
          out[c] += TrigPoly::sine(static_cast<int>(freq),
                                   CCoeff(Coeff(coeff)));
      } else {
        fail(twhere, "kind must be \"sin\", \"cos\" or \"const\"");
      }
    }
  }
  return LoopField(L, std::move(out));
}

LoopField parse_field_spec(const std::string& text, const LieAlgebraSpec& L) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("field: ") + e.what());
  }
  return parse_field_json(j, L);
}

namespace {

Json coeff_to_json(const CCoeff& c) {
  Json j;
  j["re"] = c.re.str();
  j["im"] = c.im.str();
  if (!c.exact()) j["exact"] = false;
  return j;
}

Json trig_to_json(const TrigPoly& p) {
  Json j;
  j["const"] = coeff_to_json(p.constant_term());
  Json harms = Json::array();
  for (const auto& [n, h] : p.harmonics()) {
    Json hj;
    hj["freq"] = n;
    hj["cos"] = coeff_to_json(h.cs);
    hj["sin"] = coeff_to_json(h.sn);
    harms.push_back(std::move(hj));
  }
  j["harmonics"] = std::move(harms);
  return j;
}

std::string real_rat_string(const CCoeff& c, const std::string& where) {
  if (!c.exact() || !c.is_real())
    fail(where, "only exact real coefficients serialize to field specs");
  return rat_to_string(c.re.rational());
}

}  // namespace

Json field_to_json(const LoopField& x) {
  Json comps = Json::array();
  for (const TrigPoly& p : x.components) {
    Json arr = Json::array();
    if (!p.constant_term().is_zero()) {
      Json t;
      t["kind"] = "const";
      t["coeff"] = real_rat_string(p.constant_term(), "field");
      arr.push_back(std::move(t));
    }
    for (const auto& [n, h] : p.harmonics()) {
      if (!h.cs.is_zero()) {
        Json t;
        t["kind"] = "cos";
        t["freq"] = n;
        t["coeff"] = real_rat_string(h.cs, "field");
        arr.push_back(std::move(t));
      }
      if (!h.sn.is_zero()) {
        Json t;
        t["kind"] = "sin";
        t["freq"] = n;
        t["coeff"] = real_rat_string(h.sn, "field");
        arr.push_back(std::move(t));
      }
    }
    comps.push_back(std::move(arr));
  }
  Json j;
  j["components"] = std::move(comps);
  return j;
}

LieAlgebraSpec parse_algebra_json(const Json& j) {
  if (!j.is_object()) fail("algebra", "expected an object");
  reject_unknown_keys(j, {"dim", "brackets", "labels"}, "algebra");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    fail("algebra", "missing integer \"dim\"");
  const int d = j["dim"].get<int>();
  if (d < 1 || d > 16) fail("algebra.dim", "dimension out of range [1,16]");
  LieAlgebraSpec L = make_algebra(d);
  if (j.contains("labels")) {
    if (!j["labels"].is_array() || static_cast<int>(j["labels"].size()) != d)
      fail("algebra.labels", "expected one label per basis direction");
    for (const Json& s : j["labels"]) L.labels.push_back(s.get<std::string>());
  }
  if (j.contains("brackets")) {
    if (!j["brackets"].is_array()) fail("algebra.brackets", "expected array");
    int idx = 0;
    for (const Json& b : j["brackets"]) {
      const std::string where = "algebra.brackets[" + std::to_string(idx++) + "]";
      reject_unknown_keys(b, {"i", "j", "k", "coeff"}, where);
      for (const char* key : {"i", "j", "k"})
        if (!b.contains(key) || !b[key].is_number_integer())
          fail(where, std::string("missing integer \"") + key + "\"");
      const int bi = b["i"].get<int>(), bj = b["j"].get<int>(),
                bk = b["k"].get<int>();
      if (bi < 1 || bi > d || bj < 1 || bj > d || bk < 1 || bk > d)
        fail(where, "indices are 1-based and must lie in [1, dim]");
      if (bi >= bj) fail(where, "list brackets with i < j");
      if (!b.contains("coeff")) fail(where, "missing \"coeff\"");
      const Rat c = parse_rat(b["coeff"], where + ".coeff");
      if (L.c(bk - 1, bi - 1, bj - 1) != 0)
        fail(where, "duplicate bracket entry");
      L.c(bk - 1, bi - 1, bj - 1) = c;
      L.c(bk - 1, bj - 1, bi - 1) = -c;
    }
  }
  validate_algebra(L);
  return L;
}

Json algebra_to_json(const LieAlgebraSpec& L) {
  Json j;
  j["dim"] = L.dim;
  if (!L.labels.empty()) j["labels"] = L.labels;
  Json brackets = Json::array();
  for (int i = 0; i < L.dim; ++i)
    for (int jj = i + 1; jj < L.dim; ++jj)
      for (int k = 0; k < L.dim; ++k) {
        if (L.c(k, i, jj) == 0) continue;
        Json b;
        b["i"] = i + 1;
        b["j"] = jj + 1;
        b["k"] = k + 1;
        b["coeff"] = rat_to_string(L.c(k, i, jj));
        brackets.push_back(std::move(b));
      }
  j["brackets"] = std::move(brackets);
  return j;
}

LieAlgebraSpec resolve_algebra(const std::string& arg) {
  if (arg.empty()) throw InputError("algebra: empty specification");
  if (arg == "su2") return su2();
  if (arg == "so3") return so3(Rat(1));
  if (arg.rfind("abelian", 0) == 0) {
    const std::string tail = arg.substr(7);
    if (tail.empty()) throw InputError("algebra: abelianN needs a dimension");
    for (char c : tail)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw InputError("algebra: bad dimension in '" + arg + "'");
    return abelian(std::stoi(tail));
  }
  std::string text = arg;
  if (arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw InputError("algebra: cannot open file '" + arg.substr(1) + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  if (text.empty() || text[0] != '{')
    throw InputError("algebra: expected a builtin name, inline JSON or @file");
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("algebra: ") + e.what());
  }
  return parse_algebra_json(j);
}

Json term_to_json(const SymbolTerm& t) {
  Json j;
  j["grade"]["a"] = rat_to_string(t.grade.a);
  j["grade"]["b"] = t.grade.b;
  j["grade"]["value"] = rat_to_string(t.grade.value);
  j["parity"] = t.parity;
  j["exact"] = t.is_exact();
  const int d = static_cast<int>(std::sqrt(static_cast<double>(t.coeff.size())) + 0.5);
  Json rows = Json::array();
  for (int i = 0; i < d; ++i) {
    Json row = Json::array();
    for (int k = 0; k < d; ++k)
      row.push_back(trig_to_json(t.coeff[static_cast<std::size_t>(i) * d + k]));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j;
}

Json symbol_to_json(const Symbol& s) {
  Json j;
  j["dim"] = s.dim();
  j["cutoff"] = s.cutoff() ? Json(rat_to_string(*s.cutoff())) : Json(nullptr);
  Json terms = Json::array();
  for (const SymbolTerm& t : s.terms()) terms.push_back(term_to_json(t));
  j["terms"] = std::move(terms);
  return j;
}

Json provenance_json(const SobolevParam& p, const Rat& cutoff,
                     SignConvention conv, const std::string& algebra_name) {
  Json j;
  j["s"] = rat_to_string(p.s);
  j["regime"] = regime_name(p.regime);
  j["space"] = space_name(p.space);
  j["sign_convention"] = conv == SignConvention::minus ? "minus" : "plus";
  j["cutoff"] = rat_to_string(cutoff);
  j["algebra"] = algebra_name;
  return j;
}

Json connection_to_json(const ConnectionSymbol& c,
                        const std::string& algebra_name, bool verbose) {
  Json j;
  j["operator"] = "connection";
  j["provenance"] = provenance_json(c.param, c.cutoff,
                                    SignConvention::minus, algebra_name);
  j["symbol"] = symbol_to_json(c.total);
  if (verbose) {
    j["audit"]["bracket"] = symbol_to_json(c.part_a);
    j["audit"]["power_bracket"] = symbol_to_json(c.part_b);
    j["audit"]["sandwich"] = symbol_to_json(c.part_c);
  }
  return j;
}

Json curvature_to_json(const CurvatureSymbol& c,
                       const std::string& algebra_name, bool verbose) {
  Json j;
  j["operator"] = "curvature";
  j["provenance"] = provenance_json(c.param, c.cutoff,
                                    SignConvention::minus, algebra_name);
  j["symbol"] = symbol_to_json(c.total);
  const auto lead = c.total.leading_grade();
  j["leading_order"] = lead ? Json(rat_to_string(*lead)) : Json(nullptr);
  if (verbose) {
    j["audit"]["comp_xy"] = symbol_to_json(c.comp_xy);
    j["audit"]["comp_yx"] = symbol_to_json(c.comp_yx);
    j["audit"]["covariant_of_bracket"] = symbol_to_json(c.nabla_bracket);
  }
  return j;
}

Json order_estimate_to_json(const OrderEstimate& e) {
  Json j;
  j["slope"] = e.slope;
  j["intercept"] = e.intercept;
  j["r_squared"] = e.r_squared;
  j["window"] = {e.n_min, e.n_max};
  Json norms = Json::array();
  for (const auto& [n, v] : e.norms) {
    Json row;
    row["n"] = n;
    row["norm"] = v;
    row["fitted"] = e.fitted(n);
    norms.push_back(std::move(row));
  }
  j["norms"] = std::move(norms);
  return j;
}

std::string order_estimate_to_csv(const OrderEstimate& e) {
  std::ostringstream out;
  out << "n,norm,fitted\n";
  out.setf(std::ios::scientific);
  out.precision(12);
  for (const auto& [n, v] : e.norms)
    out << n << "," << v << "," << e.fitted(n) << "\n";
  return out.str();
}

std::string trig_to_string(const TrigPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  auto coeff_str = [](const CCoeff& c) -> std::string {
    if (c.is_real()) return c.re.str();
    if (c.re.is_zero()) return c.im.str() + "i";
    return "(" + c.re.str() + (c.im.value() < 0 ? "" : "+") + c.im.str() +
           "i)";
  };
  auto emit = [&](const CCoeff& c, const std::string& basis) {
    if (c.is_zero()) return;
    if (!first) out << " + ";
    first = false;
    out << coeff_str(c);
    if (!basis.empty()) out << " " << basis;
  };
  emit(p.constant_term(), "");
  for (const auto& [n, h] : p.harmonics()) {
    emit(h.cs, "cos(" + std::to_string(n) + "t)");
    emit(h.sn, "sin(" + std::to_string(n) + "t)");
  }
  return out.str();
}

std::string symbol_to_table(const Symbol& s) {
  std::ostringstream out;
  if (s.is_empty()) {
    out << "  (empty";
    if (s.cutoff()) out << " down to cutoff " << rat_to_string(*s.cutoff());
    out << ")\n";
    return out.str();
  }
  const int d = s.dim();
  for (const SymbolTerm& t : s.terms()) {
    out << "  grade " << rat_to_string(t.grade.value);
    if (t.grade.b != 0)
      out << " (= " << rat_to_string(t.grade.a) << " + " << t.grade.b << "*s)";
    out << (t.parity ? "  (odd: sgn(xi))" : "")
        << (t.is_exact() ? "" : "  [numeric]") << "\n";
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        const TrigPoly& e = t.coeff[static_cast<std::size_t>(i) * d + k];
        if (e.is_zero()) continue;
        out << "    [" << i + 1 << "," << k + 1 << "] " << trig_to_string(e)
            << "\n";
      }
  }
  if (s.cutoff()) out << "  cutoff " << rat_to_string(*s.cutoff()) << "\n";
  return out.str();
}

}  // namespace loopcurv
