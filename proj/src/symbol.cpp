#include "loopcurv/symbol.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

namespace loopcurv {

TrigMatrix mat_zero(int d) {
  return TrigMatrix(static_cast<std::size_t>(d) * d);
}

TrigMatrix mat_identity(int d) {
  TrigMatrix m = mat_zero(d);
  for (int i = 0; i < d; ++i)
    m[static_cast<std::size_t>(i) * d + i] = TrigPoly::constant(CCoeff(1));
  return m;
}

TrigMatrix mat_add(int d, const TrigMatrix& A, const TrigMatrix& B) {
  TrigMatrix m = A;
  for (std::size_t i = 0; i < m.size(); ++i) m[i] += B[i];
  (void)d;
  return m;
}

TrigMatrix mat_mul(int d, const TrigMatrix& A, const TrigMatrix& B) {
  TrigMatrix m = mat_zero(d);
  for (int i = 0; i < d; ++i)
    for (int l = 0; l < d; ++l) {
      const TrigPoly& a = A[static_cast<std::size_t>(i) * d + l];
      if (a.is_zero()) continue;
      for (int k = 0; k < d; ++k) {
        const TrigPoly& b = B[static_cast<std::size_t>(l) * d + k];
        if (b.is_zero()) continue;
        m[static_cast<std::size_t>(i) * d + k] += trig_mul(a, b);
      }
    }
  return m;
}

TrigMatrix mat_scale(const TrigMatrix& A, const CCoeff& c) {
  TrigMatrix m = A;
  for (TrigPoly& p : m) p = trig_scale(p, c);
  return m;
}

TrigMatrix mat_diff(const TrigMatrix& A) {
  TrigMatrix m = A;
  for (TrigPoly& p : m) p = trig_diff(p, 1);
  return m;
}

bool mat_is_zero(const TrigMatrix& A) {
  for (const TrigPoly& p : A)
    if (!p.is_zero()) return false;
  return true;
}

bool SymbolTerm::is_exact() const {
  for (const TrigPoly& p : coeff)
    if (!p.is_exact()) return false;
  return true;
}

std::optional<Rat> Symbol::leading_grade() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().grade.value;
}

bool Symbol::is_exact() const {
  for (const SymbolTerm& t : terms_)
    if (!t.is_exact()) return false;
  return true;
}

void Symbol::accumulate(const Grade& g, int parity, const TrigMatrix& m) {
  for (SymbolTerm& t : terms_) {
    if (t.parity == parity && t.grade.value == g.value) {
      t.coeff = mat_add(dim_, t.coeff, m);
      if (!t.grade.same_form(g)) t.grade = Grade::fixed(g.value);
      return;
    }
  }
  terms_.push_back(SymbolTerm{g, parity, m});
}

void Symbol::canonicalize() {
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                              [](const SymbolTerm& t) {
                                return mat_is_zero(t.coeff);
                              }),
               terms_.end());
  std::sort(terms_.begin(), terms_.end(),
            [](const SymbolTerm& x, const SymbolTerm& y) {
              if (x.grade.value != y.grade.value)
                return x.grade.value > y.grade.value;
              return x.parity < y.parity;
            });
}

Symbol symbol_zero(int dim) {
  return Symbol(dim);
}

Symbol identity_symbol(int dim) {
  Symbol s(dim);
  s.accumulate(Grade::fixed(Rat(0)), 0, mat_identity(dim));
  s.canonicalize();
  return s;
}

Symbol symbol_add(const Symbol& p, const Symbol& q) {
  if (p.dim() != q.dim())
    throw InvalidInput("symbol_add: dimension mismatch");
  std::optional<Rat> cutoff;
  if (p.cutoff() && q.cutoff())
    cutoff = std::max(*p.cutoff(), *q.cutoff());
  else if (p.cutoff())
    cutoff = p.cutoff();
  else
    cutoff = q.cutoff();
  Symbol out(p.dim(), cutoff);
  for (const SymbolTerm& t : p.terms()) out.accumulate(t.grade, t.parity, t.coeff);
  for (const SymbolTerm& t : q.terms()) out.accumulate(t.grade, t.parity, t.coeff);
  out.canonicalize();
  return out;
}

Symbol symbol_sub(const Symbol& p, const Symbol& q) {
  return symbol_add(p, symbol_scale(q, CCoeff(-1)));
}

Symbol symbol_scale(const Symbol& p, const CCoeff& c) {
  Symbol out(p.dim(), p.cutoff());
  if (c.is_zero()) return out;
  for (const SymbolTerm& t : p.terms())
    out.accumulate(t.grade, t.parity, mat_scale(t.coeff, c));
  out.canonicalize();
  return out;
}

namespace {

// Safety net for disengaged-cutoff composition of series that fail to
// terminate; the public contract requires a finite cutoff in that case.
constexpr int kAlphaLimit = 4096;

std::string rat_str(const Rat& q) {
  return rat_to_string(q);
}

}  // namespace

Symbol compose(const Symbol& p, const Symbol& q,
               const std::optional<Rat>& cutoff) {
  if (p.dim() != q.dim())
    throw InvalidInput("compose: dimension mismatch");
  const int d = p.dim();

  // Completeness accounting. Terms below an input's cutoff are unknown;
  // their products land strictly below unknown_sup, so the result can only
  // be certified above it.
  std::optional<Rat> unknown_sup;
  auto bump = [&unknown_sup](const Rat& v) {
    if (!unknown_sup || *unknown_sup < v) unknown_sup = v;
  };
  if (p.cutoff() && !q.is_empty()) bump(*p.cutoff() + *q.leading_grade());
  if (q.cutoff() && !p.is_empty()) bump(*q.cutoff() + *p.leading_grade());
  if (p.cutoff() && q.cutoff()) bump(*p.cutoff() + *q.cutoff());

  if (cutoff) {
    if (unknown_sup && *unknown_sup > *cutoff) {
      std::ostringstream msg;
      msg << "compose: inputs too shallow for cutoff " << rat_str(*cutoff)
          << " (complete only above " << rat_str(*unknown_sup) << ")";
      if (!q.is_empty() && p.cutoff())
        msg << "; left factor needs cutoff <= "
            << rat_str(*cutoff - *q.leading_grade());
      if (!p.is_empty() && q.cutoff())
        msg << "; right factor needs cutoff <= "
            << rat_str(*cutoff - *p.leading_grade());
      throw InsufficientDepth(msg.str());
    }
  } else if (unknown_sup) {
    throw InsufficientDepth(
        "compose: exact composition requested but inputs are truncated");
  }

  Symbol out(d);
  bool dropped = false;

  for (const SymbolTerm& tp : p.terms()) {
    for (const SymbolTerm& tq : q.terms()) {
      TrigMatrix qderiv = tq.coeff;
      Rat fall(1);  // product (g_P)(g_P - 1)...(g_P - alpha + 1)
      for (int alpha = 0;; ++alpha) {
        if (alpha > 0) {
          fall *= tp.grade.value - Rat(alpha - 1);
          if (fall == 0) break;  // d_xi^alpha of this |xi| power vanishes
          qderiv = mat_diff(qderiv);
          if (mat_is_zero(qderiv)) break;
        }
        const Grade g = (tp.grade + tq.grade).lowered(alpha);
        if (cutoff && g.value < *cutoff) {
          dropped = true;
          break;
        }
        if (!cutoff && alpha > kAlphaLimit)
          throw Error("compose: series does not terminate");
        const CCoeff scal =
            CCoeff(Coeff(fall / rat_factorial(static_cast<unsigned>(alpha))))
                .times_i_pow(-alpha);
        const int parity = (tp.parity + tq.parity + alpha) % 2;
        out.accumulate(g, parity,
                       mat_scale(mat_mul(d, tp.coeff, qderiv), scal));
      }
    }
  }

  std::optional<Rat> out_cutoff = unknown_sup;
  if (dropped) out_cutoff = *cutoff;  // dropped implies cutoff engaged
  out.set_cutoff(std::move(out_cutoff));
  out.canonicalize();
  return out;
}

Symbol power_symbol(Space space, int exponent_sign, const Rat& s, int depth,
                    int dim) {
  if (exponent_sign != 1 && exponent_sign != -1)
    throw InvalidInput("power_symbol: exponent sign must be +1 or -1");
  if (s != 0 && s <= Rat(1, 2))
    throw SobolevRange("power_symbol: Sobolev parameter must exceed 1/2");
  if (depth < 1) throw InvalidInput("power_symbol: depth must be >= 1");

  const Rat signed_s = exponent_sign > 0 ? s : Rat(-s);

  if (space == Space::based) {
    Symbol out(dim);  // single exact term, expansion terminates
    out.accumulate(Grade::with_s(Rat(0), 2 * exponent_sign, s), 0,
                   mat_identity(dim));
    out.canonicalize();
    return out;
  }

  // binomial expansion of (1 + xi^2)^{signed_s}; terminates exactly for
  // nonnegative integer exponents
  const bool terminates =
      rat_is_integer(signed_s) && signed_s >= 0 && Rat(depth) > signed_s;
  Symbol out(dim, terminates
                      ? std::optional<Rat>()
                      : std::optional<Rat>(Rat(2) * signed_s -
                                           Rat(2 * depth) + Rat(1)));
  for (int k = 0; k < depth; ++k) {
    const Rat coeff = rat_binomial(signed_s, static_cast<unsigned>(k));
    if (coeff == 0) continue;
    TrigMatrix m = mat_scale(mat_identity(dim), CCoeff(Coeff(coeff)));
    out.accumulate(Grade::with_s(Rat(-2 * k), 2 * exponent_sign, s), 0, m);
  }
  out.canonicalize();
  return out;
}

Symbol power_symbol_to(Space space, int exponent_sign, const Rat& s,
                       const Rat& min_grade, int dim) {
  if (space == Space::based)
    return power_symbol(space, exponent_sign, s, 1, dim);
  const Rat signed_2s = Rat(2) * (exponent_sign > 0 ? s : Rat(-s));
  // smallest depth D with signed_2s - 2D < min_grade
  long depth = rat_floor((signed_2s - min_grade) / 2) + 1;
  if (depth < 1) depth = 1;
  Symbol out =
      power_symbol(space, exponent_sign, s, static_cast<int>(depth), dim);
  if (out.cutoff()) out.set_cutoff(min_grade);
  return out;
}

Symbol ad_symbol(const LieAlgebraSpec& L, const LoopField& x) {
  if (!(x.algebra == L))
    throw InvalidInput("ad_symbol: field does not live over the given algebra");
  const int d = L.dim;
  TrigMatrix m = mat_zero(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      TrigPoly& entry = m[static_cast<std::size_t>(i) * d + k];
      for (int j = 0; j < d; ++j) {
        const Rat& c = L.c(i, j, k);
        if (c == 0 || x.components[j].is_zero()) continue;
        entry += trig_scale(x.components[j], CCoeff(Coeff(c)));
      }
    }
  Symbol out(d);
  out.accumulate(Grade::fixed(Rat(0)), 0, m);
  out.canonicalize();
  return out;
}

std::vector<SymbolTerm> grade_extract(const Symbol& p, const Rat& grade) {
  if (p.cutoff() && grade < *p.cutoff())
    throw BelowCutoff("grade_extract: grade " + rat_to_string(grade) +
                      " lies below the cutoff " + rat_to_string(*p.cutoff()));
  std::vector<SymbolTerm> found;
  for (const SymbolTerm& t : p.terms())
    if (t.grade.value == grade) found.push_back(t);
  return found;
}

}  // namespace loopcurv
