#pragma once

#include <optional>
#include <vector>

#include "loopcurv/common.hpp"
#include "loopcurv/loop_field.hpp"

namespace loopcurv {

/// Exponent of a graded symbol term, kept in the symbolic form a + b*s
/// together with its evaluated rational value at the session's Sobolev
/// parameter. Terms are ordered and merged by the evaluated value, so
/// exponents that collide for special s (e.g. -2s and -2 at s = 1) merge
/// exactly. A merged term whose symbolic forms disagree is reported with
/// the concrete form (value, 0).
struct Grade {
  Rat a;
  int b = 0;
  Rat value;

  static Grade fixed(Rat v) { return Grade{v, 0, v}; }
  static Grade with_s(Rat a_, int b_, const Rat& s) {
    Rat v = a_ + Rat(b_) * s;
    return Grade{std::move(a_), b_, std::move(v)};
  }

  Grade operator+(const Grade& o) const {
    return Grade{a + o.a, b + o.b, value + o.value};
  }
  Grade lowered(int k) const {
    return Grade{a - Rat(k), b, value - Rat(k)};
  }
  bool same_form(const Grade& o) const { return a == o.a && b == o.b; }
};

/// d x d matrix of trig polynomials, row-major: entry (i,k) at [i*d + k].
using TrigMatrix = std::vector<TrigPoly>;

TrigMatrix mat_zero(int d);
TrigMatrix mat_identity(int d);
TrigMatrix mat_add(int d, const TrigMatrix& A, const TrigMatrix& B);
TrigMatrix mat_mul(int d, const TrigMatrix& A, const TrigMatrix& B);
TrigMatrix mat_scale(const TrigMatrix& A, const CCoeff& c);
TrigMatrix mat_diff(const TrigMatrix& A);
bool mat_is_zero(const TrigMatrix& A);

/// One term M(theta) * sgn(xi)^parity * |xi|^grade of a graded symbol.
/// The sgn/|xi| normal form keeps both parities exact and differentiable
/// on the two half-lines xi != 0.
struct SymbolTerm {
  Grade grade;
  int parity = 0;  // 0 or 1
  TrigMatrix coeff;

  bool is_exact() const;
};

/// Finite graded symbol: terms sorted by decreasing grade, at most one term
/// per (grade value, parity), all grades >= cutoff. Grades below the cutoff
/// are truncated and unspecified; a disengaged cutoff means the symbol is
/// complete (nothing truncated).
class Symbol {
 public:
  explicit Symbol(int dim, std::optional<Rat> cutoff = std::nullopt)
      : dim_(dim), cutoff_(std::move(cutoff)) {}

  int dim() const { return dim_; }
  const std::optional<Rat>& cutoff() const { return cutoff_; }
  void set_cutoff(std::optional<Rat> c) { cutoff_ = std::move(c); }
  const std::vector<SymbolTerm>& terms() const { return terms_; }

  bool is_empty() const { return terms_.empty(); }
  std::optional<Rat> leading_grade() const;
  bool is_exact() const;

  /// Merge a contribution into the term at (grade value, parity).
  void accumulate(const Grade& g, int parity, const TrigMatrix& m);

  /// Drop exact-zero terms and restore sort order.
  void canonicalize();

 private:
  int dim_;
  std::optional<Rat> cutoff_;
  std::vector<SymbolTerm> terms_;
};

Symbol symbol_zero(int dim);
Symbol identity_symbol(int dim);

/// Termwise sum; cutoff is the max of the inputs' cutoffs.
Symbol symbol_add(const Symbol& p, const Symbol& q);
Symbol symbol_sub(const Symbol& p, const Symbol& q);
Symbol symbol_scale(const Symbol& p, const CCoeff& c);

/// Composition per the product formula
///   sigma(P o Q) ~ sum_alpha 1/(i^alpha alpha!)
///                  d_xi^alpha sigma(P) . d_theta^alpha sigma(Q),
/// truncated at `cutoff` (each alpha step lowers the grade by one, so the
/// series terminates above any finite cutoff). A disengaged cutoff is only
/// legal when the series terminates exactly. Throws InsufficientDepth when
/// the inputs do not carry enough terms to make the output complete above
/// the cutoff.
Symbol compose(const Symbol& p, const Symbol& q,
               const std::optional<Rat>& cutoff);

/// Graded symbol of the s-th power of (1 + Laplacian) resp. Laplacian:
/// free loops expand binomially, sum_k binom(sign*s, k) |xi|^{sign*2s-2k} I;
/// based loops are the single exact term |xi|^{sign*2s} I.
Symbol power_symbol(Space space, int exponent_sign, const Rat& s, int depth,
                    int dim);

/// Same, with the depth chosen so the result is complete down to min_grade
/// (cutoff set to exactly min_grade).
Symbol power_symbol_to(Space space, int exponent_sign, const Rat& s,
                       const Rat& min_grade, int dim);

/// Multiplication operator ad_X as a symbol: the single xi-independent term
/// with matrix (i,k) = C^i_{jk} X^j.
Symbol ad_symbol(const LieAlgebraSpec& L, const LoopField& x);

/// Exact terms at one grade (at most one per parity); empty means the
/// symbol vanishes there. Throws BelowCutoff for grades in the truncated
/// region.
std::vector<SymbolTerm> grade_extract(const Symbol& p, const Rat& grade);

}  // namespace loopcurv
