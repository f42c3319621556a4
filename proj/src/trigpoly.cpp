#include "loopcurv/trigpoly.hpp"

#include <cmath>

namespace loopcurv {

namespace {
const Rat kHalf(1, 2);
}

TrigPoly TrigPoly::constant(CCoeff c) {
  TrigPoly p;
  p.constant_ = std::move(c);
  return p;
}

TrigPoly TrigPoly::cosine(int n, CCoeff c) {
  TrigPoly p;
  p.add_cos(n, c);
  return p;
}

TrigPoly TrigPoly::sine(int n, CCoeff c) {
  TrigPoly p;
  p.add_sin(n, c);
  return p;
}

int TrigPoly::degree() const {
  return harmonics_.empty() ? 0 : harmonics_.rbegin()->first;
}

bool TrigPoly::is_zero() const {
  return constant_.is_zero() && harmonics_.empty();
}

bool TrigPoly::is_real() const {
  if (!constant_.is_real()) return false;
  for (const auto& [n, h] : harmonics_)
    if (!h.cs.is_real() || !h.sn.is_real()) return false;
  return true;
}

bool TrigPoly::is_exact() const {
  if (!constant_.exact()) return false;
  for (const auto& [n, h] : harmonics_)
    if (!h.cs.exact() || !h.sn.exact()) return false;
  return true;
}

CCoeff TrigPoly::value_at_zero() const {
  CCoeff v = constant_;
  for (const auto& [n, h] : harmonics_) v += h.cs;
  return v;
}

CCoeff TrigPoly::fourier(int m) const {
  if (m == 0) return constant_;
  auto it = harmonics_.find(std::abs(m));
  if (it == harmonics_.end()) return CCoeff();
  const CCoeff half{Coeff(kHalf)};
  // cos = (e^{in} + e^{-in})/2,  sin = (e^{in} - e^{-in})/(2i)
  CCoeff from_cos = it->second.cs * half;
  CCoeff from_sin = it->second.sn * half.times_i_pow(m > 0 ? 3 : 1);
  return from_cos + from_sin;
}

void TrigPoly::add_cos(int n, const CCoeff& c) {
  if (c.is_zero()) return;
  if (n < 0) n = -n;
  if (n == 0) {
    constant_ += c;
    return;
  }
  auto& h = harmonics_[n];
  h.cs += c;
  if (h.cs.is_zero() && h.sn.is_zero()) harmonics_.erase(n);
}

void TrigPoly::add_sin(int n, const CCoeff& c) {
  if (c.is_zero() || n == 0) return;
  CCoeff v = c;
  if (n < 0) {
    n = -n;
    v = -v;
  }
  auto& h = harmonics_[n];
  h.sn += v;
  if (h.cs.is_zero() && h.sn.is_zero()) harmonics_.erase(n);
}

void TrigPoly::prune() {
  for (auto it = harmonics_.begin(); it != harmonics_.end();) {
    if (it->second.cs.is_zero() && it->second.sn.is_zero())
      it = harmonics_.erase(it);
    else
      ++it;
  }
}

TrigPoly TrigPoly::operator-() const {
  TrigPoly p;
  p.constant_ = -constant_;
  for (const auto& [n, h] : harmonics_) p.harmonics_[n] = {-h.cs, -h.sn};
  return p;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  constant_ += o.constant_;
  for (const auto& [n, h] : o.harmonics_) {
    auto& mine = harmonics_[n];
    mine.cs += h.cs;
    mine.sn += h.sn;
  }
  prune();
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) {
  return *this += -o;
}

bool TrigPoly::operator==(const TrigPoly& o) const {
  return constant_ == o.constant_ && harmonics_ == o.harmonics_;
}

std::complex<double> TrigPoly::eval(double theta) const {
  std::complex<double> v = constant_.to_complex();
  for (const auto& [n, h] : harmonics_) {
    v += h.cs.to_complex() * std::cos(n * theta);
    v += h.sn.to_complex() * std::sin(n * theta);
  }
  return v;
}

TrigPoly trig_mul(const TrigPoly& a, const TrigPoly& b) {
  // Enumerate both polynomials as (freq, cos coeff, sin coeff) with the
  // constant as frequency zero, then expand the four product-to-sum
  // identities per pair.
  struct Entry {
    int n;
    CCoeff cs, sn;
  };
  auto entries = [](const TrigPoly& p) {
    std::vector<Entry> e;
    if (!p.constant_term().is_zero())
      e.push_back({0, p.constant_term(), CCoeff()});
    for (const auto& [n, h] : p.harmonics()) e.push_back({n, h.cs, h.sn});
    return e;
  };

  const CCoeff half{Coeff(kHalf)};
  TrigPoly out;
  for (const Entry& ea : entries(a)) {
    for (const Entry& eb : entries(b)) {
      const int diff = ea.n - eb.n;
      const int sum = ea.n + eb.n;
      if (!ea.cs.is_zero() && !eb.cs.is_zero()) {
        CCoeff c = ea.cs * eb.cs * half;
        out.add_cos(diff, c);
        out.add_cos(sum, c);
      }
      if (!ea.sn.is_zero() && !eb.sn.is_zero()) {
        CCoeff c = ea.sn * eb.sn * half;
        out.add_cos(diff, c);
        out.add_cos(sum, -c);
      }
      if (!ea.sn.is_zero() && !eb.cs.is_zero()) {
        CCoeff c = ea.sn * eb.cs * half;
        out.add_sin(diff, c);
        out.add_sin(sum, c);
      }
      if (!ea.cs.is_zero() && !eb.sn.is_zero()) {
        CCoeff c = ea.cs * eb.sn * half;
        out.add_sin(-diff, c);
        out.add_sin(sum, c);
      }
    }
  }
  return out;
}

TrigPoly trig_diff(const TrigPoly& a, unsigned order) {
  TrigPoly cur = a;
  for (unsigned k = 0; k < order; ++k) {
    TrigPoly next;
    for (const auto& [n, h] : cur.harmonics()) {
      const CCoeff fn{Coeff(Rat(n))};
      next.add_cos(n, h.sn * fn);
      next.add_sin(n, -(h.cs * fn));
    }
    cur = std::move(next);
  }
  return cur;
}

TrigPoly trig_scale(const TrigPoly& a, const CCoeff& c) {
  if (c.is_zero()) return TrigPoly();
  TrigPoly out = TrigPoly::constant(a.constant_term() * c);
  for (const auto& [n, h] : a.harmonics()) {
    out.add_cos(n, h.cs * c);
    out.add_sin(n, h.sn * c);
  }
  return out;
}

}  // namespace loopcurv
