#include "loopcurv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <thread>

namespace loopcurv {

namespace {

int thread_hint() {
  if (const char* env = std::getenv("LOOPCURV_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min(v, 64);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

template <typename Fn>
void parallel_for(int begin, int end, Fn&& body) {
  const int nthreads = std::min(thread_hint(), std::max(1, end - begin));
  if (nthreads <= 1 || end - begin < 8) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::future<void>> futs;
  const int chunk = (end - begin + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    const int lo = begin + t * chunk;
    const int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    futs.push_back(std::async(std::launch::async, [lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    }));
  }
  for (auto& f : futs) f.get();
}

double multiplier_value(const Rat& s, int sign, int n, Space space) {
  const double sd = rat_to_double(s) * sign;
  if (space == Space::free)
    return std::pow(1.0 + static_cast<double>(n) * n, sd);
  if (n == 0) return 0.0;  // zero eigenvalue; inverse is the pseudo-inverse
  return std::pow(static_cast<double>(n) * n, sd);
}

}  // namespace

TruncatedOperator::TruncatedOperator(int N, int dim, int bandwidth,
                                     Space space, std::string meta)
    : n_(N),
      dim_(dim),
      bandwidth_(bandwidth),
      margin_(bandwidth),
      space_(space),
      meta_(std::move(meta)) {
  if (N < 1 || dim < 1 || bandwidth < 0)
    throw InvalidInput("TruncatedOperator: bad shape");
  blocks_.assign(static_cast<std::size_t>(2 * bandwidth + 1) * modes() *
                     dim_ * dim_,
                 {0.0, 0.0});
}

std::size_t TruncatedOperator::index(int off, int n, int i, int k) const {
  const std::size_t o = static_cast<std::size_t>(off + bandwidth_);
  const std::size_t m = static_cast<std::size_t>(n + n_);
  return ((o * modes() + m) * dim_ + i) * dim_ + k;
}

std::complex<double>& TruncatedOperator::at(int off, int n, int i, int k) {
  return blocks_[index(off, n, i, k)];
}

std::complex<double> TruncatedOperator::get(int off, int n, int i,
                                            int k) const {
  if (std::abs(off) > bandwidth_ || std::abs(n) > n_ ||
      std::abs(n + off) > n_)
    return {0.0, 0.0};
  return blocks_[index(off, n, i, k)];
}

Eigen::VectorXcd TruncatedOperator::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != size()) throw InvalidInput("apply: size mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(size());
  for (int n = -n_; n <= n_; ++n) {
    for (int off = -bandwidth_; off <= bandwidth_; ++off) {
      const int m = n + off;
      if (m < -n_ || m > n_) continue;
      for (int i = 0; i < dim_; ++i) {
        std::complex<double> acc = 0;
        for (int k = 0; k < dim_; ++k)
          acc += blocks_[index(off, n, i, k)] * v((n + n_) * dim_ + k);
        out((m + n_) * dim_ + i) += acc;
      }
    }
  }
  return out;
}

Eigen::VectorXcd TruncatedOperator::column(int n, int j) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(size());
  for (int off = -bandwidth_; off <= bandwidth_; ++off) {
    const int m = n + off;
    if (m < -n_ || m > n_) continue;
    for (int i = 0; i < dim_; ++i)
      out((m + n_) * dim_ + i) = blocks_[index(off, n, i, j)];
  }
  return out;
}

Eigen::MatrixXcd TruncatedOperator::to_dense() const {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(size(), size());
  for (int n = -n_; n <= n_; ++n)
    for (int off = -bandwidth_; off <= bandwidth_; ++off) {
      const int m = n + off;
      if (m < -n_ || m > n_) continue;
      for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k)
          d((m + n_) * dim_ + i, (n + n_) * dim_ + k) =
              blocks_[index(off, n, i, k)];
    }
  return d;
}

TruncatedOperator TruncatedOperator::adjoint() const {
  TruncatedOperator out(n_, dim_, bandwidth_, space_, meta_ + "^*");
  out.margin_ = margin_;
  for (int n = -n_; n <= n_; ++n)
    for (int off = -bandwidth_; off <= bandwidth_; ++off) {
      const int m = n + off;
      if (m < -n_ || m > n_) continue;
      for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k)
          out.at(-off, m, k, i) = std::conj(get(off, n, i, k));
    }
  return out;
}

void TruncatedOperator::project_zero_mode() {
  for (int off = -bandwidth_; off <= bandwidth_; ++off) {
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < dim_; ++k) {
        // column n = 0
        if (std::abs(off) <= n_) at(off, 0, i, k) = 0;
        // row n + off = 0
        if (std::abs(off) <= n_) at(off, -off, i, k) = 0;
      }
  }
}

TruncatedOperator op_add(const TruncatedOperator& a,
                         const TruncatedOperator& b) {
  if (a.n_ != b.n_ || a.dim_ != b.dim_)
    throw InvalidInput("op_add: shape mismatch");
  const int bw = std::max(a.bandwidth_, b.bandwidth_);
  TruncatedOperator out(a.n_, a.dim_, bw, a.space_,
                        a.meta_ + " + " + b.meta_);
  out.margin_ = std::max(a.margin_, b.margin_);
  for (int n = -a.n_; n <= a.n_; ++n)
    for (int off = -bw; off <= bw; ++off) {
      const int m = n + off;
      if (m < -a.n_ || m > a.n_) continue;
      for (int i = 0; i < a.dim_; ++i)
        for (int k = 0; k < a.dim_; ++k)
          out.at(off, n, i, k) = a.get(off, n, i, k) + b.get(off, n, i, k);
    }
  return out;
}

TruncatedOperator op_sub(const TruncatedOperator& a,
                         const TruncatedOperator& b) {
  return op_add(a, op_scale(b, {-1.0, 0.0}));
}

TruncatedOperator op_scale(const TruncatedOperator& a,
                           std::complex<double> c) {
  TruncatedOperator out = a;
  for (auto& z : out.blocks_) z *= c;
  return out;
}

TruncatedOperator op_mul(const TruncatedOperator& a,
                         const TruncatedOperator& b) {
  if (a.n_ != b.n_ || a.dim_ != b.dim_)
    throw InvalidInput("op_mul: shape mismatch");
  const int N = a.n_, d = a.dim_;
  const int bw = a.bandwidth_ + b.bandwidth_;
  TruncatedOperator out(N, d, bw, a.space_,
                        "(" + a.meta_ + ")(" + b.meta_ + ")");
  // (AB)_{n+off, n} = sum_{o2} A_{n+off, n+o2} B_{n+o2, n}
  parallel_for(-N, N + 1, [&](int n) {
    for (int o2 = -b.bandwidth_; o2 <= b.bandwidth_; ++o2) {
      const int mid = n + o2;
      if (mid < -N || mid > N) continue;
      for (int o1 = -a.bandwidth_; o1 <= a.bandwidth_; ++o1) {
        const int off = o1 + o2;
        const int m = n + off;
        if (m < -N || m > N) continue;
        for (int i = 0; i < d; ++i)
          for (int l = 0; l < d; ++l) {
            const std::complex<double> av = a.get(o1, mid, i, l);
            if (av == std::complex<double>(0.0, 0.0)) continue;
            for (int k = 0; k < d; ++k)
              out.at(off, n, i, k) += av * b.get(o2, n, l, k);
          }
      }
    }
  });
  return out;
}

TruncatedOperator multiplier_matrix(const Rat& s, int sign, int N, int dim,
                                    Space space) {
  if (sign != 1 && sign != -1)
    throw InvalidInput("multiplier_matrix: sign must be +1 or -1");
  TruncatedOperator out(
      N, dim, 0, space,
      std::string(space == Space::free ? "(1+Lap)^" : "Lap^") +
          (sign > 0 ? "" : "-") + rat_to_string(s));
  for (int n = -N; n <= N; ++n) {
    const double v = multiplier_value(s, sign, n, space);
    for (int j = 0; j < dim; ++j) out.at(0, n, j, j) = v;
  }
  return out;
}

namespace {

// block table of a pointwise multiplication operator from complex Fourier
// coefficients xhat[j][off + deg]
TruncatedOperator ad_from_fourier(
    const LieAlgebraSpec& L, int deg,
    const std::vector<std::vector<std::complex<double>>>& xhat, int N,
    Space space, const std::string& meta) {
  const int d = L.dim;
  TruncatedOperator out(N, d, deg, space, meta);
  for (int off = -deg; off <= deg; ++off) {
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        std::complex<double> c = 0;
        for (int j = 0; j < d; ++j) {
          const Rat& cs = L.c(i, j, k);
          if (cs == 0) continue;
          c += rat_to_double(cs) * xhat[j][off + deg];
        }
        if (c == std::complex<double>(0.0, 0.0)) continue;
        for (int n = -N; n <= N; ++n) {
          const int m = n + off;
          if (m < -N || m > N) continue;
          out.at(off, n, i, k) = c;
        }
      }
  }
  return out;
}

std::vector<std::vector<std::complex<double>>> fourier_table(
    const LoopField& x, int deg) {
  std::vector<std::vector<std::complex<double>>> tab(
      x.components.size(),
      std::vector<std::complex<double>>(2 * deg + 1, {0.0, 0.0}));
  for (std::size_t j = 0; j < x.components.size(); ++j)
    for (int off = -deg; off <= deg; ++off)
      tab[j][off + deg] = x.components[j].fourier(off).to_complex();
  return tab;
}

}  // namespace

TruncatedOperator ad_matrix(const LieAlgebraSpec& L, const LoopField& x,
                            int N) {
  if (!(x.algebra == L))
    throw InvalidInput("ad_matrix: field does not live over the given algebra");
  const int deg = x.degree();
  if (deg > N)
    throw InvalidTruncation("ad_matrix: field degree exceeds the truncation");
  return ad_from_fourier(L, deg, fourier_table(x, deg), N, Space::free,
                         "ad_X");
}

TruncatedOperator connection_matrix(const LieAlgebraSpec& L,
                                    const LoopField& x, const Rat& s, int N,
                                    Space space, SignConvention conv) {
  validate_algebra(L);
  if (!(x.algebra == L))
    throw InvalidInput("connection_matrix: field/algebra mismatch");
  if (space == Space::based && !x.based_admissible())
    throw InvalidInput(
        "connection_matrix: based-loop field must vanish at theta = 0");
  const int deg = x.degree();
  if (deg > N)
    throw InvalidTruncation("connection_matrix: field degree exceeds N");

  const TruncatedOperator adx = ad_matrix(L, x, N);
  const TruncatedOperator pow_plus = multiplier_matrix(s, +1, N, L.dim, space);
  const TruncatedOperator pow_minus =
      multiplier_matrix(s, -1, N, L.dim, space);

  // ad_{P^s X}: scale the Fourier data of X by the multiplier
  auto xhat = fourier_table(x, deg);
  for (auto& row : xhat)
    for (int off = -deg; off <= deg; ++off)
      row[off + deg] *= multiplier_value(s, +1, off, space);
  const TruncatedOperator ad_px =
      ad_from_fourier(L, deg, xhat, N, space, "ad_{P^s X}");

  const TruncatedOperator powbr = op_mul(pow_minus, ad_px);
  const TruncatedOperator sandwich = op_mul(pow_minus, op_mul(adx, pow_plus));

  TruncatedOperator middle =
      conv == SignConvention::minus ? op_scale(powbr, {-1.0, 0.0}) : powbr;
  TruncatedOperator total =
      op_scale(op_add(op_add(adx, middle), sandwich), {0.5, 0.0});
  total.set_meta("connection(s=" + rat_to_string(s) + ")");
  total.set_margin(deg);
  if (space == Space::based) total.project_zero_mode();
  return total;
}

TruncatedOperator curvature_matrix(const LieAlgebraSpec& L, const LoopField& x,
                                   const LoopField& y, const Rat& s, int N,
                                   Space space, SignConvention conv) {
  const TruncatedOperator mx = connection_matrix(L, x, s, N, space, conv);
  const TruncatedOperator my = connection_matrix(L, y, s, N, space, conv);
  const LoopField z = bracket_fields(L, x, y);
  const TruncatedOperator mz = connection_matrix(L, z, s, N, space, conv);
  TruncatedOperator out =
      op_sub(op_sub(op_mul(mx, my), op_mul(my, mx)), mz);
  out.set_meta("curvature(s=" + rat_to_string(s) + ")");
  out.set_margin(x.degree() + y.degree() + std::max({x.degree(), y.degree(),
                                                     z.degree()}));
  if (space == Space::based) out.project_zero_mode();
  return out;
}

double OrderEstimate::fitted(int n) const {
  return std::exp(intercept + slope * std::log(static_cast<double>(n)));
}

OrderEstimate estimate_order(const TruncatedOperator& m, int n_min,
                             int n_max) {
  if (n_min < m.margin() + 1)
    throw InvalidInput("estimate_order: window must start above the margin " +
                       std::to_string(m.margin()));
  if (n_max > m.N() - m.margin())
    throw InvalidInput("estimate_order: window must end inside the valid "
                       "range N - margin");
  if (n_max - n_min < 2)
    throw InvalidInput("estimate_order: window too small");

  const int d = m.dim();
  const int count = n_max - n_min + 1;
  std::vector<std::vector<double>> norms(
      static_cast<std::size_t>(d), std::vector<double>(count, 0.0));
  parallel_for(0, count, [&](int idx) {
    const int n = n_min + idx;
    for (int j = 0; j < d; ++j)
      norms[j][idx] = m.column(n, j).norm();
  });

  OrderEstimate best;
  best.n_min = n_min;
  best.n_max = n_max;
  best.per_direction_slope.assign(d, std::numeric_limits<double>::quiet_NaN());
  bool any = false;
  for (int j = 0; j < d; ++j) {
    bool degenerate = true;
    for (double v : norms[j])
      if (v > 1e-14) degenerate = false;
    if (degenerate) continue;

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int cnt = 0;
    for (int idx = 0; idx < count; ++idx) {
      if (norms[j][idx] <= 0) continue;
      const double lx = std::log(static_cast<double>(n_min + idx));
      const double ly = std::log(norms[j][idx]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      syy += ly * ly;
      ++cnt;
    }
    if (cnt < 3) continue;
    const double det = cnt * sxx - sx * sx;
    const double slope = (cnt * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / cnt;
    const double var_y = cnt * syy - sy * sy;
    const double cov = cnt * sxy - sx * sy;
    double r2 = var_y > 0 ? (cov * cov) / (det * var_y) : 1.0;
    r2 = std::clamp(r2, 0.0, 1.0);
    best.per_direction_slope[j] = slope;
    if (!any || slope > best.slope) {
      best.slope = slope;
      best.intercept = intercept;
      best.r_squared = r2;
      best.norms.clear();
      for (int idx = 0; idx < count; ++idx)
        best.norms.emplace_back(n_min + idx, norms[j][idx]);
    }
    any = true;
  }
  if (!any)
    throw RankDeficient(
        "estimate_order: operator is numerically zero on the window");
  return best;
}

double TraceDiagnostics::tail_sum(int K) const {
  double s = 0;
  for (int k = K; k < 2 * K && k < static_cast<int>(singular_values.size());
       ++k)
    s += singular_values[static_cast<std::size_t>(k)];
  return s;
}

TraceDiagnostics trace_partial_sums(const TruncatedOperator& m, int k_max) {
  if (m.N() < 256)
    throw InvalidInput("trace_partial_sums: assemble at N >= 256");
  // singular values via the Gram operator; the band product keeps the
  // squaring cheap and the eigensolver sees a Hermitian matrix
  const TruncatedOperator gram = op_mul(m.adjoint(), m);
  Eigen::MatrixXcd g = gram.to_dense();
  g = (g + g.adjoint()) / 2.0;  // symmetrize roundoff
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g,
                                                     Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  TraceDiagnostics out;
  out.singular_values.reserve(static_cast<std::size_t>(ev.size()));
  for (int i = ev.size() - 1; i >= 0; --i)
    out.singular_values.push_back(std::sqrt(std::max(0.0, ev(i))));
  if (k_max > 0 &&
      out.singular_values.size() > static_cast<std::size_t>(k_max))
    out.singular_values.resize(static_cast<std::size_t>(k_max));
  out.partial_sums.resize(out.singular_values.size());
  double acc = 0;
  for (std::size_t i = 0; i < out.singular_values.size(); ++i) {
    acc += out.singular_values[i];
    out.partial_sums[i] = acc;
  }
  return out;
}

ConsistencyReport symbol_consistency(const Symbol& symbol,
                                     const TruncatedOperator& m,
                                     const std::vector<int>& n_list) {
  const int d = m.dim();
  if (symbol.dim() != d)
    throw InvalidInput("symbol_consistency: dimension mismatch");
  ConsistencyReport rep;
  bool all_tiny = true;
  for (int n : n_list) {
    if (n < m.margin() + 1 || n > m.N() - m.margin())
      throw InvalidInput("symbol_consistency: probe outside valid window");
    ConsistencyPoint pt{n, 0.0, 0.0};
    for (int j = 0; j < d; ++j) {
      const Eigen::VectorXcd mv = m.column(n, j);
      // symbol action at xi = n on e^{i n theta} e_j: each term multiplies
      // by n^grade (n > 0 so sgn = +1) and convolves with the coefficient
      Eigen::VectorXcd sv = Eigen::VectorXcd::Zero(m.size());
      for (const SymbolTerm& t : symbol.terms()) {
        const double mag =
            std::pow(static_cast<double>(n), rat_to_double(t.grade.value));
        for (int i = 0; i < d; ++i) {
          const TrigPoly& entry = t.coeff[static_cast<std::size_t>(i) * d + j];
          if (entry.is_zero()) continue;
          const int deg = entry.degree();
          for (int off = -deg; off <= deg; ++off) {
            const int mm = n + off;
            if (mm < -m.N() || mm > m.N()) continue;
            const std::complex<double> f = entry.fourier(off).to_complex();
            if (f == std::complex<double>(0.0, 0.0)) continue;
            sv((mm + m.N()) * d + i) += f * mag;
          }
        }
      }
      const double nm = mv.norm(), ns = sv.norm();
      const double diff = (mv - sv).norm();
      if (nm > 1e-14 || ns > 1e-14) all_tiny = false;
      const double denom = std::max(nm, ns);
      const double rel = denom > 0 ? diff / denom : 0.0;
      pt.rel_err = std::max(pt.rel_err, rel);
      pt.abs_err = std::max(pt.abs_err, diff);
    }
    rep.points.push_back(pt);
    rep.max_rel_err = std::max(rep.max_rel_err, pt.rel_err);
  }
  if (all_tiny)
    throw RankDeficient(
        "symbol_consistency: both layers numerically zero on all probes");
  return rep;
}

}  // namespace loopcurv
