#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "loopcurv/geometry.hpp"

namespace loopcurv {

/// Galerkin truncation of a loop-group operator to the Fourier modes
/// e^{i n theta} (x) e_j with |n| <= N. Operators assembled from
/// trig-polynomial data are block banded in the frequency index with a
/// finite, known bandwidth, so they are stored per (offset, n) block;
/// entries within a margin of the frequency boundary are contaminated by
/// truncation and excluded from probe windows. In based mode the n = 0
/// block row and column are projected out (constants are not in the based
/// domain); probes beyond the margin never touch them.
class TruncatedOperator {
 public:
  TruncatedOperator(int N, int dim, int bandwidth, Space space,
                    std::string meta);

  int N() const { return n_; }
  int dim() const { return dim_; }
  int bandwidth() const { return bandwidth_; }
  int margin() const { return margin_; }
  Space space() const { return space_; }
  const std::string& meta() const { return meta_; }
  void set_meta(std::string m) { meta_ = std::move(m); }
  void set_margin(int m) { margin_ = m; }

  int modes() const { return 2 * n_ + 1; }
  int size() const { return modes() * dim_; }

  /// Coupling from mode (n, k) into mode (n + off, i); zero outside the
  /// band or the frequency range.
  std::complex<double>& at(int off, int n, int i, int k);
  std::complex<double> get(int off, int n, int i, int k) const;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

  /// Image of the unit mode e^{i n theta} (x) e_j.
  Eigen::VectorXcd column(int n, int j) const;

  Eigen::MatrixXcd to_dense() const;

  TruncatedOperator adjoint() const;

  /// Zero every block touching the n = 0 mode (based-domain projection).
  void project_zero_mode();

  friend TruncatedOperator op_add(const TruncatedOperator& a,
                                  const TruncatedOperator& b);
  friend TruncatedOperator op_sub(const TruncatedOperator& a,
                                  const TruncatedOperator& b);
  friend TruncatedOperator op_mul(const TruncatedOperator& a,
                                  const TruncatedOperator& b);
  friend TruncatedOperator op_scale(const TruncatedOperator& a,
                                    std::complex<double> c);

 private:
  int n_, dim_, bandwidth_, margin_;
  Space space_;
  std::string meta_;
  std::vector<std::complex<double>> blocks_;

  std::size_t index(int off, int n, int i, int k) const;
};

/// Diagonal Fourier multiplier of the s-th power: (1+n^2)^{sign*s} on free
/// loops, |n|^{2*sign*s} on based loops with the zero mode annihilated.
TruncatedOperator multiplier_matrix(const Rat& s, int sign, int N, int dim,
                                    Space space = Space::free);

/// Block convolution matrix of the pointwise bracket Y -> [X, Y].
TruncatedOperator ad_matrix(const LieAlgebraSpec& L, const LoopField& x,
                            int N);

TruncatedOperator connection_matrix(const LieAlgebraSpec& L,
                                    const LoopField& x, const Rat& s, int N,
                                    Space space = Space::free,
                                    SignConvention conv = SignConvention::minus);

TruncatedOperator curvature_matrix(const LieAlgebraSpec& L, const LoopField& x,
                                   const LoopField& y, const Rat& s, int N,
                                   Space space = Space::free,
                                   SignConvention conv = SignConvention::minus);

/// Least-squares fit of log ||M v_{n,j}|| against log n over a frequency
/// window; the reported slope is the largest over the basis directions
/// (directions on which the operator vanishes are skipped).
struct OrderEstimate {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  int n_min = 0, n_max = 0;
  std::vector<std::pair<int, double>> norms;  // (n, ||M v||) for the fitted j
  std::vector<double> per_direction_slope;    // NaN for skipped directions

  double fitted(int n) const;
};

OrderEstimate estimate_order(const TruncatedOperator& m, int n_min, int n_max);

/// Singular values (decreasing) with partial sums and dyadic tail sums
/// sum_{k in [K, 2K)} sigma_k for the trace-class diagnostic.
struct TraceDiagnostics {
  std::vector<double> singular_values;
  std::vector<double> partial_sums;
  double tail_sum(int K) const;  // sum over ranks [K, 2K)
};

TraceDiagnostics trace_partial_sums(const TruncatedOperator& m, int k_max);

/// Cross-layer oracle: compare the matrix action on unit modes against the
/// symbol evaluated at xi = n acting by multiplication.
struct ConsistencyPoint {
  int n;
  double rel_err;  // ||Mv - Sv|| / max(||Mv||, ||Sv||)
  double abs_err;  // worst ||Mv - Sv|| over directions
};

struct ConsistencyReport {
  std::vector<ConsistencyPoint> points;
  double max_rel_err = 0;
};

ConsistencyReport symbol_consistency(const Symbol& symbol,
                                     const TruncatedOperator& m,
                                     const std::vector<int>& n_list);

}  // namespace loopcurv
