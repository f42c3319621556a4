#pragma once

#include <functional>
#include <ostream>
#include <random>
#include <vector>

#include "loopcurv/spectral.hpp"

namespace loopcurv {

/// One row of the reproduction checklist. The manifest is the single
/// source of truth shared by the `reproduce-paper` command and the
/// acceptance suite; every tolerance is pinned here.
struct ClaimSpec {
  std::string id;
  std::string description;
  std::function<std::pair<bool, std::string>()> run;
};

struct ClaimOutcome {
  std::string id;
  std::string description;
  std::string detail;
  bool pass = false;
  double seconds = 0;
};

/// `conv` selects the sign convention the torsion audit treats as the
/// Levi-Civita one; flipping it makes the torsion row fail, which is the
/// point of the audit.
std::vector<ClaimSpec> reproduction_manifest(
    SignConvention conv = SignConvention::minus);

/// Run every row, streaming one PASS/FAIL line per claim to `progress`
/// when given.
std::vector<ClaimOutcome> run_reproduction(
    std::ostream* progress = nullptr,
    SignConvention conv = SignConvention::minus);

bool all_pass(const std::vector<ClaimOutcome>& rows);

// Deterministic fixtures shared with the test suites.
LoopField example_field_x();  // sin(t) e over su(2)
LoopField example_field_y();  // sin(t) f over su(2)

/// Random trig-polynomial field over su(2) with degree <= max_degree;
/// based fields get their constants adjusted to vanish at theta = 0.
LoopField random_su2_field(std::mt19937& rng, int max_degree, bool based);

/// Random rational Sobolev parameter in (1/2, 4].
Rat random_sobolev_s(std::mt19937& rng);

/// Fourier embedding of a trig-polynomial field into the truncated space.
Eigen::VectorXcd field_to_vector(const LoopField& x, int N);

}  // namespace loopcurv
