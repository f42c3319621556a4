#pragma once

#include <string>
#include <vector>

#include "loopcurv/common.hpp"
#include "loopcurv/rational.hpp"

namespace loopcurv {

/// Finite-dimensional Lie algebra given by structure constants C^k_{ij}
/// on a basis that is orthonormal for an Ad-invariant inner product:
/// [e_i, e_j] = C^k_{ij} e_k. Indices are 0-based internally.
struct LieAlgebraSpec {
  int dim = 0;
  std::vector<Rat> structure;        // C[k][i][j], flattened k*dim*dim + i*dim + j
  std::vector<std::string> labels;   // optional basis names

  const Rat& c(int k, int i, int j) const {
    return structure[static_cast<std::size_t>((k * dim + i) * dim + j)];
  }
  Rat& c(int k, int i, int j) {
    return structure[static_cast<std::size_t>((k * dim + i) * dim + j)];
  }

  bool operator==(const LieAlgebraSpec& o) const {
    return dim == o.dim && structure == o.structure;
  }
};

LieAlgebraSpec make_algebra(int dim);

/// su(2) with generators e, f, g and [e,f] = -2g, [e,g] = 2f, [f,g] = -2e.
LieAlgebraSpec su2();

/// so(3)-type algebra C^k_{ij} = scale * epsilon_{ijk}.
LieAlgebraSpec so3(const Rat& scale);

LieAlgebraSpec abelian(int dim);

/// Max over (i,k,l,m) of |sum_j (C^i_{mj}C^j_{lk} - C^i_{lj}C^j_{mk}
/// - C^i_{jk}C^j_{ml})|; zero iff the Jacobi identity holds.
Rat jacobi_residual(const LieAlgebraSpec& L);

/// Max |C^k_{ij} + C^k_{ji}|.
Rat antisymmetry_residual(const LieAlgebraSpec& L);

/// Max |C^k_{ij} + C^j_{ik}|; zero iff the basis inner product is
/// Ad-invariant.
Rat ad_invariance_residual(const LieAlgebraSpec& L);

/// Throws InvalidAlgebra unless all three residuals vanish and the
/// structure array has shape dim^3.
void validate_algebra(const LieAlgebraSpec& L);

}  // namespace loopcurv
