#include "loopcurv/lie_algebra.hpp"

#include <cstdlib>

namespace loopcurv {

LieAlgebraSpec make_algebra(int dim) {
  if (dim <= 0) throw InvalidAlgebra("algebra dimension must be positive");
  LieAlgebraSpec L;
  L.dim = dim;
  L.structure.assign(static_cast<std::size_t>(dim) * dim * dim, Rat(0));
  return L;
}

namespace {

void set_bracket(LieAlgebraSpec& L, int i, int j, int k, const Rat& v) {
  L.c(k, i, j) = v;
  L.c(k, j, i) = -v;
}

}  // namespace

LieAlgebraSpec su2() {
  LieAlgebraSpec L = make_algebra(3);
  L.labels = {"e", "f", "g"};
  set_bracket(L, 0, 1, 2, Rat(-2));  // [e,f] = -2g
  set_bracket(L, 0, 2, 1, Rat(2));   // [e,g] =  2f
  set_bracket(L, 1, 2, 0, Rat(-2));  // [f,g] = -2e
  return L;
}

LieAlgebraSpec so3(const Rat& scale) {
  LieAlgebraSpec L = make_algebra(3);
  set_bracket(L, 0, 1, 2, scale);
  set_bracket(L, 1, 2, 0, scale);
  set_bracket(L, 2, 0, 1, scale);
  return L;
}

LieAlgebraSpec abelian(int dim) {
  return make_algebra(dim);
}

namespace {

void check_shape(const LieAlgebraSpec& L) {
  const std::size_t want =
      static_cast<std::size_t>(L.dim) * L.dim * L.dim;
  if (L.dim <= 0 || L.structure.size() != want)
    throw InvalidAlgebra("structure array must have shape dim^3");
}

}  // namespace

Rat jacobi_residual(const LieAlgebraSpec& L) {
  check_shape(L);
  const int d = L.dim;
  Rat worst(0);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m) {
          Rat s(0);
          for (int j = 0; j < d; ++j)
            s += L.c(i, m, j) * L.c(j, l, k) - L.c(i, l, j) * L.c(j, m, k) -
                 L.c(i, j, k) * L.c(j, m, l);
          if (s < 0) s = -s;
          if (s > worst) worst = s;
        }
  return worst;
}

Rat antisymmetry_residual(const LieAlgebraSpec& L) {
  check_shape(L);
  const int d = L.dim;
  Rat worst(0);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Rat s = L.c(k, i, j) + L.c(k, j, i);
        if (s < 0) s = -s;
        if (s > worst) worst = s;
      }
  return worst;
}

Rat ad_invariance_residual(const LieAlgebraSpec& L) {
  check_shape(L);
  const int d = L.dim;
  Rat worst(0);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Rat s = L.c(k, i, j) + L.c(j, i, k);
        if (s < 0) s = -s;
        if (s > worst) worst = s;
      }
  return worst;
}

void validate_algebra(const LieAlgebraSpec& L) {
  check_shape(L);
  if (antisymmetry_residual(L) != 0)
    throw InvalidAlgebra("structure constants are not antisymmetric");
  if (jacobi_residual(L) != 0)
    throw InvalidAlgebra("structure constants violate the Jacobi identity");
  if (ad_invariance_residual(L) != 0)
    throw InvalidAlgebra(
        "basis inner product is not Ad-invariant (C^k_{ij} != -C^j_{ik})");
}

}  // namespace loopcurv
