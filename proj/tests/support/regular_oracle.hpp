#pragma once

#include <vector>

#include "holgr/group.hpp"
#include "holgr/reduced_norm.hpp"

namespace oracle {

using holgr::Integer;
using holgr::Rational;

// Fraction-free Bareiss elimination on an integer matrix.
inline Integer bareiss_det(std::vector<std::vector<Integer>> A) {
  const std::size_t n = A.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && A[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(A[s], A[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = A[i][j] * A[k][k] - A[i][k] * A[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        A[i][j] = v;
      }
    prev = A[k][k];
  }
  return sign * A[n - 1][n - 1];
}

// Matrix of left multiplication by H on Q[G]^n, for integral H.
inline std::vector<std::vector<Integer>> regular_matrix(const holgr::FiniteGroup& G, const holgr::GroupRingMatrix& H) {
  const long g = G.order(), n = H.n;
  std::vector<std::vector<Integer>> M(static_cast<std::size_t>(g * n), std::vector<Integer>(static_cast<std::size_t>(g * n), 0));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      for (int x = 0; x < g; ++x)
        for (int h = 0; h < g; ++h) {
          // coefficient of x in H_ij * h is H_ij[x h^-1]
          const Rational& c = H.at(i, j)[static_cast<std::size_t>(G.mul(x, G.inv(h)))];
          M[static_cast<std::size_t>(i * g + x)][static_cast<std::size_t>(j * g + h)] = c.get_num();
        }
  return M;
}

// Norm from Q(zeta_m) to Q as the determinant of multiplication on the power basis.
inline Rational field_norm(const holgr::CycloNum& x) {
  const long m = x.conductor();
  const std::size_t d = x.coeffs().size();
  std::vector<std::vector<Rational>> M(d, std::vector<Rational>(d));
  for (std::size_t j = 0; j < d; ++j) {
    auto col = (x * holgr::CycloNum::zeta(m, static_cast<long>(j))).coeffs();
    for (std::size_t i = 0; i < d; ++i) M[i][j] = col[i];
  }
  Integer den = 1;
  for (const auto& row : M)
    for (const auto& c : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<std::vector<Integer>> Z(d, std::vector<Integer>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) Z[i][j] = Rational(M[i][j] * den).get_num();
  Rational r(bareiss_det(Z));
  for (std::size_t i = 0; i < d; ++i) r /= den;
  return r;
}

}  // namespace oracle
