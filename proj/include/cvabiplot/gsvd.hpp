#pragma once

// Generalized SVD of a column-matched pair (F, H):
//
//   F = U C M^{-1},  H = V S M^{-1}
//
// with U, V orthogonal and M nonsingular. C and S are kept implicitly as the
// alpha/beta pairs; c() and s_matrix() rebuild them on demand.

#include "cvabiplot/matrix_kernels.hpp"

#include <cstddef>
#include <vector>

namespace cvab {

struct GsvdFactors {
  Matrix U;      ///< m1 x m1
  Matrix V;      ///< m2 x m2
  Vector alpha;  ///< length r; 1 for i < s
  Vector beta;   ///< length r; 0 for i < s
  Matrix M;      ///< p x p
  Matrix M_inv;  ///< p x p
  std::size_t r = 0;  ///< rank([F; H])
  std::size_t s = 0;  ///< r - rank(H)
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  std::size_t p = 0;
  /// Condition number of the triangular factor inverted to form M.
  double condition_R = 1.0;

  std::size_t q() const { return r - s; }

  /// Row of S holding beta[s]. Equals s unless m2 < r, where the leading
  /// zero block of S shrinks so the diagonal block still fits.
  std::size_t s_row_offset() const;

  /// m1 x p
  Matrix c() const;
  /// m2 x p
  Matrix s_matrix() const;

  /// True when condition_R exceeds the diagnostic threshold (1e12).
  bool ill_conditioned() const { return condition_R > 1e12; }
};

GsvdFactors gsvd(const Matrix& f, const Matrix& h, const RankTolerance& tol = {});

struct GeneralizedEigenvalues {
  Vector values;                     ///< alpha^2 / beta^2, nonincreasing
  std::vector<std::size_t> columns;  ///< matching column indices into M
};

/// lambda_i = alpha_i^2 / beta_i^2 over i = s .. r-1 (zero based).
GeneralizedEigenvalues generalized_eigenvalues(const GsvdFactors& f);

/// Columns s .. r-1 of M, ordered by descending lambda. Throws NumericError
/// when r == s.
Matrix discriminant_columns(const GsvdFactors& f);

}  // namespace cvab
