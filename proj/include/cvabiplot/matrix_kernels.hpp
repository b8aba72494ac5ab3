#pragma once

// Dense factorizations with explicit rank tolerances. Everything here is a
// pure function of its inputs; outputs are deterministic for a fixed input.

#include <Eigen/Dense>

#include <cstddef>

namespace cvab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Numerical rank cutoff: a singular value sigma counts when
/// sigma > relative_epsilon * max(rows, cols) * sigma_max + absolute_floor.
struct RankTolerance {
  double relative_epsilon = 1e-12;
  double absolute_floor = 0.0;

  /// Throws InputError unless relative_epsilon > 0 and absolute_floor >= 0.
  void validate() const;

  /// Cutoff for a matrix whose largest dimension is `max_dim` and whose
  /// largest singular value is `sigma_max`.
  double threshold(std::size_t max_dim, double sigma_max) const {
    return relative_epsilon * static_cast<double>(max_dim) * sigma_max + absolute_floor;
  }
};

/// Throws InputError if any entry is NaN or infinite. `what` names the operand.
void require_finite(const Matrix& a, const char* what);

struct SvdResult {
  Matrix U;      ///< rows x k, orthonormal columns (k = min(rows, cols))
  Vector sigma;  ///< nonincreasing
  Matrix V;      ///< cols x k, orthonormal columns
  std::size_t rank = 0;
};

/// Thin SVD, A = U diag(sigma) V'. Each left singular vector is signed so that
/// its largest-magnitude entry is positive (lowest index wins ties); the
/// matching right vector is flipped with it.
SvdResult svd(const Matrix& a, const RankTolerance& tol = {});

/// Numerical rank only, same cutoff as svd().
std::size_t numerical_rank(const Matrix& a, const RankTolerance& tol = {});

struct CompleteOrthogonalDecomposition {
  Matrix P;  ///< rows x rows orthogonal
  Matrix Q;  ///< cols x cols orthogonal
  Matrix R;  ///< r x r nonsingular, lower triangular
  std::size_t rank = 0;
};

/// P' K Q = [[R, 0], [0, 0]]. Built from a column-pivoted QR of K followed by
/// annihilation of the trailing r x (cols - r) block with a second QR.
CompleteOrthogonalDecomposition complete_orthogonal_decomposition(const Matrix& k,
                                                                  const RankTolerance& tol = {});

struct SymmetricEigenResult {
  Matrix V;       ///< orthonormal eigenvectors, one per column
  Vector lambda;  ///< nonincreasing
};

/// Eigen-decomposition of (S + S')/2. Each eigenvector's largest-magnitude
/// entry is made positive.
SymmetricEigenResult symmetric_eigen(const Matrix& s);

/// Moore-Penrose inverse with singular values below the rank cutoff zeroed.
Matrix pseudoinverse(const Matrix& a, const RankTolerance& tol = {});

/// W^{-1/2} for a symmetric positive definite W. Throws SingularScatterError
/// when the smallest eigenvalue is at or below the rank cutoff relative to the
/// largest one.
Matrix inv_sqrt_spd(const Matrix& w, const RankTolerance& tol = {});

/// Flips `v` so that its largest-magnitude entry is positive. Returns the sign applied.
double fix_sign(Eigen::Ref<Vector> v);

}  // namespace cvab
