#include "cvabiplot/matrix_kernels.hpp"

#include "cvabiplot/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cvab {

void RankTolerance::validate() const {
  if (!(relative_epsilon > 0.0) || !std::isfinite(relative_epsilon)) {
    throw InputError("rank tolerance: relative_epsilon must be a finite positive number");
  }
  if (!(absolute_floor >= 0.0) || !std::isfinite(absolute_floor)) {
    throw InputError("rank tolerance: absolute_floor must be a finite non-negative number");
  }
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw InputError(std::string(what) + ": matrix contains NaN or infinite entries");
  }
}

double fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (v.size() > 0 && v[best] < 0.0) {
    v = -v;
    return -1.0;
  }
  return 1.0;
}

namespace {

std::size_t count_above(const Vector& sigma, double cutoff) {
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > cutoff) ++r;
  }
  return r;
}

std::size_t max_dim(const Matrix& a) {
  return static_cast<std::size_t>(std::max(a.rows(), a.cols()));
}

}  // namespace

SvdResult svd(const Matrix& a, const RankTolerance& tol) {
  tol.validate();
  if (a.rows() == 0 || a.cols() == 0) throw InputError("svd: empty matrix");
  require_finite(a, "svd");

  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> solver(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SvdResult out;
  out.U = solver.matrixU();
  out.sigma = solver.singularValues();
  out.V = solver.matrixV();
  for (Eigen::Index j = 0; j < out.U.cols(); ++j) {
    if (fix_sign(out.U.col(j)) < 0.0) out.V.col(j) = -out.V.col(j);
  }
  const double smax = out.sigma.size() > 0 ? out.sigma[0] : 0.0;
  out.rank = smax > 0.0 ? count_above(out.sigma, tol.threshold(max_dim(a), smax)) : 0;
  return out;
}

std::size_t numerical_rank(const Matrix& a, const RankTolerance& tol) {
  tol.validate();
  if (a.rows() == 0 || a.cols() == 0) return 0;
  require_finite(a, "numerical_rank");
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> solver(a);
  const Vector& sigma = solver.singularValues();
  if (sigma.size() == 0 || sigma[0] <= 0.0) return 0;
  return count_above(sigma, tol.threshold(max_dim(a), sigma[0]));
}

CompleteOrthogonalDecomposition complete_orthogonal_decomposition(const Matrix& k,
                                                                  const RankTolerance& tol) {
  tol.validate();
  if (k.rows() == 0 || k.cols() == 0) {
    throw InputError("complete_orthogonal_decomposition: empty matrix");
  }
  require_finite(k, "complete_orthogonal_decomposition");

  const Eigen::Index m = k.rows();

  CompleteOrthogonalDecomposition out;
  out.rank = numerical_rank(k, tol);
  if (out.rank == 0) {
    out.P = Matrix::Identity(m, m);
    out.Q = Matrix::Identity(k.cols(), k.cols());
    out.R = Matrix(0, 0);
    return out;
  }
  const auto r = static_cast<Eigen::Index>(out.rank);

  // K * Pi = P * T with T upper trapezoidal; rows r.. of T are below the cutoff.
  Eigen::ColPivHouseholderQR<Matrix> pivoted(k);
  out.P = pivoted.householderQ();
  Matrix leading = pivoted.matrixQR().topRows(r).triangularView<Eigen::Upper>();

  // leading = [R' 0] Z' via a QR of its transpose.
  Eigen::HouseholderQR<Matrix> second(leading.transpose());
  Matrix z = second.householderQ();
  Matrix upper = second.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  out.R = upper.transpose();
  out.Q = pivoted.colsPermutation() * z;
  return out;
}

SymmetricEigenResult symmetric_eigen(const Matrix& s) {
  if (s.rows() != s.cols()) throw InputError("symmetric_eigen: matrix is not square");
  if (s.rows() == 0) throw InputError("symmetric_eigen: empty matrix");
  require_finite(s, "symmetric_eigen");

  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric_eigen: eigensolver did not converge");
  }
  const Eigen::Index n = s.rows();
  SymmetricEigenResult out;
  out.V.resize(n, n);
  out.lambda.resize(n);
  // Eigen returns ascending order.
  for (Eigen::Index j = 0; j < n; ++j) {
    out.lambda[j] = solver.eigenvalues()[n - 1 - j];
    out.V.col(j) = solver.eigenvectors().col(n - 1 - j);
    fix_sign(out.V.col(j));
  }
  return out;
}

Matrix pseudoinverse(const Matrix& a, const RankTolerance& tol) {
  tol.validate();
  require_finite(a, "pseudoinverse");
  if (a.rows() == 0 || a.cols() == 0) return Matrix::Zero(a.cols(), a.rows());
  const SvdResult f = svd(a, tol);
  Matrix out = Matrix::Zero(a.cols(), a.rows());
  for (std::size_t i = 0; i < f.rank; ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    out.noalias() += (f.V.col(j) / f.sigma[j]) * f.U.col(j).transpose();
  }
  return out;
}

Matrix inv_sqrt_spd(const Matrix& w, const RankTolerance& tol) {
  tol.validate();
  if (w.rows() != w.cols()) throw InputError("inv_sqrt_spd: matrix is not square");
  const SymmetricEigenResult e = symmetric_eigen(w);
  const Eigen::Index n = w.rows();
  const double lmax = e.lambda[0];
  const double lmin = e.lambda[n - 1];
  const double cutoff = tol.threshold(static_cast<std::size_t>(n), std::max(lmax, 0.0));
  if (!(lmax > 0.0) || !(lmin > cutoff)) {
    std::ostringstream detail;
    detail << "smallest eigenvalue " << lmin << " <= cutoff " << cutoff << " (largest " << lmax << ")";
    throw SingularScatterError(detail.str());
  }
  Vector scale = e.lambda.array().rsqrt();
  Matrix out = e.V * scale.asDiagonal() * e.V.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace cvab
