#include "cvabiplot/gsvd.hpp"

#include "cvabiplot/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cvab {

std::size_t GsvdFactors::s_row_offset() const {
  return std::min(s, m2 - q());
}

Matrix GsvdFactors::c() const {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(m1), static_cast<Eigen::Index>(p));
  const std::size_t n = std::min(r, m1);
  for (std::size_t i = 0; i < n; ++i) {
    out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[static_cast<Eigen::Index>(i)];
  }
  return out;
}

Matrix GsvdFactors::s_matrix() const {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(m2), static_cast<Eigen::Index>(p));
  const std::size_t offset = s_row_offset();
  for (std::size_t k = 0; k < q(); ++k) {
    out(static_cast<Eigen::Index>(offset + k), static_cast<Eigen::Index>(s + k)) =
        beta[static_cast<Eigen::Index>(s + k)];
  }
  return out;
}

GsvdFactors gsvd(const Matrix& f, const Matrix& h, const RankTolerance& tol) {
  tol.validate();
  if (f.cols() != h.cols()) throw InputError("gsvd: F and H must have the same number of columns");
  if (f.cols() == 0) throw InputError("gsvd: matrices have no columns");
  if (f.rows() == 0 || h.rows() == 0) throw InputError("gsvd: matrices must have at least one row");
  require_finite(f, "gsvd (F)");
  require_finite(h, "gsvd (H)");

  const Eigen::Index m1 = f.rows();
  const Eigen::Index m2 = h.rows();
  const Eigen::Index p = f.cols();

  Matrix k(m1 + m2, p);
  k << f, h;
  const CompleteOrthogonalDecomposition cod = complete_orthogonal_decomposition(k, tol);

  GsvdFactors out;
  out.m1 = static_cast<std::size_t>(m1);
  out.m2 = static_cast<std::size_t>(m2);
  out.p = static_cast<std::size_t>(p);
  out.r = cod.rank;
  const std::size_t rank_h = std::min(numerical_rank(h, tol), out.r);
  out.s = out.r - rank_h;

  const auto r = static_cast<Eigen::Index>(out.r);
  const auto s = static_cast<Eigen::Index>(out.s);
  const auto q = r - s;

  if (r == 0) {
    out.U = Matrix::Identity(m1, m1);
    out.V = Matrix::Identity(m2, m2);
    out.alpha = Vector(0);
    out.beta = Vector(0);
    out.M = Matrix::Identity(p, p);
    out.M_inv = Matrix::Identity(p, p);
    return out;
  }

  const Matrix p11 = cod.P.topLeftCorner(m1, r);
  const Matrix p21 = cod.P.bottomLeftCorner(m2, r);

  // U' P11 W = C
  Eigen::JacobiSVD<Matrix> cs(p11, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix u = cs.matrixU();
  Matrix w = cs.matrixV();
  const Eigen::Index nsv = std::min(m1, r);
  for (Eigen::Index j = 0; j < nsv; ++j) {
    if (fix_sign(w.col(j)) < 0.0) u.col(j) = -u.col(j);
  }
  for (Eigen::Index j = nsv; j < m1; ++j) fix_sign(u.col(j));

  // Columns of P21 W are mutually orthogonal with norms beta_i.
  const Matrix y = p21 * w;

  out.alpha = Vector::Zero(r);
  out.beta = Vector::Zero(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (i < s) {
      out.alpha[i] = 1.0;
      out.beta[i] = 0.0;
      continue;
    }
    const double a = i < nsv ? std::min(cs.singularValues()[i], 1.0) : 0.0;
    const double b = y.col(i).norm();
    const double len = std::hypot(a, b);
    out.alpha[i] = a / len;
    out.beta[i] = b / len;
  }

  // V: orthonormalize the nonzero block of P21 W and place it on the rows of
  // S that carry beta, with an orthonormal completion elsewhere.
  out.V = Matrix::Identity(m2, m2);
  if (q > 0) {
    Eigen::HouseholderQR<Matrix> qr(y.rightCols(q));
    Matrix full = qr.householderQ();
    const Matrix tri = qr.matrixQR().topRows(q);
    for (Eigen::Index k2 = 0; k2 < q; ++k2) {
      if (tri(k2, k2) < 0.0) full.col(k2) = -full.col(k2);
    }
    for (Eigen::Index j = q; j < m2; ++j) fix_sign(full.col(j));
    const auto offset = static_cast<Eigen::Index>(out.s_row_offset());
    out.V.leftCols(offset) = full.middleCols(q, offset);
    out.V.middleCols(offset, q) = full.leftCols(q);
    out.V.rightCols(m2 - offset - q) = full.rightCols(m2 - offset - q);
  }
  out.U = std::move(u);

  // M^{-1} = [[W'R, 0], [0, I]] Q',  M = Q [[R^{-1} W, 0], [0, I]]
  Matrix left_inv = Matrix::Identity(p, p);
  left_inv.topLeftCorner(r, r) = w.transpose() * cod.R;
  out.M_inv = left_inv * cod.Q.transpose();

  Matrix left = Matrix::Identity(p, p);
  left.topLeftCorner(r, r) = cod.R.triangularView<Eigen::Lower>().solve(w);
  out.M = cod.Q * left;

  Eigen::JacobiSVD<Matrix> rsv(cod.R);
  const Vector& rs = rsv.singularValues();
  out.condition_R = rs[r - 1] > 0.0 ? rs[0] / rs[r - 1] : std::numeric_limits<double>::infinity();
  return out;
}

GeneralizedEigenvalues generalized_eigenvalues(const GsvdFactors& f) {
  const std::size_t q = f.q();
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), f.s);
  std::vector<double> lambda(f.r, 0.0);
  for (std::size_t i : order) {
    const double b = f.beta[static_cast<Eigen::Index>(i)];
    if (!(b > 0.0)) {
      throw NumericError("generalized_eigenvalues: beta is zero inside the finite block (internal inconsistency)");
    }
    const double a = f.alpha[static_cast<Eigen::Index>(i)];
    lambda[i] = (a * a) / (b * b);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return lambda[x] > lambda[y]; });

  GeneralizedEigenvalues out;
  out.values.resize(static_cast<Eigen::Index>(q));
  out.columns = order;
  for (std::size_t k = 0; k < q; ++k) out.values[static_cast<Eigen::Index>(k)] = lambda[order[k]];
  return out;
}

Matrix discriminant_columns(const GsvdFactors& f) {
  if (f.q() == 0) throw NumericError("no discriminant directions: rank([F;H]) equals r - rank(H) = s");
  const GeneralizedEigenvalues ev = generalized_eigenvalues(f);
  Matrix out(f.M.rows(), static_cast<Eigen::Index>(ev.columns.size()));
  for (std::size_t k = 0; k < ev.columns.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = f.M.col(static_cast<Eigen::Index>(ev.columns[k]));
  }
  return out;
}

}  // namespace cvab
