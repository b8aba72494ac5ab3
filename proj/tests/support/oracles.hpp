#pragma once
// Reference computations for the test suites. Each one uses a different
// numerical route from the library code it checks.

#include "cvabiplot/cva.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using cvab::Matrix;
using cvab::Vector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Matrix gaussian(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  Matrix low_rank(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank) {
    if (rank == 0) return Matrix::Zero(rows, cols);
    return gaussian(rows, rank) * gaussian(rank, cols);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    std::shuffle(v.begin(), v.end(), engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline std::vector<std::string> default_names(Eigen::Index p) {
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < p; ++j) names.push_back("v" + std::to_string(j + 1));
  return names;
}

// Round-robin labels with a shuffled order; every group gets at least
// floor(n / k) members.
inline std::vector<std::string> balanced_labels(Rng& rng, Eigen::Index n, int k) {
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < n; ++i) labels.push_back("g" + std::to_string(i % k));
  rng.shuffle(labels);
  return labels;
}

// Gaussian data with group mean shifts of size `separation`.
inline cvab::Dataset grouped_dataset(Rng& rng, Eigen::Index n, Eigen::Index p, int k, double separation = 2.0) {
  cvab::Dataset ds;
  ds.group_labels = balanced_labels(rng, n, k);
  Matrix shifts = separation * rng.gaussian(k, p);
  ds.X = rng.gaussian(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = std::stoi(ds.group_labels[static_cast<std::size_t>(i)].substr(1));
    ds.X.row(i) += shifts.row(g);
  }
  // Vary measurement scales so standardization matters.
  for (Eigen::Index j = 0; j < p; ++j) ds.X.col(j) = ds.X.col(j) * std::pow(10.0, rng.uniform(-1, 2)) + Vector::Constant(n, rng.uniform(-50, 50));
  ds.variable_names = default_names(p);
  return ds;
}

// n x p data of rank `latent` (before centering): X = Z A with group
// structure in the latent space.
inline cvab::Dataset latent_dataset(Rng& rng, Eigen::Index n, Eigen::Index p, int k, Eigen::Index latent,
                                    double separation = 2.0) {
  cvab::Dataset ds;
  ds.group_labels = balanced_labels(rng, n, k);
  Matrix z = rng.gaussian(n, latent);
  Matrix shifts = separation * rng.gaussian(k, latent);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = std::stoi(ds.group_labels[static_cast<std::size_t>(i)].substr(1));
    z.row(i) += shifts.row(g);
  }
  ds.X = z * rng.gaussian(latent, p) + Vector::Ones(n) * rng.gaussian(1, p);
  ds.variable_names = default_names(p);
  return ds;
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

inline MeanSd two_pass(const Vector& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += x[i];
  const double mean = sum / static_cast<double>(x.size());
  double ss = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) ss += (x[i] - mean) * (x[i] - mean);
  return {mean, std::sqrt(ss / static_cast<double>(x.size() - 1))};
}

inline Matrix standardize(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const MeanSd ms = two_pass(x.col(j));
    for (Eigen::Index i = 0; i < x.rows(); ++i) out(i, j) = (x(i, j) - ms.mean) / ms.sd;
  }
  return out;
}

// Per-group arithmetic means, groups in first-appearance order.
inline Matrix direct_means(const Matrix& x, const std::vector<std::string>& labels) {
  std::vector<std::string> order;
  for (const auto& l : labels)
    if (std::find(order.begin(), order.end(), l) == order.end()) order.push_back(l);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(order.size()), x.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    double count = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != order[k]) continue;
      for (Eigen::Index j = 0; j < x.cols(); ++j) out(static_cast<Eigen::Index>(k), j) += x(static_cast<Eigen::Index>(i), j);
      count += 1.0;
    }
    out.row(static_cast<Eigen::Index>(k)) /= count;
  }
  return out;
}

struct Scatter {
  Matrix B;
  Matrix W;
};

// Outer-product sums: B = sum_k n_k m_k m_k', W = sum_i (x_i - m_g)(x_i - m_g)'.
inline Scatter direct_scatter(const Matrix& x, const std::vector<std::string>& labels) {
  std::vector<std::string> order;
  for (const auto& l : labels)
    if (std::find(order.begin(), order.end(), l) == order.end()) order.push_back(l);
  const Matrix means = direct_means(x, labels);
  Scatter sc{Matrix::Zero(x.cols(), x.cols()), Matrix::Zero(x.cols(), x.cols())};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(std::find(order.begin(), order.end(), labels[i]) - order.begin());
    const Vector m = means.row(k).transpose();
    const Vector d = x.row(static_cast<Eigen::Index>(i)).transpose() - m;
    sc.B += m * m.transpose();
    sc.W += d * d.transpose();
  }
  return sc;
}

// Eigenvalues of W^{-1} B from a nonsymmetric dense solve, descending.
inline std::vector<double> dense_pencil_eigenvalues(const Matrix& b, const Matrix& w) {
  const Matrix a = w.fullPivLu().solve(b);
  Eigen::EigenSolver<Matrix> es(a, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i].real());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// Cluster quality of the pencil (B, W) restricted to the row space of Xs.
// With T = B + W positive definite on that space, W v = mu T v gives
// lambda = (1 - mu) / mu; directions with mu = 0 (infinite lambda) are
// excluded, as are any with mu above 1 - 1e-12 (lambda = 0).
inline double row_space_trace(const Matrix& xs, const std::vector<std::string>& labels, double rel_tol = 1e-10) {
  Eigen::BDCSVD<Matrix> svd(xs, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rel_tol * sv[0]) ++rank;
  const Matrix q = svd.matrixV().leftCols(rank);
  const Scatter sc = direct_scatter(xs, labels);
  const Matrix wr = q.transpose() * sc.W * q;
  const Matrix tr = q.transpose() * (sc.B + sc.W) * q;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(0.5 * (wr + wr.transpose()), 0.5 * (tr + tr.transpose()));
  double trace = 0.0;
  for (Eigen::Index i = 0; i < ges.eigenvalues().size(); ++i) {
    const double mu = ges.eigenvalues()[i];
    if (mu > 1e-9) trace += std::max(0.0, (1.0 - mu) / mu);
  }
  return trace;
}

struct PenroseResiduals {
  double axa = 0.0;   // |A X A - A| / |A|
  double xax = 0.0;   // |X A X - X| / |X|
  double ax_sym = 0.0;
  double xa_sym = 0.0;
  double worst() const { return std::max({axa, xax, ax_sym, xa_sym}); }
};

inline PenroseResiduals penrose(const Matrix& a, const Matrix& x) {
  auto rel = [](const Matrix& d, const Matrix& ref) {
    const double n = ref.norm();
    return n > 0.0 ? d.norm() / n : d.norm();
  };
  PenroseResiduals r;
  const Matrix ax = a * x;
  const Matrix xa = x * a;
  r.axa = rel(ax * a - a, a);
  r.xax = rel(xa * x - x, x);
  r.ax_sym = rel(ax - ax.transpose(), ax);
  r.xa_sym = rel(xa - xa.transpose(), xa);
  return r;
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale > 0.0 ? (a - b).norm() / scale : 0.0;
}

// Largest per-column relative difference after aligning each column's sign.
inline double signed_column_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < std::min(a.cols(), b.cols()); ++j) {
    const double scale = std::max({a.col(j).norm(), b.col(j).norm(), 1e-300});
    const double plus = (a.col(j) - b.col(j)).norm();
    const double minus = (a.col(j) + b.col(j)).norm();
    worst = std::max(worst, std::min(plus, minus) / scale);
  }
  return worst;
}

inline Matrix permute_rows(const Matrix& m, const std::vector<std::size_t>& perm) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(perm[i]));
  return out;
}

inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  return perm;
}

}  // namespace oracle
