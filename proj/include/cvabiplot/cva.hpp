#pragma once

// Canonical variate analysis by two routes.
//
// fit_standard solves the two-sided eigenproblem B l = lambda W l through
// W^{-1/2} B W^{-1/2}. It needs n > p and a nonsingular W.
//
// fit_gsvd factors the pair (F, H) with F'F = B and H'H = W, keeps the
// columns of M with finite generalized eigenvalues, and repeats the
// eigenproblem in that reduced space. It works for any n and p.
//
// Both routes return a basis whose columns are ordered by decreasing
// eigenvalue. Within a cluster of tied eigenvalues the basis is rotated to
// the principal axes of its Euclidean Gram matrix, and each column is signed
// so its largest-magnitude entry is positive. That makes the two routes
// produce the same basis when n > p, not just the same spectrum.

#include "cvabiplot/gsvd.hpp"
#include "cvabiplot/matrix_kernels.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace cvab {

struct Dataset {
  Matrix X;  ///< n x p, original units
  std::vector<std::string> variable_names;
  std::vector<std::string> group_labels;
  /// Source row number (1 based) of each observation; filled by the CSV
  /// loader, may be left empty by callers.
  std::vector<std::size_t> sample_ids;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }

  /// Throws InputError if shapes disagree, n < 2, p < 1, entries are not
  /// finite, or fewer than two distinct groups are present.
  void validate() const;
};

struct GroupStructure {
  Matrix G;  ///< n x K indicator
  std::vector<std::string> names;       ///< in order of first appearance
  std::vector<std::size_t> counts;      ///< members per group
  std::vector<std::size_t> membership;  ///< group index per observation

  std::size_t k() const { return names.size(); }
};

struct StandardizationParams {
  Vector means;
  Vector sds;  ///< all ones when only centering was applied
  bool scaled = true;
};

enum class FitPath { Standard, Gsvd };

const char* to_string(FitPath path);

struct CvaModel {
  FitPath path = FitPath::Standard;
  Matrix basis;        ///< p x q; L on the standard route, M_q L_gsvd on the GSVD route
  Matrix axis_matrix;  ///< q x p; L^{-1}, or the pseudo-inverse of the basis
  Vector eigenvalues;  ///< q, nonincreasing
  Matrix group_means_scores;  ///< K x q
  Matrix training_scores;     ///< n x q
  StandardizationParams standardization;
  GroupStructure groups;
  std::vector<std::string> variable_names;
  Matrix B_used;  ///< scatter pair actually inverted (p x p or q x q)
  Matrix W_used;
  Matrix reduced_basis;  ///< L_gsvd (q x q); empty on the standard route
  std::size_t r = 0;     ///< rank([F; H]); p on the standard route
  std::size_t s = 0;     ///< r - rank(H); 0 on the standard route
  double condition_R = 1.0;
  std::vector<std::string> warnings;

  std::size_t q() const { return static_cast<std::size_t>(basis.cols()); }
  std::size_t p() const { return static_cast<std::size_t>(basis.rows()); }

  /// Number of eigenvalues above `threshold`; bounded by min(p, K - 1).
  std::size_t separating_dimensions(double threshold = 1e-8) const;
};

struct Standardized {
  Matrix Xs;
  StandardizationParams params;
};

/// Column z-scores with the n - 1 denominator. Throws InputError naming the
/// first constant column (variable_names may be empty).
Standardized standardize(const Matrix& x, const std::vector<std::string>& variable_names = {});

/// Subtracts column means only (sds set to 1).
Standardized center(const Matrix& x);

/// Groups ordered by first appearance. Throws InputError for fewer than two groups.
GroupStructure group_indicator(const std::vector<std::string>& labels);

/// K x p, row k is the mean of group k.
Matrix group_means(const Matrix& xs, const GroupStructure& gs);

struct ScatterPair {
  Matrix B;  ///< between groups, Xbar' G'G Xbar
  Matrix W;  ///< within groups, X' (I - G (G'G)^{-1} G') X
};

ScatterPair scatter_matrices(const Matrix& xs, const GroupStructure& gs);

struct FactorPair {
  Matrix F;  ///< G Xbar
  Matrix H;  ///< (I - G (G'G)^{-1} G') X
};

FactorPair build_FH(const Matrix& xs, const GroupStructure& gs);

/// Eigenproblem route. Throws SingularScatterError when n <= p or W is
/// singular under `tol`.
CvaModel fit_standard(const Dataset& ds, bool standardize_flag = true, const RankTolerance& tol = {});

/// GSVD route; always standardizes.
CvaModel fit_gsvd(const Dataset& ds, const RankTolerance& tol = {});

/// Canonical scores of rows given in original units.
Matrix scores(const CvaModel& model, const Matrix& x_new);

/// trace(W_used^{-1} B_used).
double cluster_quality(const CvaModel& model);

}  // namespace cvab
