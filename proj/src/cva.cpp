#include "cvabiplot/cva.hpp"

#include "cvabiplot/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cvab {

const char* to_string(FitPath path) {
  return path == FitPath::Standard ? "standard" : "gsvd";
}

void Dataset::validate() const {
  if (X.rows() < 2) throw InputError("dataset: need at least 2 observations");
  if (X.cols() < 1) throw InputError("dataset: need at least 1 variable");
  if (static_cast<Eigen::Index>(variable_names.size()) != X.cols()) {
    throw InputError("dataset: variable_names size does not match column count");
  }
  if (static_cast<Eigen::Index>(group_labels.size()) != X.rows()) {
    throw InputError("dataset: group_labels size does not match row count");
  }
  if (!sample_ids.empty() && static_cast<Eigen::Index>(sample_ids.size()) != X.rows()) {
    throw InputError("dataset: sample_ids size does not match row count");
  }
  require_finite(X, "dataset");
  const auto first = group_labels.front();
  if (std::all_of(group_labels.begin(), group_labels.end(), [&](const std::string& g) { return g == first; })) {
    throw InputError("dataset: need at least 2 distinct groups");
  }
}

std::size_t CvaModel::separating_dimensions(double threshold) const {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] > threshold) ++count;
  }
  return count;
}

Standardized standardize(const Matrix& x, const std::vector<std::string>& variable_names) {
  if (x.rows() < 2) throw InputError("standardize: need at least 2 rows");
  require_finite(x, "standardize");
  const double n = static_cast<double>(x.rows());
  Standardized out;
  out.params.means = x.colwise().mean().transpose();
  out.params.sds.resize(x.cols());
  out.params.scaled = true;
  out.Xs.resize(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Vector dev = x.col(j).array() - out.params.means[j];
    const double sd = std::sqrt(dev.squaredNorm() / (n - 1.0));
    if (!(sd > 0.0)) {
      std::ostringstream msg;
      msg << "standardize: variable ";
      if (static_cast<Eigen::Index>(variable_names.size()) > j) {
        msg << "'" << variable_names[static_cast<std::size_t>(j)] << "'";
      } else {
        msg << "#" << j;
      }
      msg << " is constant (sd = 0)";
      throw InputError(msg.str());
    }
    out.params.sds[j] = sd;
    out.Xs.col(j) = dev / sd;
  }
  return out;
}

Standardized center(const Matrix& x) {
  if (x.rows() < 1) throw InputError("center: empty matrix");
  require_finite(x, "center");
  Standardized out;
  out.params.means = x.colwise().mean().transpose();
  out.params.sds = Vector::Ones(x.cols());
  out.params.scaled = false;
  out.Xs = x.rowwise() - out.params.means.transpose();
  return out;
}

GroupStructure group_indicator(const std::vector<std::string>& labels) {
  GroupStructure gs;
  std::map<std::string, std::size_t> index;
  gs.membership.reserve(labels.size());
  for (const auto& label : labels) {
    auto [it, inserted] = index.emplace(label, gs.names.size());
    if (inserted) {
      gs.names.push_back(label);
      gs.counts.push_back(0);
    }
    ++gs.counts[it->second];
    gs.membership.push_back(it->second);
  }
  if (gs.k() < 2) throw InputError("group_indicator: need at least 2 distinct groups");
  gs.G = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(gs.k()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    gs.G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(gs.membership[i])) = 1.0;
  }
  return gs;
}

namespace {

void check_conform(const Matrix& xs, const GroupStructure& gs, const char* what) {
  if (static_cast<std::size_t>(xs.rows()) != gs.membership.size()) {
    throw InputError(std::string(what) + ": row count does not match group structure");
  }
}

// Rotates tied-eigenvalue blocks to a representation-independent basis and
// signs every column. `reduced` follows the same column operations.
void canonicalize(Matrix& basis, Matrix* reduced, const Vector& lambda) {
  const Eigen::Index q = basis.cols();
  const double scale = std::max(1.0, q > 0 ? std::abs(lambda[0]) : 0.0);
  const double tie = 1e-9 * scale;
  Eigen::Index start = 0;
  while (start < q) {
    Eigen::Index stop = start + 1;
    while (stop < q && std::abs(lambda[stop] - lambda[stop - 1]) <= tie) ++stop;
    const Eigen::Index d = stop - start;
    if (d > 1) {
      const Matrix block = basis.middleCols(start, d);
      const SymmetricEigenResult e = symmetric_eigen(block.transpose() * block);
      basis.middleCols(start, d) = block * e.V;
      if (reduced != nullptr) {
        const Matrix rblock = reduced->middleCols(start, d);
        reduced->middleCols(start, d) = rblock * e.V;
      }
    }
    start = stop;
  }
  for (Eigen::Index j = 0; j < q; ++j) {
    if (fix_sign(basis.col(j)) < 0.0 && reduced != nullptr) reduced->col(j) = -reduced->col(j);
  }
}

void warn_singletons(const GroupStructure& gs, std::vector<std::string>& warnings) {
  for (std::size_t k = 0; k < gs.k(); ++k) {
    if (gs.counts[k] == 1) {
      warnings.push_back("group '" + gs.names[k] + "' has a single member");
    }
  }
}

struct ReducedSolve {
  Matrix L;  // W^{-1/2} V
  Vector lambda;
};

ReducedSolve solve_pencil(const ScatterPair& sc, const RankTolerance& tol) {
  const Matrix w_is = inv_sqrt_spd(sc.W, tol);
  const SymmetricEigenResult e = symmetric_eigen(w_is * sc.B * w_is);
  return {w_is * e.V, e.lambda};
}

}  // namespace

Matrix group_means(const Matrix& xs, const GroupStructure& gs) {
  check_conform(xs, gs, "group_means");
  Matrix means = Matrix::Zero(static_cast<Eigen::Index>(gs.k()), xs.cols());
  for (std::size_t i = 0; i < gs.membership.size(); ++i) {
    means.row(static_cast<Eigen::Index>(gs.membership[i])) += xs.row(static_cast<Eigen::Index>(i));
  }
  for (std::size_t k = 0; k < gs.k(); ++k) {
    if (gs.counts[k] == 0) throw InputError("group_means: empty group '" + gs.names[k] + "'");
    means.row(static_cast<Eigen::Index>(k)) /= static_cast<double>(gs.counts[k]);
  }
  return means;
}

ScatterPair scatter_matrices(const Matrix& xs, const GroupStructure& gs) {
  check_conform(xs, gs, "scatter_matrices");
  const Matrix means = group_means(xs, gs);
  Vector counts(static_cast<Eigen::Index>(gs.k()));
  for (std::size_t k = 0; k < gs.k(); ++k) counts[static_cast<Eigen::Index>(k)] = static_cast<double>(gs.counts[k]);

  ScatterPair out;
  out.B = means.transpose() * counts.asDiagonal() * means;
  Matrix dev = xs;
  for (std::size_t i = 0; i < gs.membership.size(); ++i) {
    dev.row(static_cast<Eigen::Index>(i)) -= means.row(static_cast<Eigen::Index>(gs.membership[i]));
  }
  out.W = dev.transpose() * dev;
  out.B = 0.5 * (out.B + out.B.transpose()).eval();
  out.W = 0.5 * (out.W + out.W.transpose()).eval();
  return out;
}

FactorPair build_FH(const Matrix& xs, const GroupStructure& gs) {
  check_conform(xs, gs, "build_FH");
  const Matrix means = group_means(xs, gs);
  FactorPair out;
  out.F.resize(xs.rows(), xs.cols());
  for (std::size_t i = 0; i < gs.membership.size(); ++i) {
    out.F.row(static_cast<Eigen::Index>(i)) = means.row(static_cast<Eigen::Index>(gs.membership[i]));
  }
  out.H = xs - out.F;
  return out;
}

CvaModel fit_standard(const Dataset& ds, bool standardize_flag, const RankTolerance& tol) {
  ds.validate();
  tol.validate();
  if (ds.n() <= ds.p()) {
    std::ostringstream detail;
    detail << "n = " << ds.n() << " <= p = " << ds.p();
    throw SingularScatterError(detail.str());
  }

  CvaModel model;
  model.path = FitPath::Standard;
  model.variable_names = ds.variable_names;
  model.groups = group_indicator(ds.group_labels);
  warn_singletons(model.groups, model.warnings);

  Standardized st = standardize_flag ? standardize(ds.X, ds.variable_names) : center(ds.X);
  model.standardization = st.params;

  ScatterPair sc = scatter_matrices(st.Xs, model.groups);
  ReducedSolve solve = solve_pencil(sc, tol);

  model.basis = std::move(solve.L);
  model.eigenvalues = std::move(solve.lambda);
  canonicalize(model.basis, nullptr, model.eigenvalues);
  model.axis_matrix = model.basis.partialPivLu().inverse();
  model.B_used = std::move(sc.B);
  model.W_used = std::move(sc.W);
  model.r = static_cast<std::size_t>(ds.p());
  model.s = 0;
  model.training_scores = st.Xs * model.basis;
  model.group_means_scores = group_means(st.Xs, model.groups) * model.basis;
  return model;
}

CvaModel fit_gsvd(const Dataset& ds, const RankTolerance& tol) {
  ds.validate();
  tol.validate();

  CvaModel model;
  model.path = FitPath::Gsvd;
  model.variable_names = ds.variable_names;
  model.groups = group_indicator(ds.group_labels);
  warn_singletons(model.groups, model.warnings);

  Standardized st = standardize(ds.X, ds.variable_names);
  model.standardization = st.params;

  const FactorPair fh = build_FH(st.Xs, model.groups);
  const GsvdFactors factors = gsvd(fh.F, fh.H, tol);
  model.r = factors.r;
  model.s = factors.s;
  model.condition_R = factors.condition_R;
  if (factors.ill_conditioned()) {
    std::ostringstream msg;
    msg << "triangular factor of the GSVD is ill-conditioned (condition number " << factors.condition_R << ")";
    model.warnings.push_back(msg.str());
  }

  const Matrix m_cols = discriminant_columns(factors);
  const Matrix z = st.Xs * m_cols;
  ScatterPair sc = scatter_matrices(z, model.groups);

  ReducedSolve solve;
  try {
    solve = solve_pencil(sc, tol);
  } catch (const SingularScatterError& e) {
    std::ostringstream msg;
    msg << "reduced within-group scatter is singular (q = " << factors.q() << ", n - K = "
        << ds.n() - static_cast<Eigen::Index>(model.groups.k()) << ", r = " << factors.r << ", s = " << factors.s
        << "); use a larger tolerance or remove singleton groups [" << e.what() << "]";
    throw NumericError(msg.str());
  }

  model.reduced_basis = std::move(solve.L);
  model.eigenvalues = std::move(solve.lambda);
  model.basis = m_cols * model.reduced_basis;
  canonicalize(model.basis, &model.reduced_basis, model.eigenvalues);
  model.axis_matrix = pseudoinverse(model.basis, tol);
  model.B_used = std::move(sc.B);
  model.W_used = std::move(sc.W);
  model.training_scores = st.Xs * model.basis;
  model.group_means_scores = group_means(st.Xs, model.groups) * model.basis;
  return model;
}

Matrix scores(const CvaModel& model, const Matrix& x_new) {
  if (x_new.cols() != static_cast<Eigen::Index>(model.p())) {
    throw InputError("scores: column count does not match the fitted model");
  }
  require_finite(x_new, "scores");
  const auto& st = model.standardization;
  Matrix xs = (x_new.rowwise() - st.means.transpose()).array().rowwise() / st.sds.transpose().array();
  return xs * model.basis;
}

double cluster_quality(const CvaModel& model) {
  if (model.W_used.size() == 0) return 0.0;
  return model.W_used.ldlt().solve(model.B_used).trace();
}

}  // namespace cvab
