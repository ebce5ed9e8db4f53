#include "cesm/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cesm {

namespace {

// Candidates whose component outside the selected span has relative
// squared norm below this are treated as already spanned.
constexpr double kSpannedTol = 1e-10;

// Relative gap below which two selection scores are a tie. Ties go to the
// lowest index, so rounding noise cannot decide between equal candidates.
constexpr double kTieTol = 1e-10;

bool is_tie(double score, double best) { return score >= best * (1.0 - kTieTol); }

void check_pair(const Matrix& x, const Matrix& xtilde) {
  if (x.rows() != xtilde.rows() || x.cols() != xtilde.cols()) {
    fail(ErrorKind::DimensionMismatch, "X and Xt must have identical shape");
  }
}

// Orthogonalizes v against the columns of q (two Gram-Schmidt passes).
Vector orthogonalize(const Matrix& q, Index used, Vector v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Index c = 0; c < used; ++c) v -= q.col(c) * q.col(c).dot(v);
  }
  return v;
}

Vector project_out(const Matrix& q, Index used, const Vector& target) {
  if (used == 0) return target;
  const auto basis = q.leftCols(used);
  Vector r = target - basis * (basis.transpose() * target);
  // One refinement pass keeps r orthogonal to the basis at round-off level.
  r -= basis * (basis.transpose() * r);
  return r;
}

Vector least_squares(const Matrix& x, const std::vector<Index>& support, const Vector& target) {
  if (support.empty()) return Vector();
  Matrix sub(x.rows(), static_cast<Index>(support.size()));
  for (std::size_t s = 0; s < support.size(); ++s) sub.col(static_cast<Index>(s)) = x.col(support[s]);
  return sub.colPivHouseholderQr().solve(target);
}

void append_column(std::vector<Eigen::Triplet<double>>& triplets, Index col, const GreedyTrace& trace) {
  for (std::size_t s = 0; s < trace.support.size(); ++s) {
    const double v = trace.coefficients(static_cast<Index>(s));
    if (v != 0.0) triplets.emplace_back(trace.support[s], col, v);
  }
}

void check_greedy_args(const Matrix& x, Index self, int k) {
  if (k < 1) fail(ErrorKind::InvalidArgument, "sparsity level k must be >= 1");
  if (self < 0 || self >= x.cols()) fail(ErrorKind::InvalidArgument, "self index out of range");
}

}  // namespace

void LearnerConfig::validate() const {
  if (k < 1) fail(ErrorKind::InvalidArgument, "k must be >= 1");
  if (lookahead < 1) fail(ErrorKind::InvalidArgument, "lookahead L must be >= 1");
  if (lambda && !(*lambda > 0.0)) fail(ErrorKind::InvalidArgument, "lambda must be > 0");
  if (rho && !(*rho > 0.0)) fail(ErrorKind::InvalidArgument, "rho must be > 0");
  if (!(lambda_scale > 0.0)) fail(ErrorKind::InvalidArgument, "lambda_scale must be > 0");
  if (admm_max_iters < 1) fail(ErrorKind::InvalidArgument, "admm_max_iters must be >= 1");
  if (!(admm_tol > 0.0)) fail(ErrorKind::InvalidArgument, "admm_tol must be > 0");
  if (residual_stop < 0.0) fail(ErrorKind::InvalidArgument, "residual_stop must be >= 0");
  if (bp_floor < 0.0) fail(ErrorKind::InvalidArgument, "bp_floor must be >= 0");
}

Matrix compute_xtilde(const Matrix& x, const RepresentationMatrix& c_prev, double alpha) {
  if (c_prev.size() != x.cols()) {
    fail(ErrorKind::DimensionMismatch, "C_prev size does not match point count");
  }
  if (!(alpha >= kAlphaMin) || alpha > 1.0) {
    fail(ErrorKind::AlphaTooSmall, "alpha must lie in [1e-3, 1], got " + std::to_string(alpha));
  }
  if (alpha == 1.0) return x;
  return (x - (1.0 - alpha) * (x * c_prev.sparse())) / alpha;
}

GreedyTrace omp_trace(const Matrix& x, const Vector& target, Index self, int k, double residual_stop) {
  check_greedy_args(x, self, k);
  const Index n = x.cols();
  GreedyTrace trace;
  Vector r = target;
  const double r0 = r.norm();
  trace.residual_norms.push_back(r0);
  const double stop = residual_stop * r0;

  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  taken[static_cast<std::size_t>(self)] = 1;
  Matrix q(x.rows(), k);
  Index used = 0;

  for (int step = 0; step < k; ++step) {
    if (r0 == 0.0 || r.norm() <= stop) {
      trace.degenerate = true;
      break;
    }
    const Vector corr = x.transpose() * r;
    double best_score = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (!taken[static_cast<std::size_t>(i)]) best_score = std::max(best_score, corr(i) * corr(i));
    }
    Index best = -1;
    for (Index i = 0; i < n && best_score > 0.0; ++i) {
      if (!taken[static_cast<std::size_t>(i)] && is_tie(corr(i) * corr(i), best_score)) {
        best = i;
        break;
      }
    }
    if (best < 0) {
      trace.degenerate = true;
      break;
    }
    Vector v = orthogonalize(q, used, x.col(best));
    const double vn = v.norm();
    if (vn * vn <= kSpannedTol * x.col(best).squaredNorm()) {
      trace.degenerate = true;
      break;
    }
    taken[static_cast<std::size_t>(best)] = 1;
    q.col(used++) = v / vn;
    trace.support.push_back(best);
    r = project_out(q, used, target);
    trace.residual_norms.push_back(r.norm());
  }
  trace.coefficients = least_squares(x, trace.support, target);
  return trace;
}

GreedyTrace aols_trace(const Matrix& x, const Vector& target, Index self, int k, int lookahead,
                       double residual_stop) {
  check_greedy_args(x, self, k);
  if (lookahead < 1) fail(ErrorKind::InvalidArgument, "lookahead L must be >= 1");
  const Index n = x.cols();
  GreedyTrace trace;
  Vector r = target;
  const double r0 = r.norm();
  trace.residual_norms.push_back(r0);
  const double stop = residual_stop * r0;

  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  taken[static_cast<std::size_t>(self)] = 1;
  const Vector col_norms2 = x.colwise().squaredNorm().transpose();
  Vector proj_norms2 = col_norms2;  // ||P_perp x_i||^2, updated per new basis vector
  const Index max_basis = std::min<Index>(x.rows(), static_cast<Index>(k) * lookahead);
  Matrix q(x.rows(), std::max<Index>(max_basis, 1));
  Index used = 0;

  std::vector<std::pair<double, Index>> ranked;
  ranked.reserve(static_cast<std::size_t>(n));

  for (int step = 0; step < k; ++step) {
    if (r0 == 0.0 || r.norm() <= stop) {
      trace.degenerate = true;
      break;
    }
    // r is orthogonal to the selected span, so r'x_i == r'P_perp x_i.
    const Vector corr = x.transpose() * r;
    ranked.clear();
    for (Index i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      if (proj_norms2(i) <= kSpannedTol * col_norms2(i)) continue;
      const double score = corr(i) * corr(i) / proj_norms2(i);
      if (score > 0.0) ranked.emplace_back(score, i);
    }
    if (ranked.empty()) {
      trace.degenerate = true;
      break;
    }
    const auto take = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(lookahead));
    // Selection sort over the top `take`: the highest score wins, and scores
    // within kTieTol of it count as equal so the lowest index is taken.
    for (std::size_t s = 0; s < take; ++s) {
      double top = 0.0;
      for (std::size_t c = s; c < ranked.size(); ++c) top = std::max(top, ranked[c].first);
      std::size_t pick = s;
      for (std::size_t c = s; c < ranked.size(); ++c) {
        if (is_tie(ranked[c].first, top) && (!is_tie(ranked[pick].first, top) || ranked[c].second < ranked[pick].second)) {
          pick = c;
        }
      }
      std::swap(ranked[s], ranked[pick]);
    }

    bool added = false;
    for (std::size_t s = 0; s < take && used < max_basis; ++s) {
      const Index idx = ranked[s].second;
      Vector v = orthogonalize(q, used, x.col(idx));
      const double vn2 = v.squaredNorm();
      if (vn2 <= kSpannedTol * col_norms2(idx)) continue;  // dependent on this iteration's picks
      v /= std::sqrt(vn2);
      q.col(used++) = v;
      taken[static_cast<std::size_t>(idx)] = 1;
      trace.support.push_back(idx);
      const Vector qx = x.transpose() * v;
      proj_norms2 -= qx.cwiseAbs2();
      added = true;
    }
    if (!added) {
      trace.degenerate = true;
      break;
    }
    r = project_out(q, used, target);
    trace.residual_norms.push_back(r.norm());
  }
  trace.coefficients = least_squares(x, trace.support, target);
  return trace;
}

RepresentationMatrix learn_omp(const Matrix& x, const Matrix& xtilde, int k, double residual_stop) {
  check_pair(x, xtilde);
  if (k >= x.cols()) fail(ErrorKind::InvalidArgument, "k must be smaller than the point count");
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index j = 0; j < x.cols(); ++j) {
    append_column(triplets, j, omp_trace(x, xtilde.col(j), j, k, residual_stop));
  }
  SparseMatrix u(x.cols(), x.cols());
  u.setFromTriplets(triplets.begin(), triplets.end());
  return RepresentationMatrix(std::move(u));
}

RepresentationMatrix learn_aols(const Matrix& x, const Matrix& xtilde, int k, int lookahead,
                                double residual_stop) {
  check_pair(x, xtilde);
  if (k >= x.cols()) fail(ErrorKind::InvalidArgument, "k must be smaller than the point count");
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index j = 0; j < x.cols(); ++j) {
    append_column(triplets, j, aols_trace(x, xtilde.col(j), j, k, lookahead, residual_stop));
  }
  SparseMatrix u(x.cols(), x.cols());
  u.setFromTriplets(triplets.begin(), triplets.end());
  return RepresentationMatrix(std::move(u));
}

double soft_threshold(double x, double eta) {
  const double mag = std::abs(x) - eta;
  if (mag <= 0.0) return 0.0;
  return x > 0.0 ? mag : -mag;
}

RegularizedGramSolver::RegularizedGramSolver(const Matrix& a, double lambda, double rho)
    : a_(a), rho_(rho), ratio_(rho / lambda) {
  if (!(lambda > 0.0) || !(rho > 0.0)) fail(ErrorKind::InvalidArgument, "lambda and rho must be > 0");
  // (rho I + lambda A'A)^-1 = (1/rho) [I - A' (rho/lambda I + A A')^-1 A]
  Matrix core = a_ * a_.transpose();
  core.diagonal().array() += ratio_;
  core_.compute(core);
  if (core_.info() != Eigen::Success) fail(ErrorKind::DegenerateProblem, "Woodbury core is not positive definite");
}

Matrix RegularizedGramSolver::solve(const Matrix& rhs) const {
  const Matrix inner = core_.solve(a_ * rhs);
  return (rhs - a_.transpose() * inner) / rho_;
}

double default_lambda(const Matrix& x, const Matrix& xtilde, double lambda_scale) {
  check_pair(x, xtilde);
  const Matrix corr = (x.transpose() * xtilde).cwiseAbs();
  double mu = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < corr.cols(); ++j) {
    double col_max = 0.0;
    for (Index i = 0; i < corr.rows(); ++i) {
      if (i != j) col_max = std::max(col_max, corr(i, j));
    }
    if (col_max > 0.0) mu = std::min(mu, col_max);
  }
  if (!std::isfinite(mu)) return lambda_scale;
  return lambda_scale / mu;
}

double bp_objective(const Matrix& x, const Matrix& xtilde, const Matrix& u, double lambda) {
  return u.cwiseAbs().sum() + 0.5 * lambda * (xtilde - x * u).squaredNorm();
}

LearnerResult learn_bp_admm(const Matrix& x, const Matrix& xtilde, const LearnerConfig& cfg) {
  check_pair(x, xtilde);
  cfg.validate();
  const Index n = x.cols();
  const double lambda = cfg.lambda ? *cfg.lambda : default_lambda(x, xtilde, cfg.lambda_scale);
  const double rho = cfg.rho ? *cfg.rho : lambda;

  const Matrix& gram_source = cfg.admm_update == AdmmUpdate::Derived ? x : xtilde;
  const RegularizedGramSolver solver(gram_source, lambda, rho);
  const Matrix base = cfg.admm_update == AdmmUpdate::Derived
                          ? Matrix(lambda * (x.transpose() * xtilde))
                          : Matrix(lambda * (xtilde.transpose() * xtilde));

  Matrix u = Matrix::Zero(n, n);
  Matrix y = Matrix::Zero(n, n);
  Matrix z(n, n);
  Matrix u_old(n, n);
  const double shrink = 1.0 / rho;

  LearnerResult result;
  result.converged = false;
  int iter = 0;
  double primal = 0.0;
  while (iter < cfg.admm_max_iters) {
    ++iter;
    z = solver.solve(base - y + rho * u);
    u_old = u;
    u = (z + y / rho).unaryExpr([shrink](double v) { return soft_threshold(v, shrink); });
    u.diagonal().setZero();
    y += rho * (z - u);

    primal = (z - u).norm();
    const double dual = (u - u_old).norm();
    if (primal <= cfg.admm_tol && dual <= cfg.admm_tol) {
      result.converged = true;
      break;
    }
  }

  result.iterations = iter;
  result.primal_residual = primal;
  result.u = RepresentationMatrix::from_dense(u, cfg.bp_floor);
  result.objective = bp_objective(x, xtilde, result.u.to_dense(), lambda);
  return result;
}

LearnerResult learn(const Matrix& x, const Matrix& xtilde, const LearnerConfig& cfg) {
  cfg.validate();
  switch (cfg.method) {
    case LearnerMethod::Bp:
      return learn_bp_admm(x, xtilde, cfg);
    case LearnerMethod::Omp:
    case LearnerMethod::Aols: {
      check_pair(x, xtilde);
      if (x.cols() < 2) fail(ErrorKind::DegenerateProblem, "self-expression needs at least two points");
      const int k = std::min<int>(cfg.k, static_cast<int>(x.cols()) - 1);
      LearnerResult result;
      std::vector<Eigen::Triplet<double>> triplets;
      for (Index j = 0; j < x.cols(); ++j) {
        const GreedyTrace trace = cfg.method == LearnerMethod::Omp
                                      ? omp_trace(x, xtilde.col(j), j, k, cfg.residual_stop)
                                      : aols_trace(x, xtilde.col(j), j, k, cfg.lookahead, cfg.residual_stop);
        if (trace.degenerate) ++result.degenerate_columns;
        append_column(triplets, j, trace);
      }
      SparseMatrix u(x.cols(), x.cols());
      u.setFromTriplets(triplets.begin(), triplets.end());
      result.u = RepresentationMatrix(std::move(u));
      return result;
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown learner method");
}

}  // namespace cesm
