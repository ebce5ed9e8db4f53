#pragma once

#include <optional>
#include <vector>

#include "cesm/core.hpp"

namespace cesm {

enum class LearnerMethod { Omp, Aols, Bp };

/// Which matrix the ADMM Z-update inverts.
///
/// `Derived` solves the stationarity condition of the augmented Lagrangian,
/// (lambda X'X + rho I) Z = lambda X'Xt - Y + rho U. `AsPrinted` uses
/// Xt'Xt in both places, which only agrees with `Derived` when Xt == X.
enum class AdmmUpdate { Derived, AsPrinted };

struct LearnerConfig {
  LearnerMethod method = LearnerMethod::Omp;
  int k = 6;                          // greedy iterations per column
  int lookahead = 1;                  // AOLS selections per iteration (L)
  std::optional<double> lambda;       // BP data-fit weight; auto when empty
  std::optional<double> rho;          // ADMM penalty; defaults to lambda
  double lambda_scale = 20.0;         // auto lambda = lambda_scale / mu
  int admm_max_iters = 200;
  double admm_tol = 1e-6;
  AdmmUpdate admm_update = AdmmUpdate::Derived;
  double residual_stop = 1e-7;        // relative to the initial residual norm
  double bp_floor = 1e-6;             // BP output entries at or below are dropped

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

constexpr double kAlphaMin = 1e-3;

/// Xt = (X - (1 - alpha) X C_prev) / alpha.
Matrix compute_xtilde(const Matrix& x, const RepresentationMatrix& c_prev, double alpha);

/// Greedy selection record for one column.
struct GreedyTrace {
  std::vector<Index> support;          // in selection order
  std::vector<double> residual_norms;  // ||r_l|| for l = 0..steps
  Vector coefficients;                 // least squares on `support`, same order
  bool degenerate = false;             // residual vanished before the budget
};

/// OMP for target column `target` excluding `self`: argmax |r' x_i|^2.
GreedyTrace omp_trace(const Matrix& x, const Vector& target, Index self, int k,
                      double residual_stop = 1e-7);

/// AOLS: per iteration, the `lookahead` best candidates under
/// |r' x_i|^2 / ||P_perp x_i||^2, with an incrementally orthogonalized basis.
GreedyTrace aols_trace(const Matrix& x, const Vector& target, Index self, int k, int lookahead,
                       double residual_stop = 1e-7);

struct LearnerResult {
  RepresentationMatrix u;
  bool converged = true;
  int iterations = 0;            // ADMM iterations (0 for greedy)
  double primal_residual = 0.0;  // ||Z - U||_F at termination (ADMM)
  double objective = 0.0;        // ADMM objective on the returned U
  Index degenerate_columns = 0;  // greedy columns that stopped early
};

RepresentationMatrix learn_omp(const Matrix& x, const Matrix& xtilde, int k,
                               double residual_stop = 1e-7);
RepresentationMatrix learn_aols(const Matrix& x, const Matrix& xtilde, int k, int lookahead,
                                double residual_stop = 1e-7);

double soft_threshold(double x, double eta);

/// Solves (lambda A'A + rho I) Z = B through the D x D Woodbury core.
/// The factorization is computed once at construction.
class RegularizedGramSolver {
 public:
  RegularizedGramSolver(const Matrix& a, double lambda, double rho);
  Matrix solve(const Matrix& rhs) const;

 private:
  Matrix a_;
  double rho_;
  double ratio_;  // rho / lambda
  Eigen::LLT<Matrix> core_;
};

/// Default BP weight: lambda_scale / mu, mu = min_j max_{i != j} |x_i' xt_j|.
double default_lambda(const Matrix& x, const Matrix& xtilde, double lambda_scale = 20.0);

/// ||U||_1 + (lambda / 2) ||Xt - X U||_F^2.
double bp_objective(const Matrix& x, const Matrix& xtilde, const Matrix& u, double lambda);

/// ADMM for min ||U||_1 + (lambda/2)||Xt - XU||_F^2 s.t. diag(U) = 0.
/// Returns the last iterate with `converged == false` after admm_max_iters.
LearnerResult learn_bp_admm(const Matrix& x, const Matrix& xtilde, const LearnerConfig& cfg);

/// Dispatches on cfg.method.
LearnerResult learn(const Matrix& x, const Matrix& xtilde, const LearnerConfig& cfg);

}  // namespace cesm
