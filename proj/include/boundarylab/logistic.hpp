#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "boundarylab/random_stream.hpp"

namespace boundarylab::logistic {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Covariates and binary outcomes for a logistic fit.
///
/// When `intercept_included` is false, a constant column is prepended at
/// fit time and coefficient index 0 is the intercept. When true, column 0 of
/// `x` must already be the constant 1.
struct Design {
  Matrix x;
  Vector y;
  bool intercept_included = false;

  void validate() const;
  Eigen::Index rows() const { return x.rows(); }
  // Number of coefficients, intercept included.
  Eigen::Index coefficients() const {
    return x.cols() + (intercept_included ? 0 : 1);
  }
  Matrix augmented() const;
  std::size_t events() const;
  bool one_class() const;
};

struct RidgeConfig {
  double lambda = 0.0;
  bool penalize_intercept = false;
};

struct FitOptions {
  int max_iter = 100;
  // Gradient-norm tolerance.
  double tol = 1e-8;
  // A fit is converged only when the Newton step is also below this size
  // (max norm). Without it a separated likelihood, whose gradient decays
  // geometrically along the separating ray, would report convergence at a
  // finite but arbitrary coefficient vector.
  double step_tol = 1e-6;
  int max_halvings = 30;
};

struct LogisticFit {
  Vector beta;  // intercept first, then slopes
  bool converged = false;
  int iterations = 0;
  double max_abs_logit = 0.0;
  double coef_norm = 0.0;  // Euclidean norm of the slopes
  double extreme_prob_fraction = 0.0;
  double objective = 0.0;
  double gradient_norm = 0.0;
  bool jittered = false;  // the Newton system needed a diagonal jitter
  bool intercept_prepended = true;
};

inline constexpr double kCoefNormLimit = 50.0;
inline constexpr double kLogitLimit = 30.0;
inline constexpr double kExtremeProb = 1e-6;
inline constexpr double kExtremeFractionLimit = 0.01;

/// The five-criterion diagnostic panel for an ordinary logistic fit.
struct InstabilityReport {
  bool one_class = false;
  bool nonconverged = false;
  bool coef_norm_exceeded = false;
  bool logit_exceeded = false;
  bool extreme_prob_exceeded = false;
  bool unstable = false;
};

// Logistic function; strictly inside (0, 1) for every finite z.
double expit(double z);
// log(1 + exp(z)) without overflow.
double log1p_exp(double z);

double penalized_objective(const Design& design, const RidgeConfig& ridge,
                           const Vector& beta);
Vector penalized_gradient(const Design& design, const RidgeConfig& ridge,
                          const Vector& beta);

// Newton/IRLS maximization of the ridge-penalized log-likelihood with
// step-halving. Throws OneClassError when y has a single class.
LogisticFit fit(const Design& design, const RidgeConfig& ridge,
                const FitOptions& options = {});
LogisticFit fit(const Design& design, const RidgeConfig& ridge, int max_iter,
                double tol);

// Fitted probabilities for new covariate rows (same layout as the design
// the fit came from). Throws InvalidArgument on a column mismatch.
Vector predict(const LogisticFit& fit, const Matrix& x);
Vector linear_predictor(const LogisticFit& fit, const Matrix& x);

InstabilityReport instability(const LogisticFit& fit);
InstabilityReport instability(const LogisticFit& fit, const Design& design);
InstabilityReport one_class_report();

// Solves mean(expit(beta0 + eta_i)) = rho for beta0 by bisection on a fixed
// sample of linear predictors.
double calibrate_intercept_on_sample(const Vector& linear_predictors,
                                     double rho);

// Draws `draws` covariate vectors X ~ N(0, I) and calibrates the intercept
// so that E expit(beta0 + X'slopes) = rho on that Monte Carlo sample.
double calibrate_intercept(const Vector& slopes, double rho, std::size_t draws,
                           RandomStream& rng);

}  // namespace boundarylab::logistic
