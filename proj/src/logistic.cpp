#include "boundarylab/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "boundarylab/error.hpp"

namespace boundarylab::logistic {

namespace {

// Exact zero weights let IRLS detect a saturated fit as a singular system.
double expit_unclamped(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Per-observation log-likelihood y*z - log(1 + e^z), written so that large
// |z| never cancels.
double log_likelihood_term(double y, double z) {
  return y > 0.5 ? -log1p_exp(-z) : -log1p_exp(z);
}

bool penalized(const RidgeConfig& ridge, Eigen::Index j) {
  return j > 0 || ridge.penalize_intercept;
}

Vector penalty_mask(const RidgeConfig& ridge, Eigen::Index p) {
  Vector mask(p);
  for (Eigen::Index j = 0; j < p; ++j) mask(j) = penalized(ridge, j) ? 1.0 : 0.0;
  return mask;
}

double objective_on(const Matrix& a, const Vector& y, const Vector& mask,
                    double lambda, const Vector& beta) {
  const Vector z = a * beta;
  double value = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    value += log_likelihood_term(y(i), z(i));
  }
  if (lambda > 0.0) {
    value -= 0.5 * lambda * (mask.array() * beta.array().square()).sum();
  }
  return value;
}

Vector gradient_on(const Matrix& a, const Vector& y, const Vector& mask,
                   double lambda, const Vector& beta) {
  const Vector z = a * beta;
  const Vector residual = y - z.unaryExpr([](double v) { return expit_unclamped(v); });
  Vector g = a.transpose() * residual;
  if (lambda > 0.0) g.array() -= lambda * mask.array() * beta.array();
  return g;
}

void validate_ridge(const RidgeConfig& ridge) {
  if (!(ridge.lambda >= 0.0) || !std::isfinite(ridge.lambda)) {
    throw InvalidArgument("ridge lambda must be finite and >= 0");
  }
}

// Solves h * step = g, adding diagonal jitter when the Cholesky
// factorization fails. Returns false if no jitter level worked.
bool solve_newton(const Matrix& h, const Vector& g, Vector& step,
                  bool& jittered) {
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() == Eigen::Success) {
    step = llt.solve(g);
    if (step.allFinite()) return true;
  }
  const double p = static_cast<double>(h.rows());
  double jitter = 1e-10 * h.trace() / p;
  if (!(jitter > 0.0) || !std::isfinite(jitter)) jitter = 1e-10;
  for (int attempt = 0; attempt < 12; ++attempt, jitter *= 10.0) {
    Matrix hj = h;
    hj.diagonal().array() += jitter;
    llt.compute(hj);
    if (llt.info() == Eigen::Success) {
      step = llt.solve(g);
      if (step.allFinite()) {
        jittered = true;
        return true;
      }
    }
  }
  return false;
}

void fill_diagnostics(LogisticFit& result, const Matrix& a) {
  const Vector z = a * result.beta;
  result.max_abs_logit = z.size() > 0 ? z.cwiseAbs().maxCoeff() : 0.0;
  std::size_t extreme = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double p = expit(z(i));
    if (p < kExtremeProb || p > 1.0 - kExtremeProb) ++extreme;
  }
  result.extreme_prob_fraction =
      z.size() > 0 ? static_cast<double>(extreme) / static_cast<double>(z.size())
                   : 0.0;
  result.coef_norm = result.beta.size() > 1
                         ? result.beta.tail(result.beta.size() - 1).norm()
                         : 0.0;
}

}  // namespace

void Design::validate() const {
  if (x.rows() < 1 || x.cols() < 1) {
    throw InvalidArgument("design needs at least one row and one column");
  }
  if (y.size() != x.rows()) {
    throw InvalidArgument("design has " + std::to_string(x.rows()) +
                          " rows but " + std::to_string(y.size()) +
                          " outcomes");
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) {
      throw InvalidArgument("outcomes must be 0 or 1");
    }
  }
  if (!x.allFinite()) {
    throw InvalidArgument("design contains non-finite covariates");
  }
  if (intercept_included && !(x.col(0).array() == 1.0).all()) {
    throw InvalidArgument("intercept_included set but column 0 is not constant 1");
  }
}

Matrix Design::augmented() const {
  if (intercept_included) return x;
  Matrix a(x.rows(), x.cols() + 1);
  a.col(0).setOnes();
  a.rightCols(x.cols()) = x;
  return a;
}

std::size_t Design::events() const {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) count += y(i) > 0.5 ? 1 : 0;
  return count;
}

bool Design::one_class() const {
  const std::size_t e = events();
  return e == 0 || e == static_cast<std::size_t>(y.size());
}

double expit(double z) {
  // Rounding would otherwise reach 0 or 1 for |z| beyond about 37 and 745.
  return std::clamp(expit_unclamped(z), std::numeric_limits<double>::denorm_min(),
                    std::nextafter(1.0, 0.0));
}

double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double penalized_objective(const Design& design, const RidgeConfig& ridge,
                           const Vector& beta) {
  design.validate();
  validate_ridge(ridge);
  const Matrix a = design.augmented();
  if (beta.size() != a.cols()) throw InvalidArgument("coefficient length mismatch");
  return objective_on(a, design.y, penalty_mask(ridge, a.cols()), ridge.lambda,
                      beta);
}

Vector penalized_gradient(const Design& design, const RidgeConfig& ridge,
                          const Vector& beta) {
  design.validate();
  validate_ridge(ridge);
  const Matrix a = design.augmented();
  if (beta.size() != a.cols()) throw InvalidArgument("coefficient length mismatch");
  return gradient_on(a, design.y, penalty_mask(ridge, a.cols()), ridge.lambda,
                     beta);
}

LogisticFit fit(const Design& design, const RidgeConfig& ridge,
                const FitOptions& options) {
  design.validate();
  validate_ridge(ridge);
  if (design.one_class()) {
    throw OneClassError("outcome vector contains a single class");
  }
  const Matrix a = design.augmented();
  const Vector& y = design.y;
  const Eigen::Index p = a.cols();
  const Vector mask = penalty_mask(ridge, p);
  const double lambda = ridge.lambda;

  LogisticFit result;
  result.intercept_prepended = !design.intercept_included;
  result.beta = Vector::Zero(p);
  double current = objective_on(a, y, mask, lambda, result.beta);

  Matrix weighted(a.rows(), p);
  Matrix hessian(p, p);
  Vector step(p);
  for (int iter = 0;; ++iter) {
    const Vector z = a * result.beta;
    Vector prob(z.size());
    Vector sqrt_w(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      prob(i) = expit_unclamped(z(i));
      sqrt_w(i) = std::sqrt(prob(i) * (1.0 - prob(i)));
    }
    Vector g = a.transpose() * (y - prob);
    if (lambda > 0.0) g.array() -= lambda * mask.array() * result.beta.array();
    result.gradient_norm = g.norm();

    weighted = sqrt_w.asDiagonal() * a;
    hessian.noalias() = weighted.transpose() * weighted;
    if (lambda > 0.0) hessian.diagonal() += lambda * mask;
    if (!solve_newton(hessian, g, step, result.jittered)) break;

    if (result.gradient_norm <= options.tol &&
        step.lpNorm<Eigen::Infinity>() <= options.step_tol) {
      result.converged = true;
      break;
    }
    if (iter >= options.max_iter) break;

    // Near the optimum the gain of a Newton step falls below the rounding
    // error of the summed objective, so ties within that error are accepted.
    const double slack = 1e-12 * std::max(1.0, std::abs(current));
    double scale = 1.0;
    bool accepted = false;
    Vector candidate(p);
    double candidate_value = current;
    for (int h = 0; h <= options.max_halvings; ++h, scale *= 0.5) {
      candidate = result.beta + scale * step;
      candidate_value = objective_on(a, y, mask, lambda, candidate);
      if (std::isfinite(candidate_value) && candidate_value >= current - slack) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // The step is below the resolution of the objective; this only counts
      // as convergence when the gradient is already small.
      result.converged = result.gradient_norm <= options.tol;
      break;
    }
    result.beta = candidate;
    current = candidate_value;
    ++result.iterations;
  }
  if (result.jittered) result.converged = false;
  result.objective = current;
  fill_diagnostics(result, a);
  return result;
}

LogisticFit fit(const Design& design, const RidgeConfig& ridge, int max_iter,
                double tol) {
  FitOptions options;
  options.max_iter = max_iter;
  options.tol = tol;
  return fit(design, ridge, options);
}

Vector linear_predictor(const LogisticFit& fit, const Matrix& x) {
  const Eigen::Index expected =
      fit.beta.size() - (fit.intercept_prepended ? 1 : 0);
  if (x.cols() != expected) {
    throw InvalidArgument("predict expects " + std::to_string(expected) +
                          " columns, got " + std::to_string(x.cols()));
  }
  if (!fit.intercept_prepended) return x * fit.beta;
  Vector z = x * fit.beta.tail(expected);
  z.array() += fit.beta(0);
  return z;
}

Vector predict(const LogisticFit& fit, const Matrix& x) {
  return linear_predictor(fit, x).unaryExpr([](double v) { return expit(v); });
}

InstabilityReport instability(const LogisticFit& fit) {
  InstabilityReport report;
  report.nonconverged = !fit.converged;
  report.coef_norm_exceeded = fit.coef_norm > kCoefNormLimit;
  report.logit_exceeded = fit.max_abs_logit > kLogitLimit;
  report.extreme_prob_exceeded = fit.extreme_prob_fraction > kExtremeFractionLimit;
  report.unstable = report.nonconverged || report.coef_norm_exceeded ||
                    report.logit_exceeded || report.extreme_prob_exceeded;
  return report;
}

InstabilityReport instability(const LogisticFit& fit, const Design& design) {
  if (design.one_class()) return one_class_report();
  return instability(fit);
}

InstabilityReport one_class_report() {
  InstabilityReport report;
  report.one_class = true;
  report.unstable = true;
  return report;
}

double calibrate_intercept_on_sample(const Vector& linear_predictors,
                                     double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw InvalidArgument("target prevalence must lie in (0, 1)");
  }
  if (linear_predictors.size() == 0) {
    throw InvalidArgument("calibration sample is empty");
  }
  auto mean_prob = [&](double b0) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < linear_predictors.size(); ++i) {
      total += expit(b0 + linear_predictors(i));
    }
    return total / static_cast<double>(linear_predictors.size());
  };
  // The mean is strictly increasing in b0; widen until the root is bracketed.
  double lo = -10.0;
  double hi = 10.0;
  while (mean_prob(lo) > rho) lo *= 2.0;
  while (mean_prob(hi) < rho) hi *= 2.0;
  double mid = 0.5 * (lo + hi);
  while (hi - lo > 1e-10) {
    mid = 0.5 * (lo + hi);
    if (mean_prob(mid) < rho) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double calibrate_intercept(const Vector& slopes, double rho, std::size_t draws,
                           RandomStream& rng) {
  if (draws == 0) throw InvalidArgument("calibration needs at least one draw");
  Vector eta(static_cast<Eigen::Index>(draws));
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    double value = 0.0;
    for (Eigen::Index j = 0; j < slopes.size(); ++j) {
      value += rng.normal() * slopes(j);
    }
    eta(i) = value;
  }
  return calibrate_intercept_on_sample(eta, rho);
}

}  // namespace boundarylab::logistic
