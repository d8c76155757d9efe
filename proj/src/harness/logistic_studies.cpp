#include <algorithm>
#include <cmath>
#include <numeric>

#include "boundarylab/error.hpp"
#include "boundarylab/harness/hie_data.hpp"
#include "boundarylab/harness/metrics.hpp"
#include "boundarylab/harness/parallel.hpp"
#include "boundarylab/harness/studies.hpp"
#include "boundarylab/logistic.hpp"
#include "boundarylab/random_stream.hpp"

namespace boundarylab::harness {

namespace {

using logistic::Matrix;
using logistic::Vector;

struct Cell {
  std::string design;
  std::size_t d = 0;
  double rho = 0.0;
  std::size_t n = 0;
  double beta0 = 0.0;
};

struct FitPlan {
  logistic::RidgeConfig mle;
  logistic::RidgeConfig ridge;
  logistic::FitOptions options;
};

struct Sample {
  Matrix x;
  Vector y;
};

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

Sample draw_sample(std::size_t n, double beta0, const Vector& slopes,
                   RandomStream& rng) {
  const auto d = slopes.size();
  Sample s{Matrix(static_cast<Eigen::Index>(n), d),
           Vector(static_cast<Eigen::Index>(n))};
  for (Eigen::Index i = 0; i < s.x.rows(); ++i) {
    double eta = beta0;
    for (Eigen::Index j = 0; j < d; ++j) {
      s.x(i, j) = rng.normal();
      eta += s.x(i, j) * slopes(j);
    }
    s.y(i) = rng.bernoulli(logistic::expit(eta)) ? 1.0 : 0.0;
  }
  return s;
}

// The linear predictor X'b with X ~ N(0, I) is N(0, |b|^2), so calibration
// draws it directly.
double calibrate(const Vector& slopes, double rho, RandomStream& rng) {
  const double scale = slopes.norm();
  Vector eta(static_cast<Eigen::Index>(kCalibrationDraws));
  for (Eigen::Index i = 0; i < eta.size(); ++i) eta(i) = scale * rng.normal();
  return logistic::calibrate_intercept_on_sample(eta, rho);
}

FitRecord run_fit(const logistic::Design& train, const logistic::RidgeConfig& ridge,
                  const logistic::FitOptions& options, const Sample* test) {
  FitRecord rec;
  const auto fit = logistic::fit(train, ridge, options);
  const auto panel = logistic::instability(fit, train);
  rec.fitted = true;
  rec.converged = fit.converged;
  rec.unstable = panel.unstable;
  rec.iterations = fit.iterations;
  rec.coef_norm = fit.coef_norm;
  rec.max_abs_logit = fit.max_abs_logit;
  rec.extreme_fraction = fit.extreme_prob_fraction;
  const Matrix& x = test ? test->x : train.x;
  const Vector& y = test ? test->y : train.y;
  const Vector prob = logistic::predict(fit, x);
  rec.mean_prob = prob.mean();
  rec.log_loss = log_loss(as_span(y), as_span(prob));
  rec.brier = brier(as_span(y), as_span(prob));
  rec.calib_error = calib_error(as_span(y), as_span(prob));
  return rec;
}

StudyRecord run_replicate(const Sample& train_sample, const FitPlan& plan,
                          const Sample* test) {
  StudyRecord rec;
  logistic::Design train{train_sample.x, train_sample.y, false};
  rec.events = train.events();
  rec.one_class = train.one_class();
  if (rec.one_class) return rec;  // neither fit exists; both count as unstable
  rec.mle = run_fit(train, plan.mle, plan.options, test);
  rec.ridge = run_fit(train, plan.ridge, plan.options, test);
  return rec;
}

LogisticCellSummary summarize(const Cell& cell, std::span<const StudyRecord> recs) {
  LogisticCellSummary s;
  s.design = cell.design;
  s.d = cell.d;
  s.rho = cell.rho;
  s.n = cell.n;
  s.beta0 = cell.beta0;
  s.reps = recs.size();
  const double r = static_cast<double>(recs.size());

  std::vector<double> events;
  std::size_t one_class = 0, mle_unstable = 0, ridge_unstable = 0, nonconverged = 0;
  struct Columns {
    std::vector<double> norm, logit, extreme, loss, brier, calib;
    void add(const FitRecord& f) {
      if (!f.fitted) return;
      norm.push_back(f.coef_norm);
      logit.push_back(f.max_abs_logit);
      extreme.push_back(f.extreme_fraction);
      loss.push_back(f.log_loss);
      brier.push_back(f.brier);
      calib.push_back(f.calib_error);
    }
  } mle, ridge;
  for (const auto& rec : recs) {
    events.push_back(static_cast<double>(rec.events));
    one_class += rec.one_class ? 1 : 0;
    mle_unstable += rec.mle.unstable ? 1 : 0;
    ridge_unstable += rec.ridge.unstable ? 1 : 0;
    nonconverged += (rec.mle.fitted && !rec.mle.converged) ? 1 : 0;
    mle.add(rec.mle);
    ridge.add(rec.ridge);
  }
  s.mean_events = mean(events);
  s.sd_events = recs.size() > 1 ? sample_sd(events) : 0.0;
  s.one_class_rate = static_cast<double>(one_class) / r;
  s.mle_unstable_rate = static_cast<double>(mle_unstable) / r;
  s.ridge_unstable_rate = static_cast<double>(ridge_unstable) / r;
  s.mle_nonconverged_rate = static_cast<double>(nonconverged) / r;
  s.median_coef_norm_mle = median(mle.norm);
  s.median_coef_norm_ridge = median(ridge.norm);
  s.median_max_logit_mle = median(mle.logit);
  s.median_max_logit_ridge = median(ridge.logit);
  s.mean_extreme_mle = mean(mle.extreme);
  s.mean_extreme_ridge = mean(ridge.extreme);
  s.median_log_loss_mle = median(mle.loss);
  s.median_log_loss_ridge = median(ridge.loss);
  s.median_brier_mle = median(mle.brier);
  s.median_brier_ridge = median(ridge.brier);
  s.median_calib_mle = median(mle.calib);
  s.median_calib_ridge = median(ridge.calib);
  return s;
}

// Runs every (cell, replicate) pair of a simulated study. Cells sharing a
// slope vector and prevalence share one calibrated intercept.
LogisticStudyResult run_simulated(const StudyConfig& cfg, int study_id,
                                  std::vector<Cell> cells,
                                  const std::vector<Vector>& slopes_per_cell,
                                  const std::vector<std::size_t>& calib_key,
                                  const FitPlan& plan) {
  const std::size_t reps = cfg.resolved_replicates();
  const unsigned threads = cfg.threads == 0 ? default_threads() : cfg.threads;

  // Calibration, one per distinct key.
  const std::size_t keys = *std::max_element(calib_key.begin(), calib_key.end()) + 1;
  std::vector<double> beta0(keys, 0.0);
  std::vector<std::size_t> key_cell(keys, 0);
  for (std::size_t c = 0; c < cells.size(); ++c) key_cell[calib_key[c]] = c;
  parallel_for(keys, threads, [&](std::size_t k) {
    auto rng = rng_stream(cfg.seed, static_cast<std::uint64_t>(study_id), k,
                          kCalibrationStream);
    beta0[k] = calibrate(slopes_per_cell[key_cell[k]], cells[key_cell[k]].rho, rng);
  });
  for (std::size_t c = 0; c < cells.size(); ++c) cells[c].beta0 = beta0[calib_key[c]];

  // One independent test set per design point.
  std::vector<Sample> tests(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t c) {
    auto rng = rng_stream(cfg.seed, static_cast<std::uint64_t>(study_id), c, kTestStream);
    tests[c] = draw_sample(kTestSize, cells[c].beta0, slopes_per_cell[c], rng);
  });

  LogisticStudyResult result;
  result.study_id = study_id;
  result.records.resize(cells.size() * reps);
  parallel_for(result.records.size(), threads, [&](std::size_t idx) {
    const std::size_t c = idx / reps;
    const std::size_t rep = idx % reps;
    auto rng = rng_stream(cfg.seed, static_cast<std::uint64_t>(study_id), c, rep);
    const auto train = draw_sample(cells[c].n, cells[c].beta0, slopes_per_cell[c], rng);
    auto rec = run_replicate(train, plan, &tests[c]);
    rec.setting = c;
    rec.replicate = rep;
    result.records[idx] = std::move(rec);
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    result.cells.push_back(summarize(
        cells[c], std::span<const StudyRecord>(result.records).subspan(c * reps, reps)));
  }
  return result;
}

}  // namespace

LogisticStudyResult run_study2(const StudyConfig& cfg) {
  cfg.validate();
  const auto rhos = cfg.rho_grid.empty() ? std::vector<double>{0.10, 0.01, 0.005}
                                         : cfg.rho_grid;
  const auto ns = cfg.n_grid.empty()
                      ? std::vector<std::size_t>{50, 100, 200, 500, 1000, 2000}
                      : cfg.n_grid;
  Vector slopes(3);
  slopes << 1.0, -0.7, 0.5;

  std::vector<Cell> cells;
  std::vector<Vector> slope_list;
  std::vector<std::size_t> keys;
  for (std::size_t ri = 0; ri < rhos.size(); ++ri) {
    for (std::size_t n : ns) {
      cells.push_back({"", 3, rhos[ri], n, 0.0});
      slope_list.push_back(slopes);
      keys.push_back(ri);
    }
  }
  FitPlan plan;
  plan.ridge.lambda = 1.0;
  return run_simulated(cfg, 2, std::move(cells), slope_list, keys, plan);
}

LogisticStudyResult run_study3(const StudyConfig& cfg) {
  cfg.validate();
  const auto ds = cfg.d_grid.empty() ? std::vector<std::size_t>{20, 50} : cfg.d_grid;
  const auto rhos = cfg.rho_grid.empty() ? std::vector<double>{0.01, 0.005}
                                         : cfg.rho_grid;
  const auto ns = cfg.n_grid.empty() ? std::vector<std::size_t>{500, 1000} : cfg.n_grid;

  std::vector<Cell> cells;
  std::vector<Vector> slope_list;
  std::vector<std::size_t> keys;
  for (std::size_t di = 0; di < ds.size(); ++di) {
    Vector slopes = Vector::Zero(static_cast<Eigen::Index>(ds[di]));
    for (Eigen::Index j = 0; j < std::min<Eigen::Index>(5, slopes.size()); ++j) {
      slopes(j) = 2.0 / std::sqrt(5.0);
    }
    for (std::size_t ri = 0; ri < rhos.size(); ++ri) {
      for (std::size_t n : ns) {
        cells.push_back({"", ds[di], rhos[ri], n, 0.0});
        slope_list.push_back(slopes);
        keys.push_back(di * rhos.size() + ri);
      }
    }
  }
  FitPlan plan;
  plan.ridge.lambda = 1.0;
  plan.options.max_iter = 200;
  return run_simulated(cfg, 3, std::move(cells), slope_list, keys, plan);
}

Study5Result run_study5(const StudyConfig& cfg) {
  cfg.validate();
  Study5Result result;
  result.logistic.study_id = 5;
  if (!cfg.data_path) {
    result.skipped = true;
    result.message =
        "study5 skipped: no data file given (pass --data with the RAND HIE CSV)";
    return result;
  }
  const HieData data = load_hie_csv(*cfg.data_path);
  validate_full_hie(data);
  result.rows = data.rows.size();
  result.events = data.events();
  result.prevalence = data.prevalence();

  const Matrix base = standardized_base(data);
  const Matrix quadratic = quadratic_design(base);
  const Vector y = hie_outcomes(data);
  const std::vector<std::pair<std::string, const Matrix*>> designs = {
      {"base", &base}, {"quadratic", &quadratic}};
  const auto ns = cfg.n_grid.empty()
                      ? std::vector<std::size_t>{100, 200, 500, 1000, 2000}
                      : cfg.n_grid;
  for (std::size_t n : ns) {
    if (n > data.rows.size()) throw InvalidArgument("subsample size exceeds data rows");
  }

  // Both fits mirror a liblinear-style setup: intercept penalized alongside
  // the slopes, gradient tolerance 1e-4, at most 50 Newton iterations.
  FitPlan plan;
  plan.mle.lambda = 1e-4;
  plan.mle.penalize_intercept = true;
  plan.ridge.lambda = 1.0;
  plan.ridge.penalize_intercept = true;
  plan.options.max_iter = 50;
  plan.options.tol = 1e-4;
  plan.options.step_tol = 1e-4;

  std::vector<Cell> cells;
  std::vector<const Matrix*> cell_x;
  for (const auto& [name, x] : designs) {
    for (std::size_t n : ns) {
      cells.push_back({name, static_cast<std::size_t>(x->cols()), 0.0, n, 0.0});
      cell_x.push_back(x);
    }
  }

  const std::size_t reps = cfg.resolved_replicates();
  const unsigned threads = cfg.threads == 0 ? default_threads() : cfg.threads;
  auto& out = result.logistic;
  out.records.resize(cells.size() * reps);
  std::vector<std::size_t> all(data.rows.size());
  std::iota(all.begin(), all.end(), 0);
  parallel_for(out.records.size(), threads, [&](std::size_t idx) {
    const std::size_t c = idx / reps;
    const std::size_t rep = idx % reps;
    auto rng = rng_stream(cfg.seed, 5, c, rep);
    std::vector<std::size_t> pick;
    pick.reserve(cells[c].n);
    std::sample(all.begin(), all.end(), std::back_inserter(pick), cells[c].n,
                rng.engine());
    const Matrix& x = *cell_x[c];
    Sample train{Matrix(static_cast<Eigen::Index>(pick.size()), x.cols()),
                 Vector(static_cast<Eigen::Index>(pick.size()))};
    for (std::size_t i = 0; i < pick.size(); ++i) {
      train.x.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(pick[i]));
      train.y(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(pick[i]));
    }
    auto rec = run_replicate(train, plan, nullptr);
    rec.setting = c;
    rec.replicate = rep;
    out.records[idx] = std::move(rec);
  });
  for (std::size_t c = 0; c < cells.size(); ++c) {
    out.cells.push_back(summarize(
        cells[c], std::span<const StudyRecord>(out.records).subspan(c * reps, reps)));
  }
  return result;
}

}  // namespace boundarylab::harness
