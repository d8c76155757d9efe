#include "boundarylab/harness/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boundarylab/bernoulli_rules.hpp"
#include "boundarylab/error.hpp"
#include "boundarylab/harness/metrics.hpp"
#include "boundarylab/harness/parallel.hpp"
#include "boundarylab/random_stream.hpp"
#include "boundarylab/rm_stopping.hpp"

namespace boundarylab::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t default_replicates(int study_id, bool paper_scale) {
  switch (study_id) {
    case 1: return 50'000;
    case 2: return paper_scale ? 1'000 : 200;
    case 3: return paper_scale ? 1'000 : 100;
    case 4: return 5'000;
    case 5: return paper_scale ? 1'000 : 200;
    default: throw InvalidArgument("study id must be 1..5");
  }
}

unsigned worker_count(const StudyConfig& cfg) {
  return cfg.threads == 0 ? default_threads() : cfg.threads;
}

// Per-path summary of a simulated Bernoulli sequence for Study 1.
struct BernoulliPath {
  std::vector<std::uint32_t> successes_by;  // S_n at each n_max
  std::uint64_t first_success = 0;          // 1-based trial of first success
  std::vector<std::uint64_t> any_run_done;  // earliest completion per epsilon
};

BernoulliPath simulate_path(double p, const std::vector<std::size_t>& n_grid,
                            const std::vector<std::uint64_t>& n_eps,
                            std::uint64_t horizon, RandomStream& rng) {
  BernoulliPath path;
  path.successes_by.assign(n_grid.size(), 0);
  path.any_run_done.assign(n_eps.size(), std::numeric_limits<std::uint64_t>::max());
  std::uint64_t previous = 0;
  bool first = true;
  while (true) {
    const std::uint64_t position = previous + rng.geometric(p) + 1;
    if (first) {
      path.first_success = position;
      first = false;
    }
    const std::uint64_t run = position - previous - 1;
    for (std::size_t e = 0; e < n_eps.size(); ++e) {
      if (run >= n_eps[e]) {
        path.any_run_done[e] = std::min(path.any_run_done[e], previous + n_eps[e]);
      }
    }
    if (position > horizon) break;
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
      if (position <= n_grid[k]) ++path.successes_by[k];
    }
    previous = position;
  }
  return path;
}

}  // namespace

std::size_t StudyConfig::resolved_replicates() const {
  return replicates == 0 ? default_replicates(study_id, paper_scale) : replicates;
}

void StudyConfig::validate() const {
  if (study_id < 1 || study_id > 5) throw InvalidArgument("study id must be 1..5");
  if (resolved_replicates() < 1) throw InvalidArgument("replicates must be at least 1");
  for (double p : p_grid) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p grid values must lie in (0, 1)");
  }
  for (double e : epsilon_grid) {
    if (!(e > 0.0 && e < 0.5)) {
      throw InvalidArgument("epsilon grid values must lie in (0, 1/2)");
    }
  }
  for (double r : rho_grid) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("rho grid values must lie in (0, 1)");
  }
  for (std::size_t n : n_grid) {
    if (n < 1) throw InvalidArgument("n grid values must be positive");
  }
  for (std::size_t d : d_grid) {
    if (d < 1) throw InvalidArgument("d grid values must be positive");
  }
}

Study1Result run_study1(const StudyConfig& cfg) {
  cfg.validate();
  const std::vector<double> ps =
      cfg.p_grid.empty() ? std::vector<double>{0.10, 0.01, 0.005} : cfg.p_grid;
  const std::vector<double> eps =
      cfg.epsilon_grid.empty() ? std::vector<double>{0.01, 0.005} : cfg.epsilon_grid;
  std::vector<std::size_t> n_grid =
      cfg.n_grid.empty() ? std::vector<std::size_t>{100, 300, 600, 1000, 3000}
                         : cfg.n_grid;
  std::sort(n_grid.begin(), n_grid.end());
  n_grid.erase(std::unique(n_grid.begin(), n_grid.end()), n_grid.end());

  Study1Result result;
  result.table_n_max =
      std::find(n_grid.begin(), n_grid.end(), 1000) != n_grid.end() ? 1000 : n_grid.back();

  std::vector<std::uint64_t> n_eps;
  for (double e : eps) {
    n_eps.push_back(bernoulli::all_failure_threshold({e, result.alpha}));
  }

  const std::size_t reps = cfg.resolved_replicates();
  const std::uint64_t horizon = n_grid.back();
  std::vector<BernoulliPath> paths(ps.size() * reps);
  parallel_for(paths.size(), worker_count(cfg), [&](std::size_t idx) {
    const std::size_t pi = idx / reps;
    auto rng = rng_stream(cfg.seed, 1, pi, idx % reps);
    paths[idx] = simulate_path(ps[pi], n_grid, n_eps, horizon, rng);
  });

  const double r = static_cast<double>(reps);
  for (std::size_t pi = 0; pi < ps.size(); ++pi) {
    const double p = ps[pi];
    for (std::size_t ei = 0; ei < eps.size(); ++ei) {
      const bernoulli::BoundaryRuleConfig rule{eps[ei], result.alpha};
      for (std::size_t k = 0; k < n_grid.size(); ++k) {
        const std::size_t n = n_grid[k];
        Study1Row row;
        row.p = p;
        row.epsilon = eps[ei];
        row.n_max = n;
        row.n_eps = n_eps[ei];
        row.prob_mle_zero = bernoulli::prob_all_failures(p, n);
        row.prob_tau0 = bernoulli::exact_stop_prob_tau0(p, rule, n);
        row.mean_jeffreys = (static_cast<double>(n) * p + 0.5) / (static_cast<double>(n) + 1.0);

        std::size_t zero = 0, tau0 = 0, any_run = 0;
        std::vector<double> jeffreys(reps);
        for (std::size_t rep = 0; rep < reps; ++rep) {
          const auto& path = paths[pi * reps + rep];
          zero += path.first_success > n ? 1 : 0;
          tau0 += (n >= n_eps[ei] && path.first_success > n_eps[ei]) ? 1 : 0;
          any_run += path.any_run_done[ei] <= n ? 1 : 0;
          jeffreys[rep] = (path.successes_by[k] + 0.5) / (static_cast<double>(n) + 1.0);
        }
        row.mc_reps = reps;
        row.mc_prob_mle_zero = static_cast<double>(zero) / r;
        row.mc_prob_tau0 = static_cast<double>(tau0) / r;
        row.mc_prob_tau0_any_run = static_cast<double>(any_run) / r;
        row.mc_mean_jeffreys = mean(jeffreys);
        row.mc_sd_jeffreys = reps > 1 ? sample_sd(jeffreys) : kNaN;
        result.rows.push_back(row);
      }
    }
  }
  return result;
}

Study4Result run_study4(const StudyConfig& cfg) {
  cfg.validate();
  Study4Result result;
  const rm::StopConfig stop;
  const std::size_t T = result.horizon;
  const std::size_t reps = cfg.resolved_replicates();
  result.scenarios = {"stable boundary", "transient boundary", "interior stable"};
  using Generator = rm::RiskTrajectory (*)(std::size_t, RandomStream&);
  const Generator generators[] = {rm::gen_stable_boundary, rm::gen_transient_boundary,
                                  rm::gen_interior_stable};

  struct Outcome {
    std::optional<std::size_t> tau_b;
    std::optional<std::size_t> tau_rm;
    std::vector<double> path;
  };
  const std::size_t scenarios = result.scenarios.size();
  std::vector<Outcome> outcomes(scenarios * reps);
  parallel_for(outcomes.size(), worker_count(cfg), [&](std::size_t idx) {
    const std::size_t s = idx / reps;
    auto rng = rng_stream(cfg.seed, 4, s, idx % reps);
    auto traj = generators[s](T, rng);
    outcomes[idx].tau_b = rm::tau_boundary_only(traj, stop).stop_time;
    outcomes[idx].tau_rm = rm::tau_rm(traj, stop).stop_time;
    outcomes[idx].path = std::move(traj.m);
  });

  for (std::size_t s = 0; s < scenarios; ++s) {
    std::vector<double> mean_path(T, 0.0);
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const auto& path = outcomes[s * reps + rep].path;
      for (std::size_t t = 0; t < T; ++t) mean_path[t] += path[t];
    }
    for (double& v : mean_path) v /= static_cast<double>(reps);
    result.mean_paths.push_back(std::move(mean_path));

    for (int rule = 0; rule < 2; ++rule) {
      std::vector<double> times;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const auto& o = outcomes[s * reps + rep];
        const auto& tau = rule == 0 ? o.tau_b : o.tau_rm;
        if (tau) times.push_back(static_cast<double>(*tau));
      }
      Study4Row row;
      row.scenario = result.scenarios[s];
      row.rule = rule == 0 ? "boundary only" : "boundary plus stability";
      row.reps = reps;
      row.stop_prob = static_cast<double>(times.size()) / static_cast<double>(reps);
      row.mean_time = mean(times);
      row.median_time = median(times);
      result.rows.push_back(row);
    }
  }
  return result;
}

StudyReport run_study(const StudyConfig& cfg) {
  StudyReport report;
  report.study_id = cfg.study_id;
  switch (cfg.study_id) {
    case 1: report.tables = study1_tables(run_study1(cfg)); break;
    case 2: report.tables = study2_tables(run_study2(cfg)); break;
    case 3: report.tables = study3_tables(run_study3(cfg)); break;
    case 4: report.tables = study4_tables(run_study4(cfg)); break;
    case 5: {
      const auto result = run_study5(cfg);
      report.skipped = result.skipped;
      report.message = result.message;
      report.tables = study5_tables(result);
      break;
    }
    default: throw InvalidArgument("study id must be 1..5");
  }
  return report;
}

std::vector<std::string> write_report(const StudyReport& report,
                                      const std::filesystem::path& dir) {
  std::vector<std::string> lines;
  for (const auto& table : report.tables) {
    const auto path = table.write(dir);
    lines.push_back("study" + std::to_string(report.study_id) + ": wrote " +
                    path.string() + " (" + std::to_string(table.rows.size()) +
                    " rows)");
  }
  return lines;
}

}  // namespace boundarylab::harness
