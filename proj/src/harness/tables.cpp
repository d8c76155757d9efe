#include <algorithm>

#include "boundarylab/bernoulli_rules.hpp"
#include "boundarylab/harness/studies.hpp"

namespace boundarylab::harness {

namespace {

std::string fmt_size(std::size_t v) { return fmt_int(static_cast<long long>(v)); }
std::string fmt_bool(bool v) { return v ? "1" : "0"; }

// Keeps the rows the printed table shows when the grid contains them all;
// otherwise every grid value.
std::vector<std::size_t> table_ns(const std::vector<LogisticCellSummary>& cells,
                                  std::vector<std::size_t> wanted) {
  std::vector<std::size_t> present;
  for (const auto& c : cells) {
    if (std::find(present.begin(), present.end(), c.n) == present.end()) {
      present.push_back(c.n);
    }
  }
  for (std::size_t n : wanted) {
    if (std::find(present.begin(), present.end(), n) == present.end()) return present;
  }
  return wanted;
}

bool shown(const std::vector<std::size_t>& ns, std::size_t n) {
  return std::find(ns.begin(), ns.end(), n) != ns.end();
}

CsvTable full_summary(const std::string& name, const LogisticStudyResult& result) {
  CsvTable t{name,
             {"design", "d", "rho", "n", "beta0", "reps", "mean_events", "sd_events",
              "epv", "one_class_rate", "mle_unstable_rate", "ridge_unstable_rate",
              "mle_nonconverged_rate", "median_coef_norm_mle",
              "median_coef_norm_ridge", "median_max_abs_logit_mle",
              "median_max_abs_logit_ridge", "mean_extreme_fraction_mle",
              "mean_extreme_fraction_ridge", "median_log_loss_mle",
              "median_log_loss_ridge", "median_brier_mle", "median_brier_ridge",
              "median_calib_error_mle", "median_calib_error_ridge"},
             {}};
  for (const auto& c : result.cells) {
    t.add_row({c.design, fmt_size(c.d), fmt_full(c.rho), fmt_size(c.n), fmt_full(c.beta0),
               fmt_size(c.reps), fmt_full(c.mean_events), fmt_full(c.sd_events),
               fmt_full(c.epv()), fmt_full(c.one_class_rate),
               fmt_full(c.mle_unstable_rate), fmt_full(c.ridge_unstable_rate),
               fmt_full(c.mle_nonconverged_rate), fmt_full(c.median_coef_norm_mle),
               fmt_full(c.median_coef_norm_ridge), fmt_full(c.median_max_logit_mle),
               fmt_full(c.median_max_logit_ridge), fmt_full(c.mean_extreme_mle),
               fmt_full(c.mean_extreme_ridge), fmt_full(c.median_log_loss_mle),
               fmt_full(c.median_log_loss_ridge), fmt_full(c.median_brier_mle),
               fmt_full(c.median_brier_ridge), fmt_full(c.median_calib_mle),
               fmt_full(c.median_calib_ridge)});
  }
  return t;
}

CsvTable records_table(const std::string& name, const LogisticStudyResult& result) {
  std::vector<std::string> header = {"setting", "design", "d", "rho", "n",
                                     "replicate", "events", "one_class"};
  for (const char* fit : {"mle", "ridge"}) {
    for (const char* field :
         {"fitted", "converged", "unstable", "iterations", "coef_norm",
          "max_abs_logit", "extreme_fraction", "mean_prob", "log_loss", "brier",
          "calib_error"}) {
      header.push_back(std::string(fit) + "_" + field);
    }
  }
  CsvTable t{name, header, {}};
  for (const auto& r : result.records) {
    const auto& cell = result.cells.at(r.setting);
    std::vector<std::string> row = {fmt_size(r.setting), cell.design, fmt_size(cell.d),
                                    fmt_full(cell.rho), fmt_size(cell.n),
                                    fmt_size(r.replicate), fmt_size(r.events),
                                    fmt_bool(r.one_class)};
    for (const FitRecord* f : {&r.mle, &r.ridge}) {
      row.insert(row.end(),
                 {fmt_bool(f->fitted), fmt_bool(f->converged), fmt_bool(f->unstable),
                  fmt_int(f->iterations), fmt_full(f->coef_norm),
                  fmt_full(f->max_abs_logit), fmt_full(f->extreme_fraction),
                  fmt_full(f->mean_prob), fmt_full(f->log_loss), fmt_full(f->brier),
                  fmt_full(f->calib_error)});
    }
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace

std::vector<CsvTable> study1_tables(const Study1Result& result) {
  const std::string n_label = std::to_string(result.table_n_max);
  CsvTable table{"table1.csv",
                 {"p", "epsilon", "n_eps", "P(p_hat_" + n_label + "=0)",
                  "P(tau0<=" + n_label + ")", "E(p_tilde_J_" + n_label + ")"},
                 {}};
  CsvTable full{"table1_full.csv",
                {"p", "epsilon", "n_max", "n_eps", "prob_mle_zero", "prob_tau0",
                 "mean_jeffreys", "mc_reps", "mc_prob_mle_zero", "mc_prob_tau0",
                 "mc_prob_tau0_any_run", "mc_mean_jeffreys", "mc_sd_jeffreys"},
                {}};
  std::vector<double> ps;
  std::vector<std::pair<double, std::uint64_t>> thresholds;
  std::size_t horizon = 0;
  for (const auto& r : result.rows) {
    if (r.n_max == result.table_n_max) {
      table.add_row({fmt_fixed(r.p, 3), fmt_fixed(r.epsilon, 3),
                     fmt_int(static_cast<long long>(r.n_eps)), fmt_sig(r.prob_mle_zero, 4),
                     fmt_fixed(r.prob_tau0, 4), fmt_fixed(r.mean_jeffreys, 4)});
    }
    full.add_row({fmt_full(r.p), fmt_full(r.epsilon), fmt_size(r.n_max),
                  fmt_int(static_cast<long long>(r.n_eps)), fmt_full(r.prob_mle_zero),
                  fmt_full(r.prob_tau0), fmt_full(r.mean_jeffreys), fmt_size(r.mc_reps),
                  fmt_full(r.mc_prob_mle_zero), fmt_full(r.mc_prob_tau0),
                  fmt_full(r.mc_prob_tau0_any_run), fmt_full(r.mc_mean_jeffreys),
                  fmt_full(r.mc_sd_jeffreys)});
    if (std::find(ps.begin(), ps.end(), r.p) == ps.end()) ps.push_back(r.p);
    const std::pair<double, std::uint64_t> th{r.epsilon, r.n_eps};
    if (std::find(thresholds.begin(), thresholds.end(), th) == thresholds.end()) {
      thresholds.push_back(th);
    }
    horizon = std::max(horizon, r.n_max);
  }

  CsvTable fig{"fig1.csv", {"p", "n", "prob_mle_zero"}, {}};
  for (double p : ps) {
    for (std::size_t n = 1; n <= horizon; ++n) {
      fig.add_row({fmt_full(p), fmt_size(n), fmt_full(bernoulli::prob_all_failures(p, n))});
    }
  }
  CsvTable marks{"fig1_thresholds.csv", {"epsilon", "alpha", "n_eps"}, {}};
  for (const auto& [e, n] : thresholds) {
    marks.add_row({fmt_full(e), fmt_full(result.alpha), fmt_int(static_cast<long long>(n))});
  }
  return {table, full, fig, marks};
}

std::vector<CsvTable> study2_tables(const LogisticStudyResult& result) {
  CsvTable table{"table2.csv",
                 {"target_rho", "n", "events", "one_class", "mle_unstable", "method",
                  "median_log_loss"},
                 {}};
  const auto ns = table_ns(result.cells, {100, 500, 2000});
  CsvTable fig{"fig2.csv",
               {"rho", "n", "mle_unstable_rate", "ridge_unstable_rate", "one_class_rate"},
               {}};
  for (const auto& c : result.cells) {
    if (shown(ns, c.n)) {
      for (int m = 0; m < 2; ++m) {
        table.add_row({fmt_fixed(c.rho, 3), fmt_size(c.n), fmt_fixed(c.mean_events, 1),
                       fmt_fixed(c.one_class_rate, 3), fmt_fixed(c.mle_unstable_rate, 3),
                       m == 0 ? "mle" : "ridge",
                       fmt_fixed(m == 0 ? c.median_log_loss_mle : c.median_log_loss_ridge,
                                 4)});
      }
    }
    fig.add_row({fmt_full(c.rho), fmt_size(c.n), fmt_full(c.mle_unstable_rate),
                 fmt_full(c.ridge_unstable_rate), fmt_full(c.one_class_rate)});
  }
  return {table, full_summary("table2_full.csv", result),
          records_table("study2_records.csv", result), fig};
}

std::vector<CsvTable> study3_tables(const LogisticStudyResult& result) {
  CsvTable table{"table3.csv",
                 {"d", "rho", "n", "events", "epv", "one_class", "mle_unstable",
                  "method", "log_loss"},
                 {}};
  CsvTable fig{"fig3.csv", {"d", "rho", "n", "mle_unstable_rate", "ridge_unstable_rate"},
               {}};
  for (const auto& c : result.cells) {
    for (int m = 0; m < 2; ++m) {
      table.add_row({fmt_size(c.d), fmt_fixed(c.rho, 3), fmt_size(c.n),
                     fmt_fixed(c.mean_events, 1), fmt_fixed(c.epv(), 3),
                     fmt_fixed(c.one_class_rate, 3), fmt_fixed(c.mle_unstable_rate, 3),
                     m == 0 ? "mle" : "ridge",
                     fmt_fixed(m == 0 ? c.median_log_loss_mle : c.median_log_loss_ridge,
                               4)});
    }
    fig.add_row({fmt_size(c.d), fmt_full(c.rho), fmt_size(c.n),
                 fmt_full(c.mle_unstable_rate), fmt_full(c.ridge_unstable_rate)});
  }
  return {table, full_summary("table3_full.csv", result),
          records_table("study3_records.csv", result), fig};
}

std::vector<CsvTable> study4_tables(const Study4Result& result) {
  CsvTable table{"table4.csv",
                 {"scenario", "rule", "stop_probability", "mean_stop_time",
                  "median_stop_time"},
                 {}};
  CsvTable full{"table4_full.csv",
                {"scenario", "rule", "reps", "stop_probability", "mean_stop_time",
                 "median_stop_time"},
                {}};
  for (const auto& r : result.rows) {
    table.add_row({r.scenario, r.rule, fmt_fixed(r.stop_prob, 3), fmt_fixed(r.mean_time, 1),
                   fmt_fixed(r.median_time, 1)});
    full.add_row({r.scenario, r.rule, fmt_size(r.reps), fmt_full(r.stop_prob),
                  fmt_full(r.mean_time), fmt_full(r.median_time)});
  }
  std::vector<std::string> header = {"t"};
  for (const auto& s : result.scenarios) {
    std::string key = s;
    std::replace(key.begin(), key.end(), ' ', '_');
    header.push_back(key);
  }
  CsvTable fig{"fig4.csv", header, {}};
  for (std::size_t t = 0; t < result.horizon; ++t) {
    std::vector<std::string> row = {fmt_size(t + 1)};
    for (const auto& path : result.mean_paths) row.push_back(fmt_full(path[t]));
    fig.add_row(std::move(row));
  }
  return {table, full, fig};
}

std::vector<CsvTable> study5_tables(const Study5Result& result) {
  if (result.skipped) return {};
  const auto& cells = result.logistic.cells;
  CsvTable table{"table5.csv",
                 {"design", "n", "d", "mean_events", "one_class_pct", "mle_unstable_pct",
                  "ridge_unstable_pct", "mle_max_abs_logit", "ridge_max_abs_logit",
                  "mle_loss", "ridge_loss"},
                 {}};
  const auto ns = table_ns(cells, {200, 500, 1000});
  CsvTable fig{"fig5.csv", {"design", "n", "mle_unstable_pct", "ridge_unstable_pct"}, {}};
  for (const auto& c : cells) {
    if (shown(ns, c.n)) {
      table.add_row({c.design, fmt_size(c.n), fmt_size(c.d), fmt_fixed(c.mean_events, 1),
                     fmt_fixed(100.0 * c.one_class_rate, 1),
                     fmt_fixed(100.0 * c.mle_unstable_rate, 1),
                     fmt_fixed(100.0 * c.ridge_unstable_rate, 1),
                     fmt_fixed(c.median_max_logit_mle, 1),
                     fmt_fixed(c.median_max_logit_ridge, 1),
                     fmt_fixed(c.median_log_loss_mle, 3),
                     fmt_fixed(c.median_log_loss_ridge, 3)});
    }
    fig.add_row({c.design, fmt_size(c.n), fmt_full(100.0 * c.mle_unstable_rate),
                 fmt_full(100.0 * c.ridge_unstable_rate)});
  }
  CsvTable data{"study5_data.csv", {"rows", "events", "prevalence"}, {}};
  data.add_row({fmt_size(result.rows), fmt_size(result.events), fmt_full(result.prevalence)});
  return {table, full_summary("table5_full.csv", result.logistic),
          records_table("study5_records.csv", result.logistic), fig, data};
}

}  // namespace boundarylab::harness
