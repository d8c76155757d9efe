#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boundarylab/bernoulli_rules.hpp"
#include "boundarylab/confseq.hpp"
#include "boundarylab/error.hpp"
#include "boundarylab/harness/hie_data.hpp"
#include "boundarylab/harness/parallel.hpp"
#include "boundarylab/harness/studies.hpp"
#include "boundarylab/sprt.hpp"

namespace boundarylab::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StudyFlags {
  std::uint64_t seed = harness::kDefaultSeed;
  std::size_t reps = 0;
  std::string out;
  std::string data;
  std::string config;
  bool paper_scale = false;
  unsigned threads = 0;
  std::vector<double> p, epsilon, rho;
  std::vector<std::size_t> n, d;
};

struct StudyOptions {
  CLI::Option* seed = nullptr;
  CLI::Option* reps = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* data = nullptr;
  CLI::Option* paper_scale = nullptr;
  CLI::Option* threads = nullptr;
  CLI::Option* p = nullptr;
  CLI::Option* epsilon = nullptr;
  CLI::Option* rho = nullptr;
  CLI::Option* n = nullptr;
  CLI::Option* d = nullptr;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (!in || !(in >> std::ws).eof()) {
    throw UsageError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) values.push_back(parse_number<T>(key, trim(item)));
  return values;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw UsageError("cannot open config file " + path);
  std::map<std::string, std::string> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return entries;
}

// Fills every flag the command line left unset from the config file.
void apply_config(StudyFlags& f, const StudyOptions& o) {
  if (f.config.empty()) return;
  for (const auto& [key, value] : read_config(f.config)) {
    if (key == "seed") {
      if (!o.seed->count()) f.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "reps") {
      if (!o.reps->count()) f.reps = parse_number<std::size_t>(key, value);
    } else if (key == "out") {
      if (!o.out->count()) f.out = value;
    } else if (key == "data") {
      if (!o.data->count()) f.data = value;
    } else if (key == "threads") {
      if (!o.threads->count()) f.threads = parse_number<unsigned>(key, value);
    } else if (key == "paper-scale") {
      if (!o.paper_scale->count()) f.paper_scale = value == "1" || value == "true";
    } else if (key == "p") {
      if (!o.p->count()) f.p = parse_list<double>(key, value);
    } else if (key == "epsilon") {
      if (!o.epsilon->count()) f.epsilon = parse_list<double>(key, value);
    } else if (key == "rho") {
      if (!o.rho->count()) f.rho = parse_list<double>(key, value);
    } else if (key == "n") {
      if (!o.n->count()) f.n = parse_list<std::size_t>(key, value);
    } else if (key == "d") {
      if (!o.d->count()) f.d = parse_list<std::size_t>(key, value);
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
}

std::string output_dir(const StudyFlags& f) {
  if (!f.out.empty()) return f.out;
  if (const char* env = std::getenv("BOUNDARYLAB_OUT"); env && *env) return env;
  return "out";
}

harness::StudyConfig to_config(const StudyFlags& f, int study_id) {
  harness::StudyConfig cfg;
  cfg.study_id = study_id;
  cfg.replicates = f.reps;
  cfg.seed = f.seed;
  cfg.threads = f.threads == 0 ? harness::default_threads() : f.threads;
  cfg.paper_scale = f.paper_scale;
  cfg.output_dir = output_dir(f);
  if (!f.data.empty()) cfg.data_path = f.data;
  cfg.p_grid = f.p;
  cfg.epsilon_grid = f.epsilon;
  cfg.rho_grid = f.rho;
  cfg.n_grid = f.n;
  cfg.d_grid = f.d;
  return cfg;
}

void run_one(const harness::StudyConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto report = harness::run_study(cfg);
  if (report.skipped) {
    err << "warning: " << report.message << '\n';
    return;
  }
  for (const auto& line : harness::write_report(report, cfg.output_dir)) out << line << '\n';
}

std::string num(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", v);
  return buffer;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Practical boundary rules for sequential binary data", "boundarylab"};
  app.require_subcommand(1);

  StudyFlags flags;
  std::vector<std::pair<CLI::App*, StudyOptions>> study_cmds;
  auto add_study = [&](const std::string& name, const std::string& help) {
    auto* cmd = app.add_subcommand(name, help);
    StudyOptions o;
    o.seed = cmd->add_option("--seed", flags.seed, "Master seed");
    o.reps = cmd->add_option("--reps", flags.reps, "Replicates per setting (0: study default)");
    o.out = cmd->add_option("--out", flags.out, "Output directory");
    o.data = cmd->add_option("--data", flags.data, "RAND HIE CSV (study 5)");
    o.paper_scale = cmd->add_flag("--paper-scale", flags.paper_scale,
                                  "Use 1,000 replicates for studies 2, 3 and 5");
    o.threads = cmd->add_option("--threads", flags.threads, "Worker threads (0: all cores)");
    o.p = cmd->add_option("--p", flags.p, "Success probabilities (study 1)")->delimiter(',');
    o.epsilon = cmd->add_option("--epsilon", flags.epsilon, "Tolerances (study 1)")
                    ->delimiter(',');
    o.rho = cmd->add_option("--rho", flags.rho, "Target prevalences")->delimiter(',');
    o.n = cmd->add_option("--n", flags.n, "Sample sizes")->delimiter(',');
    o.d = cmd->add_option("--d", flags.d, "Covariate counts (study 3)")->delimiter(',');
    cmd->add_option("--config", flags.config, "key=value config file")
        ->check(CLI::ExistingFile);
    study_cmds.emplace_back(cmd, o);
    return cmd;
  };
  for (int id = 1; id <= 5; ++id) {
    add_study("study" + std::to_string(id), "Run study " + std::to_string(id));
  }
  add_study("all", "Run every study");

  auto* rule = app.add_subcommand("rule", "Evaluate a single rule");
  rule->require_subcommand(1);
  double epsilon = 0.01, alpha = 0.05, p = 0.01, beta = 0.05, p0 = 0.01, p1 = 0.005;
  std::uint64_t n = 0, s = 0, n_max = 1000;

  auto* threshold = rule->add_subcommand("all-failure-threshold",
                                         "Consecutive failures needed to declare p < epsilon");
  threshold->add_option("--epsilon", epsilon)->required();
  threshold->add_option("--alpha", alpha);

  auto* stop_prob = rule->add_subcommand("stop-probability",
                                         "Exact P(tau0 <= n_max) for a run from trial 1");
  stop_prob->add_option("--p", p)->required();
  stop_prob->add_option("--epsilon", epsilon)->required();
  stop_prob->add_option("--alpha", alpha);
  stop_prob->add_option("--n-max", n_max);

  auto* cp = rule->add_subcommand("clopper-pearson", "Upper bound after n failures");
  cp->add_option("--n", n)->required();
  cp->add_option("--alpha", alpha);

  auto* pvalue = rule->add_subcommand("pvalue", "Exact p-value for H0: p >= epsilon");
  pvalue->add_option("--n", n)->required();
  pvalue->add_option("--s", s);
  pvalue->add_option("--epsilon", epsilon)->required();

  auto* sprt_cmd = rule->add_subcommand("sprt-stop-time",
                                        "Failures until the SPRT accepts the lower rate");
  sprt_cmd->add_option("--p0", p0);
  sprt_cmd->add_option("--p1", p1);
  sprt_cmd->add_option("--alpha", alpha);
  sprt_cmd->add_option("--beta", beta);

  auto* cs = rule->add_subcommand("confseq", "Mixture confidence set at (n, s)");
  cs->add_option("--n", n)->required();
  cs->add_option("--s", s);
  cs->add_option("--alpha", alpha);

  auto* validate = app.add_subcommand("validate-data", "Check a RAND HIE CSV");
  std::string data_path;
  validate->add_option("--data", data_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    for (auto& [cmd, opts] : study_cmds) {
      if (!cmd->parsed()) continue;
      apply_config(flags, opts);
      if (cmd->get_name() == "all") {
        for (int id = 1; id <= 5; ++id) run_one(to_config(flags, id), out, err);
      } else {
        run_one(to_config(flags, cmd->get_name().back() - '0'), out, err);
      }
      return kExitOk;
    }
    if (threshold->parsed()) {
      out << bernoulli::all_failure_threshold({epsilon, alpha}) << '\n';
    } else if (stop_prob->parsed()) {
      out << num(bernoulli::exact_stop_prob_tau0(p, {epsilon, alpha}, n_max)) << '\n';
    } else if (cp->parsed()) {
      out << num(bernoulli::clopper_pearson_upper_zero(n, alpha)) << '\n';
    } else if (pvalue->parsed()) {
      out << num(bernoulli::binomial_onesided_pvalue({n, s}, epsilon)) << '\n';
    } else if (sprt_cmd->parsed()) {
      out << sprt::all_failure_stop_time({p0, p1, alpha, beta}) << '\n';
    } else if (cs->parsed()) {
      const auto iv = confseq::raw_interval({n, s}, alpha);
      out << num(iv.lo) << ' ' << num(iv.hi) << '\n';
    } else if (validate->parsed()) {
      const auto data = harness::load_hie_csv(data_path);
      harness::validate_full_hie(data);
      char line[128];
      std::snprintf(line, sizeof line, "ok: %zu rows, %zu events, prevalence %.2f%%",
                    data.rows.size(), data.events(), 100.0 * data.prevalence());
      out << line << '\n';
    }
    return kExitOk;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace boundarylab::cli
