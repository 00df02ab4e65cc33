#include "smartsize/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "smartsize/smartsize.hpp"

namespace smartsize::cli {

namespace {

namespace pt = boost::property_tree;

// Bad flags, bad config files, missing required values: exit status 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
struct is_vector : std::false_type {};
template <class T>
struct is_vector<std::vector<T>> : std::true_type {};

template <class T>
void parse_scalar(const std::string& text, T& out, const std::string& key) {
  if constexpr (std::is_same_v<T, std::string>) {
    out = text;
  } else {
    if (!CLI::detail::lexical_cast(text, out)) {
      throw UsageError("config: invalid value for '" + key + "': '" + text + "'");
    }
  }
}

template <class T>
void parse_value(const std::string& text, T& out, const std::string& key) {
  if constexpr (is_vector<T>::value) {
    out.clear();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      typename T::value_type v{};
      parse_scalar(CLI::detail::trim_copy(item), v, key);
      out.push_back(v);
    }
  } else {
    parse_scalar(CLI::detail::trim_copy(text), out, key);
  }
}

// An option that can also be set from the config file under `key`
// ("section.name"). Command-line flags win: config values are applied
// after parsing, and only to options that did not appear.
struct Binding {
  CLI::Option* option;
  std::string key;
  std::function<void(const std::string&)> load;
  bool from_config = false;

  bool given() const { return option->count() > 0 || from_config; }
};

class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& help, std::set<std::string>& keys)
      : app_(parent.add_subcommand(name, help)), keys_(keys) {}

  template <class T>
  CLI::Option* bind(const std::string& flag, T& var, const std::string& key, const std::string& help) {
    CLI::Option* opt = app_->add_option(flag, var, help);
    if constexpr (is_vector<T>::value) opt->delimiter(',');
    if constexpr (!std::is_same_v<T, std::string>) opt->capture_default_str();
    keys_.insert(key);
    bindings_.push_back(std::make_unique<Binding>(
        Binding{opt, key, [&var, key](const std::string& text) { parse_value(text, var, key); }}));
    by_flag_[flag] = bindings_.back().get();
    return opt;
  }

  void apply_config(const pt::ptree& cfg) {
    for (auto& b : bindings_) {
      if (b->option->count() > 0) continue;
      if (auto v = cfg.get_optional<std::string>(b->key)) {
        b->load(*v);
        b->from_config = true;
      }
    }
  }

  bool given(const std::string& flag) const { return by_flag_.at(flag)->given(); }

  void require(const std::string& flag) const {
    if (!given(flag)) {
      throw UsageError(flag + " is required (or set " + by_flag_.at(flag)->key + " in the config file)");
    }
  }

  CLI::App* app() const { return app_; }

 private:
  CLI::App* app_;
  std::set<std::string>& keys_;
  std::vector<std::unique_ptr<Binding>> bindings_;
  std::map<std::string, Binding*> by_flag_;
};

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

// Shared option groups.

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format = "csv";
  std::string out;
};

void bind_run(Command& c, RunOptions& r, bool tables) {
  c.bind("--seed", r.seed, "run.seed", "random seed (required)");
  c.bind("--threads", r.threads, "run.threads", "worker threads (default: SMARTSIZE_THREADS or all cores)");
  if (tables) {
    c.bind("--format", r.format, "run.format", "output format: csv or json")->check(CLI::IsMember({"csv", "json"}));
    c.bind("--out", r.out, "run.out", "output file (default: standard output)");
  }
}

unsigned resolve_threads(const Command& c, const RunOptions& r) {
  if (c.given("--threads")) {
    if (r.threads < 1) throw UsageError("--threads must be at least 1");
    return r.threads;
  }
  if (const char* env = std::getenv("SMARTSIZE_THREADS"); env != nullptr && *env != '\0') {
    unsigned v = 0;
    if (!CLI::detail::lexical_cast(std::string(env), v) || v < 1) {
      throw UsageError(std::string("SMARTSIZE_THREADS must be a positive integer, got '") + env + "'");
    }
    return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void check_format(const RunOptions& r) {
  if (r.format != "csv" && r.format != "json") throw UsageError("format must be csv or json, got '" + r.format + "'");
}

void emit(const RunOptions& r, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (r.out.empty()) {
    write(out);
    return;
  }
  std::ofstream file(r.out, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot open output file: " + r.out);
  write(file);
  file.flush();
  if (!file) throw std::runtime_error("failed writing output file: " + r.out);
}

struct PriorOptions {
  double theta0 = 0.0;
  double sigma0 = 100.0;
  bool theta0_from_pilot = false;
  double theta_d = 0.0;
  double sigma_d = 0.0;
  double eps = 0.05;
  double target = 0.9;
  long n_max = 1'000'000;
  std::string direction = "greater";
  double tau2 = 0.0;
  std::string pilot;
  std::string outcome = "auto";
  std::string s1 = "AC";
  std::string s2 = "BE";
  NixHyper hyper{};
};

void bind_nix(Command& c, NixHyper& h) {
  c.bind("--theta-p", h.theta_p, "nix.theta_p", "NIX prior mean of theta");
  c.bind("--kappa-p", h.kappa_p, "nix.kappa_p", "NIX prior sample size for theta");
  c.bind("--sigma2-p", h.sigma2_p, "nix.sigma2_p", "NIX prior scale of tau2");
  c.bind("--nu-p", h.nu_p, "nix.nu_p", "NIX prior degrees of freedom");
}

void bind_pilot_data(Command& c, PriorOptions& p) {
  c.bind("--pilot", p.pilot, "pilot.file", "pilot CSV (id,a1,r,a2,y)");
  c.bind("--outcome", p.outcome, "pilot.outcome", "auto, continuous or binary")
      ->check(CLI::IsMember({"auto", "continuous", "binary"}));
  c.bind("--s1", p.s1, "contrast.s1", "first strategy, e.g. AC");
  c.bind("--s2", p.s2, "contrast.s2", "second strategy, e.g. BE");
}

void bind_priors(Command& c, PriorOptions& p) {
  c.bind("--theta0", p.theta0, "analysis.theta0", "analysis prior mean");
  c.bind("--sigma0", p.sigma0, "analysis.sigma0", "analysis prior sd");
  c.bind("--theta0-from-pilot", p.theta0_from_pilot, "analysis.theta0_from_pilot",
         "center the analysis prior on the pilot estimate");
  c.bind("--theta-d", p.theta_d, "design.theta_d", "design prior mean (minimal detectable difference)");
  c.bind("--sigma-d", p.sigma_d, "design.sigma_d", "design prior sd");
  c.bind("--eps", p.eps, "sizing.eps", "significance level of the posterior test");
  c.bind("--direction", p.direction, "sizing.direction", "greater or less")
      ->check(CLI::IsMember({"greater", "less"}));
  c.bind("--tau2", p.tau2, "sizing.tau2", "known tau2 (instead of --pilot)");
  bind_pilot_data(c, p);
  bind_nix(c, p.hyper);
}

std::optional<OutcomeKind> outcome_kind(const std::string& s) {
  if (s == "auto") return std::nullopt;
  if (s == "continuous") return OutcomeKind::Continuous;
  if (s == "binary") return OutcomeKind::Binary;
  throw UsageError("outcome must be auto, continuous or binary, got '" + s + "'");
}

Direction direction(const std::string& s) {
  if (s == "greater") return Direction::Greater;
  if (s == "less") return Direction::Less;
  throw UsageError("direction must be greater or less, got '" + s + "'");
}

struct Resolved {
  AnalysisPrior analysis;
  DesignPrior design;
  Tau2Source source;
  std::optional<ContrastEstimate> pilot;
  Direction dir;
};

Resolved resolve_priors(const Command& c, const PriorOptions& p) {
  const bool has_pilot = c.given("--pilot");
  const bool has_tau2 = c.given("--tau2");
  if (has_pilot == has_tau2) throw UsageError("give exactly one of --pilot and --tau2");
  c.require("--theta-d");
  if (p.theta0_from_pilot && !has_pilot) throw UsageError("--theta0-from-pilot needs --pilot");

  Resolved r{{p.theta0, p.sigma0}, {p.theta_d, p.sigma_d}, FixedTau2{p.tau2}, std::nullopt, direction(p.direction)};
  if (has_pilot) {
    const auto data = read_pilot_csv(p.pilot, outcome_kind(p.outcome));
    const auto est = contrast_estimate(data, Strategy::parse(p.s1), Strategy::parse(p.s2));
    r.pilot = est;
    r.source = nix_posterior(p.hyper, est.theta_hat, est.tau2_hat, static_cast<long>(est.n));
    if (p.theta0_from_pilot) r.analysis.theta0 = est.theta_hat;
  }
  return r;
}

void print_kv(std::ostream& out, const std::string& key, double v) { out << key << '=' << format_double(v) << '\n'; }

void print_source(std::ostream& out, const Resolved& r) {
  if (const auto* post = std::get_if<NixPosterior>(&r.source)) {
    print_kv(out, "theta_hat_pilot", r.pilot->theta_hat);
    print_kv(out, "tau2_hat_pilot", r.pilot->tau2_hat);
    print_kv(out, "nu_n", post->nu_n);
    print_kv(out, "sigma2_n", post->sigma2_n);
  }
}

// "a:b:s" or a comma list.
std::vector<long> parse_grid(const std::string& text) {
  std::vector<long> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<long> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
      long v = 0;
      if (!CLI::detail::lexical_cast(CLI::detail::trim_copy(item), v)) throw UsageError("bad grid '" + text + "'");
      parts.push_back(v);
    }
    if (parts.size() != 3 || parts[2] < 1 || parts[0] < 1 || parts[1] < parts[0]) {
      throw UsageError("grid must be start:stop:step with 1 <= start <= stop and step >= 1");
    }
    for (long n = parts[0]; n <= parts[1]; n += parts[2]) grid.push_back(n);
  } else {
    std::vector<long> v;
    parse_value(text, v, "grid");
    grid = v;
  }
  if (grid.empty()) throw UsageError("empty grid");
  for (long n : grid) {
    if (n < 1) throw UsageError("grid values must be positive");
  }
  return grid;
}

struct StudyOptions {
  int scenario = 1;
  std::vector<int> settings{1};
  std::string theta0_policy = "zero";
  std::vector<double> sigma0{100.0};
  std::vector<double> sigma_d{0.0};
  double eps = 0.05;
  double target = 0.9;
  long reps = 1000;
  long pilot_n = 0;
  long pilot_min_cell = 6;
  double pilot_confidence = 0.9;
  long pilot_reps = 200'000;
  std::string pilot_allocation = "balanced";
  double theta_d = std::nan("");
  bool pilot_under_null = true;
  NixHyper hyper = kSimulationNixHyper;
  RunOptions run;
};

void bind_study(Command& c, StudyOptions& s, bool type1) {
  c.bind("--scenario", s.scenario, "scenario.id", "built-in scenario 1-4");
  c.bind("--setting", s.settings, "simulation.settings", "misspecification settings 1-4 (comma list)");
  c.bind("--theta0-policy", s.theta0_policy, "simulation.theta0_policy", "zero or pilot")
      ->check(CLI::IsMember({"zero", "pilot"}));
  c.bind("--sigma0", s.sigma0, "simulation.sigma0", "analysis prior sd values (comma list)");
  c.bind("--sigma-d", s.sigma_d, "simulation.sigma_d", "design prior sd values (comma list)");
  c.bind("--eps", s.eps, "sizing.eps", "significance level of the posterior test");
  c.bind("--target", s.target, "sizing.target", "target power");
  c.bind("--reps", s.reps, "simulation.reps", "replications per cell");
  c.bind("--pilot-n", s.pilot_n, "simulation.pilot_n", "fixed pilot size (default: sized by coverage)");
  c.bind("--pilot-min-cell", s.pilot_min_cell, "simulation.pilot_min_cell", "pilot: subjects per sequence");
  c.bind("--pilot-confidence", s.pilot_confidence, "simulation.pilot_confidence", "pilot: coverage probability");
  c.bind("--pilot-allocation", s.pilot_allocation, "simulation.pilot_allocation",
         "pilot sizing: balanced or multinomial")
      ->check(CLI::IsMember({"balanced", "multinomial"}));
  c.bind("--pilot-reps", s.pilot_reps, "simulation.pilot_reps", "pilot: Monte Carlo draws (multinomial sizing)");
  if (type1) {
    c.bind("--theta-d", s.theta_d, "simulation.theta_d", "sizing effect (default: the scenario's contrast)");
    c.bind("--pilot-under-null", s.pilot_under_null, "simulation.pilot_under_null",
           "draw the pilot under the null as well");
  }
  bind_nix(c, s.hyper);
  bind_run(c, s.run, true);
}

std::vector<SimulationReport> run_studies(const Command& c, StudyOptions& s, bool type1) {
  c.require("--seed");
  check_format(s.run);
  if (s.settings.empty() || s.sigma0.empty() || s.sigma_d.empty()) throw UsageError("grids must be nonempty");
  StudyConfig base;
  base.scenario_id = s.scenario;
  base.theta0_policy = theta0_policy_from_string(s.theta0_policy);
  base.eps = s.eps;
  base.target_power = s.target;
  base.hyper = s.hyper;
  base.reps = s.reps;
  base.seed = s.run.seed;
  base.threads = resolve_threads(c, s.run);
  base.pilot_min_cell = s.pilot_min_cell;
  base.pilot_confidence = s.pilot_confidence;
  base.pilot_sizing_reps = s.pilot_reps;
  base.pilot_allocation = s.pilot_allocation == "multinomial" ? PilotAllocation::Multinomial : PilotAllocation::Balanced;
  base.pilot_n_override = s.pilot_n;
  base.pilot_under_null = s.pilot_under_null;
  if (!std::isnan(s.theta_d)) base.theta_d_nominal = s.theta_d;

  std::vector<SimulationReport> reports;
  for (int setting : s.settings) {
    for (double s0 : s.sigma0) {
      for (double sd : s.sigma_d) {
        StudyConfig cfg = base;
        cfg.setting_id = setting;
        cfg.sigma0 = s0;
        cfg.sigma_d = sd;
        reports.push_back(type1 ? run_type1_study(cfg) : run_power_study(cfg));
      }
    }
  }
  return reports;
}

void write_reports(std::ostream& out, const RunOptions& r, const std::vector<SimulationReport>& reports) {
  emit(r, out, [&](std::ostream& os) {
    if (r.format == "json") {
      write_reports_json(os, reports);
    } else {
      write_reports_csv(os, reports);
    }
  });
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sample size and simulation for two-stage SMARTs", "smartsize"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "INI config file; flags override its values");
  std::set<std::string> known_keys;

  // freq-size / freq-power
  FreqSizingInput freq{0.0, 0.0, 0.05, 0.2};
  long freq_n = 0;
  Command freq_size(app, "freq-size", "closed-form frequentist sample size", known_keys);
  Command freq_power(app, "freq-power", "frequentist power at a given n", known_keys);
  for (Command* c : {&freq_size, &freq_power}) {
    c->bind("--delta", freq.delta, "frequentist.delta", "standardized effect size");
    c->bind("--p", freq.p, "frequentist.p", "common response rate to the initial treatments");
    c->bind("--alpha", freq.alpha, "frequentist.alpha", "one-sided type I error");
    c->bind("--beta", freq.beta, "frequentist.beta", "type II error");
  }
  freq_power.bind("--n", freq_n, "frequentist.n", "total sample size");

  // pilot-size
  double pa = 0.5, pb = 0.5, confidence = 0.9;
  long min_cell = 6, pilot_reps = 200'000;
  RunOptions pilot_run;
  Command pilot_size(app, "pilot-size", "pilot size so that every sequence is observed", known_keys);
  pilot_size.bind("--pa", pa, "pilot.pa", "response rate to A");
  pilot_size.bind("--pb", pb, "pilot.pb", "response rate to B");
  pilot_size.bind("--min-cell", min_cell, "pilot.min_cell", "subjects required per sequence");
  pilot_size.bind("--confidence", confidence, "pilot.confidence", "probability of full coverage");
  std::string allocation = "balanced";
  pilot_size.bind("--allocation", allocation, "pilot.allocation",
                  "balanced (block randomization, exact) or multinomial (coin flips, Monte Carlo)")
      ->check(CLI::IsMember({"balanced", "multinomial"}));
  pilot_size.bind("--reps", pilot_reps, "pilot.reps", "Monte Carlo draws (multinomial only)");
  bind_run(pilot_size, pilot_run, false);

  // analyze-pilot
  PriorOptions analyze_opts;
  Command analyze(app, "analyze-pilot", "IPW estimates and NIX posterior from pilot data", known_keys);
  bind_pilot_data(analyze, analyze_opts);
  bind_nix(analyze, analyze_opts.hyper);

  // bayes-size / power-curve
  PriorOptions bayes_opts;
  Command bayes_size(app, "bayes-size", "two-priors Bayesian sample size", known_keys);
  bind_priors(bayes_size, bayes_opts);
  bayes_size.bind("--target", bayes_opts.target, "sizing.target", "target power");
  bayes_size.bind("--n-max", bayes_opts.n_max, "sizing.n_max", "largest n searched");

  PriorOptions curve_opts;
  std::string grid = "10:1000:10";
  RunOptions curve_run;
  Command curve(app, "power-curve", "Bayesian power over a grid of n", known_keys);
  bind_priors(curve, curve_opts);
  curve.bind("--grid", grid, "sizing.grid", "start:stop:step or a comma list of n");
  curve.bind("--format", curve_run.format, "run.format", "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  curve.bind("--out", curve_run.out, "run.out", "output file (default: standard output)");

  // simulations
  StudyOptions power_study, type1_study;
  Command sim_power(app, "simulate-power", "pilot -> size -> trial -> test power study", known_keys);
  bind_study(sim_power, power_study, false);
  Command sim_type1(app, "simulate-type1", "type I error of the pipeline under the null", known_keys);
  bind_study(sim_type1, type1_study, true);

  FrequentistStudyConfig freq_study;
  RunOptions freq_run;
  Command sim_freq(app, "simulate-freq", "simulated power of the frequentist sizing", known_keys);
  sim_freq.bind("--scenario", freq_study.scenario_id, "scenario.id", "built-in scenario 1-4");
  sim_freq.bind("--delta-bias", freq_study.delta_bias_grid, "frequentist.delta_bias", "effect overstatement (comma list)");
  sim_freq.bind("--response-sd", freq_study.response_sd_grid, "frequentist.response_sd",
                "response-rate sd (comma list)");
  sim_freq.bind("--alpha", freq_study.alpha, "frequentist.alpha", "one-sided type I error");
  sim_freq.bind("--beta", freq_study.beta, "frequentist.beta", "type II error");
  sim_freq.bind("--reps", freq_study.reps, "simulation.reps", "replications per cell");
  bind_run(sim_freq, freq_run, true);

  const std::vector<Command*> commands = {&freq_size, &freq_power, &pilot_size, &analyze, &bayes_size,
                                          &curve,     &sim_power,  &sim_type1,  &sim_freq};

  try {
    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
    } catch (const CLI::Success& e) {
      return app.exit(e, out, err);
    }

    Command* cmd = nullptr;
    for (Command* c : commands) {
      if (c->app()->parsed()) cmd = c;
    }
    if (cmd == nullptr) throw UsageError("no subcommand given");

    if (!config_path.empty()) {
      pt::ptree cfg;
      try {
        pt::read_ini(config_path, cfg);
      } catch (const pt::ini_parser_error& e) {
        throw UsageError(std::string("config: ") + e.what());
      }
      for (const auto& [section, child] : cfg) {
        if (child.empty()) throw UsageError("config: key '" + section + "' must be inside a section");
        for (const auto& [name, value] : child) {
          const std::string key = section + "." + name;
          if (!known_keys.count(key)) throw UsageError("config: unknown key '" + key + "'");
        }
      }
      cmd->apply_config(cfg);
    }

    if (cmd == &freq_size || cmd == &freq_power) {
      cmd->require("--delta");
      cmd->require("--p");
      if (cmd == &freq_size) {
        out << "n=" << frequentist_n(freq) << '\n';
      } else {
        cmd->require("--n");
        print_kv(out, "power", frequentist_power(freq_n, freq));
      }
    } else if (cmd == &pilot_size) {
      const bool multinomial = allocation == "multinomial";
      if (multinomial) cmd->require("--seed");
      RandomStream rng(pilot_run.seed);
      const auto r = pilot_n(pa, pb, min_cell, confidence, pilot_reps, rng,
                             multinomial ? PilotAllocation::Multinomial : PilotAllocation::Balanced);
      out << "n=" << r.n << '\n';
      print_kv(out, "coverage", r.coverage);
    } else if (cmd == &analyze) {
      cmd->require("--pilot");
      const auto data = read_pilot_csv(analyze_opts.pilot, outcome_kind(analyze_opts.outcome));
      out << "n=" << data.size() << '\n';
      out << "outcome=" << (data.outcome_kind == OutcomeKind::Binary ? "binary" : "continuous") << '\n';
      for (const auto& s : embedded_strategies()) {
        try {
          const auto e = estimate_strategy(data, s);
          print_kv(out, "mu_hat[" + s.code() + "]", e.mu_hat);
          print_kv(out, "tau2_hat[" + s.code() + "]", e.tau2_hat);
        } catch (const EstimationError&) {
          out << "mu_hat[" << s.code() << "]=unobserved\n";
        }
      }
      const auto ce = contrast_estimate(data, Strategy::parse(analyze_opts.s1), Strategy::parse(analyze_opts.s2));
      print_kv(out, "theta_hat", ce.theta_hat);
      print_kv(out, "tau2_hat", ce.tau2_hat);
      const auto post = nix_posterior(analyze_opts.hyper, ce.theta_hat, ce.tau2_hat, static_cast<long>(ce.n));
      print_kv(out, "nu_n", post.nu_n);
      print_kv(out, "sigma2_n", post.sigma2_n);
    } else if (cmd == &bayes_size) {
      const auto r = resolve_priors(*cmd, bayes_opts);
      const PowerFunction power(r.analysis, r.design, bayes_opts.eps, r.source, r.dir);
      const auto s = bayes_sample_size(bayes_opts.target, power, bayes_opts.n_max);
      out << "n=" << s.n << '\n';
      print_kv(out, "power", s.achieved_power);
      print_kv(out, "ceiling", power.ceiling());
      print_kv(out, "theta0", r.analysis.theta0);
      print_source(out, r);
    } else if (cmd == &curve) {
      check_format(curve_run);
      const auto r = resolve_priors(*cmd, curve_opts);
      const auto n_grid = parse_grid(grid);
      const auto values = power_curve(n_grid, r.analysis, r.design, curve_opts.eps, r.source, r.dir);
      emit(curve_run, out, [&](std::ostream& os) {
        if (curve_run.format == "json") {
          nlohmann::ordered_json arr = nlohmann::ordered_json::array();
          for (const auto& [n, p] : values) arr.push_back({{"n", n}, {"power", p}});
          os << arr.dump(2) << '\n';
        } else {
          write_power_curve_csv(os, values);
        }
      });
    } else if (cmd == &sim_power || cmd == &sim_type1) {
      const bool type1 = cmd == &sim_type1;
      auto& opts = type1 ? type1_study : power_study;
      write_reports(out, opts.run, run_studies(*cmd, opts, type1));
    } else if (cmd == &sim_freq) {
      cmd->require("--seed");
      check_format(freq_run);
      freq_study.seed = freq_run.seed;
      freq_study.threads = resolve_threads(*cmd, freq_run);
      const auto cells = run_frequentist_study(freq_study);
      emit(freq_run, out, [&](std::ostream& os) {
        if (freq_run.format == "json") {
          write_frequentist_json(os, freq_study.scenario_id, cells, freq_study.reps, freq_study.seed);
        } else {
          write_frequentist_csv(os, freq_study.scenario_id, cells, freq_study.reps, freq_study.seed);
        }
      });
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 1;
  } catch (const UsageError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    // Domain, numerical, estimation and data errors.
    err << "error: " << one_line(e.what()) << '\n';
    return 2;
  }
}

}  // namespace smartsize::cli
