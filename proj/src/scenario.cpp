#include "cavmet/scenario.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "cavmet/errors.hpp"
#include "cavmet/parallel.hpp"
#include "cavmet/report.hpp"

namespace fs = std::filesystem;

namespace cavmet {

namespace {

const std::map<std::string, Scenario>& scenario_table() {
  static const std::map<std::string, Scenario> table = {
      {"collapse", Scenario::collapse},
      {"revival", Scenario::revival},
      {"fringes", Scenario::fringes},
      {"fisher_scan", Scenario::fisher_scan},
      {"precision_curve", Scenario::precision_curve},
      {"table1", Scenario::table1},
      {"estimate", Scenario::estimate},
  };
  return table;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size() || value.empty()) {
    throw ConfigError("cannot parse '" + value + "' as a number for key " + key);
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size() || value.empty()) {
    throw ConfigError("cannot parse '" + value + "' as an integer for key " + key);
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "on") return true;
  if (value == "0" || value == "false" || value == "off") return false;
  throw ConfigError("cannot parse '" + value + "' as a boolean for key " + key);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const ScenarioConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("artifact_version", artifact_version);
  kv.emplace_back("scenario", scenario_name(c.scenario));
  kv.emplace_back("alpha", format_double(c.params.alpha));
  kv.emplace_back("t1_us", format_double(c.params.t1_us));
  kv.emplace_back("t2_us", format_double(c.params.t2_us));
  kv.emplace_back("beta", format_double(c.params.beta));
  kv.emplace_back("omega0_rad_us", format_double(c.params.mode.omega0));
  kv.emplace_back("waist_mm", format_double(c.params.mode.waist_mm));
  kv.emplace_back("velocity_mm_us", format_double(c.params.mode.velocity_mm_us));
  kv.emplace_back("n_max", std::to_string(c.params.n_max));
  kv.emplace_back("initial_atom", c.params.initial_atom == AtomLevel::g ? "g" : "e");
  kv.emplace_back("flip_enabled", bool_str(c.params.flip_enabled));
  kv.emplace_back("detection_error", format_double(c.imperfections.detection_error));
  kv.emplace_back("position_sigma_mm", format_double(c.imperfections.position_sigma_mm));
  kv.emplace_back("n_spread_samples", std::to_string(c.imperfections.n_spread_samples));
  kv.emplace_back("spread_rule", c.imperfections.spread_rule == SpreadRule::gauss_hermite
                                     ? "gauss_hermite"
                                     : "monte_carlo");
  kv.emplace_back("t1_min_us", format_double(c.t1_grid.min));
  kv.emplace_back("t1_max_us", format_double(c.t1_grid.max));
  kv.emplace_back("t1_points", std::to_string(c.t1_grid.points));
  kv.emplace_back("t2_min_us", format_double(c.t2_grid.min));
  kv.emplace_back("t2_max_us", format_double(c.t2_grid.max));
  kv.emplace_back("t2_points", std::to_string(c.t2_grid.points));
  kv.emplace_back("beta_min", format_double(c.beta_grid.min));
  kv.emplace_back("beta_max", format_double(c.beta_grid.max));
  kv.emplace_back("beta_points", std::to_string(c.beta_grid.points));
  kv.emplace_back("fit_degree", std::to_string(c.fit_degree));
  kv.emplace_back("fringe_trials", std::to_string(c.fringe_trials));
  kv.emplace_back("beta_true", format_double(c.beta_true));
  kv.emplace_back("nu", std::to_string(c.nu));
  kv.emplace_back("replicas", std::to_string(c.replicas));
  kv.emplace_back("seed", std::to_string(c.seed));
  kv.emplace_back("out_dir", c.out_dir);
  return kv;
}

struct Emitter {
  const ScenarioConfig& config;
  std::vector<std::string> files;
  std::vector<std::pair<std::string, std::string>> extra_meta;

  std::string emit(const std::string& name, const Table& table, const std::string& plot_title) {
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    const std::string csv = (dir / name).string();
    write_csv(csv, table);
    auto kv = resolved_entries(config);
    kv.insert(kv.end(), extra_meta.begin(), extra_meta.end());
    kv.emplace_back("generated_at", timestamp_utc());
    write_meta(csv, kv);
    files.push_back(csv);
    if (config.plot) {
      std::string svg = csv;
      svg.replace(svg.size() - 4, 4, ".svg");
      write_svg_plot(svg, table, plot_title);
      files.push_back(svg);
    }
    return csv;
  }
};

void run_collapse(const ScenarioConfig& c, Emitter& out) {
  const auto t1s = linspace(c.t1_grid);
  std::vector<double> ideal(t1s.size()), model(t1s.size());
  parallel_for(t1s.size(), [&](std::size_t i) {
    ProtocolParams p = c.params;
    p.t1_us = t1s[i];
    p.t2_us = 0.0;
    p.beta = 0.0;
    p.flip_enabled = false;
    ideal[i] = run_protocol_numeric(p).p_g;
    model[i] = pg_with_imperfections(p, c.imperfections, c.seed);
  });
  Table t{{"T1_us", "Pg_ideal_prob", "Pg_model_prob"}, {t1s, ideal, model}};
  out.emit("collapse.csv", t, "Rabi collapse P_g(T1)");
}

void run_revival(const ScenarioConfig& c, Emitter& out) {
  const auto t2s = linspace(c.t2_grid);
  std::vector<double> ideal0(t2s.size()), ideal1(t2s.size());
  std::vector<double> model0(t2s.size()), model1(t2s.size());
  parallel_for(t2s.size(), [&](std::size_t i) {
    ProtocolParams p = c.params;
    p.t2_us = t2s[i];
    p.beta = 0.0;
    ideal0[i] = run_protocol_numeric(p).p_g;
    model0[i] = pg_with_imperfections(p, c.imperfections, c.seed);
    p.beta = c.params.beta;
    ideal1[i] = run_protocol_numeric(p).p_g;
    model1[i] = pg_with_imperfections(p, c.imperfections, c.seed);
  });

  ProtocolParams symmetric = c.params;
  symmetric.t2_us = symmetric.t1_us;
  const double phase =
      c.params.beta != 0.0 ? measure_fringe_phase(symmetric, c.params.beta) : 0.0;
  std::vector<double> phase_col(t2s.size(), phase);

  Table t{{"T2_us", "Pg_beta0_prob", "Pg_betaInj_prob", "Pg_beta0_model_prob",
           "Pg_betaInj_model_prob", "fringe_phase_offset_rad"},
          {t2s, ideal0, ideal1, model0, model1, phase_col}};
  out.extra_meta.emplace_back("fringe_phase_offset_rad", format_double(phase));
  out.emit("revival.csv", t, "Rabi revival P_g(T2)");
}

void run_fringes(const ScenarioConfig& c, Emitter& out) {
  const auto betas = linspace(c.beta_grid);
  std::vector<double> model(betas.size()), sampled(betas.size());
  std::vector<long> trials(betas.size(), c.fringe_trials > 0 ? c.fringe_trials : 1);
  parallel_for(betas.size(), [&](std::size_t i) {
    ProtocolParams p = c.params;
    p.beta = betas[i];
    model[i] = pg_with_imperfections(p, c.imperfections, c.seed);
    if (c.fringe_trials > 0) {
      RngStream rng(c.seed, i);
      sampled[i] = static_cast<double>(sample_outcomes(model[i], c.fringe_trials, rng)) /
                   static_cast<double>(c.fringe_trials);
    } else {
      sampled[i] = model[i];
    }
  });

  FringeDataset data{betas, sampled, trials};
  const FringeFit fit = fi_from_fringes(data, c.fit_degree);

  Table t{{"beta", "Pg_model_prob", "Pg_hat_prob", "F_fit"},
          {betas, model, sampled, fit.f_curve}};
  out.extra_meta.emplace_back("f_at_zero", format_double(fit.f_at_zero));
  out.extra_meta.emplace_back("clipped_points", std::to_string(fit.clipped_points));
  out.emit("fringes.csv", t, "Interference signal P_g(beta) and Fisher information");
}

void run_fisher_scan(const ScenarioConfig& c, Emitter& out) {
  static const double t1_values[] = {0.0, 6.8, 9.2, 12.0, 14.7};
  const auto t2s = linspace(c.t2_grid);
  for (double t1 : t1_values) {
    std::vector<double> sqrt_f(t2s.size());
    const double om0 = c.params.omega0();
    for (std::size_t i = 0; i < t2s.size(); ++i) {
      sqrt_f[i] = std::sqrt(fi_midfringe(t1, t2s[i], om0));
    }
    std::vector<double> sql_edge(t2s.size(), std::sqrt(f_sql));
    const double a = om0 * t1;
    std::vector<double> qfi_edge(t2s.size(), std::sqrt(4.0 + a * a));
    Table t{{"T2_us", "sqrt_F", "sqrt_F_SQL", "sqrt_F_Q"}, {t2s, sqrt_f, sql_edge, qfi_edge}};
    char name[64];
    std::snprintf(name, sizeof name, "fisher_scan_t1_%gus.csv", t1);
    char title[80];
    std::snprintf(title, sizeof title, "sqrt Fisher information vs T2 (T1 = %g us)", t1);
    out.emit(name, t, title);
  }
}

void run_precision_curve(const ScenarioConfig& c, Emitter& out) {
  const auto t1s = linspace(c.t1_grid);
  const std::size_t n = t1s.size();
  std::vector<double> d(n), t2_star(n), db_opt(n), db_sql(n, 0.5), db_q(n);
  for (std::size_t i = 0; i < n; ++i) {
    ProtocolParams p = c.params;
    p.t1_us = t1s[i];
    const auto opt = optimal_t2(p.t1_us, p.omega0());
    const auto q = qfi_analytic(p);
    d[i] = q.separation;
    t2_star[i] = opt.t2_us;
    db_opt[i] = 1.0 / std::sqrt(opt.f_star);
    db_q[i] = 1.0 / std::sqrt(q.f_q);
  }
  Table t{{"T1_us", "D", "T2_star_us", "delta_beta_opt", "delta_beta_sql", "delta_beta_q"},
          {t1s, d, t2_star, db_opt, db_sql, db_q}};
  out.emit("precision_curve.csv", t, "Single-realization precision vs preparation time");
}

void run_table1(const ScenarioConfig& c, Emitter& out) {
  const double t2_a = c.t2_grid.min;
  const double t2_b = c.t2_grid.max;
  const double om0 = c.params.omega0();
  const double eps = c.imperfections.detection_error;
  const double channel = (1.0 - 2.0 * eps) * (1.0 - 2.0 * eps);

  const double f_q_an = qfi_analytic(c.params).f_q;
  const double f_q_num = qfi_numeric(prepare_resource_state(c.params));

  auto extracted = [&](double t2) {
    ProtocolParams p = c.params;
    p.t2_us = t2;
    const auto betas = linspace(c.beta_grid);
    std::vector<double> ps(betas.size());
    parallel_for(betas.size(), [&](std::size_t i) {
      ProtocolParams q = p;
      q.beta = betas[i];
      ps[i] = pg_with_imperfections(q, c.imperfections, c.seed);
    });
    return fi_from_fringes({betas, ps, {}}, c.fit_degree).f_at_zero;
  };

  struct Row {
    const char* label;
    double a, b;
  };
  const Row rows[] = {
      {"F_Q_analytic", f_q_an, f_q_an},
      {"F_Q_numeric", f_q_num, f_q_num},
      {"F_midfringe", fi_midfringe(c.params.t1_us, t2_a, om0),
       fi_midfringe(c.params.t1_us, t2_b, om0)},
      {"F_midfringe_detection", channel * fi_midfringe(c.params.t1_us, t2_a, om0),
       channel * fi_midfringe(c.params.t1_us, t2_b, om0)},
      {"F_extracted_model", extracted(t2_a), extracted(t2_b)},
      {"F_SQL", f_sql, f_sql},
  };

  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  const std::string csv = (dir / "table1.csv").string();
  std::ofstream f(csv, std::ios::binary);
  if (!f) throw std::runtime_error("table1: cannot open " + csv);
  f << "quantity,F_at_T2_" << format_double(t2_a) << "us,F_at_T2_" << format_double(t2_b)
    << "us\n";
  for (const auto& r : rows) {
    f << r.label << ',' << format_double(r.a) << ',' << format_double(r.b) << '\n';
  }
  if (!f) throw std::runtime_error("table1: write failed");
  f.close();
  auto kv = resolved_entries(c);
  kv.insert(kv.end(), out.extra_meta.begin(), out.extra_meta.end());
  kv.emplace_back("generated_at", timestamp_utc());
  write_meta(csv, kv);
  out.files.push_back(csv);
}

void run_estimate(const ScenarioConfig& c, Emitter& out) {
  TrialConfig trial;
  trial.params = c.params;
  trial.imperfections = c.imperfections;
  trial.beta_true = c.beta_true;
  trial.nu = c.nu;
  trial.replicas = c.replicas;
  trial.seed = c.seed;
  const CramerRaoResult r = cramer_rao_trial(trial);

  Table t{{"nu", "replicas", "beta_true", "empirical_std", "predicted_std", "ratio",
           "mean_estimate", "clamped_estimates"},
          {{double(c.nu)},
           {double(c.replicas)},
           {c.beta_true},
           {r.empirical_std},
           {r.predicted_std},
           {r.ratio},
           {r.mean_estimate},
           {double(r.clamped_estimates)}}};
  out.emit("estimate.csv", t, "Cramer-Rao trial");
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
  const auto& table = scenario_table();
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown scenario '" + name + "'");
  return it->second;
}

std::string scenario_name(Scenario s) {
  for (const auto& [name, value] : scenario_table()) {
    if (value == s) return name;
  }
  return "?";
}

std::vector<double> linspace(const GridSpec& grid) {
  if (grid.points < 1) throw ConfigError("grid must have at least one point");
  if (grid.max < grid.min) throw ConfigError("grid max below min");
  std::vector<double> xs(grid.points);
  if (grid.points == 1) {
    xs[0] = grid.min;
    return xs;
  }
  for (int i = 0; i < grid.points; ++i) {
    xs[i] = grid.min + (grid.max - grid.min) * i / (grid.points - 1.0);
  }
  return xs;
}

ScenarioConfig default_config(Scenario s) {
  ScenarioConfig c;
  c.scenario = s;
  c.imperfections.detection_error = 0.05;
  c.imperfections.position_sigma_mm = 0.5;
  switch (s) {
    case Scenario::collapse:
      c.params.t1_us = 0.0;
      c.params.t2_us = 0.0;
      c.params.flip_enabled = false;
      c.t1_grid = {0.0, 20.0, 401};
      break;
    case Scenario::revival:
      c.params.t1_us = 13.4;
      c.params.beta = 1.0;
      c.t2_grid = {8.4, 18.4, 251};
      break;
    case Scenario::fringes:
      c.params.t1_us = 12.0;
      c.params.t2_us = 13.5;
      c.beta_grid = {-0.6, 0.6, 13};
      break;
    case Scenario::fisher_scan:
      c.t2_grid = {0.5, 17.5, 171};
      break;
    case Scenario::precision_curve:
      c.t1_grid = {0.0, 15.0, 151};
      break;
    case Scenario::table1:
      c.params.t1_us = 14.7;
      c.t2_grid = {13.5, 16.3, 2};
      c.beta_grid = {-0.6, 0.6, 13};
      break;
    case Scenario::estimate:
      c.params.t1_us = 14.7;
      c.params.t2_us = 16.3;
      c.imperfections.position_sigma_mm = 0.0;
      break;
  }
  return c;
}

void apply_setting(ScenarioConfig& c, const std::string& key, const std::string& value) {
  if (key == "alpha") {
    c.params.alpha = parse_double(key, value);
  } else if (key == "t1_us") {
    c.params.t1_us = parse_double(key, value);
  } else if (key == "t2_us") {
    c.params.t2_us = parse_double(key, value);
  } else if (key == "beta") {
    c.params.beta = parse_double(key, value);
  } else if (key == "omega0_rad_us") {
    c.params.mode.omega0 = parse_double(key, value);
  } else if (key == "waist_mm") {
    c.params.mode.waist_mm = parse_double(key, value);
  } else if (key == "velocity_mm_us") {
    c.params.mode.velocity_mm_us = parse_double(key, value);
  } else if (key == "n_max") {
    c.params.n_max = static_cast<int>(parse_int(key, value));
  } else if (key == "initial_atom") {
    if (value == "g") {
      c.params.initial_atom = AtomLevel::g;
    } else if (value == "e") {
      c.params.initial_atom = AtomLevel::e;
    } else {
      throw ConfigError("initial_atom must be g or e");
    }
  } else if (key == "flip_enabled") {
    c.params.flip_enabled = parse_bool(key, value);
  } else if (key == "detection_error") {
    c.imperfections.detection_error = parse_double(key, value);
  } else if (key == "position_sigma_mm") {
    c.imperfections.position_sigma_mm = parse_double(key, value);
  } else if (key == "n_spread_samples") {
    c.imperfections.n_spread_samples = static_cast<int>(parse_int(key, value));
  } else if (key == "spread_rule") {
    if (value == "gauss_hermite") {
      c.imperfections.spread_rule = SpreadRule::gauss_hermite;
    } else if (value == "monte_carlo") {
      c.imperfections.spread_rule = SpreadRule::monte_carlo;
    } else {
      throw ConfigError("spread_rule must be gauss_hermite or monte_carlo");
    }
  } else if (key == "t1_min_us") {
    c.t1_grid.min = parse_double(key, value);
  } else if (key == "t1_max_us") {
    c.t1_grid.max = parse_double(key, value);
  } else if (key == "t1_points") {
    c.t1_grid.points = static_cast<int>(parse_int(key, value));
  } else if (key == "t2_min_us") {
    c.t2_grid.min = parse_double(key, value);
  } else if (key == "t2_max_us") {
    c.t2_grid.max = parse_double(key, value);
  } else if (key == "t2_points") {
    c.t2_grid.points = static_cast<int>(parse_int(key, value));
  } else if (key == "beta_min") {
    c.beta_grid.min = parse_double(key, value);
  } else if (key == "beta_max") {
    c.beta_grid.max = parse_double(key, value);
  } else if (key == "beta_points") {
    c.beta_grid.points = static_cast<int>(parse_int(key, value));
  } else if (key == "fit_degree") {
    c.fit_degree = static_cast<int>(parse_int(key, value));
  } else if (key == "fringe_trials") {
    c.fringe_trials = parse_int(key, value);
  } else if (key == "beta_true") {
    c.beta_true = parse_double(key, value);
  } else if (key == "nu") {
    c.nu = parse_int(key, value);
  } else if (key == "replicas") {
    c.replicas = static_cast<int>(parse_int(key, value));
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void load_config_file(ScenarioConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(c, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

std::vector<std::string> run_scenario(const ScenarioConfig& config) {
  Emitter out{config, {}, {}};
  switch (config.scenario) {
    case Scenario::collapse:
      run_collapse(config, out);
      break;
    case Scenario::revival:
      run_revival(config, out);
      break;
    case Scenario::fringes:
      run_fringes(config, out);
      break;
    case Scenario::fisher_scan:
      run_fisher_scan(config, out);
      break;
    case Scenario::precision_curve:
      run_precision_curve(config, out);
      break;
    case Scenario::table1:
      run_table1(config, out);
      break;
    case Scenario::estimate:
      run_estimate(config, out);
      break;
  }
  return out.files;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Cavity-field displacement metrology: scenario runner"};
  app.footer("Keys accepted by --set and the config file are listed in the README.");
  std::string scenario_arg;
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  app.add_option("scenario", scenario_arg,
                 "collapse | revival | fringes | fisher_scan | precision_curve | table1 | "
                 "estimate")
      ->required();
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", sets, "override one key (key=value); repeatable, wins over --config");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* plot_flag = app.add_flag("--plot", "emit an SVG plot next to each CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ScenarioConfig config = default_config(parse_scenario(scenario_arg));
    if (!config_path.empty()) load_config_file(config, config_path);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_setting(config, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    if (seed_opt->count()) config.seed = seed;
    if (out_opt->count()) config.out_dir = out_dir;
    if (plot_flag->count()) config.plot = true;

    for (const auto& file : run_scenario(config)) std::cout << file << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const GuardError& e) {
    std::cerr << "numerical guard violation: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace cavmet
