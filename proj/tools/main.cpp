// Command-line front end: validation, block assembly, performance and
// economic measures, transient series, policy optimization, simulation,
// and a reference-reproduction report.

#include "CLI11.hpp"
#include "json.hpp"

#include "mmaprel/economics.hpp"
#include "mmaprel/optimizer.hpp"
#include "mmaprel/sim_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace mmaprel;
using nlohmann::json;

struct GridSpec {
  double start = 1e-1, stop = 1e4;
  int points = 400;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &g.start, &g.stop, &g.points) != 3 ||
      g.start <= 0 || g.stop <= g.start || g.points < 2)
    throw CLI::ValidationError("--grid", "expected start:stop:points with 0 < start < stop, points >= 2");
  return g;
}

// Known policy presets matching the shipped example configuration.
std::optional<PolicyParams> preset(const std::string& name) {
  if (name.empty()) return std::nullopt;
  PolicyParams pp;
  if (name == "model1") {
    pp = {10.1881, 10.1659, 10.1855, 9.8288, 8.3987, {0.9999, 0.5089}};
  } else if (name == "model2") {
    pp = {10.2026, 10.1463, 10.1936, 9.8266, 8.4319, {0.9153, 0.5088}};
  } else if (name == "model3") {
    pp = {959.2034, 2.1422, 634.2397, 178.3713, 390.6219, {0.0379, 0.3374}};
  } else {
    throw CLI::ValidationError("--params", "unknown preset '" + name + "' (model1|model2|model3)");
  }
  return pp;
}

SystemModel load_with_params(const std::string& model_path, const std::string& params) {
  SystemModel mo = load_model_file(model_path);
  if (auto pp = preset(params)) mo = instantiate(mo, *pp);
  return mo;
}

void write_csv(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out << (j ? "," : "") << a(i, j);
    out << "\n";
  }
}

// Mode-independent bundle of the assembled process and derived measures.
struct Built {
  SystemModel model;
  std::optional<MarkedProcess> cont;
  std::optional<MarkedProcessD> disc;
  RowVector theta;

  explicit Built(SystemModel mo) : model(std::move(mo)) {
    theta = initial_distribution(model);
    if (model.time_mode == TimeMode::Continuous)
      cont = build_blocks(model);
    else
      disc = build_blocks_d(model);
  }

  MacroDistribution stat(bool check = true) const {
    return cont ? stationary(*cont, check) : stationary(*disc, check);
  }
  MacroDistribution trans(double t) const {
    return cont ? transient(*cont, theta, t)
                : transient(*disc, theta, (long long)std::llround(t));
  }
  EventRates psi_stat(const MacroDistribution& pi) const {
    return cont ? event_rates_stationary(*cont, pi)
                : event_rates_stationary(*disc, pi);
  }
  EventRates psi_counts(double t) const {
    return cont ? event_counts(*cont, theta, t)
                : event_counts(*disc, theta, (long long)std::llround(t));
  }
  double profit_rate(const MacroDistribution& pi, const Vector& c,
                     const EconomicParameters& econ) const {
    return cont ? total_profit_rate(*cont, pi, c, econ)
                : total_profit_rate(*disc, pi, c, econ);
  }
  double profit(const Vector& c, const EconomicParameters& econ, double t) const {
    return cont ? total_profit(*cont, theta, c, econ, t)
                : total_profit(*disc, theta, c, econ, (long long)std::llround(t));
  }
  std::optional<double> break_even_time(const Vector& c,
                                        const EconomicParameters& econ) const {
    if (cont) return break_even(*cont, theta, c, econ);
    auto n = break_even(*disc, theta, c, econ);
    if (!n) return std::nullopt;
    return double(*n);
  }
  double reliability_mean() const {
    return cont ? mean(reliability_ph(*cont, theta)) : mean(reliability_ph(*disc, theta));
  }
  double reliability_survival(double t) const {
    return cont ? survival(reliability_ph(*cont, theta), t)
                : survival(reliability_ph(*disc, theta), (long long)std::llround(t));
  }
  const std::map<std::string, Matrix>& blocks() const {
    return cont ? cont->blocks : disc->blocks;
  }
};

const char* kMacroNames[6] = {"O^v", "O^nv", "RF", "NRF", "CR", "PM"};

int cmd_validate(const std::string& model_path) {
  SystemModel mo = load_model_file(model_path);  // throws ModelError if invalid
  ValidationReport rep = validate(mo);
  std::cout << "model: " << model_path << "\nstatus: "
            << (rep.ok ? "valid" : "invalid") << "\n";
  for (const auto& issue : rep.issues) std::cout << "issue: " << issue << "\n";
  return rep.ok ? 0 : 1;
}

int cmd_build(const std::string& model_path, const std::string& params,
              const std::string& dump_dir) {
  Built b(load_with_params(model_path, params));
  const bool discrete = b.model.time_mode == TimeMode::Discrete;
  std::cout << "states: " << (b.cont ? b.cont->layout.total : b.disc->layout.total)
            << "\nmode: " << (discrete ? "discrete" : "continuous") << "\n";
  double residual = 0;
  const Matrix& total = b.cont ? b.cont->generator : b.disc->transition;
  for (Eigen::Index i = 0; i < total.rows(); ++i) {
    double target = discrete ? 1.0 : 0.0;
    residual = std::max(residual, std::abs(total.row(i).sum() - target));
  }
  std::cout << "max row-sum residual: " << residual << "\n";
  for (const auto& [label, block] : b.blocks())
    std::cout << "block " << label << ": mass " << block.sum() << "\n";
  if (!dump_dir.empty()) {
    std::filesystem::create_directories(dump_dir);
    const std::string prefix = discrete ? "D_" : "Q_";
    for (const auto& [label, block] : b.blocks())
      write_csv(dump_dir + "/" + prefix + label + ".csv", block);
    std::cout << "blocks written to " << dump_dir << "\n";
  }
  return 0;
}

int cmd_measures(const std::string& model_path, const std::string& econ_path,
                 const std::string& params) {
  Built b(load_with_params(model_path, params));
  EconomicParameters econ = load_econ_file(econ_path);
  MacroDistribution pi = b.stat();
  std::cout.precision(6);
  std::cout << std::fixed;
  std::cout << "stationary macro-state probabilities:\n";
  for (int s = 0; s < 6; ++s)
    std::cout << "  " << kMacroNames[s] << ": " << pi.mass(s) << "\n";
  std::cout << "availability A: " << availability(pi) << "\n";
  EventRates psi = b.psi_stat(pi);
  std::cout << "stationary event rates:\n"
            << "  RF:  " << psi.rf << "\n  NRF: " << psi.nrf << "\n  CR:  "
            << psi.cr << "\n  PM:  " << psi.pm << "\n  R:   " << psi.r
            << "\n  NU:  " << psi.nu << "\n  NVP: " << psi.nvp << "\n";
  Vector c = cost_vector(b.model, econ);
  std::cout << "profit rate Lambda: " << b.profit_rate(pi, c, econ) << "\n";
  std::cout << "mean operational time to first failure: " << b.reliability_mean()
            << "\n";
  if (auto be = b.break_even_time(c, econ))
    std::cout << "break-even time: " << *be << "\n";
  else
    std::cout << "break-even time: never\n";
  return 0;
}

int cmd_transient(const std::string& model_path, const std::string& econ_path,
                  const std::string& params, const GridSpec& grid,
                  const std::string& out_path) {
  Built b(load_with_params(model_path, params));
  EconomicParameters econ = load_econ_file(econ_path);
  Vector c = cost_vector(b.model, econ);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out.precision(12);
  out << "t,availability,reliability,psi_rf_rate,psi_nrf_rate,psi_cr_rate,"
         "psi_pm_rate,psi_r_rate,psi_nu_rate,psi_nvp_rate,profit\n";
  for (double t : geometric_grid(grid.start, grid.stop, grid.points)) {
    MacroDistribution dist = b.trans(t);
    EventRates psi = b.psi_counts(t);
    double span = b.model.time_mode == TimeMode::Continuous
                      ? t
                      : double(std::max<long long>(1, std::llround(t)));
    out << t << "," << availability(dist) << "," << b.reliability_survival(t)
        << "," << psi.rf / span << "," << psi.nrf / span << "," << psi.cr / span
        << "," << psi.pm / span << "," << psi.r / span << "," << psi.nu / span
        << "," << psi.nvp / span << "," << b.profit(c, econ, t) << "\n";
  }
  std::cout << "series written to " << out_path << "\n";
  return 0;
}

json point_json(const ParetoPoint& pt) {
  json j;
  j["profit_rate"] = pt.profit_rate;
  j["availability"] = pt.availability;
  j["V"] = {pt.params.V1, pt.params.V2, pt.params.V3, pt.params.V4, pt.params.V5};
  j["p"] = pt.params.p;
  return j;
}

int cmd_optimize(const std::string& model_path, const std::string& econ_path,
                 GAConfig cfg, const std::string& bounds_path,
                 const std::string& out_dir) {
  SystemModel mo = load_model_file(model_path);
  EconomicParameters econ = load_econ_file(econ_path);
  if (!bounds_path.empty()) {
    std::ifstream in(bounds_path);
    if (!in) throw std::runtime_error("cannot open " + bounds_path);
    json j = json::parse(in);
    cfg.rate_log_min = j.value("rate_log_min", cfg.rate_log_min);
    cfg.rate_log_max = j.value("rate_log_max", cfg.rate_log_max);
  }
  std::vector<ParetoPoint> front = pareto_front(mo, econ, cfg);

  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir + "/pareto.csv");
  if (!csv) throw std::runtime_error("cannot write " + out_dir + "/pareto.csv");
  csv.precision(12);
  csv << "f1,f2,V1,V2,V3,V4,V5";
  for (size_t k = 0; k < front.front().params.p.size(); ++k) csv << ",p" << k + 1;
  csv << "\n";
  for (const auto& pt : front) {
    csv << pt.profit_rate << "," << pt.availability << "," << pt.params.V1 << ","
        << pt.params.V2 << "," << pt.params.V3 << "," << pt.params.V4 << ","
        << pt.params.V5;
    for (double pk : pt.params.p) csv << "," << pk;
    csv << "\n";
  }

  json sel;
  sel["front_size"] = front.size();
  auto ideal = ideal_point(front);
  sel["ideal_point"] = {ideal.first, ideal.second};
  sel["max_profit"] = point_json(select_max_profit(front));
  sel["max_availability"] = point_json(select_max_availability(front));
  sel["closest_to_ideal"] = point_json(select_closest(front));
  std::ofstream js(out_dir + "/selection.json");
  js << sel.dump(2) << "\n";
  std::cout << "front size " << front.size() << "; pareto.csv and selection.json"
            << " written to " << out_dir << "\n";
  return 0;
}

int cmd_simulate(const std::string& model_path, const std::string& econ_path,
                 const std::string& params, const SimConfig& cfg,
                 const std::string& out_path) {
  Built b(load_with_params(model_path, params));
  EconomicParameters econ = load_econ_file(econ_path);
  SimEstimates est = simulate(b.model, econ, cfg);

  MacroDistribution pi = b.stat();
  AnalyticSummary analytic;
  for (int s = 0; s < 6; ++s) analytic.occupancy[s] = pi.mass(s);
  analytic.availability = availability(pi);
  analytic.rates = b.psi_stat(pi);
  CompareReport rep = compare(analytic, est, 0.05);

  json j;
  j["horizon"] = cfg.horizon;
  j["replications"] = cfg.replications;
  j["seed"] = cfg.seed;
  j["warmup"] = cfg.warmup;
  j["profit_rate"] = {{"mean", est.profit_rate}, {"sd", est.profit_rate_sd}};
  j["covered"] = rep.covered;
  j["quantities"] = json::array();
  for (const auto& line : rep.lines)
    j["quantities"].push_back({{"name", line.name},
                               {"analytic", line.analytic},
                               {"simulated", line.simulated},
                               {"stderr", line.stderr_},
                               {"z", line.z},
                               {"covered", line.covered}});
  j["pass"] = rep.pass;
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << j.dump(2) << "\n";

  std::cout.precision(6);
  std::cout << std::fixed;
  for (const auto& line : rep.lines)
    std::cout << line.name << ": analytic " << line.analytic << ", simulated "
              << line.simulated << " +- " << line.stderr_
              << (line.covered ? " (ok)" : " (MISS)") << "\n";
  std::cout << "coverage: " << rep.covered << "/" << rep.lines.size()
            << (rep.pass ? " pass" : " FAIL") << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_reproduce(const std::string& model_path, const std::string& econ_path) {
  EconomicParameters econ = load_econ_file(econ_path);

  struct Ref {
    const char* name;
    const char* params;
    double occ[6];
    double avail, profit, mttf;
    std::optional<double> break_even;
  };
  // Published reference values for the three selected policies.
  const std::vector<Ref> refs = {
      {"Model 1", "model1", {0.7678, 0.1410, 0.0001, 0.0106, 0.0771, 0.0034},
       0.9089, 0.2734, 13.3705, 155.7316},
      {"Model 2", "model2", {0.2474, 0.6694, 0.0000, 0.0020, 0.0777, 0.0034},
       0.9168, 0.0164, 36.8556, 2646.569},
      {"Model 3", "model3", {0.0001, 0.9186, 0.0000, 0.0000, 0.0779, 0.0034},
       0.9187, -0.1972, 61.0399, std::nullopt},
  };

  std::cout.precision(4);
  std::cout << std::fixed;
  auto row = [&](const std::string& name, double got, double want) {
    std::cout << "  " << name << ": computed " << got << ", reference " << want
              << ", deviation " << got - want << "\n";
  };

  for (const auto& ref : refs) {
    Built b(load_with_params(model_path, ref.params));
    MacroDistribution pi = b.stat();
    Vector c = cost_vector(b.model, econ);
    std::cout << ref.name << "\n";
    for (int s = 0; s < 6; ++s) row(kMacroNames[s], pi.mass(s), ref.occ[s]);
    row("availability", availability(pi), ref.avail);
    row("profit rate", b.profit_rate(pi, c, econ), ref.profit);
    row("mean time to first failure", b.reliability_mean(), ref.mttf);
    auto be = b.break_even_time(c, econ);
    std::cout << "  break-even: computed "
              << (be ? std::to_string(*be) : std::string("never")) << ", reference "
              << (ref.break_even ? std::to_string(*ref.break_even)
                                 : std::string("never"))
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reliability and profitability analysis of a multi-state "
               "maintained unit with marked-event Markov models"};
  app.require_subcommand(1);

  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "emit errors as JSON on stdout");

  std::string model_path = "data/paper_example.json";
  std::string econ_path = "data/paper_economics.json";
  std::string params, dump_dir, out_path, bounds_path, out_dir = ".";
  std::string grid_text = "0.1:10000:400";
  GAConfig ga;
  SimConfig sim;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", model_path, "system model JSON");
  };
  auto add_econ = [&](CLI::App* sub) {
    sub->add_option("--econ", econ_path, "economic parameters JSON");
  };
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--params", params, "policy preset: model1|model2|model3");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a model configuration");
  add_model(validate_cmd);

  auto* build_cmd = app.add_subcommand("build", "assemble the labeled blocks");
  add_model(build_cmd);
  add_params(build_cmd);
  build_cmd->add_option("--dump-blocks", dump_dir, "directory for per-label CSV dumps");

  auto* measures_cmd = app.add_subcommand("measures", "stationary measures and profit");
  add_model(measures_cmd);
  add_econ(measures_cmd);
  add_params(measures_cmd);

  auto* transient_cmd = app.add_subcommand("transient", "time-series CSV over a grid");
  add_model(transient_cmd);
  add_econ(transient_cmd);
  add_params(transient_cmd);
  transient_cmd->add_option("--grid", grid_text, "start:stop:points (geometric)");
  out_path = "transient.csv";
  transient_cmd->add_option("--out", out_path, "output CSV path");

  auto* optimize_cmd = app.add_subcommand("optimize", "multi-objective policy search");
  add_model(optimize_cmd);
  add_econ(optimize_cmd);
  optimize_cmd->add_option("--pop", ga.population, "population size");
  optimize_cmd->add_option("--gens", ga.generations, "generations");
  optimize_cmd->add_option("--seed", ga.seed, "random seed");
  optimize_cmd->add_option("--bounds", bounds_path, "JSON with rate_log_min/rate_log_max");
  optimize_cmd->add_option("--out-dir", out_dir, "directory for pareto.csv / selection.json");

  auto* simulate_cmd = app.add_subcommand("simulate", "discrete-event simulation check");
  add_model(simulate_cmd);
  add_econ(simulate_cmd);
  add_params(simulate_cmd);
  simulate_cmd->add_option("--horizon", sim.horizon, "simulated time span");
  simulate_cmd->add_option("--reps", sim.replications, "independent replications");
  simulate_cmd->add_option("--seed", sim.seed, "random seed");
  simulate_cmd->add_option("--warmup", sim.warmup, "discarded initial span");
  std::string sim_out = "sim_report.json";
  simulate_cmd->add_option("--out", sim_out, "output JSON path");

  auto* repro_cmd = app.add_subcommand(
      "reproduce-paper", "run the reference example through all three policies");
  add_model(repro_cmd);
  add_econ(repro_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return cmd_validate(model_path);
    if (*build_cmd) return cmd_build(model_path, params, dump_dir);
    if (*measures_cmd) return cmd_measures(model_path, econ_path, params);
    if (*transient_cmd)
      return cmd_transient(model_path, econ_path, params, parse_grid(grid_text), out_path);
    if (*optimize_cmd)
      return cmd_optimize(model_path, econ_path, ga, bounds_path, out_dir);
    if (*simulate_cmd)
      return cmd_simulate(model_path, econ_path, params, sim, sim_out);
    if (*repro_cmd) return cmd_reproduce(model_path, econ_path);
  } catch (const ModelError& ex) {
    if (json_errors) {
      json j{{"error", "model validation"}, {"issues", ex.issues}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cerr << "error: model validation failed\n";
      for (const auto& issue : ex.issues) std::cerr << "  " << issue << "\n";
    }
    return 1;
  } catch (const std::exception& ex) {
    if (json_errors) {
      json j{{"error", ex.what()}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cerr << "error: " << ex.what() << "\n";
    }
    return 1;
  }
  return 0;
}
