// Copyright 2026 The rts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rts/bccks.hpp"
#include "rts/ode.hpp"
#include "rts/optimizer.hpp"
#include "rts/qsp.hpp"
#include "rts/report.hpp"

namespace rts::cli {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

inline LogLevel log_level_from_env() {
  const char* v = std::getenv("RTS_LOG");
  if (v == nullptr) return LogLevel::kError;
  const std::string s(v);
  if (s == "debug") return LogLevel::kDebug;
  if (s == "info") return LogLevel::kInfo;
  return LogLevel::kError;
}

class Logger {
 public:
  Logger(std::ostream& err, LogLevel level) : err_(err), level_(level) {}
  void log(LogLevel at, const std::string& msg) const {
    static const char* names[] = {"error", "info", "debug"};
    if (at <= level_) err_ << "[" << names[static_cast<int>(at)] << "] " << msg << '\n';
  }

 private:
  std::ostream& err_;
  LogLevel level_;
};

// Option storage for every subcommand.
struct Options {
  std::string format;
  int k1 = 0, k2 = 0;
  double p = 0.0;
  int l = 200;
  double t = 100.0;
  long r = 0;
  double alpha_sum = 0.0;
  std::string error_mode;  // empty: per-command default
  std::string total_mode = "times_r";
  double gamma = 0.25, delta = 1e-3;
  int m = 1, j = 0, pad = 1, n = 3;
  double h = 0.25, x_norm = 1.0, b_norm = 0.0, kappa = 1.0, ah_norm = 0.5;
  double budget = 0.0, target = 0.0;
  int k_max = 100;
  std::vector<double> errors;
  double g_min = 5.0, g_max = 35.0, g_step = 0.5;
  std::vector<double> g_grid;
  std::string model = "ising", hamiltonian_file, mode = "exact";
  double coupling = 1.0, field = 1.0;
  long shots = 20000;
  std::uint64_t seed = 1;
  bool random_state = false;
  int grid = 4097;
  double tau = 20000.0, eps = 0.0, l_min = 1.0, l_max = 1e6;
  int points = 25;
};

namespace detail {

inline ErrorMode parse_error_mode(const std::string& s,
                                  ErrorMode fallback = ErrorMode::kSumForm) {
  if (s.empty()) return fallback;
  if (s == "sum" || s == "sum_form") return ErrorMode::kSumForm;
  if (s == "max" || s == "max_form") return ErrorMode::kMaxForm;
  throw DomainError("error mode must be 'sum' or 'max'");
}

inline TotalMode parse_total_mode(const std::string& s) {
  if (s == "times_r") return TotalMode::kTimesR;
  if (s == "per_segment") return TotalMode::kPerSegment;
  throw DomainError("total mode must be 'times_r' or 'per_segment'");
}

inline SegmentPlan plan_from(const Options& o) {
  if (o.r > 0) {
    require(o.t > 0.0, "t must be positive");
    return SegmentPlan{o.alpha_sum > 0 ? o.alpha_sum : static_cast<double>(o.l), o.t,
                       o.r, o.t / static_cast<double>(o.r)};
  }
  return plan_segments(o.alpha_sum > 0.0 ? o.alpha_sum : static_cast<double>(o.l), o.t);
}

inline void add_plan_results(Json& res, const SegmentPlan& plan) {
  res["r"] = plan.r;
  res["tau"] = plan.tau;
}

inline void add_bccks_results(Json& res, const BccksBounds& b) {
  res["delta1"] = b.delta1;
  res["delta2"] = b.delta2;
  res["delta_m"] = b.delta_m;
  res["a1"] = b.a1;
  res["a2"] = b.a2;
  res["a2_statement"] = b.a2_statement;
  res["a2_proof"] = b.a2_proof;
  res["b"] = b.b;
  res["epsilon_segment"] = b.epsilon_segment;
  res["epsilon_total"] = b.epsilon_total;
  res["xi_segment"] = b.xi_segment;
  res["p_cap"] = b.p_cap;
}

inline void add_cost_results(Json& res, const CostPoint& c) {
  res["k1"] = c.k1;
  res["k2"] = c.k2;
  res["p"] = c.p;
  res["g_indicator"] = c.g_indicator;
  res["g_cnot"] = c.g_cnot;
  res["k_mean"] = c.k_mean;
}

inline PauliSumHamiltonian hamiltonian_from(const Options& o) {
  if (!o.hamiltonian_file.empty()) {
    std::ifstream in(o.hamiltonian_file);
    require(static_cast<bool>(in), "cannot open " + o.hamiltonian_file);
    return parse_hamiltonian(in);
  }
  require(o.model == "ising", "unknown model '" + o.model + "'");
  return ising_chain(o.n, o.coupling, o.field);
}

inline SearchConfig search_from(const Options& o) {
  SearchConfig cfg;
  cfg.k_max = o.k_max;
  cfg.error_mode = parse_error_mode(o.error_mode);
  cfg.total_mode = parse_total_mode(o.total_mode);
  cfg.l = o.l;
  return cfg;
}

inline void set_modes(RunReport& rep, const Options& o) {
  rep.provenance.error_mode = to_string(parse_error_mode(o.error_mode));
  rep.provenance.total_mode = to_string(parse_total_mode(o.total_mode));
}

inline RunReport bounds_bccks(const Options& o, const Logger& log) {
  RunReport rep;
  rep.command = "bounds bccks";
  set_modes(rep, o);
  rep.parameters = {{"k1", o.k1}, {"k2", o.k2}, {"p", o.p}, {"l", o.l}, {"t", o.t}};
  const SegmentPlan plan = plan_from(o);
  const auto b = bccks_bounds(o.k1, o.k2, o.p, plan.r, parse_error_mode(o.error_mode),
                              parse_total_mode(o.total_mode));
  const CostPoint c = rts_cost_point(o.k1, o.k2, o.p, o.l, plan.r);
  if (c.clamped) log.log(LogLevel::kInfo, "per-select CNOT cost clamped to 1 for small L");
  add_plan_results(rep.results, plan);
  add_bccks_results(rep.results, b);
  rep.results["g_indicator"] = c.g_indicator;
  rep.results["g_cnot"] = c.g_cnot;
  rep.results["k_mean"] = c.k_mean;
  return rep;
}

inline RunReport bounds_qsp_hs(const Options& o) {
  RunReport rep;
  rep.command = "bounds qsp-hs";
  rep.parameters = {{"t", o.t}, {"k1", o.k1}, {"k2", o.k2}, {"p", o.p}};
  const auto b = qsp_hs_bounds({o.t, o.k1, o.k2, o.p});
  rep.results = {{"delta1", b.delta1},   {"delta_m", b.delta_m}, {"eps1_v1", b.eps1_v1},
                 {"eps2_v1", b.eps2_v1}, {"eps1_v2", b.eps1_v2}, {"eps2_v2", b.eps2_v2},
                 {"eps1_vm", b.eps1_vm}, {"eps2_vm", b.eps2_vm}, {"epsilon", b.epsilon},
                 {"xi", b.xi}};
  return rep;
}

inline RunReport bounds_usa(const Options& o) {
  RunReport rep;
  rep.command = "bounds usa";
  rep.parameters = {{"gamma", o.gamma}, {"delta", o.delta}, {"k1", o.k1},
                    {"k2", o.k2},       {"p", o.p}};
  const UsaSpec s = make_usa_spec(o.gamma, o.delta, o.k1, o.k2, o.p);
  const auto b = usa_bounds(s);
  rep.results = {{"delta_prime", s.delta_prime}, {"delta1", b.delta1},
                 {"delta_m", b.delta_m},         {"epsilon", b.epsilon},
                 {"a1_erf", b.a1_erf},           {"a2_erf", b.a2_erf},
                 {"b_erf", b.b_erf}};
  return rep;
}

inline RunReport bounds_ode(const Options& o) {
  RunReport rep;
  rep.command = "bounds ode";
  const int j = o.j > 0 ? o.j : o.m;
  rep.parameters = {{"k1", o.k1},         {"k2", o.k2},         {"p", o.p},
                    {"m", o.m},           {"h", o.h},           {"j", j},
                    {"x_norm", o.x_norm}, {"b_norm", o.b_norm}, {"kappa", o.kappa}};
  require(o.x_norm >= 0.0 && o.b_norm >= 0.0, "norms must be non-negative");
  require(o.kappa >= 1.0, "kappa must be at least 1");
  const auto b = ode_bounds_from_constants(o.kappa, o.x_norm, o.b_norm, o.m, o.h, j,
                                           o.k1, o.k2, o.p);
  rep.results = {{"kappa_v", b.kappa_v}, {"c_j", b.c_j},          {"delta1", b.delta1},
                 {"delta_m", b.delta_m}, {"epsilon", b.epsilon}};
  return rep;
}

inline RunReport optimize(const Options& o) {
  RunReport rep;
  rep.command = "optimize";
  set_modes(rep, o);
  require((o.budget > 0.0) != (o.target > 0.0), "give exactly one of --budget or --target");
  const SegmentPlan plan = plan_from(o);
  const SearchConfig cfg = search_from(o);
  rep.parameters = {{"l", o.l}, {"t", o.t}, {"k_max", o.k_max}};
  OptimumPoint best;
  if (o.budget > 0.0) {
    rep.parameters["budget"] = o.budget;
    best = min_error_for_budget(o.budget, plan, cfg);
  } else {
    rep.parameters["target"] = o.target;
    best = min_cost_for_error(o.target, plan, cfg);
  }
  require(best.found, "no feasible configuration in the search range");
  add_plan_results(rep.results, plan);
  add_cost_results(rep.results, best.cost);
  rep.results["epsilon_total"] = best.bounds.epsilon_total;
  rep.results["epsilon_segment"] = best.bounds.epsilon_segment;
  if (o.target > 0.0) {
    const int k = original_cost_for_error(o.target, plan);
    rep.results["original_k"] = k;
    rep.results["saving_pct"] = 100.0 * (k - best.cost.g_indicator) / k;
  }
  return rep;
}

inline RunReport table(const Options& o) {
  RunReport rep;
  rep.command = "table";
  set_modes(rep, o);
  require(!o.errors.empty(), "--errors needs at least one value");
  const SegmentPlan plan = plan_from(o);
  const SearchConfig cfg = search_from(o);
  rep.parameters = {{"l", o.l}, {"t", o.t}, {"k_max", o.k_max}};
  add_plan_results(rep.results, plan);
  rep.columns = {"error", "framework_cost", "original_cost", "saving_pct"};
  for (double e : o.errors) {
    const OptimumPoint best = min_cost_for_error(e, plan, cfg);
    require(best.found, "no feasible configuration for error " + format_double(e));
    const int k = original_cost_for_error(e, plan);
    rep.rows.push_back({e, best.cost.g_indicator, static_cast<double>(k),
                        100.0 * (k - best.cost.g_indicator) / k});
  }
  return rep;
}

inline RunReport curve(const Options& o) {
  RunReport rep;
  rep.command = "curve";
  set_modes(rep, o);
  std::vector<double> grid = o.g_grid;
  if (grid.empty()) {
    require(o.g_step > 0.0 && o.g_max >= o.g_min && o.g_min > 0.0, "invalid budget grid");
    const int steps = static_cast<int>(std::floor((o.g_max - o.g_min) / o.g_step + 1e-9));
    for (int i = 0; i <= steps; ++i) grid.push_back(o.g_min + i * o.g_step);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] > 0.0, "budgets must be positive");
    require(i == 0 || grid[i] > grid[i - 1], "budget grid must be strictly increasing");
  }
  const SegmentPlan plan = plan_from(o);
  const SearchConfig cfg = search_from(o);
  rep.parameters = {{"l", o.l}, {"t", o.t}, {"g_first", grid.front()},
                    {"g_last", grid.back()}, {"points", grid.size()}};
  add_plan_results(rep.results, plan);
  rep.columns = {"g",         "best_k1",    "best_k2",         "best_p",
                 "epsilon_total", "original_k", "original_epsilon"};
  for (const double g : grid) {
    const OptimumPoint best = min_error_for_budget(g, plan, cfg);
    const int k = static_cast<int>(std::floor(g + 1e-12));
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rep.rows.push_back({g, best.found ? best.cost.k1 : nan, best.found ? best.cost.k2 : nan,
                        best.found ? best.cost.p : nan,
                        best.found ? best.bounds.epsilon_total : inf, static_cast<double>(k),
                        k >= 1 ? plan.r * segment_delta(k) : inf});
  }
  return rep;
}

inline StateVector initial_state(long dim, const Options& o) {
  StateVector psi = StateVector::Zero(dim);
  if (!o.random_state) {
    psi(0) = 1.0;
    return psi;
  }
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> g;
  for (long i = 0; i < dim; ++i) psi(i) = Complex(g(rng), g(rng));
  return psi / psi.norm();
}

inline RunReport simulate_bccks(const Options& o, const Logger& log) {
  RunReport rep;
  rep.command = "simulate bccks";
  const auto ham = hamiltonian_from(o);
  SimulationOptions so;
  require(o.mode == "exact" || o.mode == "sampled", "mode must be 'exact' or 'sampled'");
  so.mode = o.mode == "exact" ? SimulationMode::kExactChannel : SimulationMode::kSampled;
  so.shots = o.shots;
  so.seed = o.seed;
  so.error_mode = parse_error_mode(o.error_mode, ErrorMode::kMaxForm);
  rep.provenance.error_mode = to_string(so.error_mode);
  rep.provenance.total_mode = to_string(TotalMode::kTimesR);
  rep.provenance.seed = o.seed;
  rep.parameters = {{"n_qubits", ham.n_qubits}, {"terms", ham.term_count()},
                    {"alpha_sum", ham.alpha_sum()}, {"t", o.t},
                    {"k1", o.k1}, {"k2", o.k2}, {"p", o.p}, {"mode", to_string(so.mode)}};
  if (so.mode == SimulationMode::kSampled) rep.parameters["shots"] = o.shots;
  log.log(LogLevel::kInfo, "simulating " + std::to_string(ham.term_count()) + " terms on " +
                               std::to_string(ham.n_qubits) + " qubits");
  const auto psi0 = initial_state(1L << ham.n_qubits, o);
  const auto res = simulate_rts_evolution(ham, o.t, {o.k1, o.k2, o.p}, psi0, so);
  add_plan_results(rep.results, res.plan);
  rep.results["trace_distance"] = res.verdict.lhs;
  rep.results["epsilon_total"] = res.bounds.epsilon_total;
  rep.results["a1_measured"] = res.verdict.a1;
  rep.results["a2_measured"] = res.verdict.a2;
  rep.results["b_measured"] = res.verdict.b;
  rep.results["a1_bound"] = res.bounds.a1;
  rep.results["b_bound"] = res.bounds.b;
  if (so.mode == SimulationMode::kSampled) {
    rep.results["shots_used"] = res.shots_used;
    rep.results["shots_discarded"] = res.shots_discarded;
    rep.results["standard_error"] = res.standard_error;
  }
  rep.verdicts.push_back({"trace_distance_within_bound", res.verdict.lhs, res.verdict.rhs,
                          res.verdict.holds});
  return rep;
}

inline RunReport simulate_ode(const Options& o) {
  RunReport rep;
  rep.command = "simulate ode";
  rep.provenance.seed = o.seed;
  const int j = o.j > 0 ? o.j : o.m;
  rep.parameters = {{"n", o.n}, {"m", o.m}, {"h", o.h}, {"ah_norm", o.ah_norm},
                    {"k1", o.k1}, {"k2", o.k2}, {"p", o.p}, {"j", j}, {"pad", o.pad}};
  const OdeProblem prob = random_ode_problem(o.n, o.m, o.h, o.ah_norm, o.seed, o.pad);
  const OdeVerdict v = verify_ode_mixing_bound(prob, o.k1, o.k2, o.p, j);
  rep.results = {{"kappa_v", v.bounds.kappa_v}, {"c_j", v.bounds.c_j},
                 {"delta1", v.bounds.delta1},   {"delta_m", v.bounds.delta_m},
                 {"epsilon", v.bounds.epsilon}, {"measured", v.measured},
                 {"mix_vs_plain", v.mix_vs_plain},
                 {"encoding_vs_recursion", v.encoding_vs_recursion}};
  rep.verdicts.push_back({"error_within_bound", v.measured, v.bounds.epsilon, v.holds});
  rep.verdicts.push_back({"mixture_equals_plain_k2", v.mix_vs_plain, 1e-12, v.mix_vs_plain <= 1e-12});
  rep.verdicts.push_back({"encoding_equals_recursion", v.encoding_vs_recursion, 1e-11,
                          v.encoding_vs_recursion <= 1e-11});
  return rep;
}

inline RunReport qsp_check_hs(const Options& o) {
  RunReport rep;
  rep.command = "qsp-check hs";
  rep.parameters = {{"t", o.t}, {"k1", o.k1}, {"k2", o.k2}, {"p", o.p}, {"grid", o.grid}};
  const JacobiAngerSpec spec{o.t, o.k1, o.k2, o.p};
  spec.validate();
  // Outside the margin the bound formulas are still evaluated but flagged.
  const bool in_regime = o.t > 0.0 && o.k1 >= 1 && o.t / (2.0 * o.k1) <= 0.5;
  const double d1 = jacobi_anger_delta(o.t, o.k1);
  const double dm = jacobi_anger_delta(o.t, o.k2);
  const double e1v2 = o.p / (1.0 - o.p) * d1;
  auto target = [&](double x) { return std::polar(1.0, -x * o.t); };
  auto dev = [&](SeriesVariant v) {
    return scan_max_deviation([&](double x) { return eval_jacobi_anger(x, spec, v); }, target,
                              o.grid)
        .max_deviation;
  };
  const double v1 = dev(SeriesVariant::kV1);
  const double v2 = dev(SeriesVariant::kV2);
  const double vm = dev(SeriesVariant::kMix);
  JacobiAngerSpec plain = spec;
  plain.k1 = o.k2 - 1;
  plain.p = 0.0;
  const double ident =
      scan_max_deviation([&](double x) { return eval_jacobi_anger(x, spec, SeriesVariant::kMix); },
                         [&](double x) { return eval_jacobi_anger(x, plain, SeriesVariant::kV2); },
                         o.grid)
          .max_deviation;
  rep.results = {{"in_regime", in_regime}, {"delta1", d1}, {"delta_m", dm},
                 {"eps1_v2", e1v2}, {"dev_v1", v1}, {"dev_v2", v2}, {"dev_mix", vm},
                 {"mix_identity", ident}};
  const std::string tag = in_regime ? "" : "_out_of_regime";
  rep.verdicts.push_back({"v1_within_delta1" + tag, v1, d1, v1 <= d1});
  rep.verdicts.push_back({"v2_within_eps1_plus_delta_m" + tag, v2, e1v2 + dm, v2 <= e1v2 + dm});
  rep.verdicts.push_back({"mix_within_delta_m" + tag, vm, dm, vm <= dm});
  rep.verdicts.push_back({"mix_equals_plain_k2", ident, 1e-13, ident <= 1e-13});
  return rep;
}

inline RunReport qsp_check_usa(const Options& o) {
  RunReport rep;
  rep.command = "qsp-check usa";
  rep.parameters = {{"gamma", o.gamma}, {"delta", o.delta}, {"k1", o.k1},
                    {"k2", o.k2},       {"p", o.p},         {"grid", o.grid}};
  const UsaSpec s = make_usa_spec(o.gamma, o.delta, o.k1, o.k2, o.p);
  const UsaBounds b = usa_bounds(s);
  const UsaDeviations d = usa_deviations(s, o.grid);
  const double v2_bound = 2.0 * b.a2_erf + b.delta_m;
  rep.results = {{"delta1", b.delta1}, {"delta_m", b.delta_m}, {"epsilon", b.epsilon},
                 {"dev_k1", d.k1},     {"dev_k2", d.k2},       {"dev_mix", d.mix},
                 {"mix_identity", d.identity}};
  rep.verdicts.push_back({"k1_within_delta1", d.k1, b.delta1, d.k1 <= b.delta1});
  rep.verdicts.push_back({"k2_within_a2_plus_delta_m", d.k2, v2_bound, d.k2 <= v2_bound});
  rep.verdicts.push_back({"mix_within_delta_m", d.mix, b.delta_m, d.mix <= b.delta_m});
  rep.verdicts.push_back({"mix_equals_plain_k2", d.identity, 1e-13, d.identity <= 1e-13});
  return rep;
}

inline RunReport asymptotics(const Options& o) {
  RunReport rep;
  rep.command = "asymptotics";
  rep.parameters = {{"tau", o.tau}};
  require(o.tau > 1.0, "tau must exceed 1");
  const double a = std::log(o.tau);
  if (o.eps > 0.0) {
    rep.parameters["eps"] = o.eps;
    const auto pt = asymptotic_ratio(o.tau, o.eps);
    rep.results = {{"a", pt.a_const}, {"l", pt.l_var}, {"k_orig", pt.k_orig}, {"k_mix", pt.k_mix},
                   {"ratio", pt.ratio}};
    return rep;
  }
  require(o.points >= 2 && o.l_max > o.l_min && o.l_min > 0.0, "invalid L sweep");
  rep.parameters["l_min"] = o.l_min;
  rep.parameters["l_max"] = o.l_max;
  rep.parameters["points"] = o.points;
  rep.columns = {"a", "l", "k_orig", "k_mix", "ratio"};
  const double step = std::log(o.l_max / o.l_min) / (o.points - 1);
  for (int i = 0; i < o.points; ++i) {
    const double l = i == o.points - 1 ? o.l_max : o.l_min * std::exp(i * step);
    const auto pt = asymptotic_ratio_logs(a, l);
    rep.rows.push_back({pt.a_const, pt.l_var, pt.k_orig, pt.k_mix, pt.ratio});
  }
  rep.results["final_ratio"] = rep.rows.back()[4];
  return rep;
}

}  // namespace detail

// Entry point shared by the rts executable and the tests. Exit codes: 0 ok,
// 1 a reported verdict fails, 2 usage or domain error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const Logger log(err, log_level_from_env());
  Options o;
  CLI::App app{"Random-truncation-stitched series: bounds, optimizer and checks", "rts"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");  // --h is a step size

  auto fmt = [&](CLI::App* s) {
    s->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };
  auto mix = [&](CLI::App* s, bool required) {
    auto* a = s->add_option("--k1", o.k1, "Lower truncation order");
    auto* b = s->add_option("--k2", o.k2, "Upper truncation order");
    s->add_option("--p", o.p, "Probability of the low-order branch");
    if (required) {
      a->required();
      b->required();
    }
  };
  auto plan = [&](CLI::App* s) {
    s->add_option("--l", o.l, "Number of Pauli terms (unit coefficients)");
    s->add_option("--t", o.t, "Evolution time");
    s->add_option("--r", o.r, "Segment count override");
    s->add_option("--alpha-sum", o.alpha_sum, "Coefficient sum (defaults to L)");
    s->add_option("--error-mode", o.error_mode, "sum or max");
    s->add_option("--total-mode", o.total_mode, "times_r or per_segment");
  };

  auto* bounds = app.add_subcommand("bounds", "Closed-form error bounds");
  bounds->require_subcommand(1);
  auto* b_bccks = bounds->add_subcommand("bccks", "Segmented Taylor-series simulation");
  mix(b_bccks, true);
  plan(b_bccks);
  fmt(b_bccks);
  auto* b_hs = bounds->add_subcommand("qsp-hs", "Jacobi-Anger signal processing");
  mix(b_hs, true);
  b_hs->add_option("--t", o.t, "Evolution time");
  fmt(b_hs);
  auto* b_usa = bounds->add_subcommand("usa", "Erf-based uniform spectral amplification");
  mix(b_usa, true);
  b_usa->add_option("--gamma", o.gamma, "Spectral window Gamma");
  b_usa->add_option("--delta", o.delta, "Target accuracy delta");
  fmt(b_usa);
  auto* b_ode = bounds->add_subcommand("ode", "Linear ODE history-state solver");
  mix(b_ode, true);
  b_ode->add_option("--m", o.m, "Time steps");
  b_ode->add_option("--h", o.h, "Step size");
  b_ode->add_option("--j", o.j, "Step at which the bound applies (default m)");
  b_ode->add_option("--x-norm", o.x_norm, "Norm of the initial state");
  b_ode->add_option("--b-norm", o.b_norm, "Norm of the inhomogeneity");
  b_ode->add_option("--kappa", o.kappa, "Eigenvector condition number of A");
  fmt(b_ode);

  auto* opt = app.add_subcommand("optimize", "Best mixture for a budget or error target");
  opt->add_option("--budget", o.budget, "Cost indicator budget G");
  opt->add_option("--target", o.target, "Target total error");
  opt->add_option("--k-max", o.k_max, "Largest truncation order searched");
  plan(opt);
  fmt(opt);

  auto* tab = app.add_subcommand("table", "Framework vs original cost per error target");
  tab->add_option("--errors", o.errors, "Comma-separated error targets")
      ->delimiter(',')
      ->required();
  tab->add_option("--k-max", o.k_max, "Largest truncation order searched");
  plan(tab);
  fmt(tab);

  auto* cur = app.add_subcommand("curve", "Minimum error over a budget grid");
  cur->add_option("--g-min", o.g_min, "First budget");
  cur->add_option("--g-max", o.g_max, "Last budget");
  cur->add_option("--g-step", o.g_step, "Budget step");
  cur->add_option("--g-grid", o.g_grid, "Explicit comma-separated budgets")->delimiter(',');
  cur->add_option("--k-max", o.k_max, "Largest truncation order searched");
  plan(cur);
  fmt(cur);

  auto* sim = app.add_subcommand("simulate", "Dense small-system simulations");
  sim->require_subcommand(1);
  auto* s_bccks = sim->add_subcommand("bccks", "Mixed segmented evolution");
  mix(s_bccks, true);
  s_bccks->add_option("--model", o.model, "Hamiltonian preset (ising)");
  s_bccks->add_option("--n", o.n, "Spins");
  s_bccks->add_option("--coupling", o.coupling, "XX coupling");
  s_bccks->add_option("--field", o.field, "Z field");
  s_bccks->add_option("--hamiltonian-file", o.hamiltonian_file, "Pauli-sum file");
  s_bccks->add_option("--t", o.t, "Evolution time")->required();
  s_bccks->add_option("--mode", o.mode, "exact or sampled");
  s_bccks->add_option("--shots", o.shots, "Shots in sampled mode");
  s_bccks->add_option("--seed", o.seed, "Seed");
  s_bccks->add_flag("--random-state", o.random_state, "Random initial state from the seed");
  s_bccks->add_option("--error-mode", o.error_mode, "sum or max (default max)");
  fmt(s_bccks);
  auto* s_ode = sim->add_subcommand("ode", "Random linear ODE, mixed vs exact");
  mix(s_ode, true);
  s_ode->add_option("--n", o.n, "System dimension");
  s_ode->add_option("--m", o.m, "Time steps");
  s_ode->add_option("--h", o.h, "Step size");
  s_ode->add_option("--ah-norm", o.ah_norm, "Spectral norm of A h");
  s_ode->add_option("--j", o.j, "Step checked (default m)");
  s_ode->add_option("--pad", o.pad, "Padding blocks");
  s_ode->add_option("--seed", o.seed, "Seed");
  fmt(s_ode);

  auto* qc = app.add_subcommand("qsp-check", "Grid scans of polynomial bounds");
  qc->require_subcommand(1);
  auto* q_hs = qc->add_subcommand("hs", "Jacobi-Anger series against exp(-i lambda t)");
  mix(q_hs, true);
  q_hs->add_option("--t", o.t, "Evolution time")->required();
  q_hs->add_option("--grid", o.grid, "Grid points");
  fmt(q_hs);
  auto* q_usa = qc->add_subcommand("usa", "Erf polynomials on the linear region");
  mix(q_usa, true);
  q_usa->add_option("--gamma", o.gamma, "Spectral window Gamma");
  q_usa->add_option("--delta", o.delta, "Target accuracy delta");
  q_usa->add_option("--grid", o.grid, "Grid points");
  fmt(q_usa);

  auto* asy = app.add_subcommand("asymptotics", "Leading-order truncation ratio");
  asy->add_option("--tau", o.tau, "Evolution length tau");
  asy->add_option("--eps", o.eps, "Single error target");
  asy->add_option("--l-min", o.l_min, "Smallest log(1/eps) in the sweep");
  asy->add_option("--l-max", o.l_max, "Largest log(1/eps) in the sweep");
  asy->add_option("--points", o.points, "Sweep points");
  fmt(asy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    if (rc == 0) return 0;
    err << app.help();
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  bool tabular_default = false;
  try {
    if (b_bccks->parsed()) rep = detail::bounds_bccks(o, log);
    else if (b_hs->parsed()) rep = detail::bounds_qsp_hs(o);
    else if (b_usa->parsed()) rep = detail::bounds_usa(o);
    else if (b_ode->parsed()) rep = detail::bounds_ode(o);
    else if (opt->parsed()) rep = detail::optimize(o);
    else if (tab->parsed()) { rep = detail::table(o); tabular_default = true; }
    else if (cur->parsed()) { rep = detail::curve(o); tabular_default = true; }
    else if (s_bccks->parsed()) rep = detail::simulate_bccks(o, log);
    else if (s_ode->parsed()) rep = detail::simulate_ode(o);
    else if (q_hs->parsed()) rep = detail::qsp_check_hs(o);
    else if (q_usa->parsed()) rep = detail::qsp_check_usa(o);
    else if (asy->parsed()) { rep = detail::asymptotics(o); tabular_default = o.eps <= 0.0; }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0).count();
  log.log(LogLevel::kDebug, rep.command + " took " + format_double(ms) + " ms");

  const std::string format = o.format.empty() ? (tabular_default ? "csv" : "json") : o.format;
  if (format == "csv") {
    write_csv(rep, out);
  } else {
    out << to_json(rep).dump(2) << '\n';
  }
  for (const auto& v : rep.verdicts) {
    if (!v.holds) log.log(LogLevel::kInfo, "verdict " + v.name + " fails");
  }
  return rep.all_hold() ? 0 : 1;
}

}  // namespace rts::cli
