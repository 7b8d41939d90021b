// SPDX-License-Identifier: Apache-2.0
//
// dcsit - degrees of freedom of broadcast channels with delayed channel feedback
// Copyright (C) 2026 The dcsit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcsit/dof.hpp"
#include "dcsit/ratesim.hpp"
#include "dcsit/region.hpp"
#include "dcsit/schemes.hpp"
#include "dcsit/trace_io.hpp"

namespace dcsit::cli {

namespace {

using Json = io::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int m = 0;
  int k = 0;
  int j = 0;
  std::uint64_t seed = kDefaultSeed;
  std::size_t trials = 0;
  std::string snr = "40:60:5";
  std::string format = "json";
  std::string out;
  unsigned threads = 1;
  std::string scheme;
  std::string point;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') {
    return kDefaultSeed;
  }
  const std::string text(env);
  if (text.find_first_not_of("0123456789") != std::string::npos || text.size() > 20) {
    throw UsageError(std::string(kSeedEnv) + " must be a nonnegative integer");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw UsageError(std::string(kSeedEnv) + " is out of range");
  }
}

void require_range(const char* name, int value, int lo, int hi) {
  if (value < lo || value > hi) {
    throw UsageError(std::string("--") + name + " must lie in [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw UsageError("--snr expects lo:hi:step in dB");
    }
  }
  if (parts.size() != 3) {
    throw UsageError("--snr expects lo:hi:step in dB");
  }
  if (parts[0] < 0.0 || parts[1] > 80.0) {
    throw UsageError("--snr grid must lie within 0..80 dB");
  }
  try {
    return ratesim::snr_grid(parts[0], parts[1], parts[2]);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--snr: ") + e.what());
  }
}

std::vector<Rational> parse_point(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_rational(item));
    } catch (const std::exception&) {
      throw UsageError("--point coordinate '" + item + "' is not a rational number");
    }
  }
  if (out.empty()) {
    throw UsageError("--point needs at least one coordinate");
  }
  return out;
}

void require_format(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv") {
    throw UsageError("--format must be csv or json");
  }
}

Json metadata(const RunConfig& cfg) {
  return Json{{"schema", io::kSchemaVersion}, {"command", cfg.command}, {"seed", cfg.seed}};
}

std::string csv_preamble(const RunConfig& cfg) {
  return "# schema=" + std::string(io::kSchemaVersion) + " command=" + cfg.command +
         " seed=" + std::to_string(cfg.seed) + "\n";
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- dof-table

std::string cmd_dof_table(const RunConfig& cfg) {
  require_range("k", cfg.k, 1, kMaxReceivers);
  if (cfg.m != 0) {
    require_range("m", cfg.m, 1, 64);
  }
  if (cfg.j != 0) {
    require_range("j", cfg.j, 1, cfg.k);
  }
  const int k = cfg.k;
  std::vector<int> ms;
  std::vector<int> js;
  for (int m = 1; m <= k; ++m) {
    ms.push_back(m);
  }
  if (cfg.m != 0) {
    ms = {cfg.m};
  }
  for (int j = 1; j <= k; ++j) {
    js.push_back(j);
  }
  if (cfg.j != 0) {
    js = {cfg.j};
  }

  Json rows = Json::array();
  std::string csv = csv_preamble(cfg) + "M,K,j,lower,upper,tight,lower_source,note\n";
  for (int m : ms) {
    for (int j : js) {
      const dof::DofQuery q(m, k, j);
      const bool full = m >= k - j + 1;
      const Rational lower = full ? dof::dof_lower(q) : dof::nonsquare_recursion(q);
      const Rational upper = dof::dof_upper(q);
      const bool tight = lower == upper;
      std::string note;
      if (m == 2 && k == 3 && j == 1) {
        note = "opt23 scheme achieves 3/2";
      }
      const std::string source = full ? "closed-form" : "recursion";
      rows.push_back(Json{{"M", m},
                          {"K", k},
                          {"j", j},
                          {"lower", to_string(lower)},
                          {"upper", to_string(upper)},
                          {"tight", tight},
                          {"lower_source", source},
                          {"note", note}});
      csv += std::to_string(m) + "," + std::to_string(k) + "," + std::to_string(j) + "," +
             to_string(lower) + "," + to_string(upper) + "," + (tight ? "true" : "false") + "," +
             source + "," + note + "\n";
    }
  }
  if (cfg.format == "csv") {
    return csv;
  }
  Json out = metadata(cfg);
  out["K"] = k;
  out["rows"] = std::move(rows);
  return dump(out);
}

// --------------------------------------------------------------- schemes

schemes::SchemeSpec scheme_spec(const RunConfig& cfg) {
  if (cfg.scheme.empty()) {
    throw UsageError("--scheme is required");
  }
  schemes::SchemeSpec spec{cfg.scheme, cfg.m, cfg.k, cfg.j == 0 ? 1 : cfg.j};
  const auto& n = spec.name;
  if (n == "mat23" || n == "opt23") {
    spec.m = 2;
    spec.k = 3;
    spec.j = 1;
  } else if (n == "alt22") {
    spec.m = 2;
    spec.k = 2;
    spec.j = 1;
  } else if (n == "square") {
    spec.m = spec.k;
    spec.j = 1;
  } else if (n == "tdma") {
    spec.m = 1;
    spec.j = 1;
  }
  if ((cfg.m != 0 && cfg.m != spec.m) || (cfg.k != 0 && cfg.k != spec.k)) {
    throw UsageError("--m/--k conflict with scheme '" + n + "'");
  }
  try {
    schemes::validate(spec);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return spec;
}

std::string cmd_scheme_run(const RunConfig& cfg) {
  const auto spec = scheme_spec(cfg);
  RngStream rng(cfg.seed, 0);
  const auto trace = schemes::run_scheme(spec, rng);
  const bool decoded = schemes::all_decoded(trace);
  if (cfg.format == "csv") {
    return csv_preamble(cfg) + io::summary_csv_header() + "\n" +
           io::summary_csv_row(trace, decoded ? 1.0 : 0.0) + "\n";
  }
  Json out = metadata(cfg);
  out["decoded"] = decoded;
  out["expected_dof"] = to_string(schemes::expected_dof(spec));
  out["trace"] = io::trace_to_json(trace);
  return dump(out);
}

struct VerifyOutcome {
  std::string text;
  bool pass = false;
};

VerifyOutcome cmd_scheme_verify(const RunConfig& cfg) {
  const auto spec = scheme_spec(cfg);
  const std::size_t trials = cfg.trials == 0 ? 1000 : cfg.trials;
  struct TrialResult {
    bool decoded = false;
    double condition = 0.0;
    Rational dof;
    std::size_t symbols = 0;
    std::size_t slots = 0;
  };
  std::vector<TrialResult> results(trials);
  auto run_trial = [&](std::size_t t) {
    RngStream rng(cfg.seed, t);
    const auto trace = schemes::run_scheme(spec, rng);
    results[t] = {schemes::all_decoded(trace), schemes::worst_condition_number(trace),
                  trace.empirical_dof(), trace.total_symbols(), trace.total_slots()};
  };
  const unsigned workers =
      std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) {
      run_trial(t);
    }
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < trials; t += workers) {
          run_trial(t);
        }
      });
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  std::size_t decoded = 0;
  bool dof_stable = true;
  double cond_min = std::numeric_limits<double>::infinity();
  double cond_max = 0.0;
  for (const auto& r : results) {
    decoded += r.decoded ? 1 : 0;
    dof_stable = dof_stable && r.dof == results.front().dof;
    cond_min = std::min(cond_min, r.condition);
    cond_max = std::max(cond_max, r.condition);
  }
  const Rational expected = schemes::expected_dof(spec);
  const Rational empirical = results.front().dof;
  const double rate = static_cast<double>(decoded) / static_cast<double>(trials);
  const bool dof_match = dof_stable && empirical == expected;
  // 99.9% expressed exactly: decoded / trials >= 999 / 1000.
  const bool pass = dof_match && decoded * 1000 >= trials * 999;

  if (cfg.format == "csv") {
    std::string text = csv_preamble(cfg) + io::summary_csv_header() + "\n";
    text += spec.name + "," + std::to_string(spec.m) + "," + std::to_string(spec.k) + "," +
            std::to_string(results.front().symbols) + "," + std::to_string(results.front().slots) +
            "," + empirical.get_num().get_str() + "," + empirical.get_den().get_str() + "," +
            format_double(rate) + "\n";
    return {text, pass};
  }
  Json out = metadata(cfg);
  out["scheme"] = spec.name;
  out["M"] = spec.m;
  out["K"] = spec.k;
  out["j"] = spec.j;
  out["trials"] = trials;
  out["decoded_trials"] = decoded;
  out["success_rate"] = rate;
  out["symbols"] = results.front().symbols;
  out["slots"] = results.front().slots;
  out["empirical_dof"] = to_string(empirical);
  out["expected_dof"] = to_string(expected);
  out["dof_match"] = dof_match;
  out["condition_number"] = Json{{"min", cond_min}, {"max", cond_max}};
  out["pass"] = pass;
  return {dump(out), pass};
}

// --------------------------------------------------------------- rate-sim

struct RateOutcome {
  std::string text;
  std::string side;  ///< slope report for stderr in CSV mode
};

RateOutcome cmd_rate_sim(const RunConfig& cfg) {
  const auto grid = parse_grid(cfg.snr);
  auto spec = scheme_spec(cfg);
  const std::size_t trials = cfg.trials == 0 ? 200 : cfg.trials;
  ratesim::SimOptions opts{trials, cfg.seed, std::max(1U, cfg.threads)};
  const auto points = ratesim::simulate_rates(
      [spec](RngStream& rng) { return schemes::run_scheme(spec, rng); }, grid, opts);

  Json slope = nullptr;
  if (points.size() >= 3) {
    const auto fit = ratesim::fit_dof_slope(points, {grid.front(), grid.back()});
    const Rational target = schemes::expected_dof(spec);
    slope = Json{{"scheme", spec.name},
                 {"slope", fit.slope},
                 {"ci_low", fit.ci_low},
                 {"ci_high", fit.ci_high},
                 {"window", Json::array({fit.low_db, fit.high_db})},
                 {"intercept", fit.intercept},
                 {"residual", fit.residual},
                 {"expected_dof", to_string(target)},
                 {"relative_error", std::abs(fit.slope / to_double(target) - 1.0)}};
  }

  if (cfg.format == "csv") {
    std::string text = csv_preamble(cfg) + "snr_db,scheme,sum_rate,stderr,trials,seed\n";
    for (const auto& p : points) {
      text += format_double(p.snr_db) + "," + spec.name + "," + format_double(p.sum_rate) + "," +
              format_double(p.std_error) + "," + std::to_string(p.trials) + "," +
              std::to_string(cfg.seed) + "\n";
    }
    Json side = metadata(cfg);
    side["slope"] = slope;
    return {text, dump(side)};
  }
  Json out = metadata(cfg);
  out["scheme"] = spec.name;
  out["M"] = spec.m;
  out["K"] = spec.k;
  out["trials"] = trials;
  Json pts = Json::array();
  for (const auto& p : points) {
    pts.push_back(Json{{"snr_db", p.snr_db},
                       {"sum_rate", p.sum_rate},
                       {"per_receiver", p.per_receiver},
                       {"stderr", p.std_error},
                       {"trials", p.trials}});
  }
  out["points"] = std::move(pts);
  out["slope"] = slope;
  return {dump(out), {}};
}

// ------------------------------------------------------------ region-check

Json point_json(const region::RegionPoint& p) {
  Json a = Json::array();
  for (const auto& x : p.coords()) {
    a.push_back(to_string(x));
  }
  return a;
}

std::string cmd_region_check(const RunConfig& cfg) {
  if (cfg.point.empty()) {
    throw UsageError("--point is required");
  }
  const auto coords = parse_point(cfg.point);
  const int k = cfg.k == 0 ? static_cast<int>(coords.size()) : cfg.k;
  require_range("k", k, 1, 8);
  if (static_cast<int>(coords.size()) != k) {
    throw UsageError("--point has " + std::to_string(coords.size()) + " coordinates but K=" +
                     std::to_string(k));
  }
  if (cfg.m != 0) {
    try {
      region::require_square_system(cfg.m, k);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  std::optional<region::RegionPoint> point;
  try {
    point.emplace(coords);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool inside = region::in_region(*point, region::Mode::exhaustive);
  const auto tight = region::tight_permutations(*point);

  Json out = metadata(cfg);
  out["K"] = k;
  out["point"] = point_json(*point);
  out["in_region"] = inside;
  out["sorted_lhs"] = [&] {
    std::vector<int> pi(static_cast<std::size_t>(k));
    std::iota(pi.begin(), pi.end(), 0);
    std::stable_sort(pi.begin(), pi.end(), [&](int a, int b) { return (*point)[a] > (*point)[b]; });
    return to_string(region::permutation_lhs(*point, pi));
  }();
  Json tight_json = Json::array();
  for (const auto& pi : tight) {
    Json one = Json::array();
    for (int r : pi) {
      one.push_back(r + 1);
    }
    tight_json.push_back(std::move(one));
  }
  out["tight_permutations"] = std::move(tight_json);
  out["all_tight"] = tight.size() == [&] {
    std::size_t f = 1;
    for (int i = 2; i <= k; ++i) {
      f *= static_cast<std::size_t>(i);
    }
    return f;
  }();
  if (k <= 6) {
    const auto dec = region::decompose_time_sharing(*point);
    Json terms = Json::array();
    for (std::size_t i = 0; i < dec.corners.size(); ++i) {
      terms.push_back(Json{{"corner", point_json(dec.corners[i])},
                           {"weight", to_string(dec.weights[i])}});
    }
    out["decomposition"] =
        Json{{"feasible", dec.feasible}, {"exact", dec.exact}, {"terms", std::move(terms)}};
  } else {
    out["decomposition"] = nullptr;
  }
  return dump(out);
}

// ---------------------------------------------------------- identity-check

VerifyOutcome cmd_identity_check(const RunConfig& cfg) {
  const int kmax = cfg.k == 0 ? 30 : cfg.k;
  require_range("k", kmax, 1, kMaxReceivers);
  if (cfg.j != 0) {
    require_range("j", cfg.j, 1, kmax);
    const auto v = dof::identity_check(kmax, cfg.j);
    Json out = metadata(cfg);
    out["K"] = kmax;
    out["j"] = cfg.j;
    out["lhs"] = to_string(v.lhs);
    out["rhs"] = to_string(v.rhs);
    out["holds"] = v.holds();
    return {dump(out), v.holds()};
  }
  constexpr int kHockeyMax = 40;
  std::size_t checked = 0;
  std::size_t failed = 0;
  Json failures = Json::array();
  for (int k = 1; k <= kmax; ++k) {
    for (int j = 1; j <= k; ++j) {
      const auto v = dof::identity_check(k, j);
      ++checked;
      if (!v.holds()) {
        ++failed;
        failures.push_back(Json{{"identity", "harmonic"}, {"K", k}, {"j", j}});
      }
    }
  }
  std::size_t hockey = 0;
  for (int q = 0; q <= kHockeyMax; ++q) {
    for (int p = 0; p <= q; ++p) {
      const auto v = dof::hockey_stick(p, q);
      ++hockey;
      if (!v.holds()) {
        ++failed;
        failures.push_back(Json{{"identity", "hockey-stick"}, {"p", p}, {"q", q}});
      }
    }
  }
  Json out = metadata(cfg);
  out["harmonic_checked"] = checked;
  out["hockey_stick_checked"] = hockey;
  out["K_max"] = kmax;
  out["q_max"] = kHockeyMax;
  out["failures"] = std::move(failures);
  out["pass"] = failed == 0;
  return {dump(out), failed == 0};
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "master seed (default from DCSIT_SEED)");
  sub->add_option("--format", cfg.format, "csv or json")->default_str("json");
  sub->add_option("--out", cfg.out, "write output to this file");
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) {
    throw UsageError("cannot open --out file '" + cfg.out + "'");
  }
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg.seed = default_seed();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  CLI::App app{"dcsit: degrees of freedom of broadcast channels with delayed channel feedback",
               "dcsit"};
  app.require_subcommand(1);

  auto* table = app.add_subcommand("dof-table", "lower/upper DoF bounds as exact fractions");
  table->add_option("--k", cfg.k, "receivers")->required();
  table->add_option("--m", cfg.m, "transmit antennas (default: 1..K)");
  table->add_option("--j", cfg.j, "message order (default: 1..K)");
  add_common(table, cfg);

  auto* run_cmd = app.add_subcommand("scheme-run", "execute one scheme and dump its trace");
  auto* verify = app.add_subcommand("scheme-verify", "seeded decodability and accounting check");
  auto* rates = app.add_subcommand("rate-sim", "finite-SNR sum rates and DoF slope");
  for (auto* sub : {run_cmd, verify, rates}) {
    sub->add_option("--scheme", cfg.scheme,
                    "square | order-j | nonsquare | mat23 | alt22 | opt23 | tdma")
        ->required();
    sub->add_option("--m", cfg.m, "transmit antennas");
    sub->add_option("--k", cfg.k, "receivers");
    sub->add_option("--j", cfg.j, "message order");
    add_common(sub, cfg);
  }
  for (auto* sub : {verify, rates}) {
    sub->add_option("--trials", cfg.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1U, 256U));
  }
  rates->add_option("--snr", cfg.snr, "lo:hi:step in dB")->default_str("40:60:5");

  auto* region_cmd = app.add_subcommand("region-check", "membership in the order-1 DoF region");
  region_cmd->add_option("--point", cfg.point, "comma-separated coordinates, e.g. 6/11,6/11,6/11")
      ->required();
  region_cmd->add_option("--k", cfg.k, "receivers (default: coordinate count)");
  region_cmd->add_option("--m", cfg.m, "transmit antennas (must equal K)");
  add_common(region_cmd, cfg);

  auto* ident = app.add_subcommand("identity-check", "exact combinatorial identity sweep");
  ident->add_option("--k", cfg.k, "largest K (default 30)");
  ident->add_option("--j", cfg.j, "check a single (K, j) pair");
  add_common(ident, cfg);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    require_format(cfg);
    if (table->parsed()) {
      cfg.command = "dof-table";
      emit(cfg, cmd_dof_table(cfg), out);
      return kSuccess;
    }
    if (run_cmd->parsed()) {
      cfg.command = "scheme-run";
      emit(cfg, cmd_scheme_run(cfg), out);
      return kSuccess;
    }
    if (verify->parsed()) {
      cfg.command = "scheme-verify";
      const auto res = cmd_scheme_verify(cfg);
      emit(cfg, res.text, out);
      return res.pass ? kSuccess : kVerificationFailure;
    }
    if (rates->parsed()) {
      cfg.command = "rate-sim";
      const auto res = cmd_rate_sim(cfg);
      emit(cfg, res.text, out);
      err << res.side;
      return kSuccess;
    }
    if (region_cmd->parsed()) {
      cfg.command = "region-check";
      emit(cfg, cmd_region_check(cfg), out);
      return kSuccess;
    }
    cfg.command = "identity-check";
    const auto res = cmd_identity_check(cfg);
    emit(cfg, res.text, out);
    return res.pass ? kSuccess : kVerificationFailure;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const OutOfRegimeError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace dcsit::cli
