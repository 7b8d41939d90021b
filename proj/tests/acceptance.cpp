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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "dcsit/dof.hpp"
#include "dcsit/ledger.hpp"
#include "dcsit/ratesim.hpp"
#include "dcsit/region.hpp"
#include "dcsit/schemes.hpp"

using namespace dcsit;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Rational q(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Verdict exact_values() {
  Verdict v;
  const auto check = [&](const char* name, const std::function<Rational()>& f, const Rational& want) {
    const auto t0 = Clock::now();
    const Rational got = f();
    const double ms = seconds_since(t0) * 1e3;
    v.require(got == want, std::string(name) + "=" + got.get_str());
    v.require(ms < 1.0, std::string(name) + " took " + std::to_string(ms) + " ms");
  };
  check("dof_square(2,1)", [] { return dof::dof_square(2, 1); }, q(4, 3));
  check("dof_square(3,1)", [] { return dof::dof_square(3, 1); }, q(18, 11));
  check("dof_square(3,2)", [] { return dof::dof_square(3, 2); }, q(6, 5));
  check("dof_upper(2,3,1)", [] { return dof::dof_upper({2, 3, 1}); }, q(3, 2));
  check("recursion(2,3,1)", [] { return dof::nonsquare_recursion({2, 3, 1}); }, q(24, 17));
  if (v.pass) v.detail = "5 exact values";
  return v;
}

Verdict tightness() {
  Verdict v;
  int checked = 0;
  for (int k = 1; k <= 20; ++k) {
    for (int j = 1; j <= k; ++j) {
      const dof::DofQuery query(k - j + 1, k, j);
      v.require(dof::dof_lower(query) == dof::dof_upper(query),
                "K=" + std::to_string(k) + " j=" + std::to_string(j));
      ++checked;
    }
  }
  if (v.pass) v.detail = std::to_string(checked) + " (M,K,j) triples tight";
  return v;
}

Verdict identities() {
  Verdict v;
  int n = 0;
  for (int k = 1; k <= 30; ++k) {
    for (int j = 1; j <= k; ++j, ++n) {
      v.require(dof::identity_check(k, j).holds(), "identity K=" + std::to_string(k) + " j=" + std::to_string(j));
    }
  }
  for (int qq = 0; qq <= 40; ++qq) {
    for (int p = 0; p <= qq; ++p, ++n) {
      v.require(dof::hockey_stick(p, qq).holds(), "hockey p=" + std::to_string(p) + " q=" + std::to_string(qq));
    }
  }
  if (v.pass) v.detail = std::to_string(n) + " identities";
  return v;
}

Verdict accounting() {
  Verdict v;
  const auto check = [&](const std::string& name, const std::function<schemes::SchemeTrace(RngStream&)>& f,
                         const Rational& want) {
    const auto t0 = Clock::now();
    RngStream rng(1, 0);
    const auto trace = f(rng);
    const double s = seconds_since(t0);
    v.require(trace.empirical_dof() == want, name + " gave " + trace.empirical_dof().get_str());
    v.require(trace.phase_slot_sum() == trace.total_slots(), name + " phase slots");
    v.require(s < 1.0, name + " slow");
  };
  for (int k = 1; k <= 4; ++k) {
    check("square K=" + std::to_string(k), [k](RngStream& r) { return schemes::run_square_scheme(k, r); },
          Rational(k) / dof::harmonic(k));
  }
  check("alt22", [](RngStream& r) { return schemes::run_alt22(r); }, q(4, 3));
  check("mat23", [](RngStream& r) { return schemes::run_mat23_suboptimal(r); }, q(24, 17));
  check("opt23", [](RngStream& r) { return schemes::run_opt23(r); }, q(3, 2));
  if (v.pass) v.detail = "7 schemes at exact DoF";
  return v;
}

Verdict decodability() {
  Verdict v;
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, std::function<schemes::SchemeTrace(RngStream&)>>> runs{
      {"square K=2", [](RngStream& r) { return schemes::run_square_scheme(2, r); }},
      {"square K=3", [](RngStream& r) { return schemes::run_square_scheme(3, r); }},
      {"alt22", [](RngStream& r) { return schemes::run_alt22(r); }},
      {"mat23", [](RngStream& r) { return schemes::run_mat23_suboptimal(r); }},
      {"opt23", [](RngStream& r) { return schemes::run_opt23(r); }},
  };
  std::string counts;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    int ok = 0;
    for (int t = 0; t < 1000; ++t) {
      RngStream rng(500 + s, static_cast<std::uint64_t>(t));
      ok += schemes::all_decoded(runs[s].second(rng)) ? 1 : 0;
    }
    v.require(ok >= 999, runs[s].first + " decoded " + std::to_string(ok) + "/1000");
    counts += runs[s].first + " " + std::to_string(ok) + " ";
  }
  int aligned = 0;
  for (int t = 0; t < 1000; ++t) {
    RngStream rng(600, static_cast<std::uint64_t>(t));
    const auto r = ledger::alignment_ranks(schemes::run_square_scheme(2, rng).ledger, 0);
    aligned += (r.desired == 2 && r.interference == 1) ? 1 : 0;
  }
  v.require(aligned >= 999, "alignment (2,1) in " + std::to_string(aligned) + "/1000");
  const double s = seconds_since(t0);
  v.require(s < 30.0, "took " + std::to_string(s) + " s");
  if (v.pass) v.detail = counts + "alignment " + std::to_string(aligned) + " (" + std::to_string(s) + " s)";
  return v;
}

Verdict slopes() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto grid = ratesim::snr_grid(40, 60, 5);
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  const ratesim::SimOptions opt{200, 20120101, threads};
  std::string report;
  const auto check = [&](const std::string& name, const std::vector<ratesim::RatePoint>& pts, double want) {
    const auto fit = ratesim::fit_dof_slope(pts, {40, 60});
    const double rel = std::abs(fit.slope - want) / want;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.4f (target %.4f, %.2f%%) ", name.c_str(), fit.slope, want, 100 * rel);
    report += buf;
    v.require(rel <= 0.05, buf);
  };
  const auto square = [](int k) {
    return [k](RngStream& r) { return schemes::run_square_scheme(k, r); };
  };
  check("K=2", ratesim::simulate_rates(square(2), grid, opt), 4.0 / 3.0);
  check("K=3", ratesim::simulate_rates(square(3), grid, opt), 18.0 / 11.0);
  check("TDMA K=3", ratesim::tdma_baseline(3, grid, opt), 1.0);
  check("K=1", ratesim::simulate_rates(square(1), grid, opt), 1.0);
  const double s = seconds_since(t0);
  v.require(s < 300.0, "took " + std::to_string(s) + " s");
  if (v.pass) v.detail = report + "(" + std::to_string(s) + " s)";
  return v;
}

Verdict region_checks() {
  Verdict v;
  const auto t0 = Clock::now();
  for (int k = 1; k <= 5; ++k) {
    long fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    v.require(region::tight_permutations(region::symmetric_corner(k)).size() == static_cast<std::size_t>(fact),
              "corner K=" + std::to_string(k));
  }
  const auto random_point = [](RngStream& rng, int k) {
    std::vector<Rational> d(static_cast<std::size_t>(k));
    for (auto& x : d) x = q(static_cast<long>(rng.uniform() * 156), 120);
    return region::RegionPoint(std::move(d));
  };
  int inside = 0;
  for (int k = 1; k <= 6; ++k) {
    RngStream rng(700, static_cast<std::uint64_t>(k));
    for (int t = 0; t < 10000; ++t) {
      const auto p = random_point(rng, k);
      const bool s = region::in_region(p, region::Mode::sorted);
      inside += s ? 1 : 0;
      if (s != region::in_region(p, region::Mode::exhaustive)) {
        v.require(false, "mode mismatch K=" + std::to_string(k));
        break;
      }
    }
  }
  for (int k = 1; k <= 4; ++k) {
    RngStream rng(701, static_cast<std::uint64_t>(k));
    for (int t = 0; t < 1000; ++t) {
      const auto p = random_point(rng, k);
      if (region::decompose_time_sharing(p).feasible != region::in_region(p)) {
        v.require(false, "decomposition mismatch K=" + std::to_string(k));
        break;
      }
    }
  }
  const double s = seconds_since(t0);
  v.require(s < 60.0, "took " + std::to_string(s) + " s");
  if (v.pass) {
    v.detail = "corners K<=5, 60000 mode checks (" + std::to_string(inside) + " inside), 4000 decompositions (" +
               std::to_string(s) + " s)";
  }
  return v;
}

Verdict discrepancy() {
  Verdict v;
  const dof::DofQuery base(2, 3, 1);
  const Rational printed = dof::nonsquare_closed_form(base, dof::RatioMode::printed);
  v.require(printed == q(9, 7), "printed (2,3,1)=" + printed.get_str());
  v.require(printed != dof::nonsquare_recursion(base), "printed equals recursion");
  int n = 0;
  for (int m = 1; m <= 6; ++m) {
    for (int k = 1; k <= 12; ++k) {
      for (int j = 1; j <= k; ++j) {
        if (m >= k - j + 1) continue;
        const dof::DofQuery query(m, k, j);
        ++n;
        v.require(dof::nonsquare_closed_form(query, dof::RatioMode::corrected) == dof::nonsquare_recursion(query),
                  "corrected mismatch at " + std::to_string(m) + "," + std::to_string(k) + "," + std::to_string(j));
      }
    }
  }
  if (v.pass) v.detail = "printed 9/7 vs 24/17; corrected matches on " + std::to_string(n) + " triples";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"exact closed forms", exact_values},   {"tightness sweep", tightness},
      {"identities", identities},             {"scheme accounting", accounting},
      {"decodability", decodability},         {"finite-SNR slope", slopes},
      {"region", region_checks},              {"ratio discrepancy", discrepancy},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failures += v.pass ? 0 : 1;
    std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
