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

#include "dcsit/ratesim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace dcsit::ratesim {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::vector<double> snr_grid(double lo_db, double hi_db, double step_db) {
  if (!std::isfinite(lo_db) || !std::isfinite(hi_db) || !(step_db > 0.0) || hi_db < lo_db) {
    throw std::invalid_argument("SNR grid needs finite lo <= hi and a positive step");
  }
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double v = lo_db + static_cast<double>(i) * step_db;
    if (v > hi_db + 1e-9) {
      break;
    }
    out.push_back(v);
  }
  return out;
}

double receiver_information(const schemes::SchemeTrace& trace, int receiver, double snr_linear) {
  if (!(snr_linear >= 0.0)) {
    throw std::invalid_argument("SNR must be nonnegative");
  }
  const auto& led = trace.ledger;
  const auto& state = led.state(receiver);
  if (state.equations.empty() || snr_linear == 0.0) {
    return 0.0;
  }
  const std::size_t n = led.symbols().size();
  ComplexMatrix g = ledger::coefficient_matrix(state, n);
  std::vector<ledger::LinearForm> noisy;
  noisy.reserve(state.equations.size());
  for (std::size_t i = 0; i < state.equations.size(); ++i) {
    const auto& eq = state.equations[i];
    const auto active = led.slots().at(eq.slot).active_antennas();
    g.row(i) *= std::sqrt(snr_linear / static_cast<double>(std::max<std::size_t>(active, 1)));
    noisy.push_back(eq.noisy_form());
  }
  const ComplexMatrix noise = ledger::noise_covariance(noisy);

  std::vector<arma::uword> interference;
  const ReceiverSet bit = ReceiverSet{1} << receiver;
  for (const auto& s : led.symbols().symbols()) {
    if (!(s.owners & bit)) {
      interference.push_back(s.id);
    }
  }
  const double total = logdet_capacity(g, noise, 1.0);
  if (interference.empty()) {
    return total;
  }
  const ComplexMatrix gi = g.cols(arma::uvec(interference));
  return std::max(0.0, total - logdet_capacity(gi, noise, 1.0));
}

std::vector<double> trace_rates(const schemes::SchemeTrace& trace, double snr_linear) {
  const double slots = static_cast<double>(trace.total_slots());
  std::vector<double> out;
  for (int r = 0; r < trace.k; ++r) {
    out.push_back(receiver_information(trace, r, snr_linear) / slots);
  }
  return out;
}

std::vector<RatePoint> simulate_rates(const TraceBuilder& builder,
                                      const std::vector<double>& snr_grid_db,
                                      const SimOptions& options) {
  if (options.trials < 1) {
    throw std::invalid_argument("need at least one trial");
  }
  if (snr_grid_db.empty()) {
    throw std::invalid_argument("SNR grid is empty");
  }
  const std::size_t trials = options.trials;
  const std::size_t grid = snr_grid_db.size();
  // rates[t][g] = per-receiver rates of trial t at grid point g.
  std::vector<std::vector<std::vector<double>>> rates(trials);

  auto run_trial = [&](std::size_t t) {
    RngStream rng(options.seed, t);
    const schemes::SchemeTrace trace = builder(rng);
    auto& row = rates[t];
    row.reserve(grid);
    for (double db : snr_grid_db) {
      row.push_back(trace_rates(trace, db_to_linear(db)));
    }
  };

  const unsigned workers = std::max(1U, std::min<unsigned>(options.threads,
                                                           static_cast<unsigned>(trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) {
      run_trial(t);
    }
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = w; t < trials; t += workers) {
            run_trial(t);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) {
      th.join();
    }
    for (auto& e : errors) {
      if (e) {
        std::rethrow_exception(e);
      }
    }
  }

  std::vector<RatePoint> out;
  for (std::size_t g = 0; g < grid; ++g) {
    RatePoint p;
    p.snr_db = snr_grid_db[g];
    p.trials = trials;
    const std::size_t k = rates.front()[g].size();
    p.per_receiver.assign(k, 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
      double sum = 0.0;
      for (std::size_t r = 0; r < k; ++r) {
        p.per_receiver[r] += rates[t][g][r];
        sum += rates[t][g][r];
      }
      p.samples.push_back(sum);
    }
    for (auto& v : p.per_receiver) {
      v /= static_cast<double>(trials);
    }
    double mean = 0.0;
    for (double v : p.per_receiver) {
      mean += v;
    }
    p.sum_rate = mean;
    if (trials > 1) {
      double ss = 0.0;
      for (double s : p.samples) {
        ss += (s - mean) * (s - mean);
      }
      p.std_error = std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials));
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
  double sxx = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  LineFit f;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxy / f.sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    f.rss += e * e;
  }
  return f;
}

}  // namespace

SlopeFit fit_dof_slope(const std::vector<RatePoint>& points, std::pair<double, double> window) {
  std::vector<const RatePoint*> in;
  for (const auto& p : points) {
    if (p.snr_db >= window.first - 1e-9 && p.snr_db <= window.second + 1e-9) {
      in.push_back(&p);
    }
  }
  if (in.size() < 3) {
    throw std::invalid_argument("slope fit needs at least 3 points inside the window");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const auto* p : in) {
    x.push_back(std::log2(db_to_linear(p->snr_db)));
    y.push_back(p->sum_rate);
  }
  const LineFit f = least_squares(x, y);
  SlopeFit out;
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.low_db = window.first;
  out.high_db = window.second;
  out.points = in.size();
  out.residual = std::sqrt(f.rss / static_cast<double>(in.size()));

  const std::size_t n = in.front()->samples.size();
  const bool paired = n > 1 && std::all_of(in.begin(), in.end(), [&](const RatePoint* p) {
                        return p->samples.size() == n;
                      });
  double half = 0.0;
  if (paired) {
    std::vector<double> slopes;
    slopes.reserve(n);
    std::vector<double> yt(in.size());
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t i = 0; i < in.size(); ++i) {
        yt[i] = in[i]->samples[t];
      }
      slopes.push_back(least_squares(x, yt).slope);
    }
    double mean = 0.0;
    for (double s : slopes) {
      mean += s;
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double s : slopes) {
      ss += (s - mean) * (s - mean);
    }
    half = 1.96 * std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  } else if (in.size() > 2) {
    half = 1.96 * std::sqrt(f.rss / static_cast<double>(in.size() - 2) / f.sxx);
  }
  out.ci_low = out.slope - half;
  out.ci_high = out.slope + half;
  return out;
}

std::vector<RatePoint> tdma_baseline(int k, const std::vector<double>& snr_grid_db,
                                     const SimOptions& options) {
  if (k < 1) {
    throw std::invalid_argument("tdma baseline needs k >= 1");
  }
  return simulate_rates([k](RngStream& rng) { return schemes::run_tdma(k, rng); }, snr_grid_db,
                        options);
}

}  // namespace dcsit::ratesim
