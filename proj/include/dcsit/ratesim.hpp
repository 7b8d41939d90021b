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

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dcsit/numerics.hpp"
#include "dcsit/schemes.hpp"

namespace dcsit::ratesim {

/// Builds one scheme execution from a per-trial stream.
using TraceBuilder = std::function<schemes::SchemeTrace(RngStream&)>;

struct RatePoint {
  double snr_db = 0.0;
  double sum_rate = 0.0;              ///< bits per slot, averaged over trials
  std::vector<double> per_receiver;   ///< bits per slot, averaged over trials
  std::size_t trials = 0;
  double std_error = 0.0;             ///< standard error of sum_rate
  std::vector<double> samples;        ///< per-trial sum rates, trial order
};

struct SlopeFit {
  double slope = 0.0;      ///< bits per slot per doubling of SNR
  double intercept = 0.0;
  double low_db = 0.0;
  double high_db = 0.0;
  double residual = 0.0;   ///< RMS residual of the fit
  double ci_low = 0.0;     ///< 95% interval for the slope
  double ci_high = 0.0;
  std::size_t points = 0;
};

struct SimOptions {
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Mutual information (bits) between receiver r's desired symbols and its
/// stacked equations, every symbol an independent CN(0,1) input and slot n
/// transmitted with total power snr_linear split evenly over its active
/// antennas. Interference symbols are marginalized jointly, which is what
/// cancellation with the stored noisy side information achieves.
double receiver_information(const schemes::SchemeTrace& trace, int receiver, double snr_linear);

/// Per-receiver rates in bits per slot for a single execution.
std::vector<double> trace_rates(const schemes::SchemeTrace& trace, double snr_linear);

/// Trial t draws RngStream(seed, t), builds one trace and evaluates it at
/// every grid point, so all grid points share the same channels. Results are
/// reduced in trial order and do not depend on the thread count.
std::vector<RatePoint> simulate_rates(const TraceBuilder& builder,
                                      const std::vector<double>& snr_grid_db,
                                      const SimOptions& options);

/// Least squares of sum_rate against log2(SNR) over points inside
/// [window.first, window.second] dB. The interval comes from per-trial slopes
/// when every point carries the same number of samples, otherwise from the
/// regression standard error.
SlopeFit fit_dof_slope(const std::vector<RatePoint>& points, std::pair<double, double> window);

/// Round-robin single-antenna service of k receivers.
std::vector<RatePoint> tdma_baseline(int k, const std::vector<double>& snr_grid_db,
                                     const SimOptions& options);

/// Grid lo, lo+step, ..., hi (inclusive within 1e-9).
std::vector<double> snr_grid(double lo_db, double hi_db, double step_db);

double db_to_linear(double db);

}  // namespace dcsit::ratesim
