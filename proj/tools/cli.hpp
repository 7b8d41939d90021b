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

#include <iosfwd>
#include <string>
#include <vector>

namespace dcsit::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kUsageError = 2,
};

/// Environment variable that overrides the default seed.
inline constexpr const char* kSeedEnv = "DCSIT_SEED";
inline constexpr unsigned long long kDefaultSeed = 20120101ULL;

/// Runs the command line `args` (args[0] is the program name). Regular
/// output goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dcsit::cli
