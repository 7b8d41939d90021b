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

#include <string>

#include <json.hpp>

#include "dcsit/schemes.hpp"

namespace dcsit::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "v1";

/// [re, im] pair.
Json to_json(Complex c);
/// Rows of [re, im] pairs.
Json to_json(const ComplexMatrix& a);
/// {"coefficients": [[id, re, im], ...], "noise": [[id, re, im], ...]}
Json to_json(const ledger::LinearForm& form);

/// Full record of one execution: symbols, slots with channels and plans,
/// per-receiver equations, the random-combination log and phase accounting.
Json trace_to_json(const schemes::SchemeTrace& trace);

/// Compact summary without per-slot payloads.
Json trace_summary(const schemes::SchemeTrace& trace);

/// Header of the CSV summary projection.
std::string summary_csv_header();

/// One CSV row: scheme,M,K,symbols,slots,dof_num,dof_den,decode_rate.
std::string summary_csv_row(const schemes::SchemeTrace& trace, double decode_rate);

}  // namespace dcsit::io
