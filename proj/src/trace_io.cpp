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

#include "dcsit/trace_io.hpp"

#include <sstream>

namespace dcsit::io {

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const ComplexMatrix& a) {
  Json rows = Json::array();
  for (arma::uword r = 0; r < a.n_rows; ++r) {
    Json row = Json::array();
    for (arma::uword c = 0; c < a.n_cols; ++c) {
      row.push_back(to_json(a(r, c)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const ledger::LinearForm& form) {
  Json coeffs = Json::array();
  for (const auto& [id, c] : form.coefficients()) {
    coeffs.push_back(Json::array({id, c.real(), c.imag()}));
  }
  Json noise = Json::array();
  for (const auto& [id, w] : form.noise_weights()) {
    noise.push_back(Json::array({id, w.real(), w.imag()}));
  }
  return Json{{"coefficients", std::move(coeffs)}, {"noise", std::move(noise)}};
}

namespace {

Json phases_json(const schemes::SchemeTrace& trace) {
  Json out = Json::array();
  for (const auto& p : trace.phases) {
    out.push_back(Json{{"name", p.name},
                       {"order", p.order},
                       {"runs", p.runs},
                       {"inputs_consumed", p.inputs_consumed},
                       {"slots", p.slots},
                       {"outputs_generated", p.outputs_generated}});
  }
  return out;
}

Json header_json(const schemes::SchemeTrace& trace) {
  const Rational dof = trace.empirical_dof();
  return Json{{"schema", kSchemaVersion},
              {"scheme", trace.scheme},
              {"M", trace.m},
              {"K", trace.k},
              {"order", trace.order},
              {"seed", trace.seed},
              {"stream", trace.stream},
              {"replication", trace.replication()},
              {"symbols", trace.total_symbols()},
              {"slots", trace.total_slots()},
              {"symbols_per_receiver", trace.symbols_per_receiver()},
              {"empirical_dof", to_string(dof)}};
}

}  // namespace

Json trace_summary(const schemes::SchemeTrace& trace) {
  Json out = header_json(trace);
  out["phases"] = phases_json(trace);
  return out;
}

Json trace_to_json(const schemes::SchemeTrace& trace) {
  Json out = trace_summary(trace);
  const auto& led = trace.ledger;

  Json symbols = Json::array();
  for (const auto& s : led.symbols().symbols()) {
    symbols.push_back(Json{{"id", s.id},
                           {"owners", ledger::subset_label(s.owners)},
                           {"order", s.order},
                           {"label", s.label}});
  }
  out["symbols"] = std::move(symbols);

  Json slots = Json::array();
  for (const auto& slot : led.slots()) {
    Json plan = Json::array();
    for (const auto& f : slot.plan) {
      plan.push_back(to_json(f));
    }
    slots.push_back(Json{{"index", slot.index},
                         {"tag", slot.tag},
                         {"active_antennas", slot.active_antennas()},
                         {"channel", to_json(slot.channel)},
                         {"plan", std::move(plan)}});
  }
  out["slots"] = std::move(slots);

  Json receivers = Json::array();
  for (const auto& st : led.states()) {
    Json eqs = Json::array();
    for (const auto& eq : st.equations) {
      eqs.push_back(Json{{"slot", eq.slot},
                         {"noise_id", eq.noise_id},
                         {"noise_variance", eq.noise_variance()},
                         {"form", to_json(eq.form)}});
    }
    receivers.push_back(Json{{"receiver", ledger::receiver_label(st.receiver)},
                             {"equations", std::move(eqs)}});
  }
  out["receivers"] = std::move(receivers);

  Json combos = Json::array();
  for (const auto& c : led.combinations()) {
    Json coeffs = Json::array();
    for (const auto& v : c.coefficients) {
      coeffs.push_back(to_json(v));
    }
    combos.push_back(Json{{"purpose", c.purpose},
                          {"rows", c.rows},
                          {"cols", c.cols},
                          {"coefficients", std::move(coeffs)}});
  }
  out["combinations"] = std::move(combos);
  return out;
}

std::string summary_csv_header() { return "scheme,M,K,symbols,slots,dof_num,dof_den,decode_rate"; }

std::string summary_csv_row(const schemes::SchemeTrace& trace, double decode_rate) {
  const Rational dof = trace.empirical_dof();
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << trace.scheme << ',' << trace.m << ',' << trace.k << ','
     << trace.total_symbols() << ',' << trace.total_slots() << ',' << dof.get_num().get_str()
     << ',' << dof.get_den().get_str() << ',' << decode_rate;
  return os.str();
}

}  // namespace dcsit::io
