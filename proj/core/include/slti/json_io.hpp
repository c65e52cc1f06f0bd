// Copyright 2026 The slti Authors
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

#ifndef SLTI_JSON_IO_HPP_
#define SLTI_JSON_IO_HPP_

#include <optional>
#include <string>
#include <vector>

#include "slti/graph.hpp"
#include "slti/realize.hpp"
#include "slti/stability.hpp"
#include "slti/synthesis.hpp"
#include "slti/system.hpp"

namespace slti {

/// Graph object {"nodes": N, "edges": [[i,j], ...]} with 1-based labels.
/// Self-loops may be omitted in the input; they are added on load.  Parse or
/// schema problems throw InputError with the parser's location message.
Graph graph_from_json(const std::string& text);
std::string graph_to_json(const Graph& g);

/// System object, either {"kind":"ss", "A":..., "B":..., "C":..., "D":...,
/// "k":[...], "m":[...], "n":[...optional...]} with row-major matrices, or
/// {"kind":"tf", "entries":[{"row":i,"col":j,"num":[...],"den":[...]}],
/// "k":[...], "m":[...]} with 1-based block labels and coefficients highest
/// degree first.  Transfer input is realized via tf_to_ss; the parsed spec is
/// retained.
struct LoadedSystem {
  StateSpaceSystem sys;
  bool was_transfer = false;
  std::optional<TransferSpec> spec;
};
LoadedSystem system_from_json(const std::string& text);
std::string system_to_json(const StateSpaceSystem& sys);

std::string graph_violations_to_json(const std::vector<GraphViolation>& violations);
std::string structure_check_to_json(const StructureCheck& check);
std::string verification_report_to_json(const VerificationReport& report,
                                        const std::optional<IndexSet>& n);
std::string closed_loop_report_to_json(const ClosedLoopReport& report);
std::string synthesis_report_to_json(const SynthesisReport& report);

/// Whole-file helpers; failures throw InputError naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace slti

#endif  // SLTI_JSON_IO_HPP_
