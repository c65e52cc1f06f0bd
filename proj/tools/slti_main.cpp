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

// Command-line front end.  Exit codes: 0 the check or synthesis succeeded,
// 1 it failed (with a report on stdout), 2 the input was unusable, 3 the
// answer is tolerance-marginal, 4 the two internal-stability criteria
// disagreed (which indicates a defect, not a property of the input).

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "slti/errors.hpp"
#include "slti/graph.hpp"
#include "slti/json_io.hpp"
#include "slti/numerics.hpp"
#include "slti/realize.hpp"
#include "slti/stability.hpp"
#include "slti/synthesis.hpp"
#include "slti/system.hpp"
#include "slti/tolerances.hpp"

namespace {

using slti::Graph;
using slti::IndexSet;
using slti::StateSpaceSystem;
using slti::StructuredPattern;
using slti::StructuredRealization;
using slti::Tolerances;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitIndeterminate = 3;
constexpr int kExitCriteriaDisagree = 4;

struct Options {
  Tolerances tol;
  std::string format = "json";
  std::string out_path;
};

// Library serializers emit deterministic JSON text; parsing it back lets the
// commands nest reports without a second serialization convention.
ordered_json fragment(const std::string& text) { return ordered_json::parse(text); }

void emit(const Options& opt, const ordered_json& doc, const std::string& summary) {
  if (opt.format == "json") {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << summary << "\n";
  }
}

void write_artifact(const Options& opt, const StateSpaceSystem& sys) {
  if (!opt.out_path.empty()) slti::write_text_file(opt.out_path, slti::system_to_json(sys));
}

Graph load_graph(const std::string& path) {
  return slti::graph_from_json(slti::read_text_file(path));
}

slti::LoadedSystem load_system(const std::string& path) {
  return slti::system_from_json(slti::read_text_file(path));
}

// Pattern over the graph's sparsity with the system's block partitions.  The
// graph must be admissible and its node count must match the partitions.
StructuredPattern pattern_for(const StateSpaceSystem& sys, const Graph& g) {
  auto violations = slti::validate_graph(g);
  if (!violations.empty()) {
    throw slti::InvalidGraphError("graph is not admissible", std::move(violations));
  }
  if (sys.output_index.blocks() != g.n_nodes() || sys.input_index.blocks() != g.n_nodes()) {
    throw slti::InputError("system block partitions must have one block per graph node");
  }
  return StructuredPattern{slti::adjacency(g), sys.output_index, sys.input_index};
}

int cmd_check_graph(const Options& opt, const std::string& graph_path) {
  const Graph g = load_graph(graph_path);
  const auto violations = slti::validate_graph(g);
  const std::string report = slti::graph_violations_to_json(violations);
  emit(opt, fragment(report),
       violations.empty() ? "valid"
                          : "invalid: " + std::to_string(violations.size()) + " violation(s)");
  return violations.empty() ? kExitPass : kExitFail;
}

int cmd_check_structure(const Options& opt, const std::string& sys_path,
                        const std::string& graph_path) {
  const StateSpaceSystem sys = load_system(sys_path).sys;
  const StructuredPattern p = pattern_for(sys, load_graph(graph_path));
  const slti::StructureCheck check = slti::is_structured_tf(sys, p, opt.tol);
  emit(opt, fragment(slti::structure_check_to_json(check)),
       check.ok ? "structured"
                : "not structured: " + std::to_string(check.violations.size()) +
                      " violating block(s)");
  return check.ok ? kExitPass : kExitFail;
}

int cmd_realize(const Options& opt, const std::string& sys_path, const std::string& graph_path,
                const std::string& method) {
  const StateSpaceSystem sys = load_system(sys_path).sys;
  const StructuredPattern p = pattern_for(sys, load_graph(graph_path));

  StructuredRealization r;
  if (method == "stable") {
    r = slti::realize_stable(sys, p, opt.tol);
  } else {
    // The chain construction works over the total order; the result is then
    // re-verified against the possibly sparser requested pattern.
    const StructuredRealization chain =
        slti::realize_chain(sys, p.row_index, p.col_index, opt.tol);
    r = slti::verify_structured_realization(chain.sys, p, opt.tol);
  }

  ordered_json doc;
  doc["system"] = fragment(slti::system_to_json(r.sys));
  doc["report"] = fragment(slti::verification_report_to_json(r.report, r.sys.state_index));
  std::string summary;
  if (r.accepted()) {
    summary = "accepted: order " + std::to_string(r.sys.order());
  } else {
    summary = "rejected";
  }
  emit(opt, doc, summary);
  write_artifact(opt, r.sys);
  return r.accepted() ? kExitPass : kExitFail;
}

int cmd_minreal(const Options& opt, const std::string& sys_path) {
  const StateSpaceSystem min = slti::minimal_realization(load_system(sys_path).sys, opt.tol);
  emit(opt, fragment(slti::system_to_json(min)), "order " + std::to_string(min.order()));
  write_artifact(opt, min);
  return kExitPass;
}

// Obtains a structured realization candidate when one is not supplied: the
// stable construction when the plant is stable, the chain construction when
// the pattern is a total order, otherwise nothing.
std::optional<StructuredRealization> derive_realization(const StateSpaceSystem& sys,
                                                        const StructuredPattern& p,
                                                        const Tolerances& tol) {
  if (sys.state_index) {
    return slti::verify_structured_realization(sys, p, tol);
  }
  const StateSpaceSystem reduced = slti::minimal_realization(sys, tol);
  if (reduced.order() == 0 || slti::spectral_abscissa(reduced.A) < -tol.hurwitz_margin) {
    return slti::realize_stable(sys, p, tol);
  }
  const int nodes = p.sparsity.size();
  if (p.sparsity == slti::SparsityPattern::full_lower_triangular(nodes)) {
    return slti::realize_chain(sys, p.row_index, p.col_index, tol);
  }
  return std::nullopt;
}

const char* verdict_name(slti::Verdict v) {
  switch (v) {
    case slti::Verdict::kStabilizable:
      return "yes";
    case slti::Verdict::kNotStabilizable:
      return "no";
    default:
      return "indeterminate";
  }
}

int cmd_stabilizability(const Options& opt, const std::string& sys_path,
                        const std::string& graph_path) {
  const StateSpaceSystem sys = load_system(sys_path).sys;
  const StructuredPattern p = pattern_for(sys, load_graph(graph_path));

  const slti::SynthesisReport diagonal = slti::diagonal_test(sys, p, opt.tol);

  ordered_json doc;
  doc["diagonal"] = fragment(slti::synthesis_report_to_json(diagonal));
  doc["structured"] = nullptr;
  const std::optional<StructuredRealization> r = derive_realization(sys, p, opt.tol);
  if (r && r->report.structured) {
    doc["structured"] =
        fragment(slti::synthesis_report_to_json(slti::structured_stabilizability_test(*r, opt.tol)));
  }
  doc["verdict"] = verdict_name(diagonal.verdict);
  emit(opt, doc, std::string("verdict: ") + verdict_name(diagonal.verdict));

  switch (diagonal.verdict) {
    case slti::Verdict::kStabilizable:
      return kExitPass;
    case slti::Verdict::kNotStabilizable:
      return kExitFail;
    default:
      return kExitIndeterminate;
  }
}

int cmd_synth(const Options& opt, const std::string& sys_path, const std::string& graph_path,
              const std::string& q_path) {
  const StateSpaceSystem sys = load_system(sys_path).sys;
  const StructuredPattern p = pattern_for(sys, load_graph(graph_path));
  const std::optional<StructuredRealization> r = derive_realization(sys, p, opt.tol);
  if (!r) {
    throw slti::PreconditionError(
        "no structured realization is available; supply one with an \"n\" partition");
  }
  if (!r->accepted()) {
    slti::SynthesisReport failed;
    if (r->report.structured) {
      failed = slti::structured_stabilizability_test(*r, opt.tol);
    } else {
      failed.verdict = slti::Verdict::kNotStabilizable;
    }
    failed.controller.reset();
    ordered_json doc;
    doc["report"] = fragment(slti::synthesis_report_to_json(failed));
    doc["realization"] = fragment(slti::verification_report_to_json(r->report, r->sys.state_index));
    emit(opt, doc, "not synthesizable: the structured realization was rejected");
    return kExitFail;
  }

  const slti::K0Result k0 = slti::synthesize_k0(*r, opt.tol);
  StructuredRealization controller = k0.controller;
  slti::ClosedLoopReport loop = k0.loop;
  ordered_json doc;
  if (!q_path.empty()) {
    const StateSpaceSystem q = load_system(q_path).sys;
    const slti::YoulaGenerator gen = slti::build_youla_generator(*r, k0.gains, opt.tol);
    double residual = 0.0;
    controller = slti::close_lft(gen, q, opt.tol, &residual);
    loop = slti::internal_stability_ss(r->sys, controller.sys, opt.tol);
    doc["identity_residual"] = residual;
  }
  doc["controller"] = fragment(slti::system_to_json(controller.sys));
  doc["controller_accepted"] = controller.accepted();
  doc["loop"] = fragment(slti::closed_loop_report_to_json(loop));
  emit(opt, doc,
       "controller order " + std::to_string(controller.sys.order()) +
           "; stabilizes: " + (loop.stabilizes ? "yes" : "no"));
  write_artifact(opt, controller.sys);
  return loop.stabilizes && controller.accepted() ? kExitPass : kExitFail;
}

int cmd_verify_loop(const Options& opt, const std::string& g_path, const std::string& k_path) {
  const StateSpaceSystem g = load_system(g_path).sys;
  const StateSpaceSystem k = load_system(k_path).sys;
  const slti::ClosedLoopReport ss = slti::internal_stability_ss(g, k, opt.tol);
  const bool tf = slti::internal_stability_tf(g, k, opt.tol);
  const bool agree = ss.stable == tf;

  ordered_json doc;
  doc["state_space"] = fragment(slti::closed_loop_report_to_json(ss));
  doc["transfer_stable"] = tf;
  doc["agree"] = agree;
  emit(opt, doc,
       std::string("internally stable: ") + (ss.stable ? "yes" : "no") +
           "; criteria agree: " + (agree ? "yes" : "no"));
  if (!agree) {
    std::cerr << "error: the state-space and transfer criteria disagree; this is a defect\n";
    return kExitCriteriaDisagree;
  }
  return ss.stable ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured realizability and stabilizability analysis over directed graphs"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--tol-rank", opt.tol.rank_tol, "Relative rank decision cutoff")
      ->capture_default_str();
  app.add_option("--tol-hurwitz", opt.tol.hurwitz_margin, "Marginal band around the imaginary axis")
      ->capture_default_str();
  app.add_option("--tol-match", opt.tol.match_tol, "Transfer-matrix probe comparison tolerance")
      ->capture_default_str();
  app.add_option("--seed", opt.tol.seed, "Seed for the probe-point extension")
      ->capture_default_str();
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  std::string graph_path;
  std::string sys_path;
  std::string aux_path;
  std::string method = "stable";

  CLI::App* check_graph = app.add_subcommand("check-graph", "Validate a graph description");
  check_graph->add_option("graph", graph_path, "Graph JSON file")->required();

  CLI::App* check_structure =
      app.add_subcommand("check-structure", "Test whether a system carries a graph's pattern");
  check_structure->add_option("system", sys_path, "System JSON file")->required();
  check_structure->add_option("graph", graph_path, "Graph JSON file")->required();

  CLI::App* realize = app.add_subcommand("realize", "Construct a structured realization");
  realize->add_option("system", sys_path, "System JSON file")->required();
  realize->add_option("graph", graph_path, "Graph JSON file")->required();
  realize->add_option("--method", method, "Construction to use")
      ->check(CLI::IsMember({"stable", "chain"}))
      ->capture_default_str();
  realize->add_option("--out", opt.out_path, "Write the realized system JSON to this file");

  CLI::App* minreal = app.add_subcommand("minreal", "Minimal realization of a system");
  minreal->add_option("system", sys_path, "System JSON file")->required();
  minreal->add_option("--out", opt.out_path, "Write the reduced system JSON to this file");

  CLI::App* stabilizability =
      app.add_subcommand("stabilizability", "Decide structured stabilizability");
  stabilizability->add_option("system", sys_path, "System JSON file")->required();
  stabilizability->add_option("graph", graph_path, "Graph JSON file")->required();

  CLI::App* synth = app.add_subcommand("synth", "Synthesize a structured stabilizing controller");
  synth->add_option("system", sys_path, "System JSON file")->required();
  synth->add_option("graph", graph_path, "Graph JSON file")->required();
  synth->add_option("--q", aux_path, "Stable structured parameter JSON; default is the nominal controller");
  synth->add_option("--out", opt.out_path, "Write the controller system JSON to this file");

  CLI::App* verify_loop =
      app.add_subcommand("verify-loop", "Test internal stability of a plant/controller pair");
  verify_loop->add_option("system", sys_path, "Plant JSON file")->required();
  verify_loop->add_option("controller", aux_path, "Controller JSON file")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInputError;
  }

  try {
    if (check_graph->parsed()) return cmd_check_graph(opt, graph_path);
    if (check_structure->parsed()) return cmd_check_structure(opt, sys_path, graph_path);
    if (realize->parsed()) return cmd_realize(opt, sys_path, graph_path, method);
    if (minreal->parsed()) return cmd_minreal(opt, sys_path);
    if (stabilizability->parsed()) return cmd_stabilizability(opt, sys_path, graph_path);
    if (synth->parsed()) return cmd_synth(opt, sys_path, graph_path, aux_path);
    if (verify_loop->parsed()) return cmd_verify_loop(opt, sys_path, aux_path);
  } catch (const slti::InvalidGraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (opt.format == "json") {
      std::cout << slti::graph_violations_to_json(e.violations());
    }
    return kExitFail;
  } catch (const slti::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const slti::IndeterminateError& e) {
    std::cerr << "indeterminate: " << e.what() << "\n";
    return kExitIndeterminate;
  } catch (const slti::SynthesisError& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kExitFail;
  } catch (const slti::PreconditionError& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kExitFail;
  } catch (const slti::SolverError& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitInputError;
}
