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

#include "slti/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "slti/errors.hpp"

namespace slti {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json parse(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("JSON parse error: ") + e.what());
  }
}

const ordered_json& field(const ordered_json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) {
    throw InputError(std::string("missing JSON field \"") + name + "\"");
  }
  return *it;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j, const char* name) {
  if (!j.is_array()) {
    throw InputError(std::string("field \"") + name + "\" must be an array of rows");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Eigen::MatrixXd out;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) {
      throw InputError(std::string("field \"") + name + "\" must be an array of rows");
    }
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      out.resize(rows, cols);
    }
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw InputError(std::string("field \"") + name + "\" has ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw InputError(std::string("field \"") + name + "\" has a non-numeric entry");
      }
      out(r, c) = v.get<double>();
    }
  }
  if (rows == 0) out.resize(0, 0);
  return out;
}

ordered_json matrix_to_json(const Eigen::MatrixXd& M) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

IndexSet index_set_from_json(const ordered_json& j, const char* name) {
  if (!j.is_array()) {
    throw InputError(std::string("field \"") + name + "\" must be an array of dimensions");
  }
  std::vector<Eigen::Index> dims;
  dims.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw InputError(std::string("field \"") + name + "\" must hold nonnegative integers");
    }
    dims.push_back(static_cast<Eigen::Index>(v.get<long long>()));
  }
  return IndexSet(dims);
}

ordered_json index_set_to_json(const IndexSet& s) {
  ordered_json out = ordered_json::array();
  for (const Eigen::Index d : s.dims()) out.push_back(d);
  return out;
}

std::vector<double> coeffs_from_json(const ordered_json& j, const char* name) {
  if (!j.is_array()) {
    throw InputError(std::string("field \"") + name + "\" must be a coefficient array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw InputError(std::string("field \"") + name + "\" has a non-numeric coefficient");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

ordered_json complex_to_json(const std::complex<double>& z) {
  return ordered_json::array({z.real(), z.imag()});
}

ordered_json pbh_to_json(const PbhCertificate& cert) {
  ordered_json out;
  out["kind"] = cert.property == PbhProperty::kStabilizable ? "stabilizability" : "detectability";
  out["verdict"] = cert.verdict;
  ordered_json witnesses = ordered_json::array();
  for (const auto& w : cert.witnesses) {
    ordered_json item;
    item["eig"] = complex_to_json(w.eigenvalue);
    item["rank_deficiency"] = w.rank_deficiency;
    witnesses.push_back(std::move(item));
  }
  out["witnesses"] = std::move(witnesses);
  return out;
}

ordered_json closed_loop_to_json_obj(const ClosedLoopReport& report) {
  ordered_json out;
  out["well_posed"] = report.well_posed;
  out["stable"] = report.stable;
  out["stabilizes"] = report.stabilizes;
  ordered_json eigs = ordered_json::array();
  for (const auto& ev : report.eigenvalues) eigs.push_back(complex_to_json(ev));
  out["eigenvalues"] = std::move(eigs);
  out["plant_stabilizable"] = report.plant_stabilizable.verdict;
  out["plant_detectable"] = report.plant_detectable.verdict;
  out["controller_stabilizable"] = report.controller_stabilizable.verdict;
  out["controller_detectable"] = report.controller_detectable.verdict;
  return out;
}

ordered_json system_to_json_obj(const StateSpaceSystem& sys) {
  ordered_json out;
  out["kind"] = "ss";
  out["A"] = matrix_to_json(sys.A);
  out["B"] = matrix_to_json(sys.B);
  out["C"] = matrix_to_json(sys.C);
  out["D"] = matrix_to_json(sys.D);
  out["k"] = index_set_to_json(sys.output_index);
  out["m"] = index_set_to_json(sys.input_index);
  if (sys.state_index) out["n"] = index_set_to_json(*sys.state_index);
  return out;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

Graph graph_from_json(const std::string& text) {
  const ordered_json j = parse(text);
  if (!j.is_object()) throw InputError("graph JSON must be an object");
  const auto& nodes = field(j, "nodes");
  if (!nodes.is_number_integer() || nodes.get<long long>() < 1) {
    throw InputError("field \"nodes\" must be a positive integer");
  }
  const int n = nodes.get<int>();
  const auto& edges = field(j, "edges");
  if (!edges.is_array()) throw InputError("field \"edges\" must be an array of pairs");

  std::set<std::pair<int, int>> edge_set;
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw InputError("each edge must be a pair of integer node labels");
    }
    edge_set.emplace(e[0].get<int>() - 1, e[1].get<int>() - 1);
  }
  for (int i = 0; i < n; ++i) edge_set.emplace(i, i);
  return Graph(n, std::vector<std::pair<int, int>>(edge_set.begin(), edge_set.end()));
}

std::string graph_to_json(const Graph& g) {
  ordered_json out;
  out["nodes"] = g.n_nodes();
  ordered_json edges = ordered_json::array();
  for (const auto& [from, to] : g.edges()) {
    edges.push_back(ordered_json::array({from + 1, to + 1}));
  }
  out["edges"] = std::move(edges);
  return dump(out);
}

LoadedSystem system_from_json(const std::string& text) {
  const ordered_json j = parse(text);
  if (!j.is_object()) throw InputError("system JSON must be an object");
  const auto& kind = field(j, "kind");
  if (!kind.is_string()) throw InputError("field \"kind\" must be a string");

  LoadedSystem out;
  if (kind.get<std::string>() == "ss") {
    out.sys.A = matrix_from_json(field(j, "A"), "A");
    out.sys.B = matrix_from_json(field(j, "B"), "B");
    out.sys.C = matrix_from_json(field(j, "C"), "C");
    out.sys.D = matrix_from_json(field(j, "D"), "D");
    out.sys.output_index = index_set_from_json(field(j, "k"), "k");
    out.sys.input_index = index_set_from_json(field(j, "m"), "m");
    if (j.contains("n")) out.sys.state_index = index_set_from_json(j["n"], "n");
    // An empty array stands for a matrix with a zero dimension; the other
    // dimension is implied by A and the index sets.
    if (out.sys.B.size() == 0 &&
        (out.sys.A.rows() == 0 || out.sys.input_index.total() == 0)) {
      out.sys.B.resize(out.sys.A.rows(), out.sys.input_index.total());
    }
    if (out.sys.C.size() == 0 &&
        (out.sys.A.cols() == 0 || out.sys.output_index.total() == 0)) {
      out.sys.C.resize(out.sys.output_index.total(), out.sys.A.cols());
    }
    validate_system(out.sys);
    return out;
  }
  if (kind.get<std::string>() == "tf") {
    TransferSpec spec;
    spec.output_index = index_set_from_json(field(j, "k"), "k");
    spec.input_index = index_set_from_json(field(j, "m"), "m");
    const auto& entries = field(j, "entries");
    if (!entries.is_array()) throw InputError("field \"entries\" must be an array");
    for (const auto& e : entries) {
      if (!e.is_object()) throw InputError("each transfer entry must be an object");
      TransferEntry entry;
      const auto& row = field(e, "row");
      const auto& col = field(e, "col");
      if (!row.is_number_integer() || !col.is_number_integer()) {
        throw InputError("entry block labels must be integers");
      }
      entry.row = row.get<Eigen::Index>() - 1;
      entry.col = col.get<Eigen::Index>() - 1;
      entry.num = coeffs_from_json(field(e, "num"), "num");
      entry.den = coeffs_from_json(field(e, "den"), "den");
      spec.entries.push_back(std::move(entry));
    }
    out.sys = tf_to_ss(spec);
    out.was_transfer = true;
    out.spec = std::move(spec);
    return out;
  }
  throw InputError("field \"kind\" must be \"ss\" or \"tf\"");
}

std::string system_to_json(const StateSpaceSystem& sys) { return dump(system_to_json_obj(sys)); }

std::string graph_violations_to_json(const std::vector<GraphViolation>& violations) {
  ordered_json out;
  out["valid"] = violations.empty();
  ordered_json list = ordered_json::array();
  for (const auto& v : violations) {
    ordered_json item;
    switch (v.kind) {
      case GraphViolation::Kind::MissingSelfLoop:
        item["kind"] = "missing_self_loop";
        item["node"] = v.node + 1;
        break;
      case GraphViolation::Kind::MissingTransitiveEdge:
        item["kind"] = "missing_transitive_edge";
        item["from"] = v.from + 1;
        item["via"] = v.via + 1;
        item["to"] = v.to + 1;
        break;
      case GraphViolation::Kind::Cycle: {
        item["kind"] = "cycle";
        ordered_json nodes = ordered_json::array();
        for (const int node : v.cycle) nodes.push_back(node + 1);
        item["nodes"] = std::move(nodes);
        break;
      }
    }
    list.push_back(std::move(item));
  }
  out["violations"] = std::move(list);
  return dump(out);
}

std::string structure_check_to_json(const StructureCheck& check) {
  ordered_json out;
  out["structured"] = check.ok;
  ordered_json list = ordered_json::array();
  for (const auto& [i, j] : check.violations) {
    list.push_back(ordered_json::array({i + 1, j + 1}));
  }
  out["violations"] = std::move(list);
  return dump(out);
}

std::string verification_report_to_json(const VerificationReport& report,
                                        const std::optional<IndexSet>& n) {
  ordered_json out;
  out["structured"] = report.structured;
  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations) {
    ordered_json item;
    item["matrix"] = std::string(1, v.matrix);
    item["block"] = ordered_json::array({v.i + 1, v.j + 1});
    violations.push_back(std::move(item));
  }
  out["violations"] = std::move(violations);
  ordered_json pbh_list = ordered_json::array();
  for (const auto& node : report.pbh) {
    for (const PbhCertificate* cert : {&node.stabilizable, &node.detectable}) {
      for (const auto& w : cert->witnesses) {
        ordered_json item;
        item["eig"] = complex_to_json(w.eigenvalue);
        item["kind"] = cert->property == PbhProperty::kStabilizable ? "stabilizability"
                                                                    : "detectability";
        item["block"] = node.node + 1;
        item["rank_deficiency"] = w.rank_deficiency;
        pbh_list.push_back(std::move(item));
      }
    }
  }
  out["pbh"] = std::move(pbh_list);
  if (n) out["n"] = index_set_to_json(*n);
  out["accepted"] = report.accepted;
  return dump(out);
}

std::string closed_loop_report_to_json(const ClosedLoopReport& report) {
  return dump(closed_loop_to_json_obj(report));
}

std::string synthesis_report_to_json(const SynthesisReport& report) {
  ordered_json out;
  switch (report.verdict) {
    case Verdict::kStabilizable:
      out["stabilizable"] = "yes";
      break;
    case Verdict::kNotStabilizable:
      out["stabilizable"] = "no";
      break;
    case Verdict::kIndeterminate:
      out["stabilizable"] = "indeterminate";
      break;
  }
  ordered_json failures = ordered_json::array();
  for (const auto& f : report.node_failures) {
    ordered_json item;
    item["node"] = f.node + 1;
    item["stabilizable"] = pbh_to_json(f.stabilizable);
    item["detectable"] = pbh_to_json(f.detectable);
    failures.push_back(std::move(item));
  }
  out["failing_nodes"] = std::move(failures);
  if (report.controller) {
    out["controller"] = system_to_json_obj(report.controller->sys);
    out["controller_accepted"] = report.controller->accepted();
  }
  if (report.loop) out["loop"] = closed_loop_to_json_obj(*report.loop);
  return dump(out);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << text;
  if (!out) throw InputError("cannot write file: " + path);
}

}  // namespace slti
