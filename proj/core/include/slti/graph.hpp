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

#ifndef SLTI_GRAPH_HPP_
#define SLTI_GRAPH_HPP_

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "slti/errors.hpp"

namespace slti {

/// Directed information-flow graph.  Node indices are 0-based throughout the
/// C++ API; the JSON layer renders 1-based labels.
///
/// A graph is *admissible* when it has all self-loops, is transitively closed,
/// and has no directed cycle of length >= 2.  Construction does not enforce
/// admissibility; validate_graph() reports violations.
class Graph {
 public:
  Graph() = default;
  /// Throws InputError if n_nodes < 1 or an edge endpoint is out of range.
  Graph(int n_nodes, const std::vector<std::pair<int, int>>& edges);

  int n_nodes() const { return n_nodes_; }
  bool has_edge(int from, int to) const;
  const std::set<std::pair<int, int>>& edges() const { return edges_; }

 private:
  int n_nodes_ = 0;
  std::set<std::pair<int, int>> edges_;
};

struct GraphViolation {
  enum class Kind { MissingSelfLoop, MissingTransitiveEdge, Cycle };
  Kind kind{};
  int node = -1;                       // MissingSelfLoop
  int from = -1, via = -1, to = -1;    // MissingTransitiveEdge: from->via->to, from->to absent
  std::vector<int> cycle;              // Cycle: members, ascending
};

/// Thrown by operations that require an admissible graph; carries the full
/// violation list.
class InvalidGraphError : public PreconditionError {
 public:
  InvalidGraphError(const std::string& msg, std::vector<GraphViolation> violations)
      : PreconditionError(msg), violations_(std::move(violations)) {}
  const std::vector<GraphViolation>& violations() const { return violations_; }

 private:
  std::vector<GraphViolation> violations_;
};

/// Boolean incidence mask: at(i, j) is true iff there is an edge j -> i.
/// For an admissible graph some relabeling makes the mask lower-triangular
/// with a full diagonal.
class SparsityPattern {
 public:
  SparsityPattern() = default;
  /// Diagonal-only pattern of the given size.
  explicit SparsityPattern(int n);
  static SparsityPattern full_lower_triangular(int n);

  int size() const { return n_; }
  bool at(int i, int j) const { return mask_[static_cast<size_t>(i) * n_ + j]; }
  void set(int i, int j, bool value) { mask_[static_cast<size_t>(i) * n_ + j] = value; }
  bool is_lower_triangular() const;
  bool operator==(const SparsityPattern&) const = default;

 private:
  int n_ = 0;
  std::vector<bool> mask_;
};

/// A relabeling of nodes.  order[p] is the node placed at position p;
/// position[] is the inverse map.
struct NodeOrdering {
  std::vector<int> order;
  std::vector<int> position;
};

/// Checks assumptions in order: self-loops, transitive closure, acyclicity.
/// Returns an empty list iff the graph is admissible.  The violation list is
/// deterministic (sorted by witness).
std::vector<GraphViolation> validate_graph(const Graph& g);

inline bool is_valid(const Graph& g) { return validate_graph(g).empty(); }

/// Relabeling that makes adjacency(g) lower-triangular.  Among all valid
/// orders, returns the lexicographically smallest node sequence so results are
/// reproducible.  Throws InvalidGraphError for inadmissible graphs.
NodeOrdering topological_order(const Graph& g);

/// Adjacency mask of an admissible graph: at(i, j) = true iff j -> i.
/// Throws InvalidGraphError for inadmissible graphs.
SparsityPattern adjacency(const Graph& g);

/// Applies the relabeling to a pattern: result.at(position[i], position[j]) =
/// p.at(i, j).
SparsityPattern apply_ordering(const SparsityPattern& p, const NodeOrdering& ordering);

/// Smallest superset of g closed under edge chaining.  Offered as an explicit
/// step: graphs missing transitive edges are rejected elsewhere, never closed
/// silently.
Graph transitive_closure(const Graph& g);

struct CondenseResult {
  Graph graph;                    // one node per strongly connected component
  std::vector<int> component_of;  // original node -> condensed node
};

/// Collapses every directed cycle into a single node.  Components are labeled
/// in ascending order of their smallest original member, self-loops are added
/// to every component.  The result may still need transitive_closure().
CondenseResult condense(const Graph& g);

}  // namespace slti

#endif  // SLTI_GRAPH_HPP_
