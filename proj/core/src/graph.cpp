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

#include "slti/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

namespace slti {

Graph::Graph(int n_nodes, const std::vector<std::pair<int, int>>& edges) : n_nodes_(n_nodes) {
  if (n_nodes < 1) {
    throw InputError("graph must have at least one node, got " + std::to_string(n_nodes));
  }
  for (const auto& [from, to] : edges) {
    if (from < 0 || from >= n_nodes || to < 0 || to >= n_nodes) {
      std::ostringstream os;
      os << "edge (" << from << ", " << to << ") out of range for " << n_nodes << " nodes";
      throw InputError(os.str());
    }
    edges_.emplace(from, to);
  }
}

bool Graph::has_edge(int from, int to) const { return edges_.count({from, to}) > 0; }

SparsityPattern::SparsityPattern(int n) : n_(n), mask_(static_cast<size_t>(n) * n, false) {
  if (n < 0) throw InputError("pattern size must be nonnegative");
  for (int i = 0; i < n; ++i) set(i, i, true);
}

SparsityPattern SparsityPattern::full_lower_triangular(int n) {
  SparsityPattern p(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) p.set(i, j, true);
  return p;
}

bool SparsityPattern::is_lower_triangular() const {
  for (int i = 0; i < n_; ++i) {
    if (!at(i, i)) return false;
    for (int j = i + 1; j < n_; ++j)
      if (at(i, j)) return false;
  }
  return true;
}

namespace {

// Tarjan's algorithm; components come out in reverse topological order.
std::vector<std::vector<int>> strongly_connected_components(const Graph& g) {
  const int n = g.n_nodes();
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : g.edges())
    if (u != v) adj[u].push_back(v);

  std::vector<int> index(n, -1), lowlink(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<int>> components;
  int next_index = 0;

  std::function<void(int)> strongconnect = [&](int v) {
    index[v] = lowlink[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        strongconnect(w);
        lowlink[v] = std::min(lowlink[v], lowlink[w]);
      } else if (on_stack[w]) {
        lowlink[v] = std::min(lowlink[v], index[w]);
      }
    }
    if (lowlink[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      components.push_back(std::move(comp));
    }
  };

  for (int v = 0; v < n; ++v)
    if (index[v] < 0) strongconnect(v);
  return components;
}

}  // namespace

std::vector<GraphViolation> validate_graph(const Graph& g) {
  std::vector<GraphViolation> out;
  const int n = g.n_nodes();

  for (int i = 0; i < n; ++i) {
    if (!g.has_edge(i, i)) {
      GraphViolation v;
      v.kind = GraphViolation::Kind::MissingSelfLoop;
      v.node = i;
      out.push_back(v);
    }
  }

  // Witnessed as a missing chain i -> j -> k; self-loop legs are skipped since
  // they only duplicate existing edges.
  for (const auto& [i, j] : g.edges()) {
    if (i == j) continue;
    for (const auto& [j2, k] : g.edges()) {
      if (j2 != j || k == j || k == i) continue;
      if (!g.has_edge(i, k)) {
        GraphViolation v;
        v.kind = GraphViolation::Kind::MissingTransitiveEdge;
        v.from = i;
        v.via = j;
        v.to = k;
        out.push_back(v);
      }
    }
  }

  auto components = strongly_connected_components(g);
  std::sort(components.begin(), components.end());
  for (const auto& comp : components) {
    if (comp.size() >= 2) {
      GraphViolation v;
      v.kind = GraphViolation::Kind::Cycle;
      v.cycle = comp;
      out.push_back(v);
    }
  }
  return out;
}

namespace {

void require_valid(const Graph& g, const char* op) {
  auto violations = validate_graph(g);
  if (!violations.empty()) {
    std::ostringstream os;
    os << op << ": graph violates admissibility assumptions (" << violations.size()
       << " violation(s))";
    throw InvalidGraphError(os.str(), std::move(violations));
  }
}

}  // namespace

NodeOrdering topological_order(const Graph& g) {
  require_valid(g, "topological_order");
  const int n = g.n_nodes();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : g.edges()) {
    if (u == v) continue;
    adj[u].push_back(v);
    ++indegree[v];
  }
  // Min-heap tie-break yields the lexicographically smallest node sequence.
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);

  NodeOrdering ordering;
  ordering.order.reserve(n);
  ordering.position.assign(n, -1);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    ordering.position[v] = static_cast<int>(ordering.order.size());
    ordering.order.push_back(v);
    for (int w : adj[v])
      if (--indegree[w] == 0) ready.push(w);
  }
  return ordering;
}

SparsityPattern adjacency(const Graph& g) {
  require_valid(g, "adjacency");
  SparsityPattern p(g.n_nodes());
  for (const auto& [from, to] : g.edges()) p.set(to, from, true);
  return p;
}

SparsityPattern apply_ordering(const SparsityPattern& p, const NodeOrdering& ordering) {
  const int n = p.size();
  if (static_cast<int>(ordering.order.size()) != n) {
    throw InputError("ordering size does not match pattern size");
  }
  SparsityPattern out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p.at(i, j)) out.set(ordering.position[i], ordering.position[j], true);
  return out;
}

Graph transitive_closure(const Graph& g) {
  const int n = g.n_nodes();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& [u, v] : g.edges()) reach[u][v] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (reach[i][k])
        for (int j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;

  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (reach[i][j]) edges.emplace_back(i, j);
  return Graph(n, edges);
}

CondenseResult condense(const Graph& g) {
  auto components = strongly_connected_components(g);
  // Label components by ascending smallest member.
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  const int n = g.n_nodes();
  const int m = static_cast<int>(components.size());
  std::vector<int> component_of(n, -1);
  for (int c = 0; c < m; ++c)
    for (int v : components[c]) component_of[v] = c;

  std::vector<std::pair<int, int>> edges;
  for (int c = 0; c < m; ++c) edges.emplace_back(c, c);
  for (const auto& [u, v] : g.edges()) {
    int cu = component_of[u], cv = component_of[v];
    if (cu != cv) edges.emplace_back(cu, cv);
  }
  return CondenseResult{Graph(m, edges), std::move(component_of)};
}

}  // namespace slti
