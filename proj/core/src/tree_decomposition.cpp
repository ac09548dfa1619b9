#include "ashg/tree_decomposition.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ashg {

namespace {

void sort_unique(std::vector<Vertex>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool is_subset(const std::vector<Vertex>& small, const std::vector<Vertex>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

/// True iff the bag graph is a tree (connected, bag_count - 1 edges).
bool is_tree(std::size_t bag_count, const std::vector<TreeDecomposition::Edge>& edges,
             const std::vector<std::vector<std::size_t>>& adjacency) {
  if (bag_count == 0) return edges.empty();
  if (edges.size() != bag_count - 1) return false;
  std::vector<std::uint8_t> seen(bag_count, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    auto b = stack.back();
    stack.pop_back();
    for (auto c : adjacency[b]) {
      if (!seen[c]) {
        seen[c] = 1;
        ++reached;
        stack.push_back(c);
      }
    }
  }
  return reached == bag_count;
}

/// Vertices whose bag set does not induce a connected subtree.
std::vector<Vertex> disconnected_vertices(const std::vector<std::vector<Vertex>>& bags,
                                          const std::vector<std::vector<std::size_t>>& adjacency) {
  std::vector<std::vector<std::size_t>> occurrences;
  for (std::size_t b = 0; b < bags.size(); ++b) {
    for (Vertex v : bags[b]) {
      if (occurrences.size() <= v) occurrences.resize(v + 1);
      occurrences[v].push_back(b);
    }
  }
  std::vector<Vertex> bad;
  std::vector<std::uint8_t> holds(bags.size(), 0), seen(bags.size(), 0);
  for (Vertex v = 0; v < occurrences.size(); ++v) {
    const auto& occ = occurrences[v];
    if (occ.size() <= 1) continue;
    for (auto b : occ) holds[b] = 1;
    std::vector<std::size_t> stack{occ.front()};
    seen[occ.front()] = 1;
    std::size_t reached = 1;
    std::vector<std::size_t> touched{occ.front()};
    while (!stack.empty()) {
      auto b = stack.back();
      stack.pop_back();
      for (auto c : adjacency[b]) {
        if (holds[c] && !seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
          ++reached;
          stack.push_back(c);
        }
      }
    }
    if (reached != occ.size()) bad.push_back(v);
    for (auto b : occ) holds[b] = 0;
    for (auto b : touched) seen[b] = 0;
  }
  return bad;
}

}  // namespace

TreeDecomposition::TreeDecomposition(std::vector<std::vector<Vertex>> bags, std::vector<Edge> edges)
    : bags_(std::move(bags)), edges_(std::move(edges)), adjacency_(bags_.size()) {
  for (auto& bag : bags_) sort_unique(bag);
  for (auto& [a, b] : edges_) {
    if (a >= bags_.size() || b >= bags_.size()) {
      throw std::invalid_argument("tree edge references an unknown bag");
    }
    if (a == b) throw std::invalid_argument("tree edge is a self-loop");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges_.begin(), edges_.end());
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
}

std::size_t TreeDecomposition::max_bag_size() const {
  std::size_t best = 0;
  for (const auto& bag : bags_) best = std::max(best, bag.size());
  return best;
}

std::size_t TreeDecomposition::width() const {
  auto m = max_bag_size();
  return m == 0 ? 0 : m - 1;
}

ValidationReport validate(const TreeDecomposition& td, const AshgInstance& instance) {
  ValidationReport report;
  auto fail = [&](std::string msg) {
    report.valid = false;
    report.violations.push_back(std::move(msg));
  };

  std::vector<std::vector<std::size_t>> adjacency(td.bag_count());
  for (std::size_t b = 0; b < td.bag_count(); ++b) adjacency[b] = td.tree_neighbors(b);
  if (td.bag_count() == 0) fail("decomposition has no bags");
  if (!is_tree(td.bag_count(), td.edges(), adjacency)) fail("bag graph is not a tree");

  const std::size_t n = instance.vertex_count();
  std::vector<std::uint8_t> covered(n, 0);
  for (std::size_t b = 0; b < td.bag_count(); ++b) {
    for (Vertex v : td.bag(b)) {
      if (v >= n) {
        fail("bag " + std::to_string(b) + " contains unknown vertex " + std::to_string(v));
      } else {
        covered[v] = 1;
      }
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!covered[v]) fail("vertex " + std::to_string(v) + " is in no bag");
  }

  // Edge coverage: for each vertex, mark its bag-mates once.
  std::vector<std::vector<std::size_t>> occurrences(n);
  for (std::size_t b = 0; b < td.bag_count(); ++b) {
    for (Vertex v : td.bag(b)) {
      if (v < n) occurrences[v].push_back(b);
    }
  }
  std::vector<std::uint8_t> mate(n, 0);
  for (Vertex u = 0; u < n; ++u) {
    std::vector<Vertex> marked;
    for (auto b : occurrences[u]) {
      for (Vertex x : td.bag(b)) {
        if (x < n && !mate[x]) {
          mate[x] = 1;
          marked.push_back(x);
        }
      }
    }
    for (Vertex v : instance.neighbors(u)) {
      if (u < v && !mate[v]) {
        fail("edge {" + std::to_string(u) + ", " + std::to_string(v) + "} is in no bag");
      }
    }
    for (Vertex x : marked) mate[x] = 0;
  }

  for (Vertex v : disconnected_vertices(td.bags(), adjacency)) {
    fail("bags containing vertex " + std::to_string(v) + " are not connected");
  }
  return report;
}

// ---------------------------------------------------------------------------

TreeDecomposition heuristic_decompose(const AshgInstance& instance,
                                      EliminationHeuristic heuristic) {
  const std::size_t n = instance.vertex_count();
  if (n == 0) return TreeDecomposition({{}}, {});

  std::vector<std::set<Vertex>> graph(n);
  for (Vertex v = 0; v < n; ++v) {
    auto nb = instance.neighbors(v);
    graph[v].insert(nb.begin(), nb.end());
  }

  auto fill_in = [&](Vertex v) {
    std::size_t missing = 0;
    for (auto a = graph[v].begin(); a != graph[v].end(); ++a) {
      for (auto b = std::next(a); b != graph[v].end(); ++b) {
        if (!graph[*a].count(*b)) ++missing;
      }
    }
    return missing;
  };

  std::vector<std::uint8_t> eliminated(n, 0);
  std::vector<std::size_t> position(n, 0);
  std::vector<Vertex> order;
  std::vector<std::vector<Vertex>> bags(n);
  order.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    Vertex best = 0;
    std::size_t best_score = 0;
    bool have = false;
    for (Vertex v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      std::size_t score =
          heuristic == EliminationHeuristic::kMinDegree ? graph[v].size() : fill_in(v);
      if (!have || score < best_score) {
        best = v;
        best_score = score;
        have = true;
      }
    }
    eliminated[best] = 1;
    position[best] = step;
    order.push_back(best);
    auto& bag = bags[step];
    bag.assign(graph[best].begin(), graph[best].end());
    bag.push_back(best);
    sort_unique(bag);
    for (Vertex a : graph[best]) {
      graph[a].erase(best);
      for (Vertex b : graph[best]) {
        if (a != b) graph[a].insert(b);
      }
    }
    graph[best].clear();
  }

  // Bag of step i hangs below the bag of its earliest-eliminated later
  // neighbor; component roots are chained together.
  std::vector<TreeDecomposition::Edge> edges;
  std::size_t previous_root = n;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t parent = n;
    for (Vertex u : bags[step]) {
      if (u != order[step]) parent = std::min(parent, position[u]);
    }
    if (parent != n) {
      edges.emplace_back(step, parent);
    } else {
      if (previous_root != n) edges.emplace_back(previous_root, step);
      previous_root = step;
    }
  }

  // Contract edges whose bags are nested.
  std::vector<std::set<std::size_t>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<std::uint8_t> alive(n, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < n; ++a) {
      if (!alive[a]) continue;
      for (std::size_t b : adj[a]) {
        if (!is_subset(bags[a], bags[b])) continue;
        for (std::size_t c : adj[a]) {
          if (c == b) continue;
          adj[c].erase(a);
          adj[c].insert(b);
          adj[b].insert(c);
        }
        adj[b].erase(a);
        adj[a].clear();
        alive[a] = 0;
        changed = true;
        break;
      }
    }
  }

  std::vector<std::size_t> renumber(n, 0);
  std::vector<std::vector<Vertex>> kept;
  for (std::size_t a = 0; a < n; ++a) {
    if (alive[a]) {
      renumber[a] = kept.size();
      kept.push_back(bags[a]);
    }
  }
  std::vector<TreeDecomposition::Edge> kept_edges;
  for (std::size_t a = 0; a < n; ++a) {
    if (!alive[a]) continue;
    for (std::size_t b : adj[a]) {
      if (a < b) kept_edges.emplace_back(renumber[a], renumber[b]);
    }
  }
  return TreeDecomposition(std::move(kept), std::move(kept_edges));
}

// ---------------------------------------------------------------------------

NiceTreeDecomposition::NiceTreeDecomposition(std::vector<NiceNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("nice decomposition needs a root");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (auto c : nodes_[i].children) {
      if (c >= i) throw std::invalid_argument("nice decomposition nodes must be stored children-first");
    }
  }
}

std::size_t NiceTreeDecomposition::max_bag_size() const {
  std::size_t best = 0;
  for (const auto& node : nodes_) best = std::max(best, node.bag.size());
  return best;
}

std::size_t NiceTreeDecomposition::width() const {
  auto m = max_bag_size();
  return m == 0 ? 0 : m - 1;
}

NiceTreeDecomposition make_nice(const TreeDecomposition& td) {
  std::vector<std::vector<std::size_t>> adjacency(td.bag_count());
  for (std::size_t b = 0; b < td.bag_count(); ++b) adjacency[b] = td.tree_neighbors(b);
  if (td.bag_count() == 0 || !is_tree(td.bag_count(), td.edges(), adjacency)) {
    throw std::invalid_argument("make_nice: bag graph is not a tree");
  }
  if (!disconnected_vertices(td.bags(), adjacency).empty()) {
    throw std::invalid_argument("make_nice: a vertex occurs in disconnected bags");
  }

  std::vector<NiceNode> nodes;
  auto add = [&](NiceNodeKind kind, Vertex v, std::vector<Vertex> bag,
                 std::vector<std::size_t> children) {
    nodes.push_back(NiceNode{kind, v, std::move(bag), std::move(children)});
    return nodes.size() - 1;
  };
  // Walks from node `from` (bag `have`) to a node with bag `want`.
  auto transition = [&](std::size_t from, std::vector<Vertex> have, const std::vector<Vertex>& want) {
    std::vector<Vertex> drop, gain;
    std::set_difference(have.begin(), have.end(), want.begin(), want.end(), std::back_inserter(drop));
    std::set_difference(want.begin(), want.end(), have.begin(), have.end(), std::back_inserter(gain));
    for (Vertex v : drop) {
      have.erase(std::find(have.begin(), have.end(), v));
      from = add(NiceNodeKind::kForget, v, have, {from});
    }
    for (Vertex v : gain) {
      have.insert(std::upper_bound(have.begin(), have.end(), v), v);
      from = add(NiceNodeKind::kIntroduce, v, have, {from});
    }
    return from;
  };

  // Post-order over the bag tree rooted at bag 0.
  const std::size_t m = td.bag_count();
  std::vector<std::size_t> parent(m, m), order;
  std::vector<std::size_t> stack{0};
  std::vector<std::uint8_t> seen(m, 0);
  seen[0] = 1;
  while (!stack.empty()) {
    auto b = stack.back();
    stack.pop_back();
    order.push_back(b);
    for (auto c : adjacency[b]) {
      if (!seen[c]) {
        seen[c] = 1;
        parent[c] = b;
        stack.push_back(c);
      }
    }
  }
  std::vector<std::vector<std::size_t>> children(m);
  for (std::size_t b = 0; b < m; ++b) {
    if (parent[b] != m) children[parent[b]].push_back(b);
  }
  for (auto& c : children) std::sort(c.begin(), c.end());

  std::vector<std::size_t> top(m, 0);  // nice node whose bag equals bag b
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto b = *it;
    const auto& bag = td.bag(b);
    std::size_t current = 0;
    bool have_current = false;
    for (auto c : children[b]) {
      auto arm = transition(top[c], td.bag(c), bag);
      if (!have_current) {
        current = arm;
        have_current = true;
      } else {
        current = add(NiceNodeKind::kJoin, 0, bag, {current, arm});
      }
    }
    if (!have_current) {
      current = add(NiceNodeKind::kLeaf, 0, {}, {});
      current = transition(current, {}, bag);
    }
    top[b] = current;
  }
  transition(top[0], td.bag(0), {});
  return NiceTreeDecomposition(std::move(nodes));
}

ValidationReport validate_nice(const NiceTreeDecomposition& ntd, const AshgInstance& instance) {
  ValidationReport report;
  auto fail = [&](std::string msg) {
    report.valid = false;
    report.violations.push_back(std::move(msg));
  };
  if (ntd.size() == 0) {
    fail("empty decomposition");
    return report;
  }
  if (!ntd.node(ntd.root()).bag.empty()) fail("root bag is not empty");

  std::vector<std::size_t> parent_count(ntd.size(), 0);
  std::vector<TreeDecomposition::Edge> edges;
  for (std::size_t i = 0; i < ntd.size(); ++i) {
    const auto& node = ntd.node(i);
    const std::string at = "node " + std::to_string(i) + ": ";
    if (!std::is_sorted(node.bag.begin(), node.bag.end()) ||
        std::adjacent_find(node.bag.begin(), node.bag.end()) != node.bag.end()) {
      fail(at + "bag not sorted and unique");
    }
    for (auto c : node.children) {
      ++parent_count[c];
      edges.emplace_back(c, i);
    }
    auto expect_children = [&](std::size_t k) {
      if (node.children.size() != k) fail(at + "wrong number of children");
      return node.children.size() == k;
    };
    switch (node.kind) {
      case NiceNodeKind::kLeaf:
        if (expect_children(0) && !node.bag.empty()) fail(at + "leaf bag not empty");
        break;
      case NiceNodeKind::kIntroduce:
      case NiceNodeKind::kForget:
        if (expect_children(1)) {
          auto expected = ntd.node(node.children[0]).bag;
          if (node.kind == NiceNodeKind::kIntroduce) {
            if (std::binary_search(expected.begin(), expected.end(), node.vertex)) {
              fail(at + "introduced vertex already in child bag");
            }
            expected.insert(std::upper_bound(expected.begin(), expected.end(), node.vertex),
                            node.vertex);
          } else {
            auto pos = std::lower_bound(expected.begin(), expected.end(), node.vertex);
            if (pos == expected.end() || *pos != node.vertex) {
              fail(at + "forgotten vertex not in child bag");
            } else {
              expected.erase(pos);
            }
          }
          if (expected != node.bag) fail(at + "bag does not match child transition");
        }
        break;
      case NiceNodeKind::kJoin:
        if (expect_children(2) && (ntd.node(node.children[0]).bag != node.bag ||
                                   ntd.node(node.children[1]).bag != node.bag)) {
          fail(at + "join children bags differ");
        }
        break;
    }
  }
  for (std::size_t i = 0; i + 1 < ntd.size(); ++i) {
    if (parent_count[i] != 1) fail("node " + std::to_string(i) + " does not have exactly one parent");
  }

  std::vector<std::vector<Vertex>> bags;
  for (const auto& node : ntd.nodes()) bags.push_back(node.bag);
  auto axioms = validate(TreeDecomposition(std::move(bags), std::move(edges)), instance);
  for (auto& v : axioms.violations) fail(std::move(v));
  return report;
}

// ---------------------------------------------------------------------------

AshgInstance square_graph(const AshgInstance& instance) {
  const std::size_t n = instance.vertex_count();
  std::vector<Arc> arcs(instance.arcs().begin(), instance.arcs().end());
  std::vector<std::uint8_t> mark(n, 0);
  for (Vertex u = 0; u < n; ++u) {
    std::vector<Vertex> reach;
    for (Vertex v : instance.neighbors(u)) {
      for (Vertex x : instance.neighbors(v)) {
        if (x != u && !mark[x] && !instance.adjacent(u, x)) {
          mark[x] = 1;
          reach.push_back(x);
        }
      }
    }
    for (Vertex x : reach) {
      arcs.push_back(Arc{u, x, 0});
      mark[x] = 0;
    }
  }
  return AshgInstance(n, std::move(arcs));
}

SquaredDecomposition square_augment(const AshgInstance& instance, const TreeDecomposition& td) {
  if (auto report = validate(td, instance); !report) {
    throw std::invalid_argument("square_augment: invalid decomposition: " + report.violations.front());
  }
  std::vector<std::vector<Vertex>> bags;
  bags.reserve(td.bag_count());
  for (const auto& bag : td.bags()) {
    std::vector<Vertex> grown = bag;
    for (Vertex v : bag) {
      auto nb = instance.neighbors(v);
      grown.insert(grown.end(), nb.begin(), nb.end());
    }
    sort_unique(grown);
    bags.push_back(std::move(grown));
  }
  return SquaredDecomposition{square_graph(instance), TreeDecomposition(std::move(bags), td.edges())};
}

}  // namespace ashg
