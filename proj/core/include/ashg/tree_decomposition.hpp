#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ashg/game.hpp"

namespace ashg {

/// Bags over the vertices of an instance, joined by a tree.
///
/// Bags are kept sorted and duplicate-free. Width is `max_bag_size - 1`,
/// clamped at 0 so that graphs with no vertices have width 0.
class TreeDecomposition {
 public:
  using BagId = std::size_t;
  using Edge = std::pair<BagId, BagId>;

  TreeDecomposition() = default;

  /// Normalizes bag contents and edge orientation (smaller id first, edges
  /// sorted). Throws std::invalid_argument on an edge endpoint out of range or
  /// a self-loop. Tree shape is checked by validate(), not here.
  TreeDecomposition(std::vector<std::vector<Vertex>> bags, std::vector<Edge> edges);

  std::size_t bag_count() const { return bags_.size(); }
  const std::vector<Vertex>& bag(BagId id) const { return bags_.at(id); }
  const std::vector<std::vector<Vertex>>& bags() const { return bags_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<BagId>& tree_neighbors(BagId id) const { return adjacency_.at(id); }

  std::size_t max_bag_size() const;
  std::size_t width() const;

  friend bool operator==(const TreeDecomposition& a, const TreeDecomposition& b) {
    return a.bags_ == b.bags_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::vector<Vertex>> bags_;
  std::vector<Edge> edges_;
  std::vector<std::vector<BagId>> adjacency_;
};

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;

  explicit operator bool() const { return valid; }
};

/// Checks that the bag graph is a tree and the three decomposition axioms
/// against the underlying graph of `instance`: vertex coverage, edge
/// coverage, and connectivity of each vertex's bag set.
ValidationReport validate(const TreeDecomposition& td, const AshgInstance& instance);

enum class EliminationHeuristic { kMinDegree, kMinFill };

/// Decomposition from a greedy elimination ordering; ties go to the lowest
/// vertex id. Bags contained in a tree neighbor are contracted away.
TreeDecomposition heuristic_decompose(const AshgInstance& instance,
                                      EliminationHeuristic heuristic = EliminationHeuristic::kMinDegree);

enum class NiceNodeKind { kLeaf, kIntroduce, kForget, kJoin };

struct NiceNode {
  NiceNodeKind kind = NiceNodeKind::kLeaf;
  /// Introduced or forgotten vertex; unused for leaves and joins.
  Vertex vertex = 0;
  /// Sorted bag.
  std::vector<Vertex> bag;
  /// Zero children for leaves, one for introduce/forget, two for joins.
  std::vector<std::size_t> children;
};

/// Rooted nice decomposition. Nodes are stored children-first, so iterating
/// indices in increasing order is a valid bottom-up schedule; the root is the
/// last node and has an empty bag.
class NiceTreeDecomposition {
 public:
  NiceTreeDecomposition() = default;
  explicit NiceTreeDecomposition(std::vector<NiceNode> nodes);

  std::size_t size() const { return nodes_.size(); }
  const NiceNode& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<NiceNode>& nodes() const { return nodes_; }
  std::size_t root() const { return nodes_.size() - 1; }

  std::size_t max_bag_size() const;
  std::size_t width() const;

 private:
  std::vector<NiceNode> nodes_;
};

/// Converts a decomposition into nice form rooted at bag 0. Every original
/// bag appears as the bag of some node; introductions and forgets happen in
/// ascending vertex order. Throws std::invalid_argument if `td` is not a tree
/// or a vertex's bags are not connected.
NiceTreeDecomposition make_nice(const TreeDecomposition& td);

/// Structural checks for nice form (node kinds, bag transitions, empty root
/// and leaves) plus the decomposition axioms against `instance`.
ValidationReport validate_nice(const NiceTreeDecomposition& ntd, const AshgInstance& instance);

/// Underlying graph closed under distance-2 adjacency. New adjacencies are
/// realized as zero-weight arc pairs, so every utility is unchanged.
AshgInstance square_graph(const AshgInstance& instance);

struct SquaredDecomposition {
  AshgInstance instance;
  TreeDecomposition decomposition;
};

/// The square graph together with the decomposition obtained by adding to
/// each bag the neighbors of its vertices. Throws std::invalid_argument if
/// `td` is not valid for `instance`.
SquaredDecomposition square_augment(const AshgInstance& instance, const TreeDecomposition& td);

}  // namespace ashg
