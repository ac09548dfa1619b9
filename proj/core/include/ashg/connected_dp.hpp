#pragma once

// Connected Nash stability by dynamic programming over a nice tree
// decomposition of the underlying graph. Table entries record, for the
// current bag B and the vertices B_down seen in its subtree:
//
//   pi1            the coalition structure restricted to B
//   pi2            which bag vertices are already connected inside B_down
//                  through their own coalition (refines pi1)
//   utility[x][c]  x's out-weight into the B_down part of pi1 class c; the
//                  own-class entry is x's current utility
//   best_complete  x's best payoff among coalitions that lie entirely in
//                  B_down \ B, floored at 0
//
// Coalitions that have left the bag are complete: connectivity forbids them
// from growing, so their payoffs are final. That is what keeps the state
// space pseudo-polynomial.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ashg/game.hpp"
#include "ashg/solver_options.hpp"
#include "ashg/tree_decomposition.hpp"

namespace ashg {

struct ConnectedSignature {
  /// Restricted-growth labels over the sorted bag.
  std::vector<std::uint8_t> pi1;
  std::vector<std::uint8_t> pi2;
  /// Row-major bag_size x class_count(pi1).
  std::vector<Weight> utility;
  std::vector<Weight> best_complete;

  std::size_t bag_size() const { return pi1.size(); }
  std::size_t class_count() const;

  Weight utility_toward_class(std::size_t x, std::size_t cls) const {
    return utility[x * class_count() + cls];
  }
  Weight own_utility(std::size_t x) const { return utility_toward_class(x, pi1[x]); }
  /// x's payoff for joining y's coalition; nullopt when x and y share a class.
  std::optional<Weight> cross_utility(std::size_t x, std::size_t y) const;

  friend bool operator==(const ConnectedSignature&, const ConnectedSignature&) = default;
};

struct ConnectedSignatureHash {
  std::size_t operator()(const ConnectedSignature& s) const noexcept;
};

/// Whether forgetting the vertex at bag position `pos` keeps this entry:
/// the vertex must be stable (own >= 0, own >= every cross payoff and the
/// best completed payoff) and must not leave a disconnected part of its
/// coalition behind in the bag.
bool survives_forget(const ConnectedSignature& signature, std::size_t pos);

struct ConnectedTable {
  std::vector<ConnectedSignature> signatures;
  /// Child entry indices (second is used by joins only).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> derivations;

  bool contains(const ConnectedSignature& s) const;
};

class ConnectedNashSolver {
 public:
  /// `ntd` must decompose the underlying graph of `instance` (not its square).
  /// Throws std::invalid_argument otherwise.
  ConnectedNashSolver(const AshgInstance& instance, const NiceTreeDecomposition& ntd,
                      SolverOptions options = {});

  /// Runs the DP (once) and returns a connected Nash stable partition, or
  /// nullopt if none exists. Throws ResourceLimitError on budget overflow.
  std::optional<Partition> solve();

  const ConnectedTable& table(std::size_t node) const { return tables_.at(node); }
  const SolverStats& stats() const { return stats_; }

 private:
  void process(std::size_t node);

  const AshgInstance& instance_;
  const NiceTreeDecomposition& ntd_;
  SolverOptions options_;
  std::vector<ConnectedTable> tables_;
  SolverStats stats_;
  bool ran_ = false;
  std::optional<Partition> answer_;
};

std::optional<Partition> solve_connected_nash(const AshgInstance& instance,
                                              const NiceTreeDecomposition& ntd,
                                              const SolverOptions& options = {});

/// Convenience overload: nice form of `td` (validated against `instance`).
std::optional<Partition> solve_connected_nash(const AshgInstance& instance,
                                              const TreeDecomposition& td,
                                              const SolverOptions& options = {});

/// The table entry a full partition induces at `node`, computed directly from
/// the definitions. Reference for testing the DP transitions.
ConnectedSignature signature_of(const AshgInstance& instance, const NiceTreeDecomposition& ntd,
                                std::size_t node, const Partition& partition);

}  // namespace ashg
