#pragma once

// Machinery shared by the two tree-decomposition dynamic programs.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <future>
#include <span>
#include <vector>

#include "ashg/tree_decomposition.hpp"

namespace ashg::detail {

/// Bag-local class labels, one per bag position.
using Labels = std::vector<std::uint8_t>;

/// Renumbers labels by first occurrence (restricted-growth form) in place and
/// returns the old-to-new map (size = 1 + max old label; unused entries 0xff).
inline std::vector<std::uint8_t> canonicalize(Labels& labels) {
  std::uint8_t top = 0;
  for (auto l : labels) top = std::max<std::uint8_t>(top, l);
  std::vector<std::uint8_t> map(labels.empty() ? 0 : top + 1u, 0xff);
  std::uint8_t next = 0;
  for (auto& l : labels) {
    if (map[l] == 0xff) map[l] = next++;
    l = map[l];
  }
  return map;
}

inline std::size_t class_count(std::span<const std::uint8_t> labels) {
  std::size_t k = 0;
  for (auto l : labels) k = std::max<std::size_t>(k, l + 1u);
  return k;
}

inline std::size_t position_in(const std::vector<Vertex>& bag, Vertex v) {
  return static_cast<std::size_t>(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
}

/// Back-pointer of a table entry into its child table(s).
struct Derivation {
  std::uint32_t first = 0;
  std::uint32_t second = 0;
};

/// Calls `process(node)` for every node such that children are processed
/// before their parent. With workers > 1, the two subtrees of a join may run
/// on different threads; `process` must only touch the node's own state.
template <class Process>
void run_bottom_up(const NiceTreeDecomposition& ntd, unsigned workers, Process&& process) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < ntd.size(); ++i) process(i);
    return;
  }
  std::atomic<unsigned> spare{workers - 1};
  auto visit = [&](auto&& self, std::size_t top) -> void {
    // Walk down the chain of introduce/forget nodes to a leaf or a join.
    std::vector<std::size_t> chain{top};
    while (ntd.node(chain.back()).children.size() == 1) {
      chain.push_back(ntd.node(chain.back()).children.front());
    }
    const auto& bottom = ntd.node(chain.back());
    if (bottom.kind == NiceNodeKind::kJoin) {
      unsigned avail = spare.load();
      bool spawn = false;
      while (avail > 0 && !(spawn = spare.compare_exchange_weak(avail, avail - 1))) {
      }
      if (spawn) {
        auto left = std::async(std::launch::async, [&] { self(self, bottom.children[0]); });
        try {
          self(self, bottom.children[1]);
        } catch (...) {
          left.wait();
          spare.fetch_add(1);
          throw;
        }
        left.get();
        spare.fetch_add(1);
      } else {
        self(self, bottom.children[0]);
        self(self, bottom.children[1]);
      }
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) process(*it);
  };
  visit(visit, ntd.root());
}

/// Assigns final labels to all vertices from one chosen table entry per node.
///
/// `chosen[i]` is the bag labelling picked at node i (consistent along
/// derivations). Going top-down, a vertex receives its label at the node
/// where it is forgotten: it inherits the label of a bag-mate in the same
/// class, otherwise `fresh(taken)` picks a label not in `taken`.
template <class Fresh>
std::vector<std::uint32_t> assign_labels_top_down(const NiceTreeDecomposition& ntd,
                                                  const std::vector<Labels>& chosen,
                                                  std::size_t vertex_count, Fresh&& fresh) {
  constexpr std::uint32_t kUnset = 0xffffffffu;
  std::vector<std::uint32_t> label(vertex_count, kUnset);
  for (std::size_t i = ntd.size(); i-- > 0;) {
    const auto& node = ntd.node(i);
    if (node.kind != NiceNodeKind::kForget) continue;
    const auto& child = ntd.node(node.children[0]);
    const auto& sig = chosen[node.children[0]];
    const auto pos = position_in(child.bag, node.vertex);
    std::vector<std::uint32_t> taken;
    std::uint32_t inherit = kUnset;
    for (std::size_t j = 0; j < child.bag.size(); ++j) {
      if (j == pos) continue;
      const auto other = label[child.bag[j]];
      if (sig[j] == sig[pos]) {
        inherit = other;
      } else {
        taken.push_back(other);
      }
    }
    label[node.vertex] = inherit != kUnset ? inherit : fresh(taken);
  }
  return label;
}

}  // namespace ashg::detail
