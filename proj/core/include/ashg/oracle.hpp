#pragma once

// Exhaustive ground truth for small instances.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ashg/game.hpp"
#include "ashg/solver_options.hpp"
#include "ashg/stable_coloring.hpp"

namespace ashg {

/// Walks all set partitions of {0..n-1} as restricted-growth strings in
/// lexicographic order, optionally only those with at most `max_blocks`
/// blocks. Starts at the all-zeros string (the grand coalition).
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(std::size_t n, std::size_t max_blocks = 0);

  const std::vector<std::uint32_t>& labels() const { return labels_; }
  Partition partition() const { return Partition(labels_); }
  std::size_t blocks() const;

  /// Advances to the next string; false once all have been visited.
  bool next();

 private:
  std::size_t max_blocks_;
  std::vector<std::uint32_t> labels_;
  /// prefix_max_[i] = max(labels_[0..i]).
  std::vector<std::uint32_t> prefix_max_;
};

struct OracleOptions {
  std::size_t max_vertices = 12;
};

/// All B(n) partitions in enumeration order. Throws ResourceLimitError when
/// n exceeds the cap.
std::vector<Partition> enumerate_partitions(std::size_t n, const OracleOptions& options = {});

/// First Nash stable partition in enumeration order.
std::optional<Partition> brute_force_nash(const AshgInstance& instance,
                                          const OracleOptions& options = {});

/// First partition that is both connected and Nash stable.
std::optional<Partition> brute_force_connected_nash(const AshgInstance& instance,
                                                    const OracleOptions& options = {});

/// First stable coloring with at most k colors. Colorings are searched up to
/// renaming of colors, which does not affect stability.
std::optional<Coloring> brute_force_stable_coloring(const AshgInstance& instance, std::size_t k,
                                                    const OracleOptions& options = {});

}  // namespace ashg
