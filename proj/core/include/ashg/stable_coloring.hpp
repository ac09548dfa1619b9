#pragma once

// Nash stability through stable colorings: a k-coloring in which each
// vertex's out-weight into its own color class is at least its out-weight
// into any other class and at least zero. Color classes of a stable coloring
// are a Nash stable partition, and with k = (max bag size) * Delta the
// converse holds as well, which lets a bounded-treewidth coloring DP over the
// square graph decide Nash stability.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ashg/game.hpp"
#include "ashg/solver_options.hpp"
#include "ashg/tree_decomposition.hpp"

namespace ashg {

using Color = std::uint32_t;

/// Colors are 0..k-1 (files and reports print them 1-based).
struct Coloring {
  std::vector<Color> color_of;
  std::size_t colors = 0;

  friend bool operator==(const Coloring&, const Coloring&) = default;
};

/// Throws std::invalid_argument if the coloring is not total over the
/// instance or uses a color >= k.
StabilityReport is_stable_coloring(const AshgInstance& instance, const Coloring& coloring);

/// max(1, max_bag_size * max_degree).
std::size_t choose_k(std::size_t max_bag_size, std::size_t max_degree);

/// Nonempty color classes become coalitions.
Partition coloring_to_partition(const Coloring& coloring);

struct ColoringSolution {
  std::optional<Coloring> coloring;
  std::optional<Partition> partition;
  std::size_t colors = 0;
  std::size_t augmented_width = 0;
  SolverStats stats;
};

/// Decides whether a stable k-coloring exists for k = choose_k(td max bag
/// size, Delta), which is equivalent to the existence of a Nash stable
/// partition. Runs over the nice form of the square-augmented decomposition.
///
/// Throws std::invalid_argument if `td` is invalid for `instance`, and
/// ResourceLimitError if a node table outgrows the configured budget.
ColoringSolution solve_stable_coloring(const AshgInstance& instance, const TreeDecomposition& td,
                                       const SolverOptions& options = {});

/// Nash stable partition or nullopt; see solve_stable_coloring.
std::optional<Partition> solve_nash_via_coloring(const AshgInstance& instance,
                                                 const TreeDecomposition& td,
                                                 const SolverOptions& options = {});

}  // namespace ashg
