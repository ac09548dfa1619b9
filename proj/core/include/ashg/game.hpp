#pragma once

// Additively separable hedonic games: instances, partitions, utilities and
// the ground-truth stability verifiers every solver is checked against.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ashg {

/// Agents are dense indices 0..n-1. Files use 1-based ids.
using Vertex = std::uint32_t;

/// Arc weights and utilities. Instances guarantee n * W <= max / 4.
using Weight = std::int64_t;

using CoalitionId = std::uint32_t;

struct Arc {
  Vertex from = 0;
  Vertex to = 0;
  Weight weight = 0;

  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// A weighted digraph of agents. Immutable once built.
///
/// Zero-weight arcs are kept: they contribute nothing to utilities but they
/// are edges of the underlying undirected graph, so they affect degree and
/// connectivity.
class AshgInstance {
 public:
  AshgInstance() = default;

  /// Throws std::invalid_argument on self-arcs, duplicate arcs, endpoints out
  /// of range, or when n * W could overflow utility arithmetic.
  AshgInstance(std::size_t vertex_count, std::vector<Arc> arcs);

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t arc_count() const { return arcs_.size(); }

  /// All arcs sorted by (from, to).
  std::span<const Arc> arcs() const { return arcs_; }

  /// Out-arcs of v sorted by head.
  std::span<const Arc> out_arcs(Vertex v) const;

  /// Neighbors of v in the underlying undirected graph, ascending.
  std::span<const Vertex> neighbors(Vertex v) const;

  std::size_t degree(Vertex v) const { return neighbors(v).size(); }
  bool adjacent(Vertex u, Vertex v) const;

  /// Weight of arc (u, v), or nullopt if there is no such arc.
  std::optional<Weight> arc_weight(Vertex u, Vertex v) const;

  /// Weight of arc (u, v), or 0 if there is no such arc.
  Weight weight(Vertex u, Vertex v) const { return arc_weight(u, v).value_or(0); }

  /// Maximum degree of the underlying graph (Delta).
  std::size_t max_degree() const { return max_degree_; }

  /// Largest absolute arc weight (W).
  Weight max_abs_weight() const { return max_abs_weight_; }

  /// n * W, an upper bound on |utility| of any agent in any coalition.
  Weight utility_bound() const;

  bool contains(Vertex v) const { return v < vertex_count_; }

  friend bool operator==(const AshgInstance& a, const AshgInstance& b) {
    return a.vertex_count_ == b.vertex_count_ && a.arcs_ == b.arcs_;
  }

 private:
  std::size_t vertex_count_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<Vertex> neighbor_list_;
  std::vector<std::size_t> neighbor_offsets_{0};
  std::size_t max_degree_ = 0;
  Weight max_abs_weight_ = 0;
};

/// An assignment of every agent to exactly one coalition.
///
/// Coalition ids are normalized: dense, numbered 0.. in order of the first
/// vertex that uses them, so two partitions with the same classes compare
/// equal.
class Partition {
 public:
  Partition() = default;

  /// Labels may be arbitrary integers; they are renumbered.
  explicit Partition(std::span<const std::uint32_t> labels);
  explicit Partition(const std::vector<std::uint32_t>& labels)
      : Partition(std::span<const std::uint32_t>(labels)) {}

  /// Throws std::invalid_argument unless the coalitions cover 0..n-1 exactly
  /// once. Empty coalitions are dropped.
  static Partition from_coalitions(std::size_t vertex_count,
                                   const std::vector<std::vector<Vertex>>& coalitions);

  static Partition singletons(std::size_t vertex_count);
  static Partition grand_coalition(std::size_t vertex_count);

  std::size_t vertex_count() const { return coalition_of_.size(); }
  std::size_t coalition_count() const { return coalition_count_; }

  CoalitionId coalition_of(Vertex v) const { return coalition_of_.at(v); }
  std::span<const CoalitionId> labels() const { return coalition_of_; }

  std::vector<Vertex> members(CoalitionId c) const;
  std::vector<std::vector<Vertex>> coalitions() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<CoalitionId> coalition_of_;
  std::size_t coalition_count_ = 0;
};

/// A machine-checkable instability certificate: `vertex` strictly gains by
/// moving to `target` (an existing coalition) or, when `target` is empty, by
/// leaving for a singleton.
struct DeviationWitness {
  Vertex vertex = 0;
  Weight current_utility = 0;
  std::optional<CoalitionId> target;
  Weight target_utility = 0;

  bool to_singleton() const { return !target.has_value(); }
  friend bool operator==(const DeviationWitness&, const DeviationWitness&) = default;
};

struct StabilityReport {
  bool stable = true;
  std::optional<DeviationWitness> witness;

  explicit operator bool() const { return stable; }
};

struct ConnectivityReport {
  bool connected = true;
  std::optional<CoalitionId> offender;

  explicit operator bool() const { return connected; }
};

/// Sum of v's out-arc weights towards the other members of its coalition.
Weight utility(const AshgInstance& instance, const Partition& partition, Vertex v);

/// Sum of v's out-arc weights towards `coalition \ {v}`.
Weight utility_toward(const AshgInstance& instance, Vertex v,
                      std::span<const Vertex> coalition);

/// Nash stability: every agent has non-negative utility and no other
/// coalition of the partition offers strictly more. On failure the witness
/// names the lowest unstable vertex and its best deviation (ties go to the
/// lowest coalition id; the singleton ranks after all coalitions).
StabilityReport is_nash_stable(const AshgInstance& instance, const Partition& partition);

/// Every coalition induces a connected subgraph of the underlying graph.
ConnectivityReport is_connected_partition(const AshgInstance& instance,
                                          const Partition& partition);

enum class DynamicsSchedule {
  kFirstFound,       ///< first improving target in id order
  kBestImprovement,  ///< highest-payoff target, ties to the lowest id
};

/// Better-response dynamics from the all-singletons partition. At each step
/// the lowest-id vertex with an improving deviation moves. Returns the
/// partition if it becomes Nash stable within `max_steps` moves.
std::optional<Partition> better_response_dynamics(
    const AshgInstance& instance, std::size_t max_steps,
    DynamicsSchedule schedule = DynamicsSchedule::kBestImprovement);

namespace detail {

/// Throws std::invalid_argument if the partition does not match the instance.
void require_cover(const AshgInstance& instance, const Partition& partition);

/// Stability test over raw, already dense labels. `scratch` must have at least
/// `coalition_count` entries; it is left zeroed.
bool labels_nash_stable(const AshgInstance& instance, std::span<const CoalitionId> labels,
                        std::span<Weight> scratch);

/// First coalition (in scan order) that is not connected, if any.
std::optional<CoalitionId> first_disconnected(const AshgInstance& instance,
                                              std::span<const CoalitionId> labels,
                                              std::size_t coalition_count,
                                              std::vector<Vertex>& stack,
                                              std::vector<std::uint8_t>& seen);

}  // namespace detail

}  // namespace ashg
