#include "ashg/game.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>

namespace ashg {

namespace {

constexpr Weight kWeightGuard = std::numeric_limits<Weight>::max() / 4;

Weight abs_weight(Weight w) {
  if (w == std::numeric_limits<Weight>::min()) {
    throw std::invalid_argument("arc weight out of range");
  }
  return w < 0 ? -w : w;
}

}  // namespace

AshgInstance::AshgInstance(std::size_t vertex_count, std::vector<Arc> arcs)
    : vertex_count_(vertex_count), arcs_(std::move(arcs)) {
  if (vertex_count_ > std::numeric_limits<Vertex>::max()) {
    throw std::invalid_argument("too many vertices");
  }
  std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const Arc& a = arcs_[i];
    if (a.from >= vertex_count_ || a.to >= vertex_count_) {
      throw std::invalid_argument("arc endpoint out of range: (" + std::to_string(a.from) + ", " +
                                  std::to_string(a.to) + ")");
    }
    if (a.from == a.to) {
      throw std::invalid_argument("self-arc on vertex " + std::to_string(a.from));
    }
    if (i > 0 && arcs_[i - 1].from == a.from && arcs_[i - 1].to == a.to) {
      throw std::invalid_argument("duplicate arc (" + std::to_string(a.from) + ", " +
                                  std::to_string(a.to) + ")");
    }
    max_abs_weight_ = std::max(max_abs_weight_, abs_weight(a.weight));
  }
  if (vertex_count_ > 0 &&
      max_abs_weight_ > kWeightGuard / static_cast<Weight>(vertex_count_)) {
    throw std::invalid_argument("n * W exceeds the utility arithmetic range");
  }

  out_offsets_.assign(vertex_count_ + 1, 0);
  for (const Arc& a : arcs_) ++out_offsets_[a.from + 1];
  for (std::size_t v = 0; v < vertex_count_; ++v) out_offsets_[v + 1] += out_offsets_[v];

  std::vector<std::vector<Vertex>> adjacency(vertex_count_);
  for (const Arc& a : arcs_) {
    adjacency[a.from].push_back(a.to);
    adjacency[a.to].push_back(a.from);
  }
  neighbor_offsets_.assign(vertex_count_ + 1, 0);
  for (std::size_t v = 0; v < vertex_count_; ++v) {
    auto& list = adjacency[v];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    max_degree_ = std::max(max_degree_, list.size());
    neighbor_offsets_[v + 1] = neighbor_offsets_[v] + list.size();
    neighbor_list_.insert(neighbor_list_.end(), list.begin(), list.end());
  }
}

std::span<const Arc> AshgInstance::out_arcs(Vertex v) const {
  if (v >= vertex_count_) throw std::out_of_range("unknown vertex " + std::to_string(v));
  return std::span<const Arc>(arcs_).subspan(out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]);
}

std::span<const Vertex> AshgInstance::neighbors(Vertex v) const {
  if (v >= vertex_count_) throw std::out_of_range("unknown vertex " + std::to_string(v));
  return std::span<const Vertex>(neighbor_list_)
      .subspan(neighbor_offsets_[v], neighbor_offsets_[v + 1] - neighbor_offsets_[v]);
}

bool AshgInstance::adjacent(Vertex u, Vertex v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<Weight> AshgInstance::arc_weight(Vertex u, Vertex v) const {
  auto out = out_arcs(u);
  auto it = std::lower_bound(out.begin(), out.end(), v,
                             [](const Arc& a, Vertex x) { return a.to < x; });
  if (it != out.end() && it->to == v) return it->weight;
  return std::nullopt;
}

Weight AshgInstance::utility_bound() const {
  return static_cast<Weight>(vertex_count_) * max_abs_weight_;
}

// ---------------------------------------------------------------------------

Partition::Partition(std::span<const std::uint32_t> labels) : coalition_of_(labels.size()) {
  std::unordered_map<std::uint32_t, CoalitionId> renumber;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = renumber.try_emplace(labels[v], static_cast<CoalitionId>(renumber.size()));
    coalition_of_[v] = it->second;
  }
  coalition_count_ = renumber.size();
}

Partition Partition::from_coalitions(std::size_t vertex_count,
                                     const std::vector<std::vector<Vertex>>& coalitions) {
  constexpr auto kUnassigned = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> labels(vertex_count, kUnassigned);
  for (std::size_t c = 0; c < coalitions.size(); ++c) {
    for (Vertex v : coalitions[c]) {
      if (v >= vertex_count) {
        throw std::invalid_argument("coalition member " + std::to_string(v) + " out of range");
      }
      if (labels[v] != kUnassigned) {
        throw std::invalid_argument("vertex " + std::to_string(v) + " in two coalitions");
      }
      labels[v] = static_cast<std::uint32_t>(c);
    }
  }
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (labels[v] == kUnassigned) {
      throw std::invalid_argument("vertex " + std::to_string(v) + " not assigned");
    }
  }
  return Partition(labels);
}

Partition Partition::singletons(std::size_t vertex_count) {
  std::vector<std::uint32_t> labels(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) labels[v] = static_cast<std::uint32_t>(v);
  return Partition(labels);
}

Partition Partition::grand_coalition(std::size_t vertex_count) {
  return Partition(std::vector<std::uint32_t>(vertex_count, 0));
}

std::vector<Vertex> Partition::members(CoalitionId c) const {
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < coalition_of_.size(); ++v) {
    if (coalition_of_[v] == c) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

std::vector<std::vector<Vertex>> Partition::coalitions() const {
  std::vector<std::vector<Vertex>> out(coalition_count_);
  for (std::size_t v = 0; v < coalition_of_.size(); ++v) {
    out[coalition_of_[v]].push_back(static_cast<Vertex>(v));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace detail {

void require_cover(const AshgInstance& instance, const Partition& partition) {
  if (partition.vertex_count() != instance.vertex_count()) {
    throw std::invalid_argument("partition covers " + std::to_string(partition.vertex_count()) +
                                " vertices, instance has " +
                                std::to_string(instance.vertex_count()));
  }
}

bool labels_nash_stable(const AshgInstance& instance, std::span<const CoalitionId> labels,
                        std::span<Weight> scratch) {
  bool stable = true;
  for (Vertex v = 0; v < labels.size() && stable; ++v) {
    auto out = instance.out_arcs(v);
    for (const Arc& a : out) scratch[labels[a.to]] += a.weight;
    const Weight own = scratch[labels[v]];
    if (own < 0) stable = false;
    for (const Arc& a : out) {
      if (scratch[labels[a.to]] > own) stable = false;
    }
    for (const Arc& a : out) scratch[labels[a.to]] = 0;
  }
  return stable;
}

std::optional<CoalitionId> first_disconnected(const AshgInstance& instance,
                                              std::span<const CoalitionId> labels,
                                              std::size_t coalition_count,
                                              std::vector<Vertex>& stack,
                                              std::vector<std::uint8_t>& seen) {
  const std::size_t n = labels.size();
  seen.assign(n + coalition_count, 0);
  // seen[0, n) marks vertices, seen[n, n + count) marks coalitions already entered.
  for (Vertex start = 0; start < n; ++start) {
    if (seen[start]) continue;
    if (seen[n + labels[start]]) return labels[start];
    seen[n + labels[start]] = 1;
    seen[start] = 1;
    stack.assign(1, start);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex u : instance.neighbors(v)) {
        if (!seen[u] && labels[u] == labels[v]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

Weight utility(const AshgInstance& instance, const Partition& partition, Vertex v) {
  if (!instance.contains(v)) throw std::out_of_range("unknown vertex " + std::to_string(v));
  detail::require_cover(instance, partition);
  Weight total = 0;
  const CoalitionId own = partition.coalition_of(v);
  for (const Arc& a : instance.out_arcs(v)) {
    if (partition.coalition_of(a.to) == own) total += a.weight;
  }
  return total;
}

Weight utility_toward(const AshgInstance& instance, Vertex v, std::span<const Vertex> coalition) {
  if (!instance.contains(v)) throw std::out_of_range("unknown vertex " + std::to_string(v));
  Weight total = 0;
  for (Vertex u : coalition) {
    if (!instance.contains(u)) throw std::out_of_range("unknown vertex " + std::to_string(u));
    if (u != v) total += instance.weight(v, u);
  }
  return total;
}

namespace {

std::vector<std::size_t> coalition_sizes(std::span<const CoalitionId> labels, std::size_t count) {
  std::vector<std::size_t> sizes(count, 0);
  for (CoalitionId c : labels) ++sizes[c];
  return sizes;
}

/// Best strictly improving deviation of v, or nullopt. `payoff` is scratch
/// indexed by coalition id and is left zeroed.
std::optional<DeviationWitness> best_deviation(const AshgInstance& instance,
                                               std::span<const CoalitionId> labels,
                                               std::span<const std::size_t> sizes, Vertex v,
                                               std::vector<Weight>& payoff,
                                               bool first_found = false) {
  auto out = instance.out_arcs(v);
  for (const Arc& a : out) payoff[labels[a.to]] += a.weight;
  const CoalitionId own_id = labels[v];
  const Weight own = payoff[own_id];

  std::optional<DeviationWitness> best;
  auto consider = [&](std::optional<CoalitionId> target, Weight value) {
    if (value <= own) return;
    if (best && first_found) return;
    if (!best || value > best->target_utility ||
        (value == best->target_utility && target && (!best->target || *target < *best->target))) {
      best = DeviationWitness{v, own, target, value};
    }
  };

  std::vector<CoalitionId> targets;
  for (const Arc& a : out) {
    if (labels[a.to] != own_id) targets.push_back(labels[a.to]);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (CoalitionId c : targets) consider(c, payoff[c]);

  // Leaving for a singleton only changes anything if v is not alone already.
  if (sizes[own_id] > 1) consider(std::nullopt, 0);

  for (const Arc& a : out) payoff[labels[a.to]] = 0;
  return best;
}

}  // namespace

StabilityReport is_nash_stable(const AshgInstance& instance, const Partition& partition) {
  detail::require_cover(instance, partition);
  std::vector<Weight> payoff(partition.coalition_count() + 1, 0);
  const auto sizes = coalition_sizes(partition.labels(), partition.coalition_count());
  for (Vertex v = 0; v < instance.vertex_count(); ++v) {
    if (auto dev = best_deviation(instance, partition.labels(), sizes, v, payoff)) {
      return StabilityReport{false, dev};
    }
  }
  return StabilityReport{true, std::nullopt};
}

ConnectivityReport is_connected_partition(const AshgInstance& instance,
                                          const Partition& partition) {
  detail::require_cover(instance, partition);
  std::vector<Vertex> stack;
  std::vector<std::uint8_t> seen;
  auto offender = detail::first_disconnected(instance, partition.labels(),
                                             partition.coalition_count(), stack, seen);
  return ConnectivityReport{!offender.has_value(), offender};
}

std::optional<Partition> better_response_dynamics(const AshgInstance& instance,
                                                  std::size_t max_steps,
                                                  DynamicsSchedule schedule) {
  const std::size_t n = instance.vertex_count();
  Partition current = Partition::singletons(n);
  std::vector<CoalitionId> labels(current.labels().begin(), current.labels().end());
  std::vector<Weight> payoff(n + 1, 0);
  const bool first_found = schedule == DynamicsSchedule::kFirstFound;

  for (std::size_t step = 0;; ++step) {
    const auto sizes = coalition_sizes(labels, n);
    std::optional<DeviationWitness> move;
    for (Vertex v = 0; v < n && !move; ++v) {
      move = best_deviation(instance, labels, sizes, v, payoff, first_found);
    }
    if (!move) return Partition(labels);
    if (step == max_steps) return std::nullopt;
    // A fresh label n is never in use; normalization compacts it again.
    labels[move->vertex] = move->target ? *move->target : static_cast<CoalitionId>(n);
    Partition normalized(labels);
    labels.assign(normalized.labels().begin(), normalized.labels().end());
  }
}

}  // namespace ashg
