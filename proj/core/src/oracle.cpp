#include "ashg/oracle.hpp"

#include <algorithm>
#include <string>

namespace ashg {

PartitionEnumerator::PartitionEnumerator(std::size_t n, std::size_t max_blocks)
    : max_blocks_(max_blocks), labels_(n, 0), prefix_max_(n, 0) {}

std::size_t PartitionEnumerator::blocks() const {
  return labels_.empty() ? 0 : prefix_max_.back() + 1;
}

bool PartitionEnumerator::next() {
  const std::size_t n = labels_.size();
  for (std::size_t i = n; i-- > 1;) {
    const std::uint32_t limit = prefix_max_[i - 1] + 1;
    if (labels_[i] >= limit) continue;
    if (max_blocks_ != 0 && labels_[i] + 1 >= max_blocks_) continue;
    ++labels_[i];
    prefix_max_[i] = std::max(prefix_max_[i - 1], labels_[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      labels_[j] = 0;
      prefix_max_[j] = prefix_max_[i];
    }
    return true;
  }
  return false;
}

namespace {

void check_cap(std::size_t n, const OracleOptions& options) {
  if (n > options.max_vertices) {
    throw ResourceLimitError("oracle limited to " + std::to_string(options.max_vertices) +
                             " vertices, instance has " + std::to_string(n));
  }
}

template <class Accept>
std::optional<std::vector<std::uint32_t>> first_accepted(const AshgInstance& instance, std::size_t max_blocks,
                                                          Accept&& accept) {
  const std::size_t n = instance.vertex_count();
  PartitionEnumerator it(n, max_blocks);
  std::vector<Weight> scratch(n + 1, 0);
  do {
    if (accept(it.labels(), it.blocks(), scratch)) return it.labels();
  } while (it.next());
  return std::nullopt;
}

}  // namespace

std::vector<Partition> enumerate_partitions(std::size_t n, const OracleOptions& options) {
  check_cap(n, options);
  std::vector<Partition> out;
  PartitionEnumerator it(n);
  do {
    out.push_back(it.partition());
  } while (it.next());
  return out;
}

std::optional<Partition> brute_force_nash(const AshgInstance& instance, const OracleOptions& options) {
  check_cap(instance.vertex_count(), options);
  auto found = first_accepted(instance, 0, [&](const auto& labels, std::size_t, std::span<Weight> scratch) {
    return detail::labels_nash_stable(instance, labels, scratch);
  });
  if (!found) return std::nullopt;
  return Partition(*found);
}

std::optional<Partition> brute_force_connected_nash(const AshgInstance& instance,
                                                    const OracleOptions& options) {
  check_cap(instance.vertex_count(), options);
  std::vector<Vertex> stack;
  std::vector<std::uint8_t> seen;
  auto found = first_accepted(instance, 0, [&](const auto& labels, std::size_t blocks, std::span<Weight> scratch) {
    if (detail::first_disconnected(instance, labels, blocks, stack, seen)) return false;
    return detail::labels_nash_stable(instance, labels, scratch);
  });
  if (!found) return std::nullopt;
  return Partition(*found);
}

std::optional<Coloring> brute_force_stable_coloring(const AshgInstance& instance, std::size_t k,
                                                    const OracleOptions& options) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  check_cap(instance.vertex_count(), options);
  auto found = first_accepted(instance, k, [&](const auto& labels, std::size_t, std::span<Weight> scratch) {
    return detail::labels_nash_stable(instance, labels, scratch);
  });
  if (!found) return std::nullopt;
  return Coloring{std::vector<Color>(found->begin(), found->end()), k};
}

}  // namespace ashg
