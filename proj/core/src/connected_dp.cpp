#include "ashg/connected_dp.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <string>
#include <unordered_map>

#include "ashg/detail/dp_support.hpp"

namespace ashg {

std::size_t ConnectedSignature::class_count() const { return detail::class_count(pi1); }

std::optional<Weight> ConnectedSignature::cross_utility(std::size_t x, std::size_t y) const {
  if (pi1[x] == pi1[y]) return std::nullopt;
  return utility_toward_class(x, pi1[y]);
}

std::size_t ConnectedSignatureHash::operator()(const ConnectedSignature& s) const noexcept {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) { h = (h ^ v) * 1099511628211ull; };
  for (auto l : s.pi1) mix(l);
  mix(0x100);
  for (auto l : s.pi2) mix(l);
  for (auto w : s.utility) mix(static_cast<std::uint64_t>(w));
  for (auto w : s.best_complete) mix(static_cast<std::uint64_t>(w) + 0x9e3779b97f4a7c15ull);
  return h;
}

bool ConnectedTable::contains(const ConnectedSignature& s) const {
  return std::find(signatures.begin(), signatures.end(), s) != signatures.end();
}

bool survives_forget(const ConnectedSignature& s, std::size_t pos) {
  const std::size_t classes = s.class_count();
  const auto own_class = s.pi1[pos];
  const Weight own = s.utility[pos * classes + own_class];
  if (own < 0 || s.best_complete[pos] > own) return false;
  for (std::size_t c = 0; c < classes; ++c) {
    if (s.utility[pos * classes + c] > own) return false;
  }
  bool shares_pi1 = false, shares_pi2 = false;
  for (std::size_t x = 0; x < s.bag_size(); ++x) {
    if (x == pos) continue;
    if (s.pi1[x] == own_class) shares_pi1 = true;
    if (s.pi2[x] == s.pi2[pos]) shares_pi2 = true;
  }
  return !(shares_pi1 && !shares_pi2);
}

namespace {

/// Brings a signature with arbitrary pi1/pi2 labels into canonical form.
/// `raw_classes` is the column count of `s.utility` before renumbering.
void canonicalize(ConnectedSignature& s, std::size_t raw_classes) {
  const auto map = detail::canonicalize(s.pi1);
  detail::canonicalize(s.pi2);
  const std::size_t rows = s.pi1.size();
  const std::size_t classes = detail::class_count(s.pi1);
  std::vector<Weight> utility(rows * classes, 0);
  for (std::size_t x = 0; x < rows; ++x) {
    for (std::size_t l = 0; l < map.size() && l < raw_classes; ++l) {
      if (map[l] != 0xff) utility[x * classes + map[l]] = s.utility[x * raw_classes + l];
    }
  }
  s.utility = std::move(utility);
}

/// Replaces every occurrence of label `from` by `to`.
void merge_label(std::vector<std::uint8_t>& labels, std::uint8_t from, std::uint8_t to) {
  if (from == to) return;
  for (auto& l : labels) {
    if (l == from) l = to;
  }
}

struct VecHash {
  std::size_t operator()(const std::vector<std::uint8_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto l : v) h = (h ^ l) * 1099511628211ull;
    return h;
  }
};

}  // namespace

ConnectedNashSolver::ConnectedNashSolver(const AshgInstance& instance,
                                         const NiceTreeDecomposition& ntd, SolverOptions options)
    : instance_(instance), ntd_(ntd), options_(options), tables_(ntd.size()) {
  if (auto report = validate_nice(ntd, instance); !report) {
    throw std::invalid_argument("invalid nice decomposition: " + report.violations.front());
  }
  if (ntd.max_bag_size() > 255) {
    throw ResourceLimitError("bag of size " + std::to_string(ntd.max_bag_size()) + " exceeds 255");
  }
}

std::optional<Partition> ConnectedNashSolver::solve() {
  if (ran_) return answer_;
  detail::run_bottom_up(ntd_, options_.workers, [this](std::size_t i) { process(i); });
  ran_ = true;

  stats_.nodes = ntd_.size();
  for (const auto& t : tables_) {
    stats_.peak_table_size = std::max(stats_.peak_table_size, t.signatures.size());
    stats_.total_signatures += t.signatures.size();
  }

  const auto& root = tables_[ntd_.root()];
  if (root.signatures.empty()) return answer_;

  std::vector<std::uint32_t> pick(ntd_.size(), 0);
  std::vector<detail::Labels> chosen(ntd_.size());
  for (std::size_t i = ntd_.size(); i-- > 0;) {
    const auto& node = ntd_.node(i);
    chosen[i] = tables_[i].signatures[pick[i]].pi1;
    const auto [first, second] = tables_[i].derivations[pick[i]];
    if (!node.children.empty()) pick[node.children[0]] = first;
    if (node.children.size() == 2) pick[node.children[1]] = second;
  }
  std::uint32_t next = 0;
  auto labels = detail::assign_labels_top_down(
      ntd_, chosen, instance_.vertex_count(), [&next](const std::vector<std::uint32_t>&) { return next++; });
  answer_ = Partition(labels);
  return answer_;
}

void ConnectedNashSolver::process(std::size_t i) {
  const auto& node = ntd_.node(i);
  const auto& bag = node.bag;
  ConnectedTable& out = tables_[i];
  std::unordered_map<ConnectedSignature, std::uint32_t, ConnectedSignatureHash> index;
  [[maybe_unused]] const Weight bound = instance_.utility_bound();

  auto insert = [&](ConnectedSignature&& s, std::uint32_t first, std::uint32_t second) {
#ifndef NDEBUG
    for (auto w : s.utility) assert(w >= -bound && w <= bound);
    for (auto w : s.best_complete) assert(w >= 0 && w <= bound);
#endif
    auto [it, fresh] = index.try_emplace(std::move(s), static_cast<std::uint32_t>(out.signatures.size()));
    if (!fresh) return;
    out.signatures.push_back(it->first);
    out.derivations.emplace_back(first, second);
    if (out.signatures.size() > options_.max_signatures_per_node) {
      throw ResourceLimitError("connected table at node " + std::to_string(i) + " exceeds " +
                               std::to_string(options_.max_signatures_per_node) + " signatures");
    }
  };

  switch (node.kind) {
    case NiceNodeKind::kLeaf:
      insert(ConnectedSignature{}, 0, 0);
      break;

    case NiceNodeKind::kIntroduce: {
      const Vertex v = node.vertex;
      const auto p = detail::position_in(bag, v);
      const std::size_t m = bag.size();
      std::vector<Weight> to_v(m, 0), from_v(m, 0);
      std::vector<std::uint8_t> adjacent(m, 0);
      for (std::size_t x = 0; x < m; ++x) {
        if (x == p) continue;
        to_v[x] = instance_.weight(bag[x], v);
        from_v[x] = instance_.weight(v, bag[x]);
        adjacent[x] = instance_.adjacent(v, bag[x]);
      }
      const auto& child = tables_[node.children[0]];
      for (std::uint32_t si = 0; si < child.signatures.size(); ++si) {
        const auto& base = child.signatures[si];
        const std::size_t k = base.class_count();
        for (std::size_t c = 0; c <= k; ++c) {
          const std::size_t raw = c == k ? k + 1 : k;
          ConnectedSignature s;
          s.pi1 = base.pi1;
          s.pi1.insert(s.pi1.begin() + static_cast<std::ptrdiff_t>(p), static_cast<std::uint8_t>(c));
          s.pi2 = base.pi2;
          const auto fresh = static_cast<std::uint8_t>(detail::class_count(base.pi2));
          s.pi2.insert(s.pi2.begin() + static_cast<std::ptrdiff_t>(p), fresh);
          s.best_complete = base.best_complete;
          s.best_complete.insert(s.best_complete.begin() + static_cast<std::ptrdiff_t>(p), 0);
          s.utility.assign(m * raw, 0);
          for (std::size_t x = 0; x < m; ++x) {
            if (x == p) continue;
            const std::size_t old = x < p ? x : x - 1;
            for (std::size_t l = 0; l < k; ++l) s.utility[x * raw + l] = base.utility[old * k + l];
            s.utility[x * raw + c] += to_v[x];
            s.utility[p * raw + s.pi1[x]] += from_v[x];
          }
          for (std::size_t x = 0; x < m; ++x) {
            if (x != p && s.pi1[x] == c && adjacent[x]) merge_label(s.pi2, s.pi2[x], s.pi2[p]);
          }
          canonicalize(s, raw);
          insert(std::move(s), si, 0);
        }
      }
      break;
    }

    case NiceNodeKind::kForget: {
      const auto& child_bag = ntd_.node(node.children[0]).bag;
      const auto p = detail::position_in(child_bag, node.vertex);
      const std::size_t m = child_bag.size();
      const auto& child = tables_[node.children[0]];
      for (std::uint32_t si = 0; si < child.signatures.size(); ++si) {
        const auto& base = child.signatures[si];
        if (!survives_forget(base, p)) continue;
        const std::size_t k = base.class_count();
        const auto cls = base.pi1[p];
        bool alone = true;
        for (std::size_t x = 0; x < m; ++x) {
          if (x != p && base.pi1[x] == cls) alone = false;
        }
        ConnectedSignature s;
        s.pi1 = base.pi1;
        s.pi2 = base.pi2;
        s.best_complete = base.best_complete;
        if (alone) {
          // The coalition is complete: fold its payoff into everyone's best.
          for (std::size_t x = 0; x < m; ++x) {
            s.best_complete[x] = std::max(s.best_complete[x], base.utility[x * k + cls]);
          }
        }
        s.pi1.erase(s.pi1.begin() + static_cast<std::ptrdiff_t>(p));
        s.pi2.erase(s.pi2.begin() + static_cast<std::ptrdiff_t>(p));
        s.best_complete.erase(s.best_complete.begin() + static_cast<std::ptrdiff_t>(p));
        s.utility = base.utility;
        s.utility.erase(s.utility.begin() + static_cast<std::ptrdiff_t>(p * k),
                        s.utility.begin() + static_cast<std::ptrdiff_t>((p + 1) * k));
        canonicalize(s, k);
        insert(std::move(s), si, 0);
      }
      break;
    }

    case NiceNodeKind::kJoin: {
      const auto& left = tables_[node.children[0]];
      const auto& right = tables_[node.children[1]];
      const std::size_t m = bag.size();
      std::vector<Weight> inner(m * m, 0);
      for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y = 0; y < m; ++y) {
          if (x != y) inner[x * m + y] = instance_.weight(bag[x], bag[y]);
        }
      }
      std::unordered_map<std::vector<std::uint8_t>, std::vector<std::uint32_t>, VecHash> by_pi1;
      for (std::uint32_t li = 0; li < left.signatures.size(); ++li) {
        by_pi1[left.signatures[li].pi1].push_back(li);
      }
      std::vector<std::uint8_t> root(m);
      for (std::uint32_t ri = 0; ri < right.signatures.size(); ++ri) {
        const auto& r = right.signatures[ri];
        auto it = by_pi1.find(r.pi1);
        if (it == by_pi1.end()) continue;
        const std::size_t k = r.class_count();
        // Arcs inside the bag are counted by both children.
        std::vector<Weight> shared(m * k, 0);
        for (std::size_t x = 0; x < m; ++x) {
          for (std::size_t y = 0; y < m; ++y) shared[x * k + r.pi1[y]] += inner[x * m + y];
        }
        for (auto li : it->second) {
          const auto& l = left.signatures[li];
          ConnectedSignature s;
          s.pi1 = r.pi1;
          // pi2: transitive closure of both children's connectivity.
          s.pi2 = l.pi2;
          for (std::size_t x = 0; x < m; ++x) {
            for (std::size_t y = x + 1; y < m; ++y) {
              if (r.pi2[x] == r.pi2[y]) merge_label(s.pi2, s.pi2[y], s.pi2[x]);
            }
          }
          s.utility.resize(m * k);
          for (std::size_t e = 0; e < m * k; ++e) s.utility[e] = l.utility[e] + r.utility[e] - shared[e];
          s.best_complete.resize(m);
          for (std::size_t x = 0; x < m; ++x) {
            s.best_complete[x] = std::max(l.best_complete[x], r.best_complete[x]);
          }
          detail::canonicalize(s.pi2);
          insert(std::move(s), li, ri);
        }
      }
      break;
    }
  }
}

std::optional<Partition> solve_connected_nash(const AshgInstance& instance,
                                              const NiceTreeDecomposition& ntd,
                                              const SolverOptions& options) {
  ConnectedNashSolver solver(instance, ntd, options);
  return solver.solve();
}

std::optional<Partition> solve_connected_nash(const AshgInstance& instance,
                                              const TreeDecomposition& td,
                                              const SolverOptions& options) {
  if (auto report = validate(td, instance); !report) {
    throw std::invalid_argument("invalid decomposition: " + report.violations.front());
  }
  const auto ntd = make_nice(td);
  return solve_connected_nash(instance, ntd, options);
}

ConnectedSignature signature_of(const AshgInstance& instance, const NiceTreeDecomposition& ntd,
                                std::size_t node, const Partition& partition) {
  if (node >= ntd.size()) throw std::out_of_range("unknown node " + std::to_string(node));
  detail::require_cover(instance, partition);
  const std::size_t n = instance.vertex_count();

  std::vector<std::uint8_t> below(n, 0);
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    for (Vertex v : ntd.node(i).bag) below[v] = 1;
    for (auto c : ntd.node(i).children) stack.push_back(c);
  }
  const auto& bag = ntd.node(node).bag;
  const std::size_t m = bag.size();
  std::vector<std::uint8_t> in_bag(n, 0);
  for (Vertex v : bag) in_bag[v] = 1;

  ConnectedSignature s;
  s.pi1.resize(m);
  s.pi2.resize(m);
  // Raw labels: coalition ids (mod 256 is unsafe, so map through bag order).
  std::vector<CoalitionId> bag_coalitions;
  for (std::size_t x = 0; x < m; ++x) {
    const auto c = partition.coalition_of(bag[x]);
    auto it = std::find(bag_coalitions.begin(), bag_coalitions.end(), c);
    s.pi1[x] = static_cast<std::uint8_t>(it - bag_coalitions.begin());
    if (it == bag_coalitions.end()) bag_coalitions.push_back(c);
  }

  // pi2: components of G[B_down] restricted to each coalition.
  std::vector<std::int32_t> component(n, -1);
  std::int32_t next = 0;
  for (std::size_t x = 0; x < m; ++x) {
    const Vertex start = bag[x];
    if (component[start] < 0) {
      component[start] = next;
      std::vector<Vertex> todo{start};
      while (!todo.empty()) {
        Vertex v = todo.back();
        todo.pop_back();
        for (Vertex u : instance.neighbors(v)) {
          if (below[u] && component[u] < 0 && partition.coalition_of(u) == partition.coalition_of(v)) {
            component[u] = next;
            todo.push_back(u);
          }
        }
      }
      ++next;
    }
  }
  std::vector<std::int32_t> seen_components;
  for (std::size_t x = 0; x < m; ++x) {
    auto c = component[bag[x]];
    auto it = std::find(seen_components.begin(), seen_components.end(), c);
    s.pi2[x] = static_cast<std::uint8_t>(it - seen_components.begin());
    if (it == seen_components.end()) seen_components.push_back(c);
  }

  const std::size_t k = bag_coalitions.size();
  s.utility.assign(m * k, 0);
  for (std::size_t x = 0; x < m; ++x) {
    for (const Arc& a : instance.out_arcs(bag[x])) {
      if (!below[a.to]) continue;
      const auto c = partition.coalition_of(a.to);
      auto it = std::find(bag_coalitions.begin(), bag_coalitions.end(), c);
      if (it != bag_coalitions.end()) s.utility[x * k + static_cast<std::size_t>(it - bag_coalitions.begin())] += a.weight;
    }
  }

  // Coalitions entirely inside B_down \ B.
  std::vector<std::uint8_t> complete(partition.coalition_count(), 1);
  for (Vertex v = 0; v < n; ++v) {
    if (!below[v] || in_bag[v]) complete[partition.coalition_of(v)] = 0;
  }
  s.best_complete.assign(m, 0);
  std::vector<Weight> payoff(partition.coalition_count(), 0);
  for (std::size_t x = 0; x < m; ++x) {
    for (const Arc& a : instance.out_arcs(bag[x])) payoff[partition.coalition_of(a.to)] += a.weight;
    for (const Arc& a : instance.out_arcs(bag[x])) {
      const auto c = partition.coalition_of(a.to);
      if (complete[c]) s.best_complete[x] = std::max(s.best_complete[x], payoff[c]);
    }
    for (const Arc& a : instance.out_arcs(bag[x])) payoff[partition.coalition_of(a.to)] = 0;
  }

  canonicalize(s, k);
  return s;
}

}  // namespace ashg
