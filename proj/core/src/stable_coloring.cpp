#include "ashg/stable_coloring.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "ashg/detail/dp_support.hpp"

namespace ashg {

StabilityReport is_stable_coloring(const AshgInstance& instance, const Coloring& coloring) {
  if (coloring.color_of.size() != instance.vertex_count()) {
    throw std::invalid_argument("coloring is not total over the instance");
  }
  for (Color c : coloring.color_of) {
    if (c >= coloring.colors) throw std::invalid_argument("color " + std::to_string(c) + " out of range");
  }
  std::vector<std::pair<Color, Weight>> toward;
  for (Vertex v = 0; v < instance.vertex_count(); ++v) {
    toward.clear();
    for (const Arc& a : instance.out_arcs(v)) toward.emplace_back(coloring.color_of[a.to], a.weight);
    std::sort(toward.begin(), toward.end());
    // Merge into per-color sums.
    std::vector<std::pair<Color, Weight>> sums;
    for (auto [c, w] : toward) {
      if (!sums.empty() && sums.back().first == c) {
        sums.back().second += w;
      } else {
        sums.emplace_back(c, w);
      }
    }
    const Color own_color = coloring.color_of[v];
    Weight own = 0;
    for (auto [c, w] : sums) {
      if (c == own_color) own = w;
    }
    std::optional<DeviationWitness> best;
    for (auto [c, w] : sums) {
      if (c != own_color && w > own && (!best || w > best->target_utility)) {
        best = DeviationWitness{v, own, c, w};
      }
    }
    if (!best && own < 0) best = DeviationWitness{v, own, std::nullopt, 0};
    if (best) return StabilityReport{false, best};
  }
  return StabilityReport{true, std::nullopt};
}

std::size_t choose_k(std::size_t max_bag_size, std::size_t max_degree) {
  return std::max<std::size_t>(1, max_bag_size * max_degree);
}

Partition coloring_to_partition(const Coloring& coloring) {
  return Partition(coloring.color_of);
}

namespace {

struct LabelsHash {
  std::size_t operator()(const detail::Labels& labels) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto l : labels) h = (h ^ l) * 1099511628211ull;
    return h ^ labels.size();
  }
};

/// Stability test for one bag vertex whose closed neighborhood is inside the
/// bag: out-arcs given as (bag position, weight).
struct BagCheck {
  std::size_t position = 0;
  std::vector<std::pair<std::size_t, Weight>> out;
};

struct ColoringTable {
  std::vector<detail::Labels> signatures;
  std::vector<detail::Derivation> derivations;
};

class ColoringDp {
 public:
  ColoringDp(const AshgInstance& instance, const NiceTreeDecomposition& ntd, std::size_t colors,
             const SolverOptions& options)
      : instance_(instance), ntd_(ntd), colors_(colors), options_(options), tables_(ntd.size()),
        checks_(ntd.size()) {
    for (std::size_t i = 0; i < ntd.size(); ++i) {
      const auto& bag = ntd.node(i).bag;
      if (bag.size() > 255) throw ResourceLimitError("bag of size " + std::to_string(bag.size()) + " exceeds 255");
      for (std::size_t p = 0; p < bag.size(); ++p) {
        const Vertex u = bag[p];
        auto nb = instance.neighbors(u);
        if (!std::includes(bag.begin(), bag.end(), nb.begin(), nb.end())) continue;
        BagCheck check{p, {}};
        for (const Arc& a : instance.out_arcs(u)) {
          check.out.emplace_back(detail::position_in(bag, a.to), a.weight);
        }
        checks_[i].push_back(std::move(check));
      }
    }
  }

  void run() {
    detail::run_bottom_up(ntd_, options_.workers, [this](std::size_t i) { process(i); });
  }

  const ColoringTable& table(std::size_t i) const { return tables_[i]; }

  std::optional<Coloring> reconstruct() const {
    const auto& root = tables_[ntd_.root()];
    if (root.signatures.empty()) return std::nullopt;
    std::vector<std::uint32_t> pick(ntd_.size(), 0);
    std::vector<detail::Labels> chosen(ntd_.size());
    for (std::size_t i = ntd_.size(); i-- > 0;) {
      const auto& node = ntd_.node(i);
      chosen[i] = tables_[i].signatures[pick[i]];
      const auto& d = tables_[i].derivations[pick[i]];
      if (!node.children.empty()) pick[node.children[0]] = d.first;
      if (node.children.size() == 2) pick[node.children[1]] = d.second;
    }
    auto labels = detail::assign_labels_top_down(
        ntd_, chosen, instance_.vertex_count(), [](std::vector<std::uint32_t> taken) {
          std::sort(taken.begin(), taken.end());
          std::uint32_t c = 0;
          for (auto t : taken) {
            if (t == c) ++c;
            else if (t > c) break;
          }
          return c;
        });
    return Coloring{std::vector<Color>(labels.begin(), labels.end()), colors_};
  }

 private:
  bool passes(std::size_t node, const detail::Labels& sig) const {
    Weight sums[256];
    for (const auto& check : checks_[node]) {
      for (auto [p, w] : check.out) sums[sig[p]] = 0;
      sums[sig[check.position]] = 0;
      for (auto [p, w] : check.out) sums[sig[p]] += w;
      const Weight own = sums[sig[check.position]];
      if (own < 0) return false;
      for (auto [p, w] : check.out) {
        if (sums[sig[p]] > own) return false;
      }
    }
    return true;
  }

  void process(std::size_t i) {
    const auto& node = ntd_.node(i);
    ColoringTable& out = tables_[i];
    std::unordered_map<detail::Labels, std::uint32_t, LabelsHash> index;
    auto insert = [&](detail::Labels&& sig, detail::Derivation from) {
      if (!passes(i, sig)) return;
      auto [it, fresh] = index.try_emplace(sig, static_cast<std::uint32_t>(out.signatures.size()));
      if (!fresh) return;
      out.signatures.push_back(std::move(sig));
      out.derivations.push_back(from);
      if (out.signatures.size() > options_.max_signatures_per_node) {
        throw ResourceLimitError("coloring table at node " + std::to_string(i) + " exceeds " +
                                 std::to_string(options_.max_signatures_per_node) + " signatures");
      }
    };

    switch (node.kind) {
      case NiceNodeKind::kLeaf:
        insert({}, {});
        break;
      case NiceNodeKind::kIntroduce: {
        const auto& child = tables_[node.children[0]];
        const auto pos = detail::position_in(node.bag, node.vertex);
        for (std::uint32_t s = 0; s < child.signatures.size(); ++s) {
          const auto& base = child.signatures[s];
          const auto used = detail::class_count(base);
          const auto options = std::min(used + 1, colors_);
          for (std::size_t c = 0; c < options; ++c) {
            detail::Labels sig = base;
            sig.insert(sig.begin() + static_cast<std::ptrdiff_t>(pos), static_cast<std::uint8_t>(c));
            detail::canonicalize(sig);
            insert(std::move(sig), {s, 0});
          }
        }
        break;
      }
      case NiceNodeKind::kForget: {
        const auto& child_node = ntd_.node(node.children[0]);
        const auto& child = tables_[node.children[0]];
        const auto pos = detail::position_in(child_node.bag, node.vertex);
        for (std::uint32_t s = 0; s < child.signatures.size(); ++s) {
          detail::Labels sig = child.signatures[s];
          sig.erase(sig.begin() + static_cast<std::ptrdiff_t>(pos));
          detail::canonicalize(sig);
          insert(std::move(sig), {s, 0});
        }
        break;
      }
      case NiceNodeKind::kJoin: {
        const auto& left = tables_[node.children[0]];
        const auto& right = tables_[node.children[1]];
        std::unordered_map<detail::Labels, std::uint32_t, LabelsHash> left_index;
        for (std::uint32_t s = 0; s < left.signatures.size(); ++s) left_index.emplace(left.signatures[s], s);
        for (std::uint32_t s = 0; s < right.signatures.size(); ++s) {
          auto it = left_index.find(right.signatures[s]);
          if (it != left_index.end()) insert(detail::Labels(right.signatures[s]), {it->second, s});
        }
        break;
      }
    }
  }

  const AshgInstance& instance_;
  const NiceTreeDecomposition& ntd_;
  std::size_t colors_;
  SolverOptions options_;
  std::vector<ColoringTable> tables_;
  std::vector<std::vector<BagCheck>> checks_;
};

}  // namespace

ColoringSolution solve_stable_coloring(const AshgInstance& instance, const TreeDecomposition& td,
                                       const SolverOptions& options) {
  auto squared = square_augment(instance, td);
  const auto ntd = make_nice(squared.decomposition);

  ColoringSolution result;
  result.colors = choose_k(td.max_bag_size(), instance.max_degree());
  result.augmented_width = squared.decomposition.width();

  ColoringDp dp(instance, ntd, result.colors, options);
  dp.run();
  result.stats.nodes = ntd.size();
  for (std::size_t i = 0; i < ntd.size(); ++i) {
    const auto size = dp.table(i).signatures.size();
    result.stats.peak_table_size = std::max(result.stats.peak_table_size, size);
    result.stats.total_signatures += size;
  }
  result.coloring = dp.reconstruct();
  if (result.coloring) result.partition = coloring_to_partition(*result.coloring);
  return result;
}

std::optional<Partition> solve_nash_via_coloring(const AshgInstance& instance,
                                                 const TreeDecomposition& td,
                                                 const SolverOptions& options) {
  return solve_stable_coloring(instance, td, options).partition;
}

}  // namespace ashg
