#include "ashg/reductions.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "ashg/tree_decomposition.hpp"

namespace ashg {

CnfFormula::CnfFormula(std::size_t variable_count, std::vector<Clause> clauses)
    : variable_count_(variable_count), clauses_(std::move(clauses)) {
  for (const auto& clause : clauses_) {
    for (const auto& lit : clause) {
      if (lit.variable >= variable_count_) {
        throw std::invalid_argument("literal on x" + std::to_string(lit.variable) + " but only " +
                                    std::to_string(variable_count_) + " variables");
      }
    }
  }
}

CnfFormula CnfFormula::from_dimacs(std::size_t variable_count,
                                   const std::vector<std::vector<int>>& clauses) {
  std::vector<Clause> out;
  out.reserve(clauses.size());
  for (const auto& raw : clauses) {
    if (raw.empty() || raw.size() > 3) {
      throw std::invalid_argument("clause with " + std::to_string(raw.size()) + " literals");
    }
    Clause clause;
    for (std::size_t i = 0; i < 3; ++i) {
      const int lit = raw[std::min(i, raw.size() - 1)];
      if (lit == 0) throw std::invalid_argument("literal 0 inside a clause");
      clause[i] = Literal{static_cast<std::uint32_t>(std::abs(lit) - 1), lit < 0};
    }
    out.push_back(clause);
  }
  return CnfFormula(variable_count, std::move(out));
}

bool CnfFormula::satisfied_by(const std::vector<bool>& assignment) const {
  if (assignment.size() != variable_count_) {
    throw std::invalid_argument("assignment has " + std::to_string(assignment.size()) +
                                " values for " + std::to_string(variable_count_) + " variables");
  }
  return std::all_of(clauses_.begin(), clauses_.end(), [&](const Clause& c) {
    return std::any_of(c.begin(), c.end(), [&](const Literal& l) { return l.satisfied_by(assignment); });
  });
}

const char* to_string(GadgetRole role) {
  switch (role) {
    case GadgetRole::kSelection: return "selection";
    case GadgetRole::kConsistency: return "consistency";
    case GadgetRole::kClause: return "clause";
    case GadgetRole::kLiteral: return "literal";
    case GadgetRole::kPalette: return "palette";
    case GadgetRole::kChecker: return "checker";
    case GadgetRole::kOr: return "or";
    case GadgetRole::kItem: return "item";
    case GadgetRole::kPadding: return "padding";
    case GadgetRole::kBin: return "bin";
    case GadgetRole::kStalker: return "stalker";
    case GadgetRole::kExpansion: return "expansion";
  }
  return "unknown";
}

namespace {

std::string name_of(const char* prefix, std::initializer_list<std::size_t> idx) {
  std::string s = prefix;
  s += '(';
  bool first = true;
  for (auto i : idx) {
    if (!first) s += ',';
    s += std::to_string(i);
    first = false;
  }
  return s + ')';
}

class Builder {
 public:
  Vertex add(GadgetRole role, std::string name) {
    roles_.push_back(role);
    names_.push_back(std::move(name));
    return static_cast<Vertex>(roles_.size() - 1);
  }

  void arc(Vertex u, Vertex v, Weight w) {
    if (!arcs_.emplace(std::make_pair(u, v), w).second) {
      throw std::logic_error("gadget arc " + names_[u] + " -> " + names_[v] + " built twice");
    }
  }

  GeneratedInstance finish() {
    std::vector<Arc> arcs;
    arcs.reserve(arcs_.size());
    for (const auto& [key, w] : arcs_) arcs.push_back(Arc{key.first, key.second, w});
    GeneratedInstance out;
    out.instance = AshgInstance(roles_.size(), std::move(arcs));
    out.roles = std::move(roles_);
    out.names = std::move(names_);
    return out;
  }

 private:
  std::vector<GadgetRole> roles_;
  std::vector<std::string> names_;
  std::map<std::pair<Vertex, Vertex>, Weight> arcs_;
};

void require_satisfying(const CnfFormula& phi, const std::vector<bool>& assignment) {
  if (!phi.satisfied_by(assignment)) throw std::invalid_argument("assignment does not satisfy the formula");
}

/// Hands out coalition labels; reserved ones first, then fresh ones.
struct LabelSource {
  std::uint32_t next;
  std::uint32_t operator()() { return next++; }
};

// ---------------------------------------------------------------------------
// High degree, bounded pathwidth.

struct HighDegreeLayout {
  std::size_t n, m, delta, log_delta, rows;  // rows = L + 1

  HighDegreeLayout(const CnfFormula& phi, std::size_t requested) {
    if (requested < 2) throw std::invalid_argument("delta must be at least 2");
    delta = std::bit_ceil(requested);
    if (delta > 30) throw std::invalid_argument("4^delta exceeds the weight range for delta " + std::to_string(delta));
    log_delta = static_cast<std::size_t>(std::countr_zero(delta));
    n = phi.variable_count();
    m = phi.clause_count();
    const std::size_t per_row = delta * log_delta;
    rows = (n + per_row - 1) / per_row + 1;
  }

  std::size_t palette_row() const { return rows - 1; }
  Vertex selection(std::size_t i1, std::size_t i2, std::size_t j) const {
    return static_cast<Vertex>((i1 * delta + i2) * m + (j - 1));
  }
  std::size_t selection_count() const { return rows * delta * m; }
  Vertex consistency(std::size_t i1, std::size_t j) const {
    return static_cast<Vertex>(selection_count() + i1 * (m - 1) + (j - 1));
  }
  std::size_t consistency_count() const { return m == 0 ? 0 : rows * (m - 1); }
  Vertex clause_base(std::size_t j) const {
    return static_cast<Vertex>(selection_count() + consistency_count() + (j - 1) * 5);
  }
  Vertex s(std::size_t j) const { return clause_base(j); }
  Vertex s_helper(std::size_t j) const { return clause_base(j) + 1; }
  Vertex literal(std::size_t j, std::size_t alpha) const { return clause_base(j) + 2 + static_cast<Vertex>(alpha); }
  Vertex p() const { return static_cast<Vertex>(selection_count() + consistency_count() + 5 * m); }
  Vertex p_helper() const { return p() + 1; }

  /// (i1, i2, i3) encoding x_k.
  std::array<std::size_t, 3> locate(std::size_t k) const {
    const std::size_t i1 = k / (delta * log_delta);
    const std::size_t i2 = (k - i1 * delta * log_delta) / log_delta;
    return {i1, i2, k - i1 * delta * log_delta - i2 * log_delta};
  }

  std::size_t code(std::size_t i1, std::size_t i2, const std::vector<bool>& assignment) const {
    std::size_t c = 0;
    for (std::size_t i3 = 0; i3 < log_delta; ++i3) {
      const std::size_t k = i1 * delta * log_delta + i2 * log_delta + i3;
      if (k < n && assignment[k]) c |= std::size_t{1} << i3;
    }
    return c;
  }
};

}  // namespace

GeneratedInstance gen_sat_high_degree(const CnfFormula& phi, std::size_t delta) {
  const HighDegreeLayout lay(phi, delta);
  const std::size_t m = lay.m;
  const Weight heavy = Weight{1} << (2 * lay.delta);
  Builder b;

  for (std::size_t i1 = 0; i1 < lay.rows; ++i1)
    for (std::size_t i2 = 0; i2 < lay.delta; ++i2)
      for (std::size_t j = 1; j <= m; ++j) b.add(GadgetRole::kSelection, name_of("u", {i1, i2, j}));
  for (std::size_t i1 = 0; i1 < lay.rows; ++i1)
    for (std::size_t j = 1; j < m; ++j) b.add(GadgetRole::kConsistency, name_of("c", {i1, j}));
  for (std::size_t j = 1; j <= m; ++j) {
    b.add(GadgetRole::kClause, name_of("s", {j}));
    b.add(GadgetRole::kClause, name_of("s'", {j}));
    for (std::size_t a = 1; a <= 3; ++a) b.add(GadgetRole::kLiteral, name_of("l", {j, a}));
  }
  b.add(GadgetRole::kPalette, "p");
  b.add(GadgetRole::kPalette, "p'");

  for (std::size_t i1 = 0; i1 < lay.rows; ++i1) {
    for (std::size_t j = 1; j < m; ++j) {
      const Vertex c = lay.consistency(i1, j);
      for (std::size_t i2 = 0; i2 < lay.delta; ++i2) {
        const Weight w = Weight{1} << (2 * i2);
        b.arc(c, lay.selection(i1, i2, j), w);
        b.arc(c, lay.selection(i1, i2, j + 1), -w);
        b.arc(lay.selection(i1, i2, j), c, -heavy);
        b.arc(lay.selection(i1, i2, j + 1), c, -heavy);
      }
    }
  }

  for (std::size_t j = 1; j <= m; ++j) {
    b.arc(lay.s(j), lay.s_helper(j), 2);
    const auto& clause = phi.clauses()[j - 1];
    for (std::size_t a = 0; a < 3; ++a) {
      const Vertex l = lay.literal(j, a);
      b.arc(l, lay.s(j), 2);
      b.arc(lay.s(j), l, -1);
      const auto [i1, i2, i3] = lay.locate(clause[a].variable);
      b.arc(l, lay.selection(i1, i2, j), 1);
      for (std::size_t pi = 0; pi < lay.delta; ++pi) {
        const bool bit = (pi >> i3) & 1u;
        b.arc(l, lay.selection(lay.palette_row(), pi, j), bit != clause[a].negated ? 1 : 0);
      }
    }
  }

  b.arc(lay.p(), lay.p_helper(), 1);
  b.arc(lay.p_helper(), lay.p(), 1);
  if (m > 0) {
    for (std::size_t i2 = 0; i2 < lay.delta; ++i2) {
      b.arc(lay.p(), lay.selection(lay.palette_row(), i2, 1), 1);
      b.arc(lay.selection(lay.palette_row(), i2, 1), lay.p(), -1);
    }
  }

  auto out = b.finish();
  out.encoded_variables = (lay.rows - 1) * lay.delta * lay.log_delta;
  out.delta = lay.delta;
  if (lay.n > 0 && lay.delta * lay.log_delta >= lay.n) {
    out.warnings.push_back("delta is not below n / log n; the construction is degenerate");
  }
  return out;
}

Partition witness_sat_high_degree(const CnfFormula& phi, std::size_t delta,
                                  const std::vector<bool>& assignment) {
  const HighDegreeLayout lay(phi, delta);
  require_satisfying(phi, assignment);
  const std::size_t m = lay.m;
  const std::size_t total = lay.p_helper() + 1;
  std::vector<std::uint32_t> label(total);
  // Labels 0..delta-1 are the palette coalitions.
  LabelSource fresh{static_cast<std::uint32_t>(lay.delta)};

  for (std::size_t i2 = 0; i2 < lay.delta; ++i2)
    for (std::size_t j = 1; j <= m; ++j) label[lay.selection(lay.palette_row(), i2, j)] = static_cast<std::uint32_t>(i2);
  for (std::size_t i1 = 0; i1 + 1 < lay.rows; ++i1) {
    for (std::size_t i2 = 0; i2 < lay.delta; ++i2) {
      const auto code = static_cast<std::uint32_t>(lay.code(i1, i2, assignment));
      for (std::size_t j = 1; j <= m; ++j) label[lay.selection(i1, i2, j)] = code;
    }
  }
  for (std::size_t i1 = 0; i1 < lay.rows; ++i1)
    for (std::size_t j = 1; j < m; ++j) label[lay.consistency(i1, j)] = fresh();

  for (std::size_t j = 1; j <= m; ++j) {
    const auto& clause = phi.clauses()[j - 1];
    const auto gadget = fresh();
    label[lay.s(j)] = label[lay.s_helper(j)] = gadget;
    std::size_t chosen = 3;
    for (std::size_t a = 0; a < 3 && chosen == 3; ++a) {
      if (clause[a].satisfied_by(assignment)) chosen = a;
    }
    for (std::size_t a = 0; a < 3; ++a) {
      if (a == chosen) {
        const auto [i1, i2, i3] = lay.locate(clause[a].variable);
        label[lay.literal(j, a)] = label[lay.selection(i1, i2, j)];
      } else {
        label[lay.literal(j, a)] = gadget;
      }
    }
  }
  label[lay.p()] = label[lay.p_helper()] = fresh();
  return Partition(label);
}

// ---------------------------------------------------------------------------
// Bounded degree, pathwidth O(n / log n).

namespace {

struct BoundedDegreeLayout {
  std::size_t n, padded, m, lg, half, side, paths, columns, checkers, block;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  explicit BoundedDegreeLayout(const CnfFormula& phi) {
    n = phi.variable_count();
    m = phi.clause_count();
    padded = 4;
    while (padded < n) padded *= 4;
    lg = static_cast<std::size_t>(std::countr_zero(padded));
    half = lg / 2;
    side = std::size_t{1} << half;
    paths = 2 * padded / lg + 1;
    columns = m + padded;
    checkers = 3 * side / 2;
    block = 3 * side + checkers + 3 * checkers;
    for (std::size_t i = 0; i < side; ++i)
      for (std::size_t k = i + 1; k < side; ++k) pairs.emplace_back(i, k);
  }

  Vertex palette(std::size_t i, std::size_t j) const { return static_cast<Vertex>(i * columns + (j - 1)); }
  Vertex selection(std::size_t i, std::size_t j) const {
    return static_cast<Vertex>(side * columns + i * columns + (j - 1));
  }
  std::size_t consistency_base() const { return (side + paths) * columns; }
  std::size_t pair_column(std::size_t t) const { return m + 1 + t; }
  Vertex a(std::size_t t) const { return static_cast<Vertex>(consistency_base() + 2 * t); }
  Vertex b(std::size_t t) const { return a(t) + 1; }
  std::size_t clause_base(std::size_t j) const { return consistency_base() + 2 * pairs.size() + (j - 1) * block; }
  Vertex path(std::size_t j, std::size_t alpha, std::size_t beta) const {
    return static_cast<Vertex>(clause_base(j) + alpha * side + beta);
  }
  Vertex checker(std::size_t j, std::size_t idx) const { return static_cast<Vertex>(clause_base(j) + 3 * side + idx); }
  /// r_k (part 0), r'_k (1), r''_k (2) for k = 1..checkers.
  Vertex or_vertex(std::size_t j, std::size_t k, std::size_t part) const {
    return static_cast<Vertex>(clause_base(j) + 3 * side + checkers + 3 * (k - 1) + part);
  }
  std::size_t total() const { return consistency_base() + 2 * pairs.size() + m * block; }

  std::size_t path_of(std::size_t k) const { return k / half; }
  std::size_t bit_of(std::size_t k) const { return k % half; }

  /// Palette indices i' for which the literal holds, ascending.
  std::vector<std::size_t> satisfying_colors(const Literal& lit) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < side; ++i) {
      if ((((i >> bit_of(lit.variable)) & 1u) != 0) != lit.negated) out.push_back(i);
    }
    return out;
  }

  std::size_t code(std::size_t path, const std::vector<bool>& assignment) const {
    std::size_t c = 0;
    for (std::size_t bit = 0; bit < half; ++bit) {
      const std::size_t k = path * half + bit;
      if (k < n && assignment[k]) c |= std::size_t{1} << bit;
    }
    return c;
  }
};

}  // namespace

GeneratedInstance gen_sat_bounded_degree(const CnfFormula& phi) {
  const BoundedDegreeLayout lay(phi);
  Builder b;
  for (std::size_t i = 0; i < lay.side; ++i)
    for (std::size_t j = 1; j <= lay.columns; ++j) b.add(GadgetRole::kPalette, name_of("p", {i, j}));
  for (std::size_t i = 0; i < lay.paths; ++i)
    for (std::size_t j = 1; j <= lay.columns; ++j) b.add(GadgetRole::kSelection, name_of("u", {i, j}));
  for (std::size_t t = 0; t < lay.pairs.size(); ++t) {
    b.add(GadgetRole::kConsistency, name_of("a", {lay.pair_column(t)}));
    b.add(GadgetRole::kConsistency, name_of("b", {lay.pair_column(t)}));
  }
  for (std::size_t j = 1; j <= lay.m; ++j) {
    for (std::size_t a = 1; a <= 3; ++a)
      for (std::size_t beta = 0; beta < lay.side; ++beta) b.add(GadgetRole::kLiteral, name_of("l", {j, a, beta}));
    for (std::size_t a = 1; a <= 3; ++a)
      for (auto i : lay.satisfying_colors(phi.clauses()[j - 1][a - 1])) b.add(GadgetRole::kChecker, name_of("c", {j, a, i}));
    for (std::size_t k = 1; k <= lay.checkers; ++k) {
      b.add(GadgetRole::kOr, name_of("r", {j, k}));
      b.add(GadgetRole::kOr, name_of("r'", {j, k}));
      b.add(GadgetRole::kOr, name_of("r''", {j, k}));
    }
  }

  for (std::size_t j = 1; j < lay.columns; ++j) {
    for (std::size_t i = 0; i < lay.side; ++i) b.arc(lay.palette(i, j + 1), lay.palette(i, j), 1);
    for (std::size_t i = 0; i < lay.paths; ++i) b.arc(lay.selection(i, j + 1), lay.selection(i, j), 1);
  }
  for (std::size_t t = 0; t < lay.pairs.size(); ++t) {
    const auto [i, k] = lay.pairs[t];
    const std::size_t j = lay.pair_column(t);
    b.arc(lay.a(t), lay.palette(i, j), 1);
    b.arc(lay.a(t), lay.palette(k, j), -1);
    b.arc(lay.a(t), lay.b(t), 1);
    b.arc(lay.b(t), lay.a(t), -1);
    b.arc(lay.b(t), lay.palette(i, j), -1);
    b.arc(lay.b(t), lay.palette(k, j), -1);
  }
  for (std::size_t j = 1; j <= lay.m; ++j) {
    const auto& clause = phi.clauses()[j - 1];
    std::size_t idx = 0;
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t beta = 0; beta + 1 < lay.side; ++beta) b.arc(lay.path(j, a, beta), lay.path(j, a, beta + 1), 1);
      b.arc(lay.path(j, a, lay.side - 1), lay.selection(lay.path_of(clause[a].variable), j), 1);
      for (auto i : lay.satisfying_colors(clause[a])) {
        const Vertex c = lay.checker(j, idx);
        b.arc(c, lay.palette(i, j), 1);
        b.arc(c, lay.path(j, a, i), 1);
        const std::size_t k = idx + 1;
        b.arc(lay.or_vertex(j, k, 0), c, k == 1 ? -2 : -1);
        b.arc(c, lay.or_vertex(j, k, 0), 2);
        ++idx;
      }
    }
    for (std::size_t k = 1; k <= lay.checkers; ++k) {
      b.arc(lay.or_vertex(j, k, 0), lay.or_vertex(j, k, 1), 1);
      b.arc(lay.or_vertex(j, k, 0), lay.or_vertex(j, k, 2), -2);
      if (k < lay.checkers) {
        b.arc(lay.or_vertex(j, k, 0), lay.or_vertex(j, k + 1, 0), 2);
        b.arc(lay.or_vertex(j, k + 1, 0), lay.or_vertex(j, k, 0), -1);
      }
    }
  }

  auto out = b.finish();
  out.encoded_variables = lay.padded;
  return out;
}

Partition witness_sat_bounded_degree(const CnfFormula& phi, const std::vector<bool>& assignment) {
  const BoundedDegreeLayout lay(phi);
  require_satisfying(phi, assignment);
  std::vector<std::uint32_t> label(lay.total());
  // Labels 0..side-1 are the palette paths.
  LabelSource fresh{static_cast<std::uint32_t>(lay.side)};

  for (std::size_t i = 0; i < lay.side; ++i)
    for (std::size_t j = 1; j <= lay.columns; ++j) label[lay.palette(i, j)] = static_cast<std::uint32_t>(i);
  std::vector<std::uint32_t> path_code(lay.paths);
  for (std::size_t i = 0; i < lay.paths; ++i) {
    path_code[i] = static_cast<std::uint32_t>(lay.code(i, assignment));
    for (std::size_t j = 1; j <= lay.columns; ++j) label[lay.selection(i, j)] = path_code[i];
  }
  for (std::size_t t = 0; t < lay.pairs.size(); ++t) {
    label[lay.a(t)] = static_cast<std::uint32_t>(lay.pairs[t].first);
    label[lay.b(t)] = fresh();
  }

  for (std::size_t j = 1; j <= lay.m; ++j) {
    const auto& clause = phi.clauses()[j - 1];
    std::vector<Vertex> checker_vertices;
    std::size_t satisfied = lay.checkers;
    std::uint32_t satisfied_label = 0;
    for (std::size_t a = 0; a < 3; ++a) {
      const auto target = path_code[lay.path_of(clause[a].variable)];
      for (std::size_t beta = 0; beta < lay.side; ++beta) label[lay.path(j, a, beta)] = target;
      for (auto i : lay.satisfying_colors(clause[a])) {
        if (satisfied == lay.checkers && i == target) {
          satisfied = checker_vertices.size();
          satisfied_label = target;
        }
        checker_vertices.push_back(lay.checker(j, checker_vertices.size()));
      }
    }
    const std::size_t k0 = satisfied + 1;
    const std::size_t last = lay.checkers;
    // Or gadget: r_1..r_k0 form one chain coalition, later r_k pair with r'_k
    // and take r''_{k-1}.
    std::vector<std::uint32_t> group(last + 2);
    const auto chain = fresh();
    for (std::size_t k = 1; k <= last; ++k) group[k] = k <= k0 ? chain : fresh();
    for (std::size_t k = 1; k <= last; ++k) {
      label[lay.or_vertex(j, k, 0)] = group[k];
      label[lay.or_vertex(j, k, 1)] = group[k];
      if (k < k0 || k == last) {
        label[lay.or_vertex(j, k, 2)] = fresh();
      } else {
        label[lay.or_vertex(j, k, 2)] = group[k + 1];
      }
      label[checker_vertices[k - 1]] = k == k0 ? satisfied_label : group[k];
    }
  }
  return Partition(label);
}

// ---------------------------------------------------------------------------
// Numeric problems.

GeneratedInstance gen_three_partition_star(const NumericInstance& problem) {
  const auto& items = problem.items;
  const std::int64_t t = problem.target;
  if (items.empty() || items.size() % 3 != 0) {
    throw std::invalid_argument("3-partition needs a positive multiple of 3 items, got " +
                                std::to_string(items.size()));
  }
  const std::size_t q = items.size() / 3;
  for (auto a : items) {
    if (!(4 * a > t && 2 * a < t)) {
      throw std::invalid_argument("item " + std::to_string(a) + " not strictly between T/4 and T/2 for T=" +
                                  std::to_string(t));
    }
  }
  const auto sum = std::accumulate(items.begin(), items.end(), std::int64_t{0});
  if (sum != static_cast<std::int64_t>(q) * t) {
    throw std::invalid_argument("items sum to " + std::to_string(sum) + ", expected " +
                                std::to_string(static_cast<std::int64_t>(q) * t));
  }

  Builder b;
  for (std::size_t i = 0; i < items.size(); ++i) b.add(GadgetRole::kItem, name_of("a", {i + 1}));
  for (std::size_t i = 0; i < q; ++i) b.add(GadgetRole::kBin, name_of("b", {i + 1}));
  const Vertex s = b.add(GadgetRole::kStalker, "s");
  const Vertex helper = b.add(GadgetRole::kStalker, "s'");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto v = static_cast<Vertex>(i);
    b.arc(v, s, -1);
    b.arc(s, v, -items[i]);
  }
  for (std::size_t i = 0; i < q; ++i) {
    const auto v = static_cast<Vertex>(items.size() + i);
    b.arc(v, s, -1);
    b.arc(s, v, 2 * t);
  }
  b.arc(s, helper, t);
  b.arc(helper, s, 1);
  auto out = b.finish();
  out.items = items;
  return out;
}

Partition witness_three_partition_star(const NumericInstance& problem,
                                       const std::vector<std::array<std::size_t, 3>>& triples) {
  const auto& items = problem.items;
  const std::size_t q = items.size() / 3;
  if (triples.size() != q) throw std::invalid_argument("expected " + std::to_string(q) + " triples");
  std::vector<std::uint32_t> label(items.size() + q + 2, static_cast<std::uint32_t>(q));
  std::vector<std::uint8_t> used(items.size(), 0);
  for (std::size_t g = 0; g < q; ++g) {
    std::int64_t sum = 0;
    for (auto i : triples[g]) {
      if (i >= items.size() || used[i]) throw std::invalid_argument("triples do not partition the items");
      used[i] = 1;
      sum += items[i];
      label[i] = static_cast<std::uint32_t>(g);
    }
    if (sum != problem.target) {
      throw std::invalid_argument("triple " + std::to_string(g + 1) + " sums to " + std::to_string(sum));
    }
    label[items.size() + g] = static_cast<std::uint32_t>(g);
  }
  return Partition(label);
}

namespace {

std::vector<std::int64_t> padded_items(const NumericInstance& problem) {
  if (problem.bins == 0 || problem.target <= 0) throw std::invalid_argument("bin packing needs k >= 1 and B >= 1");
  for (auto w : problem.items) {
    if (w <= 0) throw std::invalid_argument("item weights must be positive");
  }
  auto items = problem.items;
  const auto sum = std::accumulate(items.begin(), items.end(), std::int64_t{0});
  const auto capacity = static_cast<std::int64_t>(problem.bins) * problem.target;
  if (sum > capacity) {
    throw std::invalid_argument("items sum to " + std::to_string(sum) + ", more than kB = " +
                                std::to_string(capacity));
  }
  items.insert(items.end(), static_cast<std::size_t>(capacity - sum), 1);
  return items;
}

}  // namespace

GeneratedInstance gen_bin_packing(const NumericInstance& problem, bool unit_weights) {
  const auto items = padded_items(problem);
  const std::size_t k = problem.bins;
  Builder b;
  for (std::size_t i = 0; i < k; ++i) b.add(GadgetRole::kBin, name_of("b", {i + 1}));
  for (std::size_t i = 0; i < k; ++i) b.add(GadgetRole::kBin, name_of("b'", {i + 1}));
  for (std::size_t i = 0; i < items.size(); ++i) {
    b.add(i < problem.items.size() ? GadgetRole::kItem : GadgetRole::kPadding, name_of("v", {i + 1}));
  }

  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < k; ++i) {
    arcs.push_back(Arc{static_cast<Vertex>(i), static_cast<Vertex>(k + i), problem.target});
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto v = static_cast<Vertex>(2 * k + i);
    for (std::size_t j = 0; j < k; ++j) {
      arcs.push_back(Arc{v, static_cast<Vertex>(j), 1});
      arcs.push_back(Arc{static_cast<Vertex>(j), v, -items[i]});
    }
  }
  std::sort(arcs.begin(), arcs.end());
  for (const Arc& a : arcs) {
    const Weight mag = a.weight < 0 ? -a.weight : a.weight;
    if (!unit_weights || mag < 2) {
      b.arc(a.from, a.to, a.weight);
      continue;
    }
    for (Weight e = 0; e < mag; ++e) {
      const Vertex x = b.add(GadgetRole::kExpansion, "e(" + std::to_string(a.from + 1) + "," +
                                                         std::to_string(a.to + 1) + "," + std::to_string(e + 1) + ")");
      b.arc(x, a.to, 1);
      b.arc(a.from, x, a.weight < 0 ? -1 : 1);
    }
  }
  auto out = b.finish();
  out.items = items;
  return out;
}

Partition witness_bin_packing(const NumericInstance& problem, bool unit_weights,
                              const std::vector<std::size_t>& bin_of) {
  const auto items = padded_items(problem);
  const std::size_t k = problem.bins;
  if (bin_of.size() != problem.items.size()) throw std::invalid_argument("bin assignment has the wrong length");
  std::vector<std::int64_t> load(k, 0);
  std::vector<std::size_t> bin(items.size());
  for (std::size_t i = 0; i < bin_of.size(); ++i) {
    if (bin_of[i] >= k) throw std::invalid_argument("bin index out of range");
    bin[i] = bin_of[i];
    load[bin[i]] += items[i];
  }
  for (std::size_t i = bin_of.size(); i < items.size(); ++i) {
    auto it = std::find_if(load.begin(), load.end(), [&](std::int64_t l) { return l < problem.target; });
    if (it == load.end()) break;
    bin[i] = static_cast<std::size_t>(it - load.begin());
    ++*it;
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (load[j] > problem.target) {
      throw std::invalid_argument("bin " + std::to_string(j + 1) + " holds " + std::to_string(load[j]));
    }
  }

  const auto generated = gen_bin_packing(problem, unit_weights);
  const std::size_t total = generated.instance.vertex_count();
  std::vector<std::uint32_t> label(total);
  for (std::size_t j = 0; j < k; ++j) label[j] = label[k + j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 0; i < items.size(); ++i) label[2 * k + i] = static_cast<std::uint32_t>(bin[i]);
  // Expansion vertices join the coalition of their only out-neighbor.
  for (std::size_t v = 2 * k + items.size(); v < total; ++v) {
    label[v] = label[generated.instance.out_arcs(static_cast<Vertex>(v)).front().to];
  }
  return Partition(label);
}

AshgInstance square_zero_arcs(const AshgInstance& instance) { return square_graph(instance); }

}  // namespace ashg
