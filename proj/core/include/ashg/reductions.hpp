#pragma once

// Generators for hardness gadgets. Each yes-instance generator has a
// companion builder that turns a certificate (satisfying assignment, triple
// assignment, bin assignment) into a stable partition of the generated graph.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ashg/game.hpp"

namespace ashg {

struct Literal {
  std::uint32_t variable = 0;
  bool negated = false;

  bool satisfied_by(const std::vector<bool>& assignment) const {
    return assignment.at(variable) != negated;
  }
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// 3-CNF over x_0..x_{n-1}. Every clause has exactly three literal slots.
class CnfFormula {
 public:
  using Clause = std::array<Literal, 3>;

  CnfFormula() = default;
  /// Throws std::invalid_argument if a literal names a variable >= n.
  CnfFormula(std::size_t variable_count, std::vector<Clause> clauses);

  /// Clauses in DIMACS convention (+-(k+1) for x_k). Clauses with one or two
  /// literals are padded by repeating their last literal; empty clauses and
  /// clauses longer than three are rejected.
  static CnfFormula from_dimacs(std::size_t variable_count,
                                const std::vector<std::vector<int>>& clauses);

  std::size_t variable_count() const { return variable_count_; }
  std::size_t clause_count() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }

  /// Throws std::invalid_argument if the assignment has the wrong length.
  bool satisfied_by(const std::vector<bool>& assignment) const;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  std::size_t variable_count_ = 0;
  std::vector<Clause> clauses_;
};

/// Items with a target sum per group (3-Partition) or a capacity per bin
/// (Bin Packing, with `bins` bins).
struct NumericInstance {
  std::vector<std::int64_t> items;
  std::int64_t target = 0;
  std::size_t bins = 0;
};

enum class GadgetRole : std::uint8_t {
  kSelection,
  kConsistency,
  kClause,
  kLiteral,
  kPalette,
  kChecker,
  kOr,
  kItem,
  kPadding,
  kBin,
  kStalker,
  kExpansion,
};

const char* to_string(GadgetRole role);

struct GeneratedInstance {
  AshgInstance instance;
  std::vector<GadgetRole> roles;
  /// Human-readable vertex names such as "u(0,1,2)".
  std::vector<std::string> names;
  /// Number of variables after padding with dummies (SAT generators).
  std::size_t encoded_variables = 0;
  /// Effective degree parameter after rounding (high-degree SAT generator).
  std::size_t delta = 0;
  /// Item list after padding (numeric generators).
  std::vector<std::int64_t> items;
  /// Non-fatal precondition notes.
  std::vector<std::string> warnings;
};

/// Bounded pathwidth, degree about Delta, weights up to 4^Delta. Delta is
/// rounded up to a power of two. Throws std::invalid_argument for Delta < 2 or
/// Delta > 30.
GeneratedInstance gen_sat_high_degree(const CnfFormula& phi, std::size_t delta);

/// Throws std::invalid_argument unless `assignment` satisfies phi.
Partition witness_sat_high_degree(const CnfFormula& phi, std::size_t delta,
                                  const std::vector<bool>& assignment);

/// Constant degree and weights in {-2,-1,1,2}. The variable count is padded to
/// a power of four (at least 4) with unconstrained dummies.
GeneratedInstance gen_sat_bounded_degree(const CnfFormula& phi);

Partition witness_sat_bounded_degree(const CnfFormula& phi, const std::vector<bool>& assignment);

/// Star around a stalker vertex. Requires 3q items, each strictly between
/// target/4 and target/2, summing to q * target; throws std::invalid_argument
/// otherwise. Vertex order: items, q group vertices, s, s'.
GeneratedInstance gen_three_partition_star(const NumericInstance& problem);

/// `triples` lists item indices, one triple per group.
Partition witness_three_partition_star(const NumericInstance& problem,
                                       const std::vector<std::array<std::size_t, 3>>& triples);

/// Bins with capacity `target`. Items are padded with 1s up to bins * target;
/// a larger total throws std::invalid_argument. With `unit_weights` every arc
/// of weight w, |w| >= 2, is replaced by |w| intermediate vertices so all
/// weights lie in {-1, 0, 1}. Vertex order: b_1..b_k, b'_1..b'_k, items,
/// then expansion vertices.
GeneratedInstance gen_bin_packing(const NumericInstance& problem, bool unit_weights);

/// `bin_of[i]` is the bin of original item i. Padding items are placed
/// greedily. Throws std::invalid_argument if a bin overflows.
Partition witness_bin_packing(const NumericInstance& problem, bool unit_weights,
                              const std::vector<std::size_t>& bin_of);

/// Adds a zero-weight arc in both directions between every pair of vertices at
/// distance two in the underlying graph.
AshgInstance square_zero_arcs(const AshgInstance& instance);

}  // namespace ashg
