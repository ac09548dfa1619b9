#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ashg {

/// Raised when a solver would exceed a configured budget. Callers report the
/// answer as unknown rather than negative.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

struct SolverOptions {
  /// Largest signature table allowed at any single decomposition node.
  std::size_t max_signatures_per_node = 2'000'000;
  /// Threads for subtree-parallel processing; 1 runs sequentially. Answers do
  /// not depend on this value.
  unsigned workers = 1;
};

struct SolverStats {
  std::size_t nodes = 0;
  std::size_t peak_table_size = 0;
  std::size_t total_signatures = 0;
};

}  // namespace ashg
