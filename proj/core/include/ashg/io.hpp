#pragma once

// Text formats. Vertices, classes and bags are 1-based in files.
//
//   instance       p ashg <n> <arcs>      then  a <u> <v> <w>
//   partition      s part <n> <classes>   then  <v> <class>
//   decomposition  s td <bags> <max bag size> <n>
//                  then  b <id> <v...>  and tree edges  <id> <id>
//
// Lines starting with 'c' are comments. Writers emit a canonical form, so
// read -> write is a fixed point.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ashg/game.hpp"
#include "ashg/reductions.hpp"
#include "ashg/tree_decomposition.hpp"

namespace ashg {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

AshgInstance read_instance(std::istream& in);
void write_instance(std::ostream& out, const AshgInstance& instance);

/// The vertex count in the header must match `vertex_count`; every vertex
/// must appear exactly once and the header's class count must match.
Partition read_partition(std::istream& in, std::size_t vertex_count);
void write_partition(std::ostream& out, const Partition& partition);

struct DecompositionFile {
  TreeDecomposition decomposition;
  std::size_t vertex_count = 0;
};

DecompositionFile read_decomposition(std::istream& in);
void write_decomposition(std::ostream& out, const TreeDecomposition& td, std::size_t vertex_count);

/// DIMACS CNF: `p cnf <vars> <clauses>` then zero-terminated clauses.
CnfFormula read_dimacs_cnf(std::istream& in);

/// Whitespace-separated integers; 'c' or '#' starts a comment line.
std::vector<std::int64_t> read_integer_list(std::istream& in);

/// Whole file contents; throws std::runtime_error if it cannot be read.
std::string read_file(const std::filesystem::path& path);

}  // namespace ashg
