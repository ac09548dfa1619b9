#include "ashg/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace ashg {

namespace {

/// Splits input into whitespace-separated tokens line by line, skipping
/// blank and comment lines.
class LineReader {
 public:
  explicit LineReader(std::istream& in, std::string comment = "c") : in_(in), comment_(std::move(comment)) {}

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      tokens.clear();
      std::istringstream ss(line);
      for (std::string t; ss >> t;) tokens.push_back(std::move(t));
      if (tokens.empty()) continue;
      if (comment_.find(tokens[0][0]) != std::string::npos && (tokens[0].size() == 1 || tokens[0][0] == '#')) continue;
      return true;
    }
    return false;
  }

  std::size_t line() const { return number_; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(number_, what); }

  template <class T>
  T number(const std::string& token) const {
    T value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) fail("expected an integer, got '" + token + "'");
    return value;
  }

  /// 1-based id in [1, limit] converted to 0-based.
  std::size_t id(const std::string& token, std::size_t limit, const char* what) const {
    const auto v = number<std::int64_t>(token);
    if (v < 1 || static_cast<std::uint64_t>(v) > limit) {
      fail(std::string(what) + " " + token + " out of range 1.." + std::to_string(limit));
    }
    return static_cast<std::size_t>(v - 1);
  }

 private:
  std::istream& in_;
  std::string comment_;
  std::size_t number_ = 0;
};

}  // namespace

AshgInstance read_instance(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t)) throw ParseError(r.line(), "missing 'p ashg' header");
  if (t.size() != 4 || t[0] != "p" || t[1] != "ashg") r.fail("expected 'p ashg <n> <arcs>'");
  const auto n = r.number<std::size_t>(t[2]);
  const auto m = r.number<std::size_t>(t[3]);
  std::vector<Arc> arcs;
  arcs.reserve(m);
  while (r.next(t)) {
    if (t[0] != "a" || t.size() != 4) r.fail("expected 'a <u> <v> <w>'");
    const auto u = static_cast<Vertex>(r.id(t[1], n, "vertex"));
    const auto v = static_cast<Vertex>(r.id(t[2], n, "vertex"));
    arcs.push_back(Arc{u, v, r.number<Weight>(t[3])});
  }
  if (arcs.size() != m) {
    throw ParseError(r.line(), "header announces " + std::to_string(m) + " arcs, found " + std::to_string(arcs.size()));
  }
  try {
    return AshgInstance(n, std::move(arcs));
  } catch (const std::invalid_argument& e) {
    throw ParseError(r.line(), e.what());
  }
}

void write_instance(std::ostream& out, const AshgInstance& instance) {
  out << "p ashg " << instance.vertex_count() << ' ' << instance.arc_count() << '\n';
  for (const Arc& a : instance.arcs()) out << "a " << a.from + 1 << ' ' << a.to + 1 << ' ' << a.weight << '\n';
}

Partition read_partition(std::istream& in, std::size_t vertex_count) {
  LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t)) throw ParseError(r.line(), "missing 's part' header");
  if (t.size() != 4 || t[0] != "s" || t[1] != "part") r.fail("expected 's part <n> <classes>'");
  const auto n = r.number<std::size_t>(t[2]);
  const auto classes = r.number<std::size_t>(t[3]);
  if (n != vertex_count) {
    r.fail("partition covers " + std::to_string(n) + " vertices, instance has " + std::to_string(vertex_count));
  }
  constexpr std::uint32_t kUnset = 0xffffffffu;
  std::vector<std::uint32_t> labels(n, kUnset);
  std::map<std::int64_t, std::uint32_t> ids;
  while (r.next(t)) {
    if (t.size() != 2) r.fail("expected '<vertex> <class>'");
    const auto v = r.id(t[0], n, "vertex");
    const auto c = r.number<std::int64_t>(t[1]);
    if (c < 1) r.fail("class ids are positive");
    if (labels[v] != kUnset) r.fail("vertex " + t[0] + " listed twice");
    labels[v] = ids.emplace(c, static_cast<std::uint32_t>(ids.size())).first->second;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (labels[v] == kUnset) throw ParseError(r.line(), "vertex " + std::to_string(v + 1) + " has no class");
  }
  if (ids.size() != classes) {
    throw ParseError(r.line(), "header announces " + std::to_string(classes) + " classes, found " +
                                   std::to_string(ids.size()));
  }
  return Partition(labels);
}

void write_partition(std::ostream& out, const Partition& partition) {
  out << "s part " << partition.vertex_count() << ' ' << partition.coalition_count() << '\n';
  for (Vertex v = 0; v < partition.vertex_count(); ++v) out << v + 1 << ' ' << partition.coalition_of(v) + 1 << '\n';
}

DecompositionFile read_decomposition(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t)) throw ParseError(r.line(), "missing 's td' header");
  if (t.size() != 5 || t[0] != "s" || t[1] != "td") r.fail("expected 's td <bags> <max bag size> <n>'");
  const auto count = r.number<std::size_t>(t[2]);
  const auto max_bag = r.number<std::size_t>(t[3]);
  const auto n = r.number<std::size_t>(t[4]);
  std::vector<std::vector<Vertex>> bags(count);
  std::vector<std::uint8_t> seen(count, 0);
  std::vector<TreeDecomposition::Edge> edges;
  while (r.next(t)) {
    if (t[0] == "b") {
      if (t.size() < 2) r.fail("bag line without id");
      const auto id = r.id(t[1], count, "bag");
      if (seen[id]) r.fail("bag " + t[1] + " listed twice");
      seen[id] = 1;
      for (std::size_t i = 2; i < t.size(); ++i) bags[id].push_back(static_cast<Vertex>(r.id(t[i], n, "vertex")));
    } else {
      if (t.size() != 2) r.fail("expected a bag line or a tree edge '<id> <id>'");
      edges.emplace_back(r.id(t[0], count, "bag"), r.id(t[1], count, "bag"));
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!seen[i]) throw ParseError(r.line(), "bag " + std::to_string(i + 1) + " missing");
  }
  try {
    DecompositionFile out{TreeDecomposition(std::move(bags), std::move(edges)), n};
    if (out.decomposition.max_bag_size() != max_bag) {
      throw ParseError(r.line(), "header announces bag size " + std::to_string(max_bag) + ", largest bag has " +
                                     std::to_string(out.decomposition.max_bag_size()));
    }
    return out;
  } catch (const std::invalid_argument& e) {
    throw ParseError(r.line(), e.what());
  }
}

void write_decomposition(std::ostream& out, const TreeDecomposition& td, std::size_t vertex_count) {
  out << "s td " << td.bag_count() << ' ' << td.max_bag_size() << ' ' << vertex_count << '\n';
  for (std::size_t i = 0; i < td.bag_count(); ++i) {
    out << "b " << i + 1;
    for (Vertex v : td.bag(i)) out << ' ' << v + 1;
    out << '\n';
  }
  for (auto [a, b] : td.edges()) out << a + 1 << ' ' << b + 1 << '\n';
}

CnfFormula read_dimacs_cnf(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> t;
  if (!r.next(t)) throw ParseError(r.line(), "missing 'p cnf' header");
  if (t.size() != 4 || t[0] != "p" || t[1] != "cnf") r.fail("expected 'p cnf <vars> <clauses>'");
  const auto n = r.number<std::size_t>(t[2]);
  const auto m = r.number<std::size_t>(t[3]);
  std::vector<std::vector<int>> clauses;
  std::vector<int> current;
  while (r.next(t)) {
    if (t[0] == "%") break;
    for (const auto& token : t) {
      const int lit = r.number<int>(token);
      if (lit == 0) {
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (static_cast<std::size_t>(std::abs(lit)) > n) r.fail("literal " + token + " exceeds variable count");
      current.push_back(lit);
    }
  }
  if (!current.empty()) clauses.push_back(std::move(current));
  if (clauses.size() != m) {
    throw ParseError(r.line(), "header announces " + std::to_string(m) + " clauses, found " +
                                   std::to_string(clauses.size()));
  }
  try {
    return CnfFormula::from_dimacs(n, clauses);
  } catch (const std::invalid_argument& e) {
    throw ParseError(r.line(), e.what());
  }
}

std::vector<std::int64_t> read_integer_list(std::istream& in) {
  LineReader r(in, "c#");
  std::vector<std::string> t;
  std::vector<std::int64_t> out;
  while (r.next(t)) {
    for (const auto& token : t) out.push_back(r.number<std::int64_t>(token));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ashg
