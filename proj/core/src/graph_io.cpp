#include "qcons/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qcons/error.hpp"

namespace qcons {

namespace {

// Yields the non-blank, non-comment lines of `in` with their line numbers.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    std::istringstream fields(line);
    fn(fields, line_no);
  }
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
  throw GraphError("line " + std::to_string(line_no) + ": " + what);
}

void expect_end(std::istringstream& fields, std::size_t line_no) {
  std::string extra;
  if (fields >> extra) {
    bad_line(line_no, "unexpected trailing field '" + extra + "'");
  }
}

NodeId one_based(long long raw, std::size_t line_no) {
  if (raw < 1) {
    bad_line(line_no, "node ids are 1-based, got " + std::to_string(raw));
  }
  return static_cast<NodeId>(raw - 1);
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw GraphError("cannot open " + path.string());
  }
  return in;
}

}  // namespace

Digraph read_graph(std::istream& in) {
  long long n = -1;
  std::vector<Edge> edges;
  for_each_record(in, [&](std::istringstream& fields, std::size_t line_no) {
    if (n < 0) {
      if (!(fields >> n) || n < 1) {
        bad_line(line_no, "expected a positive node count");
      }
      expect_end(fields, line_no);
      return;
    }
    long long u = 0;
    long long v = 0;
    if (!(fields >> u >> v)) {
      bad_line(line_no, "expected `u v`");
    }
    expect_end(fields, line_no);
    edges.push_back({one_based(u, line_no), one_based(v, line_no)});
  });
  if (n < 0) {
    throw GraphError("graph file is empty");
  }
  return Digraph::build(static_cast<std::size_t>(n), edges);
}

Digraph read_graph_file(const std::filesystem::path& path) {
  auto in = open(path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Digraph& g) {
  out << g.node_count() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.sender + 1 << ' ' << e.receiver + 1 << '\n';
  }
}

PriorityMap read_priorities(std::istream& in, const Digraph& g) {
  std::vector<PriorityEntry> entries;
  for_each_record(in, [&](std::istringstream& fields, std::size_t line_no) {
    long long j = 0;
    long long l = 0;
    long long p = -1;
    if (!(fields >> j >> l >> p) || p < 0) {
      bad_line(line_no, "expected `node neighbor priority`");
    }
    expect_end(fields, line_no);
    entries.push_back({one_based(j, line_no), one_based(l, line_no), static_cast<std::size_t>(p)});
  });
  return override_priorities(g, entries);
}

PriorityMap read_priorities_file(const std::filesystem::path& path, const Digraph& g) {
  auto in = open(path);
  return read_priorities(in, g);
}

void write_priorities(std::ostream& out, const PriorityMap& priorities) {
  for (NodeId j = 0; j < priorities.node_count(); ++j) {
    const auto order = priorities.order(j);
    for (std::size_t p = 0; p < order.size(); ++p) {
      out << j + 1 << ' ' << order[p] + 1 << ' ' << p << '\n';
    }
  }
}

}  // namespace qcons
