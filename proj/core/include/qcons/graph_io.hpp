#pragma once

#include <filesystem>
#include <iosfwd>

#include "qcons/digraph.hpp"

namespace qcons {

// Graph file: first line `n`, then one `u v` line per directed edge u -> v,
// 1-based. Blank lines and lines starting with '#' are ignored.
Digraph read_graph(std::istream& in);
Digraph read_graph_file(const std::filesystem::path& path);
void write_graph(std::ostream& out, const Digraph& g);

// Priority file: `j neighbor priority` per line, node ids 1-based, priority
// 0-based. Nodes not mentioned keep ascending-index order.
PriorityMap read_priorities(std::istream& in, const Digraph& g);
PriorityMap read_priorities_file(const std::filesystem::path& path, const Digraph& g);
void write_priorities(std::ostream& out, const PriorityMap& priorities);

}  // namespace qcons
