#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "avgdyn/graph.hpp"

namespace avgdyn {

// Text format, one token group per line:
//   line 1:        n m k        (k = 0 when no partition is stored)
//   lines 2..m+1:  u v w        (0-based endpoints, weight)
//   last line:     n block ids, or "-" when k = 0
struct GraphFormatError : std::runtime_error {
    GraphFormatError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    int line_number;
};

struct GraphFile {
    WeightedGraph graph;
    std::optional<Partition> partition;
};

GraphFile read_graph(std::istream& in);
GraphFile read_graph_file(const std::string& path);

void write_graph(std::ostream& out, const WeightedGraph& g,
                 const std::optional<Partition>& partition);
void write_graph_file(const std::string& path, const WeightedGraph& g,
                      const std::optional<Partition>& partition);

// 17 significant digits: enough to round-trip any double exactly.
std::string format_double(double x);

// Atomic file replacement: write to a sibling temp file, then rename over.
void atomic_write_file(const std::string& path, const std::string& content);

} // namespace avgdyn
