#include "avgdyn/graph_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace avgdyn {

namespace {

bool next_content_line(std::istream& in, std::string& line, int& line_number) {
    while (std::getline(in, line)) {
        ++line_number;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;  // blank
        if (line[start] == '#') continue;          // comment
        return true;
    }
    return false;
}

long parse_int(const char*& cursor, int line, const char* what) {
    char* end = nullptr;
    errno = 0;
    long value = std::strtol(cursor, &end, 10);
    if (end == cursor || errno == ERANGE)
        throw GraphFormatError(line, std::string("expected integer ") + what);
    cursor = end;
    return value;
}

double parse_weight(const char*& cursor, int line) {
    char* end = nullptr;
    errno = 0;
    double value = std::strtod(cursor, &end);
    if (end == cursor) throw GraphFormatError(line, "expected edge weight");
    cursor = end;
    return value;
}

void expect_line_end(const char* cursor, int line) {
    while (*cursor == ' ' || *cursor == '\t' || *cursor == '\r') ++cursor;
    if (*cursor != '\0') throw GraphFormatError(line, "trailing characters");
}

} // namespace

GraphFile read_graph(std::istream& in) {
    std::string line;
    int line_number = 0;
    if (!next_content_line(in, line, line_number))
        throw GraphFormatError(line_number + 1, "missing header");
    const char* cursor = line.c_str();
    long n = parse_int(cursor, line_number, "node count");
    long m = parse_int(cursor, line_number, "edge count");
    long k = parse_int(cursor, line_number, "block count");
    expect_line_end(cursor, line_number);
    if (n <= 0) throw GraphFormatError(line_number, "node count must be positive");
    if (m < 0) throw GraphFormatError(line_number, "edge count must be nonnegative");
    if (k < 0 || k > n) throw GraphFormatError(line_number, "block count out of range");

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i) {
        if (!next_content_line(in, line, line_number))
            throw GraphFormatError(line_number + 1, "missing edge line");
        cursor = line.c_str();
        long u = parse_int(cursor, line_number, "edge endpoint");
        long v = parse_int(cursor, line_number, "edge endpoint");
        double w = parse_weight(cursor, line_number);
        expect_line_end(cursor, line_number);
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw GraphFormatError(line_number, "edge endpoint out of range");
        if (!(w > 0.0)) throw GraphFormatError(line_number, "edge weight must be positive");
        edges.push_back({static_cast<int>(u), static_cast<int>(v), w});
    }

    if (!next_content_line(in, line, line_number))
        throw GraphFormatError(line_number + 1, "missing partition line");
    GraphFile out;
    try {
        out.graph = WeightedGraph(static_cast<int>(n), std::move(edges));
    } catch (const std::invalid_argument& err) {
        throw GraphFormatError(line_number, err.what());
    }

    cursor = line.c_str();
    while (*cursor == ' ' || *cursor == '\t') ++cursor;
    if (*cursor == '-') {
        ++cursor;
        expect_line_end(cursor, line_number);
        if (k != 0) throw GraphFormatError(line_number, "header block count is nonzero but no partition given");
        return out;
    }
    if (k == 0) throw GraphFormatError(line_number, "partition given but header block count is zero");
    std::vector<int> assignment(static_cast<std::size_t>(n));
    for (long u = 0; u < n; ++u) {
        long b = parse_int(cursor, line_number, "block id");
        if (b < 0 || b >= k) throw GraphFormatError(line_number, "block id out of range");
        assignment[static_cast<std::size_t>(u)] = static_cast<int>(b);
    }
    expect_line_end(cursor, line_number);
    try {
        out.partition = Partition(static_cast<int>(n), static_cast<int>(k), std::move(assignment));
    } catch (const std::invalid_argument& err) {
        throw GraphFormatError(line_number, err.what());
    }
    return out;
}

GraphFile read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return read_graph(in);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_graph(std::ostream& out, const WeightedGraph& g,
                 const std::optional<Partition>& partition) {
    int k = partition ? partition->num_blocks() : 0;
    out << g.num_nodes() << ' ' << g.num_edges() << ' ' << k << '\n';
    for (const auto& e : g.edges())
        out << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
    if (!partition) {
        out << "-\n";
        return;
    }
    const auto& a = partition->assignment();
    for (std::size_t i = 0; i < a.size(); ++i) out << (i ? " " : "") << a[i];
    out << '\n';
}

void write_graph_file(const std::string& path, const WeightedGraph& g,
                      const std::optional<Partition>& partition) {
    std::ostringstream buffer;
    write_graph(buffer, g, partition);
    atomic_write_file(path, buffer.str());
}

void atomic_write_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename failed: " + path + " (" + std::strerror(errno) + ")");
    }
}

} // namespace avgdyn
