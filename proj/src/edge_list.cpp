// qlouvain - edge_list.cpp
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <string>

#include "qlouvain/graph.hpp"
#include "text.hpp"

namespace qlouvain {

namespace {

[[noreturn]] void parse_fail(std::string_view source, std::size_t line_no,
                             const std::string& msg) {
  throw GraphError(GraphErrorKind::parse, std::string(source) + ":" +
                                              std::to_string(line_no) + ": " + msg);
}

// Picks "n=<count>" out of a "# fcs ..." metadata comment.
std::optional<std::size_t> declared_vertex_count(std::string_view comment) {
  const auto tokens = text::split_ws(comment.substr(1));
  if (tokens.empty() || tokens[0] != "fcs") return std::nullopt;
  for (auto tok : tokens) {
    if (tok.substr(0, 2) == "n=") {
      std::size_t n = 0;
      if (text::parse_number(tok.substr(2), n)) return n;
    }
  }
  return std::nullopt;
}

}  // namespace

Graph parse_edge_list(std::istream& in, std::string_view source) {
  std::vector<Edge> edges;
  std::size_t n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      if (auto declared = declared_vertex_count(body)) n = std::max(n, *declared);
      continue;
    }
    const auto tokens = text::split_ws(body);
    if (tokens.size() < 2 || tokens.size() > 3) {
      parse_fail(source, line_no, "expected \"u v [w]\"");
    }
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    if (!text::parse_number(tokens[0], u) || !text::parse_number(tokens[1], v)) {
      parse_fail(source, line_no, "vertex ids must be non-negative integers");
    }
    if (u >= std::numeric_limits<VertexId>::max() || v >= std::numeric_limits<VertexId>::max()) {
      parse_fail(source, line_no, "vertex id too large");
    }
    double w = 1.0;
    if (tokens.size() == 3) {
      if (!text::parse_number(tokens[2], w) || !std::isfinite(w)) {
        parse_fail(source, line_no, "malformed weight");
      }
      if (w < 0.0) parse_fail(source, line_no, "negative weight");
      if (w == 0.0) parse_fail(source, line_no, "zero weight");
    }
    if (u == v) {
      throw GraphError(GraphErrorKind::self_loop, std::string(source) + ":" +
                                                      std::to_string(line_no) +
                                                      ": self-loop on vertex " +
                                                      std::to_string(u));
    }
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
    n = std::max<std::size_t>(n, std::max(u, v) + 1);
  }
  if (edges.empty()) {
    throw GraphError(GraphErrorKind::empty_graph, std::string(source) + ": no edges");
  }
  return Graph::from_edges(n, edges);
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw GraphError(GraphErrorKind::io, "cannot open " + path.string());
  }
  return parse_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const Graph& g, std::string_view header_line) {
  if (!header_line.empty()) out << header_line << '\n';
  for (const Edge& e : g.edges()) {
    out << e.u << ' ' << e.v;
    if (e.weight != 1.0) out << ' ' << text::format_double(e.weight);
    out << '\n';
  }
}

}  // namespace qlouvain
