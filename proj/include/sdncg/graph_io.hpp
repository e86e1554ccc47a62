#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sdncg/graph.hpp"

namespace sdncg {

// Text format: a header line "n m" followed by m lines "u v" with u < v,
// 0-indexed and whitespace separated. Blank lines are ignored.

inline HostGraph parse_graph_text(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](std::istringstream& fields) {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      fields = std::istringstream(line);
      return true;
    }
    return false;
  };
  auto require_end = [&](std::istringstream& fields) {
    std::string rest;
    if (fields >> rest) throw parse_error("unexpected trailing token '" + rest + "'", line_no);
  };

  std::istringstream fields;
  if (!next_line(fields)) throw parse_error("empty graph file", 0);
  long long n = 0, m = 0;
  if (!(fields >> n >> m)) throw parse_error("expected header 'n m'", line_no);
  require_end(fields);
  if (n < 2 || m < 0) throw parse_error("invalid header n=" + std::to_string(n) + " m=" + std::to_string(m), line_no);

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_line(fields)) {
      throw parse_error("expected " + std::to_string(m) + " edges, found " + std::to_string(i), line_no + 1);
    }
    long long u = 0, v = 0;
    if (!(fields >> u >> v)) throw parse_error("expected edge 'u v'", line_no);
    require_end(fields);
    if (u < 0 || v >= n || u >= v) {
      throw parse_error("edge " + std::to_string(u) + " " + std::to_string(v) + " violates 0 <= u < v < n", line_no);
    }
    edges.emplace_back(static_cast<Node>(u), static_cast<Node>(v));
  }
  if (next_line(fields)) throw parse_error("unexpected content after " + std::to_string(m) + " edges", line_no);
  try {
    return HostGraph(static_cast<int>(n), std::move(edges));
  } catch (const structural_error& e) {
    throw parse_error(e.what(), 0);
  }
}

inline HostGraph parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  return parse_graph_text(in);
}

inline void write_graph_text(std::ostream& out, const HostGraph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline std::string graph_to_text(const HostGraph& g) {
  std::ostringstream out;
  write_graph_text(out, g);
  return out.str();
}

// JSON format: {"n": <int>, "edges": [[u, v], ...]}.

inline nlohmann::json graph_to_json(const HostGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.node_count()}, {"edges", std::move(edges)}};
}

inline HostGraph parse_graph_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw parse_error("graph JSON needs fields 'n' and 'edges'", 0);
  }
  if (!j["n"].is_number_integer() || !j["edges"].is_array()) {
    throw parse_error("graph JSON: 'n' must be an integer and 'edges' an array", 0);
  }
  const auto n = j["n"].get<long long>();
  std::vector<Edge> edges;
  for (const auto& pair : j["edges"]) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
      throw parse_error("graph JSON: every edge must be a two-element integer array", 0);
    }
    auto u = pair[0].get<long long>(), v = pair[1].get<long long>();
    if (u < 0 || v < 0 || u >= n || v >= n) throw parse_error("graph JSON: edge endpoint out of range", 0);
    edges.emplace_back(static_cast<Node>(u), static_cast<Node>(v));
  }
  try {
    return HostGraph(static_cast<int>(n), std::move(edges));
  } catch (const structural_error& e) {
    throw parse_error(e.what(), 0);
  }
}

/// Reads either format; JSON is recognized by a leading '{'.
inline HostGraph parse_graph(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw parse_error(std::string("graph JSON: ") + e.what(), 0);
    }
    return parse_graph_json(j);
  }
  return parse_graph_text(text);
}

inline HostGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open graph file '" + path + "'", 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

}  // namespace sdncg
