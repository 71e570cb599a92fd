#ifndef TGE_GRAPH_IO_HPP
#define TGE_GRAPH_IO_HPP

// Graph specification files:
//   {"vertices": ["v", ...],
//    "edges": [{"name": "e1", "source": "v", "range": "v", "p": 2, "q": 1}, ...]}
// Unknown keys are rejected and p, q must be JSON integers.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tge/errors.hpp"
#include "tge/graph.hpp"

namespace tge {

/// Well-formed JSON that does not match the graph schema.
class FormatError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw FormatError("unknown key '" + key + "' in " + where);
  }
}

inline const nlohmann::json& require_key(const nlohmann::json& obj, const std::string& key,
                                         const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError("missing key '" + key + "' in " + where);
  return *it;
}

inline std::string require_string(const nlohmann::json& obj, const std::string& key,
                                  const std::string& where) {
  const auto& v = require_key(obj, key, where);
  if (!v.is_string()) throw FormatError("'" + key + "' in " + where + " must be a string");
  return v.get<std::string>();
}

inline std::int64_t require_integer(const nlohmann::json& obj, const std::string& key,
                                    const std::string& where) {
  const auto& v = require_key(obj, key, where);
  if (!v.is_number_integer()) throw FormatError("'" + key + "' in " + where + " must be an integer");
  if (v.is_number_unsigned() &&
      v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
    throw FormatError("'" + key + "' in " + where + " is out of range");
  return v.get<std::int64_t>();
}

}  // namespace detail

/// Builds a graph from parsed JSON. Schema problems raise FormatError; edges
/// naming unknown vertices and violated hypotheses raise ValidationError with
/// every violation listed.
inline CircleGraph graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw FormatError("graph specification must be a JSON object");
  detail::reject_unknown_keys(doc, {"vertices", "edges"}, "graph specification");
  const auto& vs = detail::require_key(doc, "vertices", "graph specification");
  const auto& es = detail::require_key(doc, "edges", "graph specification");
  if (!vs.is_array()) throw FormatError("'vertices' must be an array");
  if (!es.is_array()) throw FormatError("'edges' must be an array");

  std::vector<std::string> vertices;
  for (const auto& v : vs) {
    if (!v.is_string()) throw FormatError("vertex names must be strings");
    vertices.push_back(v.get<std::string>());
  }
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto& e = es[i];
    const std::string where = "edge #" + std::to_string(i + 1);
    if (!e.is_object()) throw FormatError(where + " must be an object");
    detail::reject_unknown_keys(e, {"name", "source", "range", "p", "q"}, where);
    edges.push_back(EdgeSpec{detail::require_string(e, "name", where),
                             detail::require_string(e, "source", where),
                             detail::require_string(e, "range", where),
                             detail::require_integer(e, "p", where),
                             detail::require_integer(e, "q", where)});
  }

  const std::set<std::string> known(vertices.begin(), vertices.end());
  std::vector<Violation> dangling;
  for (const auto& e : edges) {
    if (!known.count(e.source)) dangling.push_back({e.name, "unknown source vertex '" + e.source + "'"});
    if (!known.count(e.range)) dangling.push_back({e.name, "unknown range vertex '" + e.range + "'"});
  }
  if (!dangling.empty()) throw ValidationError(std::move(dangling));

  CircleGraph g(std::move(vertices), edges);
  require_valid(g);
  return g;
}

/// Parses specification text; malformed JSON raises ParseError at its byte offset.
inline CircleGraph parse_graph(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed JSON: " + std::string(e.what()), e.byte);
  }
  return graph_from_json(doc);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buf.str();
}

inline CircleGraph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

/// Canonical form: vertices and edges in stored order, keys in schema order.
inline nlohmann::ordered_json graph_to_json(const CircleGraph& g) {
  nlohmann::ordered_json doc;
  doc["vertices"] = g.vertices();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) {
    nlohmann::ordered_json j;
    j["name"] = e.name;
    j["source"] = g.vertex_name(e.source);
    j["range"] = g.vertex_name(e.range);
    j["p"] = e.p;
    j["q"] = e.q;
    edges.push_back(std::move(j));
  }
  doc["edges"] = std::move(edges);
  return doc;
}

/// FNV-1a (64 bit) of the compact canonical JSON, as 16 hex digits.
inline std::string graph_hash(const CircleGraph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : graph_to_json(g).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace tge

#endif  // TGE_GRAPH_IO_HPP
