#include "plandis/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <json.hpp>

namespace plandis {

using nlohmann::ordered_json;

namespace {

ordered_json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return doc;
}

}  // namespace

std::string graph_to_json_string(const WeightedGraph& g) {
  ordered_json doc;
  doc["vertices"] = ordered_json::array();
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    ordered_json v;
    v["id"] = x;
    v["m"] = g.measure(x);
    if (g.has_labels() && !g.label(x).empty()) v["label"] = g.label(x);
    doc["vertices"].push_back(v);
  }
  doc["edges"] = ordered_json::array();
  for (const auto& e : g.edge_triples()) {
    doc["edges"].push_back({{"x", e.x}, {"y", e.y}, {"b", e.b}});
  }
  doc["root"] = g.root();
  return doc.dump(2) + "\n";
}

WeightedGraph graph_from_json_string(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph document: ") + e.what());
  }
  if (!doc.contains("vertices") || !doc.contains("edges") || !doc.contains("root")) {
    throw ParseError("graph document needs \"vertices\", \"edges\" and \"root\"");
  }

  // Ids in the file may be sparse; remap to dense 0..n-1 in ascending order.
  std::map<long long, std::pair<double, std::string>> verts;
  for (const auto& v : doc["vertices"]) {
    if (!v.contains("id") || !v.contains("m")) {
      throw ParseError("vertex entry needs \"id\" and \"m\"");
    }
    const long long id = v["id"].get<long long>();
    if (verts.count(id)) throw ParseError("vertex id " + std::to_string(id) + " repeated");
    verts[id] = {v["m"].get<double>(), v.value("label", std::string())};
  }
  std::map<long long, VertexId> remap;
  std::vector<double> measures;
  std::vector<std::string> labels;
  bool any_label = false;
  for (const auto& [id, vm] : verts) {
    remap[id] = static_cast<VertexId>(measures.size());
    measures.push_back(vm.first);
    labels.push_back(vm.second);
    if (!vm.second.empty()) any_label = true;
  }

  std::vector<EdgeTriple> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.contains("x") || !e.contains("y") || !e.contains("b")) {
      throw ParseError("edge entry needs \"x\", \"y\" and \"b\"");
    }
    const long long x = e["x"].get<long long>();
    const long long y = e["y"].get<long long>();
    if (!remap.count(x) || !remap.count(y)) {
      throw ParseError("edge references unknown vertex id");
    }
    edges.push_back({remap[x], remap[y], e["b"].get<double>()});
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeTriple& a, const EdgeTriple& b) {
    const auto ka = std::minmax(a.x, a.y);
    const auto kb = std::minmax(b.x, b.y);
    return ka < kb;
  });

  const long long root = doc["root"].get<long long>();
  if (!remap.count(root)) throw ParseError("root id not among vertices");
  return WeightedGraph::build(edges, measures, remap[root],
                              any_label ? labels : std::vector<std::string>{});
}

WeightedGraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return graph_from_json_string(text);
}

void write_graph(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << graph_to_json_string(g);
}

VertexFunction read_vertex_function(const std::string& path, std::size_t expected_size) {
  const ordered_json doc = parse_file(path);
  VertexFunction f(expected_size);
  if (doc.is_array()) {
    if (doc.size() != expected_size) {
      throw ParseError("vertex function length " + std::to_string(doc.size()) +
                       " does not match graph size " + std::to_string(expected_size));
    }
    for (std::size_t i = 0; i < expected_size; ++i) f.values[i] = doc[i].get<double>();
  } else if (doc.is_object() && doc.contains("values")) {
    const auto& vals = doc["values"];
    if (vals.size() != expected_size) {
      throw ParseError("vertex function length mismatch");
    }
    for (std::size_t i = 0; i < expected_size; ++i) f.values[i] = vals[i].get<double>();
  } else {
    throw ParseError("vertex function document must be an array or {\"values\": [...]}");
  }
  f.check_finite();
  return f;
}

void write_vertex_function(const VertexFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  ordered_json doc;
  doc["values"] = f.values;
  out << doc.dump(2) << "\n";
}

}  // namespace plandis
