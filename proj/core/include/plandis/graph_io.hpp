#ifndef PLANDIS_GRAPH_IO_HPP
#define PLANDIS_GRAPH_IO_HPP

#include <string>

#include "plandis/graph.hpp"

namespace plandis {

// JSON document layout:
//   {"vertices": [{"id": 0, "m": 1.0, "label": "o"}, ...],
//    "edges":    [{"x": 0, "y": 1, "b": 1.0}, ...],
//    "root":     0}
// Canonical form sorts vertices by id and edges by (min id, max id).
WeightedGraph read_graph(const std::string& path);
void write_graph(const WeightedGraph& g, const std::string& path);

std::string graph_to_json_string(const WeightedGraph& g);
WeightedGraph graph_from_json_string(const std::string& text);

VertexFunction read_vertex_function(const std::string& path, std::size_t expected_size);
void write_vertex_function(const VertexFunction& f, const std::string& path);

}  // namespace plandis

#endif  // PLANDIS_GRAPH_IO_HPP
