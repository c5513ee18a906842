#include "plandis/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace plandis {

void VertexFunction::check_finite(const std::string& name) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw PreconditionError(name + " has a non-finite entry at vertex " + std::to_string(i));
    }
  }
}

BoundaryDecomposition BoundaryDecomposition::closed(std::size_t n) {
  BoundaryDecomposition dec;
  dec.is_boundary.assign(n, 0);
  dec.interior.resize(n);
  for (std::size_t i = 0; i < n; ++i) dec.interior[i] = static_cast<VertexId>(i);
  return dec;
}

WeightedGraph WeightedGraph::build(const std::vector<EdgeTriple>& edges,
                                   const std::vector<double>& measures,
                                   VertexId root,
                                   std::vector<std::string> labels) {
  const std::size_t n = measures.size();
  if (n == 0) throw PreconditionError("graph needs at least one vertex");
  if (root < 0 || static_cast<std::size_t>(root) >= n) {
    throw PreconditionError("root id out of range");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(measures[i] > 0.0) || !std::isfinite(measures[i])) {
      throw NonpositiveMeasure("m(" + std::to_string(i) + ") must be strictly positive");
    }
  }
  if (!labels.empty() && labels.size() != n) {
    throw PreconditionError("label list length does not match vertex count");
  }

  std::set<std::pair<VertexId, VertexId>> seen;
  std::vector<std::vector<Edge>> adj(n);
  for (const auto& e : edges) {
    if (e.x < 0 || static_cast<std::size_t>(e.x) >= n || e.y < 0 ||
        static_cast<std::size_t>(e.y) >= n) {
      throw PreconditionError("edge endpoint out of range");
    }
    if (e.x == e.y) {
      throw SelfLoop("self-loop at vertex " + std::to_string(e.x));
    }
    if (!(e.b > 0.0) || !std::isfinite(e.b)) {
      throw NonpositiveWeight("b(" + std::to_string(e.x) + "," + std::to_string(e.y) +
                              ") must be strictly positive");
    }
    const auto key = std::minmax(e.x, e.y);
    if (!seen.insert(key).second) {
      throw DuplicateEdge("edge (" + std::to_string(key.first) + "," +
                          std::to_string(key.second) + ") stored twice");
    }
    adj[static_cast<std::size_t>(e.x)].push_back({e.y, e.b});
    adj[static_cast<std::size_t>(e.y)].push_back({e.x, e.b});
  }

  WeightedGraph g;
  g.root_ = root;
  g.measure_ = measures;
  g.labeled_ = !labels.empty();
  g.labels_ = g.labeled_ ? std::move(labels) : std::vector<std::string>(n);
  g.offset_.assign(n + 1, 0);
  g.wdeg_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adj[i].begin(), adj[i].end(),
              [](const Edge& a, const Edge& b) { return a.to < b.to; });
    g.offset_[i + 1] = g.offset_[i] + static_cast<int>(adj[i].size());
    for (const auto& e : adj[i]) {
      g.adj_.push_back(e);
      g.wdeg_[i] += e.b;
    }
  }

  // BFS depths from the root; rejects disconnected graphs.
  g.depth_.assign(n, -1);
  std::queue<VertexId> q;
  g.depth_[static_cast<std::size_t>(root)] = 0;
  q.push(root);
  std::size_t reached = 0;
  while (!q.empty()) {
    const VertexId x = q.front();
    q.pop();
    ++reached;
    g.max_depth_ = std::max(g.max_depth_, g.depth_[static_cast<std::size_t>(x)]);
    for (const auto& e : g.neighbors(x)) {
      if (g.depth_[static_cast<std::size_t>(e.to)] < 0) {
        g.depth_[static_cast<std::size_t>(e.to)] = g.depth_[static_cast<std::size_t>(x)] + 1;
        q.push(e.to);
      }
    }
  }
  if (reached != n) {
    throw DisconnectedGraph("BFS from root reaches " + std::to_string(reached) + " of " +
                            std::to_string(n) + " vertices");
  }
  return g;
}

double WeightedGraph::edge_weight(VertexId x, VertexId y) const {
  for (const auto& e : neighbors(x)) {
    if (e.to == y) return e.b;
    if (e.to > y) break;
  }
  return 0.0;
}

std::vector<EdgeTriple> WeightedGraph::edge_triples() const {
  std::vector<EdgeTriple> out;
  out.reserve(edge_count());
  for (VertexId x = 0; static_cast<std::size_t>(x) < n(); ++x) {
    for (const auto& e : neighbors(x)) {
      if (x < e.to) out.push_back({x, e.to, e.b});
    }
  }
  return out;
}

BoundaryDecomposition WeightedGraph::decomposition() const {
  BoundaryDecomposition dec;
  dec.is_boundary = boundary_mask_.empty() ? std::vector<std::uint8_t>(n(), 0) : boundary_mask_;
  for (VertexId x = 0; static_cast<std::size_t>(x) < n(); ++x) {
    if (dec.is_boundary[static_cast<std::size_t>(x)]) {
      dec.boundary.push_back(x);
    } else {
      dec.interior.push_back(x);
    }
  }
  return dec;
}

std::vector<VertexId> WeightedGraph::sphere(int radius) const {
  std::vector<VertexId> out;
  for (VertexId x = 0; static_cast<std::size_t>(x) < n(); ++x) {
    if (depth_[static_cast<std::size_t>(x)] == radius) out.push_back(x);
  }
  return out;
}

BoundaryDecomposition ball_decomposition(const WeightedGraph& g, int radius) {
  if (radius < 1) throw PreconditionError("ball radius must be >= 1");
  if (g.max_depth() < radius) {
    throw RadiusExceedsGraph("graph depth " + std::to_string(g.max_depth()) +
                             " < requested radius " + std::to_string(radius));
  }
  if (g.max_depth() > radius) {
    throw PreconditionError("graph reaches depth " + std::to_string(g.max_depth()) +
                            " past the requested ball radius " + std::to_string(radius));
  }
  BoundaryDecomposition dec;
  dec.is_boundary.assign(g.n(), 0);
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    if (g.depth(x) == radius) {
      dec.is_boundary[static_cast<std::size_t>(x)] = 1;
      dec.boundary.push_back(x);
    } else {
      dec.interior.push_back(x);
    }
  }
  return dec;
}

WeightedGraph mark_boundary(const WeightedGraph& g, const BoundaryDecomposition& dec) {
  if (dec.is_boundary.size() != g.n()) {
    throw PreconditionError("decomposition size does not match graph");
  }
  // Every neighbor of an interior vertex must be stored -- true by
  // construction here since the decomposition covers all stored vertices.
  WeightedGraph out = g;
  out.boundary_mask_ = dec.is_boundary;
  return out;
}

}  // namespace plandis
