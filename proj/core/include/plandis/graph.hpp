#ifndef PLANDIS_GRAPH_HPP
#define PLANDIS_GRAPH_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "plandis/errors.hpp"

namespace plandis {

using VertexId = int;

// One directed half of a stored undirected edge: neighbor id and weight b(x,y).
struct Edge {
  VertexId to = 0;
  double b = 0.0;
};

struct EdgeTriple {
  VertexId x = 0;
  VertexId y = 0;
  double b = 0.0;

  bool operator==(const EdgeTriple&) const = default;
};

// Real-valued function on the vertex set, aligned with the graph's vertex ids.
// Stored entries must be finite; the 0*inf conventions live inside the
// operations, never in stored data.
struct VertexFunction {
  std::vector<double> values;

  VertexFunction() = default;
  explicit VertexFunction(std::size_t n, double fill = 0.0) : values(n, fill) {}
  explicit VertexFunction(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double operator[](VertexId x) const { return values[static_cast<std::size_t>(x)]; }
  double& operator[](VertexId x) { return values[static_cast<std::size_t>(x)]; }

  static VertexFunction constant(std::size_t n, double c) { return VertexFunction(n, c); }
  static VertexFunction indicator(std::size_t n, VertexId x) {
    VertexFunction f(n);
    f[x] = 1.0;
    return f;
  }

  // Throws PreconditionError if any entry is NaN or infinite.
  void check_finite(const std::string& name = "vertex function") const;
};

// Interior/boundary split of a finite truncation. Operators are evaluated at
// interior vertices only; every neighbor of an interior vertex is stored.
struct BoundaryDecomposition {
  std::vector<VertexId> interior;
  std::vector<VertexId> boundary;
  std::vector<std::uint8_t> is_boundary;  // per vertex

  static BoundaryDecomposition closed(std::size_t n);
  bool interior_vertex(VertexId x) const { return !is_boundary[static_cast<std::size_t>(x)]; }
};

// Finite symmetric weighted graph (b, m) with root o and precomputed BFS
// depths |x|. Immutable after construction; safe to share across threads.
//
// Adjacency lists are sorted by neighbor id so that every sweep over edges is
// reproducible.
class WeightedGraph {
 public:
  // Validating constructor. Rejects self-loops, duplicate edges, nonpositive
  // weights/measures and disconnected graphs.
  static WeightedGraph build(const std::vector<EdgeTriple>& edges,
                             const std::vector<double>& measures,
                             VertexId root = 0,
                             std::vector<std::string> labels = {});

  std::size_t n() const { return measure_.size(); }
  VertexId root() const { return root_; }
  int depth(VertexId x) const { return depth_[static_cast<std::size_t>(x)]; }
  int max_depth() const { return max_depth_; }
  double measure(VertexId x) const { return measure_[static_cast<std::size_t>(x)]; }
  double weighted_degree(VertexId x) const { return wdeg_[static_cast<std::size_t>(x)]; }
  std::span<const Edge> neighbors(VertexId x) const {
    const auto b = static_cast<std::size_t>(offset_[static_cast<std::size_t>(x)]);
    const auto e = static_cast<std::size_t>(offset_[static_cast<std::size_t>(x) + 1]);
    return {adj_.data() + b, e - b};
  }
  // 0 if x !~ y.
  double edge_weight(VertexId x, VertexId y) const;
  const std::string& label(VertexId x) const { return labels_[static_cast<std::size_t>(x)]; }
  bool has_labels() const { return !labels_.empty() && labeled_; }

  std::size_t edge_count() const { return adj_.size() / 2; }
  // Unordered edges as (x, y, b) with x < y, sorted.
  std::vector<EdgeTriple> edge_triples() const;
  std::vector<double> measures() const { return measure_; }

  // Truncation marking. A graph built by `build` is closed (empty boundary);
  // model-graph balls mark their outermost sphere.
  bool has_boundary() const { return !boundary_mask_.empty(); }
  bool is_interior(VertexId x) const {
    return boundary_mask_.empty() || !boundary_mask_[static_cast<std::size_t>(x)];
  }
  BoundaryDecomposition decomposition() const;
  // All vertices at the given depth.
  std::vector<VertexId> sphere(int radius) const;

 private:
  friend WeightedGraph mark_boundary(const WeightedGraph& g, const BoundaryDecomposition& dec);

  VertexId root_ = 0;
  int max_depth_ = 0;
  bool labeled_ = false;
  std::vector<double> measure_;
  std::vector<double> wdeg_;
  std::vector<int> depth_;
  std::vector<int> offset_;  // CSR offsets into adj_
  std::vector<Edge> adj_;
  std::vector<std::uint8_t> boundary_mask_;  // empty = closed graph
  std::vector<std::string> labels_;
};

using GraphPtr = std::shared_ptr<const WeightedGraph>;

// Partition an exact ball B_radius into interior {|x| < radius} and boundary
// {|x| = radius}. The graph must not reach past the radius.
BoundaryDecomposition ball_decomposition(const WeightedGraph& g, int radius);

// Copy of g with the given decomposition attached.
WeightedGraph mark_boundary(const WeightedGraph& g, const BoundaryDecomposition& dec);

}  // namespace plandis

#endif  // PLANDIS_GRAPH_HPP
