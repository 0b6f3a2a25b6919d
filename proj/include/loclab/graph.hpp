// graph.hpp - finite connected graphs, balls, boundaries, growth certificates.
#pragma once

#include <memory>
#include <string>
#include <vector>

namespace loclab {

using Vertex = int;
using VertexSet = std::vector<Vertex>; // kept sorted ascending

// Finite connected graph with all-pairs BFS distances cached at construction.
// Immutable afterwards, safe to share across parallel trials.
class FiniteGraph {
public:
    FiniteGraph(int n_vertices, const std::vector<std::pair<Vertex, Vertex>>& edges, int dim_hint);

    int size() const { return static_cast<int>(adjacency_.size()); }
    int dim_hint() const { return dim_hint_; }
    const std::vector<Vertex>& neighbors(Vertex v) const;
    int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }
    bool has_vertex(Vertex v) const { return v >= 0 && v < size(); }
    bool has_edge(Vertex u, Vertex v) const;

    // Shortest-path distance; both vertices must exist.
    int distance(Vertex a, Vertex b) const;
    int diameter() const;

    // {y : d(center,y) <= r}, sorted. Throws UnknownVertex for bad centers.
    VertexSet ball(Vertex center, int r) const;
    // {y : d(center,y) == r}, sorted.
    VertexSet sphere(Vertex center, int r) const;

    std::vector<std::pair<Vertex, Vertex>> edge_list() const;

    std::string to_json() const;
    static std::shared_ptr<const FiniteGraph> from_json(const std::string& text);

private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<std::vector<int>> dist_; // dist_[a][b], -1 unreachable (never after ctor check)
    int dim_hint_ = 1;
};

using GraphPtr = std::shared_ptr<const FiniteGraph>;

// Path graph on {0..n-1}; dim_hint 1.
GraphPtr build_interval_graph(int n);

// Box {0..side-1}^d with nearest-neighbor edges; vertex id is the row-major
// linear index. dim_hint d.
GraphPtr build_box_graph(int d, int side);

// Linear index of a box coordinate (convenience for tests and configs).
Vertex box_vertex(int d, int side, const std::vector<int>& coords);

// Connected vertex subset of an ambient graph. Carries its own intrinsic
// BFS metric; the ambient metric is never silently substituted.
class SubgraphView {
public:
    SubgraphView(GraphPtr ambient, VertexSet members);

    const GraphPtr& ambient() const { return ambient_; }
    const VertexSet& members() const { return members_; }
    int size() const { return static_cast<int>(members_.size()); }
    bool contains(Vertex v) const;
    bool is_proper() const { return size() < ambient_->size(); }

    int local_index(Vertex ambient_vertex) const; // throws UnknownVertex
    Vertex ambient_vertex(int local) const { return members_[static_cast<size_t>(local)]; }

    int intrinsic_degree(Vertex v) const;
    int intrinsic_distance(Vertex a, Vertex b) const;
    VertexSet intrinsic_ball(Vertex center, int r) const;

    // Induced graph on the members (intrinsic metric), dim_hint inherited.
    GraphPtr as_graph() const;

private:
    GraphPtr ambient_;
    VertexSet members_;
    std::vector<int> local_of_; // ambient id -> local index, -1 outside
    std::vector<std::vector<int>> intrinsic_dist_;
};

// Ball of the ambient graph materialized as a view.
SubgraphView ball_view(GraphPtr g, Vertex center, int r);
// View containing every vertex (used for whole-graph Hamiltonians).
SubgraphView full_view(GraphPtr g);

struct EdgeBoundary {
    VertexSet inner; // within the subset, adjacent to the complement
    VertexSet outer; // outside, adjacent to the subset
    std::vector<std::pair<Vertex, Vertex>> edges; // (inner, outer) crossing pairs
};

// The three boundary notions relative to the ambient graph.
// Throws EmptyBoundary when the view is not proper.
EdgeBoundary boundary(const SubgraphView& view);

struct GrowthCertificate {
    double c_d = 1.0;
    int probe_range = 1;
    int dim = 1;
};

// c_d = max over all centers x and 1 <= L <= l_max of |B_L(x)| / L^d.
GrowthCertificate ball_growth_constant(const FiniteGraph& g, int l_max);

} // namespace loclab
