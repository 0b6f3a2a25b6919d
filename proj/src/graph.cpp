#include "loclab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include <nlohmann/json.hpp>

#include "loclab/errors.hpp"

namespace loclab {

namespace {

std::vector<int> bfs_from(const std::vector<std::vector<Vertex>>& adj, Vertex source) {
    std::vector<int> dist(adj.size(), -1);
    std::deque<Vertex> queue{source};
    dist[static_cast<size_t>(source)] = 0;
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        for (Vertex w : adj[static_cast<size_t>(v)]) {
            if (dist[static_cast<size_t>(w)] < 0) {
                dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

} // namespace

FiniteGraph::FiniteGraph(int n_vertices, const std::vector<std::pair<Vertex, Vertex>>& edges,
                         int dim_hint)
    : dim_hint_(dim_hint) {
    if (n_vertices < 1) throw InvalidSize("graph needs at least one vertex");
    if (dim_hint < 1) throw InvalidSize("dim_hint must be >= 1");
    adjacency_.assign(static_cast<size_t>(n_vertices), {});
    std::set<std::pair<Vertex, Vertex>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n_vertices || v < 0 || v >= n_vertices)
            throw UnknownVertex("edge endpoint out of range");
        if (u == v) throw InvalidDomain("self-loop rejected");
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second) continue;
        adjacency_[static_cast<size_t>(u)].push_back(v);
        adjacency_[static_cast<size_t>(v)].push_back(u);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());

    dist_.reserve(static_cast<size_t>(n_vertices));
    for (Vertex v = 0; v < n_vertices; ++v) dist_.push_back(bfs_from(adjacency_, v));
    for (int d : dist_[0])
        if (d < 0) throw InvalidDomain("graph must be connected");
}

const std::vector<Vertex>& FiniteGraph::neighbors(Vertex v) const {
    if (!has_vertex(v)) throw UnknownVertex("vertex " + std::to_string(v));
    return adjacency_[static_cast<size_t>(v)];
}

bool FiniteGraph::has_edge(Vertex u, Vertex v) const {
    const auto& nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

int FiniteGraph::distance(Vertex a, Vertex b) const {
    if (!has_vertex(a)) throw UnknownVertex("vertex " + std::to_string(a));
    if (!has_vertex(b)) throw UnknownVertex("vertex " + std::to_string(b));
    return dist_[static_cast<size_t>(a)][static_cast<size_t>(b)];
}

int FiniteGraph::diameter() const {
    int best = 0;
    for (const auto& row : dist_)
        for (int d : row) best = std::max(best, d);
    return best;
}

VertexSet FiniteGraph::ball(Vertex center, int r) const {
    if (!has_vertex(center)) throw UnknownVertex("ball center " + std::to_string(center));
    VertexSet out;
    const auto& row = dist_[static_cast<size_t>(center)];
    for (Vertex v = 0; v < size(); ++v)
        if (row[static_cast<size_t>(v)] <= r) out.push_back(v);
    return out;
}

VertexSet FiniteGraph::sphere(Vertex center, int r) const {
    if (!has_vertex(center)) throw UnknownVertex("sphere center " + std::to_string(center));
    VertexSet out;
    const auto& row = dist_[static_cast<size_t>(center)];
    for (Vertex v = 0; v < size(); ++v)
        if (row[static_cast<size_t>(v)] == r) out.push_back(v);
    return out;
}

std::vector<std::pair<Vertex, Vertex>> FiniteGraph::edge_list() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (Vertex v = 0; v < size(); ++v)
        for (Vertex w : adjacency_[static_cast<size_t>(v)])
            if (v < w) out.emplace_back(v, w);
    return out;
}

std::string FiniteGraph::to_json() const {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (Vertex v = 0; v < size(); ++v) j["vertices"].push_back(v);
    j["edges"] = nlohmann::json::array();
    for (auto [u, v] : edge_list()) j["edges"].push_back({u, v});
    j["dim_hint"] = dim_hint_;
    return j.dump();
}

GraphPtr FiniteGraph::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const int n = static_cast<int>(j.at("vertices").size());
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return std::make_shared<FiniteGraph>(n, edges, j.at("dim_hint").get<int>());
}

GraphPtr build_interval_graph(int n) {
    if (n < 1) throw InvalidSize("interval length must be >= 1");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return std::make_shared<FiniteGraph>(n, edges, 1);
}

GraphPtr build_box_graph(int d, int side) {
    if (d < 1 || side < 1) throw InvalidSize("box needs d >= 1 and side >= 1");
    long long count = 1;
    for (int k = 0; k < d; ++k) {
        count *= side;
        if (count > 2'000'000) throw InvalidSize("box side^d exceeds memory budget");
    }
    const int n = static_cast<int>(count);
    std::vector<std::pair<Vertex, Vertex>> edges;
    // Row-major strides; neighbor along axis k differs by stride_k.
    std::vector<long long> stride(static_cast<size_t>(d), 1);
    for (int k = d - 2; k >= 0; --k) stride[static_cast<size_t>(k)] = stride[static_cast<size_t>(k) + 1] * side;
    std::vector<int> coords(static_cast<size_t>(d), 0);
    for (int v = 0; v < n; ++v) {
        int rem = v;
        for (int k = 0; k < d; ++k) {
            coords[static_cast<size_t>(k)] = static_cast<int>(rem / stride[static_cast<size_t>(k)]);
            rem = static_cast<int>(rem % stride[static_cast<size_t>(k)]);
        }
        for (int k = 0; k < d; ++k)
            if (coords[static_cast<size_t>(k)] + 1 < side)
                edges.emplace_back(v, v + static_cast<int>(stride[static_cast<size_t>(k)]));
    }
    return std::make_shared<FiniteGraph>(n, edges, d);
}

Vertex box_vertex(int d, int side, const std::vector<int>& coords) {
    if (static_cast<int>(coords.size()) != d) throw InvalidSize("coordinate arity mismatch");
    long long v = 0;
    for (int k = 0; k < d; ++k) {
        if (coords[static_cast<size_t>(k)] < 0 || coords[static_cast<size_t>(k)] >= side)
            throw UnknownVertex("box coordinate out of range");
        v = v * side + coords[static_cast<size_t>(k)];
    }
    return static_cast<Vertex>(v);
}

SubgraphView::SubgraphView(GraphPtr ambient, VertexSet members)
    : ambient_(std::move(ambient)), members_(std::move(members)) {
    if (members_.empty()) throw InvalidDomain("empty subgraph");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    local_of_.assign(static_cast<size_t>(ambient_->size()), -1);
    for (int i = 0; i < size(); ++i) {
        const Vertex v = members_[static_cast<size_t>(i)];
        if (!ambient_->has_vertex(v)) throw UnknownVertex("member outside ambient graph");
        local_of_[static_cast<size_t>(v)] = i;
    }
    // Intrinsic all-pairs BFS over induced edges.
    std::vector<std::vector<Vertex>> adj(static_cast<size_t>(size()));
    for (int i = 0; i < size(); ++i)
        for (Vertex w : ambient_->neighbors(members_[static_cast<size_t>(i)]))
            if (contains(w)) adj[static_cast<size_t>(i)].push_back(local_index(w));
    intrinsic_dist_.reserve(static_cast<size_t>(size()));
    for (int i = 0; i < size(); ++i) intrinsic_dist_.push_back(bfs_from(adj, i));
    for (int d : intrinsic_dist_[0])
        if (d < 0) throw InvalidDomain("induced subgraph must be connected");
}

bool SubgraphView::contains(Vertex v) const {
    return ambient_->has_vertex(v) && local_of_[static_cast<size_t>(v)] >= 0;
}

int SubgraphView::local_index(Vertex v) const {
    if (!contains(v)) throw UnknownVertex("vertex " + std::to_string(v) + " not in subgraph");
    return local_of_[static_cast<size_t>(v)];
}

int SubgraphView::intrinsic_degree(Vertex v) const {
    int deg = 0;
    for (Vertex w : ambient_->neighbors(v))
        if (contains(w)) ++deg;
    return deg;
}

int SubgraphView::intrinsic_distance(Vertex a, Vertex b) const {
    return intrinsic_dist_[static_cast<size_t>(local_index(a))][static_cast<size_t>(local_index(b))];
}

VertexSet SubgraphView::intrinsic_ball(Vertex center, int r) const {
    const int c = local_index(center);
    VertexSet out;
    for (int i = 0; i < size(); ++i)
        if (intrinsic_dist_[static_cast<size_t>(c)][static_cast<size_t>(i)] <= r)
            out.push_back(members_[static_cast<size_t>(i)]);
    return out;
}

GraphPtr SubgraphView::as_graph() const {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int i = 0; i < size(); ++i)
        for (Vertex w : ambient_->neighbors(members_[static_cast<size_t>(i)]))
            if (contains(w) && members_[static_cast<size_t>(i)] < w)
                edges.emplace_back(i, local_index(w));
    return std::make_shared<FiniteGraph>(size(), edges, ambient_->dim_hint());
}

SubgraphView ball_view(GraphPtr g, Vertex center, int r) {
    auto members = g->ball(center, r);
    return SubgraphView(std::move(g), std::move(members));
}

SubgraphView full_view(GraphPtr g) {
    VertexSet all(static_cast<size_t>(g->size()));
    for (int i = 0; i < g->size(); ++i) all[static_cast<size_t>(i)] = i;
    return SubgraphView(std::move(g), std::move(all));
}

EdgeBoundary boundary(const SubgraphView& view) {
    if (!view.is_proper()) throw EmptyBoundary("subgraph equals the ambient graph");
    const auto& g = *view.ambient();
    EdgeBoundary b;
    std::set<Vertex> inner, outer;
    for (Vertex v : view.members())
        for (Vertex w : g.neighbors(v))
            if (!view.contains(w)) {
                inner.insert(v);
                outer.insert(w);
                b.edges.emplace_back(v, w);
            }
    b.inner.assign(inner.begin(), inner.end());
    b.outer.assign(outer.begin(), outer.end());
    std::sort(b.edges.begin(), b.edges.end());
    return b;
}

GrowthCertificate ball_growth_constant(const FiniteGraph& g, int l_max) {
    if (l_max < 1) throw InvalidSize("probe range must be >= 1");
    GrowthCertificate cert;
    cert.probe_range = l_max;
    cert.dim = g.dim_hint();
    double best = 1.0;
    for (Vertex x = 0; x < g.size(); ++x)
        for (int l = 1; l <= l_max; ++l) {
            const double ratio = static_cast<double>(g.ball(x, l).size()) /
                                 std::pow(static_cast<double>(l), g.dim_hint());
            best = std::max(best, ratio);
        }
    cert.c_d = best;
    return cert;
}

} // namespace loclab
