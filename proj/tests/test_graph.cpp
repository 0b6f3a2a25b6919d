#include "doctest.h"

#include <algorithm>

#include "loclab/errors.hpp"
#include "loclab/graph.hpp"
#include "loclab/rng.hpp"

using namespace loclab;

TEST_CASE("interval graphs") {
    CHECK_THROWS_AS(build_interval_graph(0), InvalidSize);

    const auto single = build_interval_graph(1);
    CHECK(single->size() == 1);
    CHECK(single->edge_list().empty());

    const auto p3 = build_interval_graph(3);
    CHECK(p3->edge_list() == std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {1, 2}});
    CHECK(p3->distance(0, 2) == 2);

    CHECK(build_interval_graph(7)->distance(0, 6) == 6);
}

TEST_CASE("box graphs") {
    const auto square = build_box_graph(2, 2);
    CHECK(square->size() == 4);
    CHECK(square->edge_list().size() == 4);

    // Dimension-1 boxes coincide with intervals.
    const auto box1 = build_box_graph(1, 5);
    const auto path = build_interval_graph(5);
    CHECK(box1->edge_list() == path->edge_list());

    // l1 ball of radius 1 around the center of a 3x3 grid: 5 vertices.
    const auto grid = build_box_graph(2, 3);
    CHECK(grid->ball(box_vertex(2, 3, {1, 1}), 1).size() == 5);

    CHECK_THROWS_AS(build_box_graph(10, 100), InvalidSize);
}

TEST_CASE("balls and spheres") {
    const auto g = build_interval_graph(7);
    CHECK(g->ball(3, 0) == VertexSet{3});
    CHECK(g->ball(3, 2) == VertexSet{1, 2, 3, 4, 5});
    CHECK(g->sphere(3, 2) == VertexSet{1, 5});
    CHECK_THROWS_AS(g->ball(9, 1), UnknownVertex);
}

TEST_CASE("boundaries") {
    const auto g = build_interval_graph(5);

    const SubgraphView left(g, {0, 1, 2});
    const EdgeBoundary b1 = boundary(left);
    CHECK(b1.inner == VertexSet{2});
    CHECK(b1.outer == VertexSet{3});
    CHECK(b1.edges == std::vector<std::pair<Vertex, Vertex>>{{2, 3}});

    const SubgraphView middle(g, {1, 2, 3});
    const EdgeBoundary b2 = boundary(middle);
    CHECK(b2.inner == VertexSet{1, 3});
    CHECK(b2.outer == VertexSet{0, 4});
    CHECK(b2.edges.size() == 2);

    CHECK_THROWS_AS(boundary(full_view(g)), EmptyBoundary);

    // Ball of radius 1 around the center of a 3x3 grid cuts 8 edges.
    const auto grid = build_box_graph(2, 3);
    const SubgraphView plus = ball_view(grid, box_vertex(2, 3, {1, 1}), 1);
    CHECK(boundary(plus).edges.size() == 8);
}

TEST_CASE("growth certificates") {
    const auto line = build_interval_graph(100);
    const GrowthCertificate c1 = ball_growth_constant(*line, 10);
    CHECK(c1.c_d <= 3.0);
    CHECK(c1.c_d == doctest::Approx(3.0)); // |B_1| = 3 at interior centers

    const auto lonely = build_interval_graph(1);
    CHECK(ball_growth_constant(*lonely, 4).c_d == doctest::Approx(1.0));

    // Interior l1 balls on the plane have 2L^2 + 2L + 1 points.
    const auto grid = build_box_graph(2, 21);
    const GrowthCertificate c2 = ball_growth_constant(*grid, 5);
    CHECK(grid->ball(box_vertex(2, 21, {10, 10}), 5).size() == 2 * 25 + 2 * 5 + 1);
    CHECK(c2.c_d == doctest::Approx(5.0));

    // Certificate bounds hold for everything probed.
    for (Vertex x = 0; x < line->size(); ++x)
        for (int l = 1; l <= 10; ++l)
            CHECK(static_cast<double>(line->ball(x, l).size()) <= c1.c_d * l);
}

TEST_CASE("graph construction guards") {
    CHECK_THROWS_AS(FiniteGraph(3, {{0, 1}}, 1), InvalidDomain);       // disconnected
    CHECK_THROWS_AS(FiniteGraph(2, {{0, 0}, {0, 1}}, 1), InvalidDomain); // self-loop
    CHECK_THROWS_AS(FiniteGraph(2, {{0, 5}}, 1), UnknownVertex);
}

TEST_CASE("subgraph views use the intrinsic metric") {
    // C-shaped subset of a 3x3 grid: ambient shortcut through the middle is
    // not available inside the subgraph.
    const auto grid = build_box_graph(2, 3);
    const Vertex a = box_vertex(2, 3, {0, 1});
    const Vertex b = box_vertex(2, 3, {2, 1});
    const SubgraphView c_shape(grid, {box_vertex(2, 3, {0, 0}), box_vertex(2, 3, {0, 1}),
                                      box_vertex(2, 3, {0, 2}), box_vertex(2, 3, {1, 0}),
                                      box_vertex(2, 3, {2, 0}), box_vertex(2, 3, {2, 1}),
                                      box_vertex(2, 3, {2, 2})});
    CHECK(grid->distance(a, b) == 2);
    CHECK(c_shape.intrinsic_distance(a, b) == 4);
    CHECK(c_shape.intrinsic_ball(a, 2).size() < grid->ball(a, 2).size());

    const GraphPtr induced = c_shape.as_graph();
    CHECK(induced->size() == 7);
    CHECK(induced->distance(c_shape.local_index(a), c_shape.local_index(b)) == 4);

    CHECK_THROWS_AS(SubgraphView(grid, {0, 8}), InvalidDomain); // disconnected corners
}

TEST_CASE("json round trip") {
    const auto g = build_box_graph(2, 3);
    const GraphPtr back = FiniteGraph::from_json(g->to_json());
    CHECK(back->size() == g->size());
    CHECK(back->dim_hint() == g->dim_hint());
    CHECK(back->edge_list() == g->edge_list());
}

TEST_CASE("random connected graphs keep the metric invariants") {
    Rng rng(0x9a9a);
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 3 + static_cast<int>(rng.next_below(12));
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (Vertex v = 1; v < n; ++v)
            edges.emplace_back(v, static_cast<Vertex>(rng.next_below(static_cast<std::uint64_t>(v))));
        for (int extra = 0; extra < 3; ++extra) {
            const Vertex a = static_cast<Vertex>(rng.next_below(n));
            const Vertex b = static_cast<Vertex>(rng.next_below(n));
            if (a != b) edges.emplace_back(a, b);
        }
        const FiniteGraph g(n, edges, 1);

        for (Vertex a = 0; a < n; ++a)
            for (Vertex b = 0; b < n; ++b) {
                CHECK(g.distance(a, b) == g.distance(b, a));
                CHECK((g.distance(a, b) == 0) == (a == b));
                for (Vertex z = 0; z < n; ++z)
                    CHECK(g.distance(a, b) <= g.distance(a, z) + g.distance(z, b));
            }

        const Vertex c = static_cast<Vertex>(rng.next_below(n));
        for (int r = 0; r < g.diameter(); ++r) {
            const VertexSet small = g.ball(c, r);
            const VertexSet big = g.ball(c, r + 1);
            CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
            VertexSet merged = small;
            for (Vertex v : g.sphere(c, r + 1)) merged.push_back(v);
            std::sort(merged.begin(), merged.end());
            CHECK(merged == big);
        }

        const VertexSet ball = g.ball(c, 1);
        if (static_cast<int>(ball.size()) < n) {
            const SubgraphView view(std::make_shared<FiniteGraph>(g), ball);
            const EdgeBoundary b = boundary(view);
            for (Vertex v : b.inner) CHECK(view.contains(v));
            for (Vertex v : b.outer) CHECK_FALSE(view.contains(v));
            for (auto [u, w] : b.edges) CHECK(g.distance(u, w) == 1);
        }

        const GraphPtr back = FiniteGraph::from_json(g.to_json());
        CHECK(back->edge_list() == g.edge_list());
    }
}
