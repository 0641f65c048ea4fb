#include <gtest/gtest.h>

#include <cmath>

#include "fpphe/errors.hpp"
#include "fpphe/generators.hpp"
#include "fpphe/geometry.hpp"
#include "fpphe/metric.hpp"
#include "oracles/geometry_oracles.hpp"
#include "test_support.hpp"

using namespace fpphe;
using testing_support::cycle_graph;
using testing_support::random_connected;

TEST(Geodesics, TreeHasOne) {
    const Graph g = generate_t3(4);
    for (VertexId a = 0; a < g.vertex_count(); a += 7)
        for (VertexId b = 0; b < g.vertex_count(); b += 11) {
            const auto s = enumerate_geodesics(g, a, b);
            EXPECT_EQ(s.count, 1u);
            ASSERT_EQ(s.paths.size(), 1u);
            EXPECT_EQ(s.paths[0], canonical_geodesic(g, a, b));
        }
}

TEST(Geodesics, LatticeAndCycle) {
    const Graph z2 = generate_lattice(2, 4);
    const auto s = enumerate_geodesics(z2, lattice_vertex(z2, {0, 0, 0}), lattice_vertex(z2, {2, 1, 0}));
    EXPECT_EQ(s.count, 3u);
    EXPECT_EQ(s.paths.size(), 3u);
    EXPECT_TRUE(s.complete);
    const auto c6 = enumerate_geodesics(cycle_graph(6), 0, 3);
    EXPECT_EQ(c6.count, 2u);
    for (const auto& p : c6.paths) EXPECT_EQ(p.size(), 4u);
    EXPECT_THROW(enumerate_geodesics(Graph::from_edges(2, {}, 0), 0, 1), NoPathError);
}

TEST(Geodesics, CapLimitsMaterialization) {
    const Graph z2 = generate_lattice(2, 6);
    const auto s = enumerate_geodesics(z2, lattice_vertex(z2, {-3, -3, 0}), lattice_vertex(z2, {3, 3, 0}), 100);
    EXPECT_EQ(s.count, 924u);  // C(12,6)
    EXPECT_EQ(s.paths.size(), 100u);
    EXPECT_FALSE(s.complete);
}

TEST(Geodesics, MatchSimplePathOracle) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Graph g = random_connected(10, 8, seed);
        const auto d = oracle::floyd_warshall(g);
        for (VertexId a = 0; a < 10; a += 3)
            for (VertexId b = 0; b < 10; ++b) {
                const auto s = enumerate_geodesics(g, a, b);
                const auto ref = oracle::simple_paths_of_length(g, a, b, d[a][b]);
                EXPECT_EQ(s.paths, ref);
                EXPECT_EQ(s.count, ref.size());
                for (const auto& p : s.paths) {
                    EXPECT_EQ(static_cast<int>(p.size()) - 1, s.length);
                    for (std::size_t i = 0; i + 1 < p.size(); ++i) EXPECT_TRUE(g.has_edge(p[i], p[i + 1]));
                }
            }
    }
}

TEST(Delta, TreesAreZero) {
    for (std::int64_t samples : {1, 10, 200}) {
        EXPECT_EQ(delta_thin_estimate(generate_t3(5), samples, 3).delta, 0.0);
        EXPECT_EQ(delta_thin_estimate(generate_regular_tree(2, 6), samples, 4).delta, 0.0);
    }
    EXPECT_EQ(delta_thin_estimate(generate_t3(2), 1'000'000, 1).delta, 0.0);
}

TEST(Delta, CycleExhaustive) {
    const Graph c8 = cycle_graph(8);
    const auto est = delta_thin_estimate(c8, 1'000'000, 0);
    EXPECT_EQ(est.triangles, 56);
    EXPECT_EQ(est.delta, oracle::max_defect_all_triples(c8));
    EXPECT_EQ(est.delta, 2.0);
    const auto d = oracle::floyd_warshall(c8);
    EXPECT_EQ(oracle::defect_by_definition(c8, d, est.witness[0], est.witness[1], est.witness[2]), 2);
}

TEST(Delta, MatchesDefinitionOnRandomGraphs) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Graph g = random_connected(9, 5, seed);
        EXPECT_EQ(delta_thin_estimate(g, 1'000'000, 0).delta, oracle::max_defect_all_triples(g));
        const auto d = oracle::floyd_warshall(g);
        for (VertexId a = 0; a < 9; a += 2)
            EXPECT_EQ(triangle_defect(g, a, (a + 3) % 9, (a + 5) % 9),
                      oracle::defect_by_definition(g, d, a, (a + 3) % 9, (a + 5) % 9));
    }
}

TEST(Delta, LatticeGrows) {
    double prev = -1;
    for (int n : {5, 10, 15}) {
        const double est = delta_thin_estimate(generate_lattice(2, n), 400, 11).delta;
        EXPECT_GT(est, prev) << n;
        prev = est;
    }
}

TEST(Cylinder, TreePathAndDegenerate) {
    const Graph g = generate_t3(4);
    const Path p = canonical_geodesic(g, 20, 33);
    EXPECT_EQ(build_cylinder(g, 20, 33, 0).members, VertexSet(p));
    EXPECT_EQ(build_cylinder(g, 5, 5, 3).members, ball(g, 5, 3));
}

TEST(Cylinder, LatticeMatchesAllGeodesicsUnion) {
    const Graph z2 = generate_lattice(2, 6);
    const VertexId x = lattice_vertex(z2, {0, 0, 0});
    const VertexId y = lattice_vertex(z2, {3, 3, 0});
    const auto d = oracle::floyd_warshall(z2);
    const auto paths = oracle::simple_paths_of_length(z2, x, y, 6);
    ASSERT_EQ(paths.size(), 20u);
    const auto ref = oracle::union_of_balls(d, paths, 1);
    const auto cyl = build_cylinder(z2, x, y, 1);
    EXPECT_EQ(cyl.members.members(), std::vector<VertexId>(ref.begin(), ref.end()));
    EXPECT_FALSE(cyl.contaminated);
}

TEST(Cylinder, WidthZeroIsGeodesicDag) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Graph g = random_connected(12, 10, seed);
        for (VertexId b = 1; b < 12; b += 2) {
            const auto geo = enumerate_geodesics(g, 0, b);
            EXPECT_EQ(build_cylinder(g, 0, b, 0).members, geo.dag);
            for (int L = 0; L <= 2; ++L) {
                const auto cyl = build_cylinder(g, 0, b, L);
                EXPECT_TRUE(cyl.members.contains(0));
                EXPECT_TRUE(cyl.members.contains(b));
            }
        }
    }
}

TEST(Cylinder, FrontierFlag) {
    const Graph g = generate_t3(3);
    EXPECT_TRUE(build_cylinder(g, 0, 1, 3).contaminated);
    EXPECT_FALSE(build_cylinder(g, 0, 1, 1).contaminated);
}

TEST(Detour, Basics) {
    const Graph c12 = cycle_graph(12);
    EXPECT_EQ(detour_length(c12, 0, 6, VertexSet{3}), 6);
    EXPECT_EQ(detour_length(c12, 0, 6, VertexSet{}), 6);
    EXPECT_EQ(detour_length(c12, 0, 6, VertexSet{3, 9}), std::nullopt);
    EXPECT_EQ(detour_length(c12, 0, 2, VertexSet{1}), 10);
    EXPECT_THROW(detour_length(c12, 0, 6, VertexSet{0}), ArgumentError);
}

TEST(Detour, TreeBlockedIsInfinite) {
    const Graph g = generate_t3(5);
    const Path p = canonical_geodesic(g, 40, 70);
    ASSERT_GE(p.size(), 5u);
    const VertexId m = p[p.size() / 2];
    EXPECT_EQ(detour_length(g, 40, 70, ball(g, m, 1)), std::nullopt);
}

TEST(Detour, EmptyAndNestedForbidden) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Graph g = random_connected(15, 15, seed);
        const auto d = oracle::floyd_warshall(g);
        EXPECT_EQ(detour_length(g, 0, 14, {}), d[0][14]);
        std::optional<int> prev = d[0][14];
        const VertexId m = canonical_geodesic(g, 0, 14)[d[0][14] / 2];
        for (int r = 0; r <= 3; ++r) {
            const auto f = ball(g, m, r);
            if (f.contains(0) || f.contains(14)) break;
            const auto cur = detour_length(g, 0, 14, f);
            if (!prev) {
                EXPECT_FALSE(cur);
            } else if (cur) {
                EXPECT_GE(*cur, *prev);
            }
            prev = cur;
        }
    }
}

TEST(Detour, HyperbolicGrowthAroundBalls) {
    const Graph g = generate_tessellation(3, 7, 8);
    const Path line = canonical_geodesic(g, 0, 300);
    const VertexId a = line[4];
    // Continue the geodesic through o on the opposite side.
    VertexId b = kNoVertex;
    for (VertexId v = 0; v < g.vertex_count() && b == kNoVertex; ++v)
        if (g.depth(v) == 4 && canonical_geodesic(g, a, v).size() == 9) b = v;
    ASSERT_NE(b, kNoVertex);
    int prev = 8;
    for (int r = 1; r <= 3; ++r) {
        const auto len = detour_length(g, a, b, ball(g, 0, r));
        ASSERT_TRUE(len);
        EXPECT_GT(*len, prev);
        prev = *len;
    }
}

TEST(Embedding, TreeIsIsometric) {
    const Graph g = generate_t3(10);
    const auto t = embed_binary_tree(g, 2, 3);
    ASSERT_EQ(t.size(), 15u);
    EXPECT_EQ(t.alpha, 1.0);
    EXPECT_TRUE(t.pairs_exhaustive);
    EXPECT_EQ(t.kappa, 0);
    for (int a = 0; a < 15; ++a) {
        const auto dist = hop_distances(g, {t.image[a]});
        for (int b = 0; b < 15; ++b) EXPECT_EQ(dist[t.image[b]], 2 * EmbeddedTree::tree_distance(a, b));
        if (a > 0) {
            EXPECT_EQ(t.edge_path[a].front(), t.image[EmbeddedTree::parent(a)]);
            EXPECT_EQ(t.edge_path[a].back(), t.image[a]);
        }
    }
}

TEST(Embedding, LineFailsAtFirstGeneration) {
    const Graph line = generate_lattice(1, 30);
    try {
        embed_binary_tree(line, 2, 2);
        FAIL() << "expected embedding failure";
    } catch (const EmbeddingFailure& e) {
        // The root still has two diverging children; its children do not.
        EXPECT_EQ(e.stuck_leaf(), 1);
        EXPECT_EQ(e.generation(), 1);
    }
    EXPECT_THROW(embed_binary_tree(line, 1, 2), ParameterError);
}

TEST(Embedding, TessellationRecheck) {
    const Graph g = generate_tessellation(3, 7, 12);
    const auto t = embed_binary_tree(g, 3, 3);
    ASSERT_EQ(t.size(), 15u);
    EXPECT_GE(t.alpha, 1.0);
    EXPECT_FALSE(t.contaminated);
    std::set<VertexId> distinct(t.image.begin(), t.image.end());
    EXPECT_EQ(distinct.size(), 15u);
    EXPECT_EQ(t.image[0], g.origin());
    const double eps = 1e-12;
    for (int a = 0; a < 15; ++a) {
        const int k = EmbeddedTree::generation(a);
        EXPECT_GE(g.depth(t.image[a]) + eps, k * t.r / t.alpha);
        EXPECT_LE(g.depth(t.image[a]), t.alpha * t.r * k + eps);
        const auto dist = hop_distances(g, {t.image[a]});
        for (int b = a + 1; b < 15; ++b) {
            const double dt = EmbeddedTree::tree_distance(a, b) * t.r;
            EXPECT_GE(dist[t.image[b]] + eps, dt / t.alpha);
            EXPECT_LE(dist[t.image[b]], t.alpha * dt + eps);
        }
    }
    EXPECT_EQ(measure_distortion(g, t, 1'000'000), t.alpha);
}

TEST(Embedding, TreeArithmetic) {
    EXPECT_EQ(EmbeddedTree::generation(0), 0);
    EXPECT_EQ(EmbeddedTree::generation(2), 1);
    EXPECT_EQ(EmbeddedTree::generation(3), 2);
    EXPECT_EQ(EmbeddedTree::generation(14), 3);
    EXPECT_EQ(EmbeddedTree::tree_distance(3, 4), 2);
    EXPECT_EQ(EmbeddedTree::tree_distance(3, 6), 4);
    EXPECT_EQ(EmbeddedTree::tree_distance(0, 14), 3);
    EXPECT_EQ(EmbeddedTree::ancestor(14, 1), 2);
    EXPECT_EQ(EmbeddedTree::ancestor(14, 0), 0);
}

TEST(FarPoint, Examples) {
    const Graph t3 = generate_t3(8);
    const VertexId y = far_point(t3, VertexSet{0}, 4, 0.0);
    EXPECT_EQ(t3.depth(y), 4);

    const Graph z2 = generate_lattice(2, 12);
    const auto occ = ball(z2, 0, 2);
    const VertexId y2 = far_point(z2, occ, 3, 0.0);
    // Exhaustive scan of the sphere around the deepest boundary vertex.
    const VertexId x = deepest_boundary_vertex(z2, occ);
    const auto dx = hop_distances(z2, {x});
    int best = -1;
    for (VertexId v = 0; v < z2.vertex_count(); ++v)
        if (dx[v] == 3) best = std::max(best, z2.depth(v));
    EXPECT_EQ(best, 5);
    EXPECT_EQ(z2.depth(y2), 5);
    EXPECT_EQ(dx[y2], 3);
}

TEST(FarPoint, TessellationLowerBound) {
    const Graph g = generate_tessellation(3, 7, 10);
    const double delta = delta_thin_estimate(generate_tessellation(3, 7, 5), 300, 5).delta;
    const VertexId y = far_point(g, ball(g, 0, 3), 5, delta);
    EXPECT_GE(g.depth(y), 8 - 16 * delta);
    EXPECT_EQ(g.depth(y), 8);
}

TEST(FarPoint, RefusesFrontier) {
    const Graph g = generate_t3(5);
    EXPECT_THROW(far_point(g, VertexSet{0}, 5, 0.0), RangeError);
    EXPECT_THROW(far_point(g, VertexSet{1}, 2, 0.0), ArgumentError);
}

TEST(EscapeRay, ZeroSteps) {
    const Graph g = generate_t3(6);
    const auto ray = build_escape_ray(g, VertexSet{0}, 2, 0, 0.0);
    EXPECT_EQ(ray.waypoints, std::vector<VertexId>{0});
    EXPECT_EQ(ray.path, Path{0});
    EXPECT_FALSE(ray.partial);
}

TEST(EscapeRay, StepRadii) {
    EXPECT_EQ(escape_step_radius(2, 1, 0), 6);
    EXPECT_EQ(escape_step_radius(2, 2, 0), 24);
    EXPECT_EQ(escape_step_radius(3, 2, 16), 81 + 27 + 16);
    EXPECT_EQ(integer_slack(0.0), 0);
    EXPECT_EQ(integer_slack(0.5), 8);
    EXPECT_EQ(integer_slack(1.01), 17);
}

TEST(EscapeRay, TreesGiveEquality) {
    // The line is a tree (delta 0) long enough for two steps; T3 for one.
    const Graph line = generate_lattice(1, 40);
    const auto ray = build_escape_ray(line, VertexSet{0}, 2, 2, 0.0);
    ASSERT_EQ(ray.steps(), 2);
    EXPECT_EQ(line.depth(ray.waypoints[1]), 6);
    EXPECT_EQ(line.depth(ray.waypoints[2]), 30);
    EXPECT_TRUE(ray.sandwich_ok);
    EXPECT_EQ(ray.occupied_distance, (std::vector<int>{0, 6, 30}));
    EXPECT_EQ(ray.path.size(), 31u);

    const Graph t3 = generate_t3(8);
    const auto r1 = build_escape_ray(t3, ball(t3, 0, 1), 2, 2, 0.0);
    EXPECT_EQ(r1.steps(), 1);
    EXPECT_TRUE(r1.partial);
    EXPECT_EQ(t3.depth(r1.waypoints[1]), t3.depth(r1.waypoints[0]) + 6);
    EXPECT_TRUE(r1.sandwich_ok);
    for (std::size_t i = 0; i + 1 < r1.path.size(); ++i) EXPECT_TRUE(t3.has_edge(r1.path[i], r1.path[i + 1]));
}

TEST(EscapeRay, TessellationPartialButConsistent) {
    const Graph g = generate_tessellation(3, 7, 9);
    const double delta = delta_thin_estimate(generate_tessellation(3, 7, 5), 300, 5).delta;
    const auto ray = build_escape_ray(g, VertexSet{0}, 2, 3, delta);
    EXPECT_TRUE(ray.partial);
    EXPECT_TRUE(ray.sandwich_ok);
    const auto zero = build_escape_ray(g, VertexSet{0}, 2, 3, 0.0);
    ASSERT_EQ(zero.steps(), 1);
    EXPECT_TRUE(zero.sandwich_ok);
    for (int i = 1; i <= zero.steps(); ++i)
        EXPECT_GT(g.depth(zero.waypoints[i]), g.depth(zero.waypoints[i - 1]));
}
