#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fpphe/graph.hpp"

namespace fpphe {

inline constexpr std::int64_t kDefaultVertexBudget = 4'000'000;

// Rooted tree in which every internal vertex, the root included, has
// `branching` children. Vertices are numbered in BFS order; leaves at full
// depth form the frontier.
Graph generate_regular_tree(int branching, int depth,
                            std::int64_t vertex_budget = kDefaultVertexBudget);

// Ball of radius `layers` around a vertex of the {p,q} tiling of the
// hyperbolic plane (p-gons, q around each vertex), with Poincare-disk layout.
Graph generate_tessellation(int p, int q, int layers,
                            std::int64_t vertex_budget = kDefaultVertexBudget);

// The box {-radius..radius}^d with nearest-neighbour edges, origin at center.
Graph generate_lattice(int d, int radius, std::int64_t vertex_budget = kDefaultVertexBudget);

// Cayley ball of the free product of cyclic groups Z_{n_1} * ... * Z_{n_k}
// with respect to all non-trivial elements of every factor.
Graph generate_free_product(const std::vector<int>& factor_sizes, int radius,
                            std::int64_t vertex_budget = kDefaultVertexBudget);

// 3-regular tree ball, the free product of three copies of Z_2.
inline Graph generate_t3(int radius, std::int64_t vertex_budget = kDefaultVertexBudget) {
    return generate_free_product({2, 2, 2}, radius, vertex_budget);
}

// Coordinates of every vertex of a graph produced by generate_lattice, unused
// axes zero.
std::vector<std::array<int, 3>> lattice_coordinates(const Graph& g);
VertexId lattice_vertex(const Graph& g, std::array<int, 3> coords);

}  // namespace fpphe
