#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fpphe/graph.hpp"

namespace fpphe {

inline constexpr int kDefaultGeodesicCap = 10'000;

using Path = std::vector<VertexId>;

// Distances on a truncation agree with the infinite graph when no shortcut
// through the missing part can exist: any such detour leaves and re-enters
// through frontier vertices.
bool distance_is_exact(const Graph& g, VertexId a, VertexId b, int d);

// Lexicographically smallest geodesic from x to y (lowest id at every step).
Path canonical_geodesic(const Graph& g, VertexId x, VertexId y);

struct GeodesicSet {
    VertexId x = kNoVertex;
    VertexId y = kNoVertex;
    int length = 0;
    int cap = kDefaultGeodesicCap;
    VertexSet dag;             // vertices lying on at least one geodesic
    std::vector<Path> paths;   // lexicographic order, at most cap of them
    std::uint64_t count = 0;   // total number of geodesics, saturating
    bool count_exact = true;   // false when count saturated
    bool complete = true;      // every geodesic materialized
    bool contaminated = false; // truncation may have removed shorter paths
};

GeodesicSet enumerate_geodesics(const Graph& g, VertexId x, VertexId y,
                                int cap = kDefaultGeodesicCap);

struct DeltaEstimate {
    double delta = 0.0;
    std::array<VertexId, 3> witness{kNoVertex, kNoVertex, kNoVertex};
    std::int64_t triangles = 0;
};

// Lower bound on the thin-triangles constant from sampled triples with
// canonical geodesic sides. When samples covers every unordered triple the
// scan is exhaustive.
DeltaEstimate delta_thin_estimate(const Graph& g, std::int64_t samples, std::uint64_t rng_seed);

// Thinness defect of one triangle with canonical sides.
int triangle_defect(const Graph& g, VertexId a, VertexId b, VertexId c);

struct Cylinder {
    VertexId x = kNoVertex;
    VertexId y = kNoVertex;
    int width = 0;
    VertexSet members;
    bool contaminated = false;
};

// Union of radius-L balls around every vertex of every x-y geodesic.
Cylinder build_cylinder(const Graph& g, VertexId x, VertexId y, int width);

// Shortest a-b path length avoiding `forbidden`; nullopt if none exists.
std::optional<int> detour_length(const Graph& g, VertexId a, VertexId b,
                                 const VertexSet& forbidden);

// Binary tree embedded at scale r. Tree vertices use heap numbering: root 0,
// children of v are 2v+1 and 2v+2, generation of v is floor(log2(v+1)).
struct EmbeddedTree {
    int r = 2;
    int depth = 0;
    double alpha_target = 1.5;
    std::vector<VertexId> image;      // graph vertex of each tree vertex
    std::vector<Path> edge_path;      // path from image[parent(v)] to image[v]; empty at root
    double alpha = 1.0;               // measured bilipschitz constant
    int kappa = 0;                    // measured geodesic-to-route Hausdorff distance
    std::int64_t pairs_checked = 0;
    bool pairs_exhaustive = true;
    bool contaminated = false;

    std::size_t size() const { return image.size(); }
    static int parent(int v) { return (v - 1) / 2; }
    static int generation(int v);
    static int tree_distance(int a, int b);
    // Ancestor of v at generation n (n <= generation(v)).
    static int ancestor(int v, int n);

    bool operator==(const EmbeddedTree&) const = default;
};

// Greedy embedding. Children of a leaf mapped to u are chosen among unused
// vertices w with d(u,w) in [r, alpha_target*r] and d(o,w) >= d(o,u) + r/alpha_target,
// as the pair with d(w,z) >= r minimising the Gromov product at u.
EmbeddedTree embed_binary_tree(const Graph& g, int r, int depth, double alpha_target = 1.5,
                               std::int64_t pair_budget = 20'000);

// Recompute the distortion of an embedding from scratch.
double measure_distortion(const Graph& g, const EmbeddedTree& t, std::int64_t pair_budget,
                          std::int64_t* checked = nullptr, bool* exhaustive = nullptr);

int integer_slack(double delta);

// Deepest vertex (lowest id on ties) of the sphere of radius s around x.
// Throws RangeError when the sphere is not fully inside the truncation and
// ConsistencyError when it is not deep enough for the given delta.
VertexId far_point_from(const Graph& g, VertexId x, std::int64_t s, double delta);

// Deepest boundary vertex of the occupied set (lowest id on ties).
VertexId deepest_boundary_vertex(const Graph& g, const VertexSet& occupied);

VertexId far_point(const Graph& g, const VertexSet& occupied, std::int64_t s, double delta);

struct EscapeRay {
    int R1 = 2;
    double delta = 0.0;
    int slack = 0;                           // ceil(16 delta)
    int requested_steps = 0;
    std::vector<VertexId> waypoints;         // waypoints[0] is the base vertex
    std::vector<std::int64_t> step_radii;    // S_k for k = 1..steps built
    std::vector<int> occupied_distance;      // d(occupied, waypoint) per waypoint
    Path path;                               // o -> base, then waypoint to waypoint
    bool partial = false;
    bool sandwich_ok = true;

    int steps() const { return static_cast<int>(waypoints.size()) - 1; }
    bool operator==(const EscapeRay&) const = default;
};

std::int64_t escape_step_radius(int R1, int k, int slack);

EscapeRay build_escape_ray(const Graph& g, const VertexSet& occupied, int R1, int steps,
                           double delta);

}  // namespace fpphe
