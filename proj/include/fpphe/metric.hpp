#pragma once

#include <cstdint>
#include <vector>

#include "fpphe/graph.hpp"

namespace fpphe {

DistanceMap bfs_distances(const Graph& g, const VertexSet& sources);

// Hop distances from `sources`, -1 beyond `max_radius` or unreachable.
// Vertices with blocked[v] != 0 are treated as absent.
std::vector<int> hop_distances(const Graph& g, const std::vector<VertexId>& sources,
                               int max_radius = kFar, const std::vector<char>* blocked = nullptr);

// Radius-limited BFS that only touches the visited region, so repeated
// searches on a large graph cost proportional to the ball.
class BoundedBfs {
public:
    explicit BoundedBfs(const Graph& g) : g_(g), dist_(g.vertex_count(), -1) {}

    // Visited vertices in BFS order; dist() is valid until the next run.
    const std::vector<VertexId>& run(VertexId source, int radius);
    int dist(VertexId v) const { return dist_[v]; }

private:
    const Graph& g_;
    std::vector<int> dist_;
    std::vector<VertexId> visited_;
};

VertexSet ball(const Graph& g, VertexId center, int radius);
VertexSet ball(const Graph& g, const VertexSet& centers, int radius);

// Vertices of s with a neighbour outside s. Frontier vertices count as having
// such a neighbour, since part of their neighbourhood lies beyond the
// truncation.
VertexSet internal_boundary(const Graph& g, const VertexSet& s);

struct CheegerResult {
    std::int64_t boundary = 0;
    std::int64_t size = 1;
    double ratio = 0.0;
    VertexSet witness;
};

// Randomized upper bound on min |boundary(S)|/|S| over finite connected S.
CheegerResult cheeger_ratio_search(const Graph& g, int trials, std::uint64_t rng_seed);

// Largest n for which balls around x are unaffected by the truncation.
int safe_radius(const Graph& g, VertexId x);

struct GrowthProfile {
    std::vector<std::int64_t> sizes;  // |B(x,k)| for k = 0..n
    double growth_rate = 1.0;         // exp of the least-squares slope of log|B(x,k)|
};

GrowthProfile growth_profile(const Graph& g, VertexId x, int n);

}  // namespace fpphe
