#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace fpphe {

using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

// Marker for "no frontier vertex reachable".
inline constexpr int kFar = std::numeric_limits<int>::max();

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2&) const = default;
};

struct GraphFamily {
    std::string name = "custom";
    nlohmann::json params = nlohmann::json::object();

    bool operator==(const GraphFamily&) const = default;
};

using Edge = std::pair<VertexId, VertexId>;

// Immutable undirected simple graph in compressed adjacency form. Truncations
// of infinite graphs carry a frontier: the vertices whose neighbourhood in the
// infinite graph is not fully present.
class Graph {
public:
    Graph() = default;

    // Validates symmetry-free input: every edge once in either orientation, no
    // self-loops, no duplicates. Adjacency lists are stored sorted.
    static Graph from_edges(VertexId n, const std::vector<Edge>& edges, VertexId origin,
                            GraphFamily family = {}, std::vector<Point2> layout = {},
                            std::vector<VertexId> frontier = {});

    VertexId vertex_count() const { return static_cast<VertexId>(offsets_.size()) - 1; }
    std::size_t edge_count() const { return neighbors_.size() / 2; }

    std::span<const VertexId> neighbors(VertexId v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    int degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
    int max_degree() const { return max_degree_; }
    bool has_edge(VertexId u, VertexId v) const;

    VertexId origin() const { return origin_; }
    const GraphFamily& family() const { return family_; }

    bool has_layout() const { return !layout_.empty(); }
    const std::vector<Point2>& layout() const { return layout_; }

    bool has_frontier() const { return !frontier_.empty(); }
    const std::vector<VertexId>& frontier() const { return frontier_; }
    bool is_frontier(VertexId v) const { return frontier_mask_[v] != 0; }

    // Hop distance from the origin, -1 when unreachable.
    int depth(VertexId v) const { return depth_[v]; }
    // Hop distance to the nearest frontier vertex, kFar when there is none.
    int frontier_distance(VertexId v) const { return frontier_distance_[v]; }

    std::vector<Edge> edges() const;

    bool operator==(const Graph& other) const;

private:
    std::vector<std::int32_t> offsets_{0};
    std::vector<VertexId> neighbors_;
    int max_degree_ = 0;
    VertexId origin_ = 0;
    GraphFamily family_;
    std::vector<Point2> layout_;
    std::vector<VertexId> frontier_;
    std::vector<char> frontier_mask_;
    std::vector<int> depth_;
    std::vector<int> frontier_distance_;
};

// A set of vertex ids, kept sorted and duplicate-free.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::vector<VertexId> members);
    VertexSet(std::initializer_list<VertexId> members)
        : VertexSet(std::vector<VertexId>(members)) {}

    static VertexSet from_mask(const std::vector<char>& mask);
    static VertexSet all(VertexId n);

    bool contains(VertexId v) const;
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    const std::vector<VertexId>& members() const { return members_; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    std::vector<char> mask(VertexId n) const;
    bool subset_of(const VertexSet& other) const;

    bool operator==(const VertexSet&) const = default;

private:
    std::vector<VertexId> members_;
};

VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);

struct DistanceMap {
    static constexpr int kUnreachable = -1;

    VertexSet sources;
    std::vector<int> dist;

    int operator[](VertexId v) const { return dist[v]; }
    bool reachable(VertexId v) const { return dist[v] != kUnreachable; }
};

}  // namespace fpphe
