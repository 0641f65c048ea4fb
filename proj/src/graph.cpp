#include "fpphe/graph.hpp"

#include <algorithm>

#include "fpphe/errors.hpp"

namespace fpphe {

namespace {

std::vector<int> multi_source_hops(const std::vector<std::int32_t>& offsets,
                                   const std::vector<VertexId>& nbrs,
                                   const std::vector<VertexId>& sources) {
    const auto n = static_cast<VertexId>(offsets.size()) - 1;
    std::vector<int> dist(n, -1);
    std::vector<VertexId> queue;
    queue.reserve(n);
    for (VertexId s : sources) {
        if (dist[s] == -1) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexId u = queue[head];
        for (auto i = offsets[u]; i < offsets[u + 1]; ++i) {
            const VertexId w = nbrs[i];
            if (dist[w] == -1) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

}  // namespace

Graph Graph::from_edges(VertexId n, const std::vector<Edge>& edges, VertexId origin,
                        GraphFamily family, std::vector<Point2> layout,
                        std::vector<VertexId> frontier) {
    if (n < 1) throw ArgumentError("graph needs at least one vertex");
    if (origin < 0 || origin >= n) throw ArgumentError("origin out of range");
    if (!layout.empty() && static_cast<VertexId>(layout.size()) != n)
        throw ArgumentError("layout size does not match vertex count");

    std::vector<std::int32_t> degree(n, 0);
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw ArgumentError("edge endpoint out of range");
        if (u == v) throw ArgumentError("self-loop at vertex " + std::to_string(u));
        ++degree[u];
        ++degree[v];
    }

    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (VertexId v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
    g.neighbors_.resize(g.offsets_[n]);
    std::vector<std::int32_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        g.neighbors_[fill[u]++] = v;
        g.neighbors_[fill[v]++] = u;
    }
    for (VertexId v = 0; v < n; ++v) {
        auto first = g.neighbors_.begin() + g.offsets_[v];
        auto last = g.neighbors_.begin() + g.offsets_[v + 1];
        std::sort(first, last);
        if (std::adjacent_find(first, last) != last)
            throw ArgumentError("duplicate edge at vertex " + std::to_string(v));
        g.max_degree_ = std::max(g.max_degree_, degree[v]);
    }

    g.origin_ = origin;
    g.family_ = std::move(family);
    g.layout_ = std::move(layout);

    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    g.frontier_mask_.assign(n, 0);
    for (VertexId v : frontier) {
        if (v < 0 || v >= n) throw ArgumentError("frontier vertex out of range");
        g.frontier_mask_[v] = 1;
    }
    g.frontier_ = std::move(frontier);

    g.depth_ = multi_source_hops(g.offsets_, g.neighbors_, {origin});
    if (g.frontier_.empty()) {
        g.frontier_distance_.assign(n, kFar);
    } else {
        g.frontier_distance_ = multi_source_hops(g.offsets_, g.neighbors_, g.frontier_);
        for (int& d : g.frontier_distance_)
            if (d < 0) d = kFar;
    }
    return g;
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (VertexId u = 0; u < vertex_count(); ++u)
        for (VertexId v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

bool Graph::operator==(const Graph& other) const {
    return offsets_ == other.offsets_ && neighbors_ == other.neighbors_ &&
           origin_ == other.origin_ && family_ == other.family_ && layout_ == other.layout_ &&
           frontier_ == other.frontier_;
}

VertexSet::VertexSet(std::vector<VertexId> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

VertexSet VertexSet::from_mask(const std::vector<char>& mask) {
    VertexSet s;
    for (VertexId v = 0; v < static_cast<VertexId>(mask.size()); ++v)
        if (mask[v]) s.members_.push_back(v);
    return s;
}

VertexSet VertexSet::all(VertexId n) {
    VertexSet s;
    s.members_.resize(n);
    for (VertexId v = 0; v < n; ++v) s.members_[v] = v;
    return s;
}

bool VertexSet::contains(VertexId v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
}

std::vector<char> VertexSet::mask(VertexId n) const {
    std::vector<char> m(n, 0);
    for (VertexId v : members_) m[v] = 1;
    return m;
}

bool VertexSet::subset_of(const VertexSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                         members_.end());
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    std::vector<VertexId> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    std::vector<VertexId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
}

}  // namespace fpphe
