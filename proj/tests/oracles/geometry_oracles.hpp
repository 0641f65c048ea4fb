#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "fpphe/graph.hpp"

namespace oracle {

using fpphe::Graph;
using fpphe::VertexId;

inline constexpr int kInf = 1 << 28;

// All-pairs hop distances by Floyd-Warshall over the edge list.
inline std::vector<std::vector<int>> floyd_warshall(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
    for (int v = 0; v < n; ++v) d[v][v] = 0;
    for (const auto& [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

// Every simple path from a to b of exactly `length` edges, in lexicographic
// order of vertex sequences.
inline std::vector<std::vector<VertexId>> simple_paths_of_length(const Graph& g, VertexId a,
                                                                 VertexId b, int length) {
    std::vector<std::vector<VertexId>> out;
    std::vector<VertexId> cur{a};
    std::vector<char> on(g.vertex_count(), 0);
    on[a] = 1;
    auto dfs = [&](auto&& self, VertexId u) -> void {
        if (static_cast<int>(cur.size()) - 1 == length) {
            if (u == b) out.push_back(cur);
            return;
        }
        for (VertexId w : g.neighbors(u)) {
            if (on[w]) continue;
            on[w] = 1;
            cur.push_back(w);
            self(self, w);
            cur.pop_back();
            on[w] = 0;
        }
    };
    dfs(dfs, a);
    std::sort(out.begin(), out.end());
    return out;
}

// Lexicographically first geodesic read off the distance matrix.
inline std::vector<VertexId> first_geodesic(const Graph& g, const std::vector<std::vector<int>>& d,
                                            VertexId a, VertexId b) {
    std::vector<VertexId> p{a};
    while (p.back() != b) {
        const VertexId u = p.back();
        VertexId next = -1;
        for (VertexId w = 0; w < g.vertex_count(); ++w)
            if (g.has_edge(u, w) && d[w][b] == d[u][b] - 1) {
                next = w;
                break;
            }
        p.push_back(next);
    }
    return p;
}

inline int defect_by_definition(const Graph& g, const std::vector<std::vector<int>>& d,
                                VertexId a, VertexId b, VertexId c) {
    const std::vector<std::vector<VertexId>> sides{first_geodesic(g, d, a, b),
                                                   first_geodesic(g, d, b, c),
                                                   first_geodesic(g, d, c, a)};
    int worst = 0;
    for (int i = 0; i < 3; ++i) {
        for (VertexId u : sides[i]) {
            int best = kInf;
            for (int j = 1; j <= 2; ++j)
                for (VertexId v : sides[(i + j) % 3]) best = std::min(best, d[u][v]);
            worst = std::max(worst, best);
        }
    }
    return worst;
}

inline int max_defect_all_triples(const Graph& g) {
    const auto d = floyd_warshall(g);
    int worst = 0;
    const int n = g.vertex_count();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) worst = std::max(worst, defect_by_definition(g, d, a, b, c));
    return worst;
}

// Union of radius-L balls around the vertices of the given paths.
inline std::set<VertexId> union_of_balls(const std::vector<std::vector<int>>& d,
                                         const std::vector<std::vector<VertexId>>& paths, int L) {
    std::set<VertexId> out;
    for (const auto& p : paths)
        for (VertexId w : p)
            for (VertexId v = 0; v < static_cast<VertexId>(d.size()); ++v)
                if (d[w][v] <= L) out.insert(v);
    return out;
}

}  // namespace oracle
