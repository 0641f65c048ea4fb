#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <vector>

#include "fpphe/fpp.hpp"
#include "fpphe/graph.hpp"

namespace oracle {

using fpphe::Graph;
using fpphe::VertexId;

// All-pairs hop distances, one queue-based BFS per vertex.
inline std::vector<std::vector<int>> bfs_matrix(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<std::vector<int>> d(n, std::vector<int>(n, -1));
    for (int s = 0; s < n; ++s) {
        std::vector<int> q{s};
        d[s][s] = 0;
        for (std::size_t i = 0; i < q.size(); ++i)
            for (VertexId v : g.neighbors(q[i]))
                if (d[s][v] < 0) {
                    d[s][v] = d[s][q[i]] + 1;
                    q.push_back(v);
                }
    }
    return d;
}

// Dijkstra over an explicit (time, vertex) set with weights t_e / rate.
inline std::vector<double> set_dijkstra(const Graph& g, VertexId s, double rate, const fpphe::PassageTimeField& pt) {
    std::vector<double> d(g.vertex_count(), std::numeric_limits<double>::infinity());
    std::set<std::pair<double, VertexId>> open{{0.0, s}};
    d[s] = 0.0;
    while (!open.empty()) {
        const auto [t, u] = *open.begin();
        open.erase(open.begin());
        for (VertexId v : g.neighbors(u)) {
            const double c = t + pt(u, v) / rate;
            if (c < d[v]) {
                open.erase({d[v], v});
                d[v] = c;
                open.insert({c, v});
            }
        }
    }
    return d;
}

struct LiteralVerdict {
    bool sandwich = true;
    bool paths = true;
    bool seeds = true;
    std::int64_t triples = 0;  // (w, t) pairs plus enumerated paths
};

// Direct reading of the good-cylinder conditions on a small graph: every
// w in the cylinder, every integer t, every self-avoiding path in the window.
inline LiteralVerdict cylinder_by_definition(const Graph& g, const std::vector<std::vector<int>>& d, VertexId gx,
                                             VertexId gy, int j, int r, double eps, double c_in, double c_out,
                                             double lambda, double beta, double t_window, double path_window,
                                             const fpphe::SeedField& seeds, const fpphe::PassageTimeField& pt) {
    const int n = g.vertex_count();
    const double jr = static_cast<double>(j) * r;
    auto cylinder = [&](double width) {
        std::vector<VertexId> out;
        for (int v = 0; v < n; ++v) {
            bool near = false;
            for (int c = 0; c < n && !near; ++c)
                if (d[gx][c] + d[c][gy] == d[gx][gy] && d[c][v] <= width) near = true;
            if (near) out.push_back(v);
        }
        return out;
    };
    LiteralVerdict out;
    const auto cyl = cylinder(eps * jr);
    const double lo = std::min(1.0, lambda);
    const double hi = std::max(1.0, lambda);
    const double t_first = std::sqrt(eps) * jr;
    const double t_last = t_window * c_out / (c_in * c_in) * jr;
    const double l_first = std::sqrt(eps) * c_out * jr;
    const double l_last = path_window * c_out * c_out / (c_in * c_in) * jr;

    for (VertexId w : cyl) {
        const auto a_min = set_dijkstra(g, w, lo, pt);
        const auto a_max = set_dijkstra(g, w, hi, pt);
        for (int t = 0; t <= t_last; ++t) {
            if (t < t_first) continue;
            ++out.triples;
            for (int v = 0; v < n; ++v) {
                const bool in_min = a_min[v] <= t;
                const bool in_max = a_max[v] <= t;
                if (d[w][v] <= lo * c_in * t && !in_min) out.sandwich = false;
                if (in_min && !in_max) out.sandwich = false;
                if (in_max && !(d[w][v] <= hi * c_out * t)) out.sandwich = false;
            }
        }
        std::vector<char> on(n, 0);
        std::function<void(VertexId, int, double)> walk = [&](VertexId v, int len, double T) {
            if (len >= 1) ++out.triples;
            if (len >= l_first && len <= l_last && T < len / c_out) out.paths = false;
            if (len + 1 > l_last) return;
            on[v] = 1;
            for (VertexId u : g.neighbors(v))
                if (!on[u]) walk(u, len + 1, T + pt(v, u));
            on[v] = 0;
        };
        walk(w, 0, 0.0);
    }
    if (j == 1)
        for (VertexId v : cylinder(eps * r + beta * r))
            if (seeds.is_seed(v, g.origin())) out.seeds = false;
    return out;
}

// Ancestor of v at generation n by repeated halving of the heap index.
inline int walk_up(int v, int n) {
    std::vector<int> chain{v};
    while (chain.back() > 0) chain.push_back((chain.back() - 1) / 2);
    std::reverse(chain.begin(), chain.end());  // chain[k] is at generation k
    return chain[n];
}

inline bool is_descendant(int v, int u) {
    while (v > u) v = (v - 1) / 2;
    return v == u;
}

// Every root-to-generation-depth path as a leaf index, checked against a set.
inline bool some_path_avoids(int depth, const std::set<int>& removed) {
    const long first = (1L << depth) - 1;
    for (long leaf = first; leaf < 2 * first + 1; ++leaf) {
        bool ok = true;
        for (long v = leaf;; v = (v - 1) / 2) {
            if (removed.count(static_cast<int>(v))) ok = false;
            if (v == 0 || !ok) break;
        }
        if (ok) return true;
    }
    return false;
}

// Minimal cutsets of size k of the subtree below v, built as explicit sets:
// either {v} or a cutset of each child.
inline std::vector<std::set<int>> cutsets_below(int v, int k) {
    std::vector<std::set<int>> out;
    if (k == 1) out.push_back({v});
    for (int a = 1; a < k; ++a)
        for (const auto& left : cutsets_below(2 * v + 1, a))
            for (const auto& right : cutsets_below(2 * v + 2, k - a)) {
                std::set<int> s = left;
                s.insert(right.begin(), right.end());
                out.push_back(s);
            }
    return out;
}

}  // namespace oracle
