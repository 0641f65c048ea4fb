#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "fpphe/graph.hpp"

namespace oracle {

// Sphere sizes of the free product of cyclic groups from the syllable
// recurrence a_{k+1}(i) = (n_i - 1) * sum_{j != i} a_k(j).
inline std::vector<std::int64_t> free_product_spheres(const std::vector<int>& sizes, int radius) {
    std::vector<std::int64_t> out{1};
    std::vector<std::int64_t> ending(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) ending[i] = sizes[i] - 1;
    for (int k = 1; k <= radius; ++k) {
        std::int64_t total = 0;
        for (auto e : ending) total += e;
        out.push_back(total);
        std::vector<std::int64_t> next(sizes.size());
        for (std::size_t i = 0; i < sizes.size(); ++i) next[i] = (sizes[i] - 1) * (total - ending[i]);
        ending = next;
    }
    return out;
}

// Unit-weight shortest paths by repeated edge relaxation.
inline std::vector<int> relaxation_distances(const fpphe::Graph& g, fpphe::VertexId s) {
    const int inf = std::numeric_limits<int>::max() / 2;
    std::vector<int> d(g.vertex_count(), inf);
    d[s] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [u, v] : g.edges()) {
            if (d[u] + 1 < d[v]) { d[v] = d[u] + 1; changed = true; }
            if (d[v] + 1 < d[u]) { d[u] = d[v] + 1; changed = true; }
        }
    }
    for (int& x : d)
        if (x == inf) x = -1;
    return d;
}

inline std::vector<fpphe::VertexId> boundary_by_definition(const fpphe::Graph& g,
                                                           const std::vector<fpphe::VertexId>& s) {
    std::vector<fpphe::VertexId> out;
    for (auto v : s) {
        bool hit = g.is_frontier(v);
        for (auto w : g.neighbors(v))
            if (std::find(s.begin(), s.end(), w) == s.end()) hit = true;
        if (hit) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace oracle
