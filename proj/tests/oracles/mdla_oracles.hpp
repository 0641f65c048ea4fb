#pragma once

#include <vector>

#include "fpphe/graph.hpp"
#include "fpphe/mdla.hpp"

namespace oracle {

struct MdlaReference {
    std::vector<fpphe::Site> site;
    std::vector<fpphe::VertexId> position;
    std::vector<char> frozen;
    double time = 0.0;
};

// Every particle keeps its absolute next ring time; each step scans all of
// them for the earliest (time, particle index) and applies the rule.
inline MdlaReference reference_mdla(const fpphe::Graph& g, const std::vector<fpphe::VertexId>& start,
                                    std::uint64_t seed, double horizon) {
    using fpphe::Site;
    const int slots = 2 * g.family().params.at("d").get<int>();
    MdlaReference r;
    r.site.assign(g.vertex_count(), Site::Empty);
    r.site[g.origin()] = Site::Aggregate;
    r.position = start;
    r.frozen.assign(start.size(), 0);
    std::vector<double> next(start.size());
    std::vector<std::uint64_t> n(start.size(), 0);
    for (std::size_t k = 0; k < start.size(); ++k) {
        r.site[start[k]] = Site::Particle;
        next[k] = fpphe::mdla_ring(seed, start[k], 0, slots).wait;
    }
    for (;;) {
        std::size_t k = start.size();
        for (std::size_t j = 0; j < start.size(); ++j)
            if (!r.frozen[j] && (k == start.size() || next[j] < next[k])) k = j;
        if (k == start.size() || next[k] > horizon) break;
        r.time = next[k];
        const fpphe::VertexId x = r.position[k];
        const int slot = fpphe::mdla_ring(seed, start[k], n[k], slots).slot;
        const auto nb = g.neighbors(x);
        if (slot < static_cast<int>(nb.size())) {
            const fpphe::VertexId y = nb[slot];
            if (r.site[y] == Site::Aggregate) {
                r.site[x] = Site::Aggregate;
                r.frozen[k] = 1;
                continue;
            }
            if (r.site[y] == Site::Empty) {
                r.site[x] = Site::Empty;
                r.site[y] = Site::Particle;
                r.position[k] = y;
            }
        }
        ++n[k];
        next[k] += fpphe::mdla_ring(seed, start[k], n[k], slots).wait;
    }
    return r;
}

}  // namespace oracle
