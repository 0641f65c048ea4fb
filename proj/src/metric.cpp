#include "fpphe/metric.hpp"

#include <algorithm>
#include <cmath>

#include "fpphe/errors.hpp"
#include "fpphe/rng.hpp"

namespace fpphe {

std::vector<int> hop_distances(const Graph& g, const std::vector<VertexId>& sources,
                               int max_radius, const std::vector<char>* blocked) {
    std::vector<int> dist(g.vertex_count(), -1);
    std::vector<VertexId> queue;
    for (VertexId s : sources) {
        if (blocked && (*blocked)[s]) continue;
        if (dist[s] == -1) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexId u = queue[head];
        if (dist[u] >= max_radius) continue;
        for (VertexId w : g.neighbors(u)) {
            if (dist[w] != -1 || (blocked && (*blocked)[w])) continue;
            dist[w] = dist[u] + 1;
            queue.push_back(w);
        }
    }
    return dist;
}

DistanceMap bfs_distances(const Graph& g, const VertexSet& sources) {
    if (sources.empty()) throw ArgumentError("bfs_distances needs at least one source");
    return DistanceMap{sources, hop_distances(g, sources.members())};
}

const std::vector<VertexId>& BoundedBfs::run(VertexId source, int radius) {
    for (VertexId v : visited_) dist_[v] = -1;
    visited_.clear();
    dist_[source] = 0;
    visited_.push_back(source);
    for (std::size_t head = 0; head < visited_.size(); ++head) {
        const VertexId u = visited_[head];
        if (dist_[u] >= radius) continue;
        for (VertexId w : g_.neighbors(u)) {
            if (dist_[w] != -1) continue;
            dist_[w] = dist_[u] + 1;
            visited_.push_back(w);
        }
    }
    return visited_;
}

VertexSet ball(const Graph& g, VertexId center, int radius) {
    return ball(g, VertexSet{center}, radius);
}

VertexSet ball(const Graph& g, const VertexSet& centers, int radius) {
    if (radius < 0) return {};
    const auto dist = hop_distances(g, centers.members(), radius);
    std::vector<VertexId> members;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (dist[v] >= 0) members.push_back(v);
    return VertexSet(std::move(members));
}

VertexSet internal_boundary(const Graph& g, const VertexSet& s) {
    const auto in = s.mask(g.vertex_count());
    std::vector<VertexId> out;
    for (VertexId v : s) {
        bool edge = g.is_frontier(v);
        for (VertexId w : g.neighbors(v)) {
            if (edge) break;
            edge = !in[w];
        }
        if (edge) out.push_back(v);
    }
    return VertexSet(std::move(out));
}

namespace {

// Incremental |boundary(S)| bookkeeping under single-vertex insertions and
// removals.
class BoundaryTracker {
public:
    explicit BoundaryTracker(const Graph& g)
        : g_(g), in_(g.vertex_count(), 0), outside_nbrs_(g.vertex_count(), 0) {}

    std::int64_t size() const { return size_; }
    std::int64_t boundary() const { return boundary_; }
    bool contains(VertexId v) const { return in_[v] != 0; }

    bool on_boundary(VertexId v) const {
        return in_[v] && (outside_nbrs_[v] > 0 || g_.is_frontier(v));
    }

    void insert(VertexId v) {
        int outside = 0;
        for (VertexId w : g_.neighbors(v)) {
            if (in_[w]) {
                const bool before = on_boundary(w);
                --outside_nbrs_[w];
                boundary_ += int(on_boundary(w)) - int(before);
            } else {
                ++outside;
            }
        }
        in_[v] = 1;
        outside_nbrs_[v] = outside;
        ++size_;
        boundary_ += on_boundary(v);
    }

    void erase(VertexId v) {
        boundary_ -= on_boundary(v);
        in_[v] = 0;
        --size_;
        for (VertexId w : g_.neighbors(v)) {
            if (!in_[w]) continue;
            const bool before = on_boundary(w);
            ++outside_nbrs_[w];
            boundary_ += int(on_boundary(w)) - int(before);
        }
    }

    // |boundary| if v were inserted (v not in S).
    std::int64_t boundary_if_inserted(VertexId v) const {
        std::int64_t b = boundary_;
        int outside = 0;
        for (VertexId w : g_.neighbors(v)) {
            if (in_[w]) {
                const bool before = on_boundary(w);
                const bool after = outside_nbrs_[w] - 1 > 0 || g_.is_frontier(w);
                b += int(after) - int(before);
            } else {
                ++outside;
            }
        }
        return b + ((outside > 0 || g_.is_frontier(v)) ? 1 : 0);
    }

    std::vector<VertexId> members() const {
        std::vector<VertexId> out;
        for (VertexId v = 0; v < g_.vertex_count(); ++v)
            if (in_[v]) out.push_back(v);
        return out;
    }

private:
    const Graph& g_;
    std::vector<char> in_;
    std::vector<int> outside_nbrs_;
    std::int64_t size_ = 0;
    std::int64_t boundary_ = 0;
};

bool better(std::int64_t b1, std::int64_t s1, std::int64_t b2, std::int64_t s2) {
    // b1/s1 < b2/s2 in exact arithmetic; ties prefer the larger set.
    const auto lhs = static_cast<__int128>(b1) * s2;
    const auto rhs = static_cast<__int128>(b2) * s1;
    return lhs < rhs || (lhs == rhs && s1 > s2);
}

}  // namespace

CheegerResult cheeger_ratio_search(const Graph& g, int trials, std::uint64_t rng_seed) {
    const VertexId n = g.vertex_count();
    Rng rng(rng_seed);
    CheegerResult best;
    best.boundary = 1;
    best.size = 0;
    bool have = false;

    for (int trial = 0; trial < std::max(trials, 1); ++trial) {
        const VertexId start = trial == 0 ? g.origin() : static_cast<VertexId>(rng.below(n));
        // Greedy growth in BFS order, remembering the best prefix.
        BoundaryTracker tracker(g);
        std::vector<VertexId> order = {start};
        std::vector<char> seen(n, 0);
        seen[start] = 1;
        std::int64_t best_b = 0, best_s = 0;
        std::size_t best_prefix = 0;
        for (std::size_t head = 0; head < order.size(); ++head) {
            const VertexId v = order[head];
            tracker.insert(v);
            if (best_s == 0 || better(tracker.boundary(), tracker.size(), best_b, best_s)) {
                best_b = tracker.boundary();
                best_s = tracker.size();
                best_prefix = head + 1;
            }
            for (VertexId w : g.neighbors(v))
                if (!seen[w]) {
                    seen[w] = 1;
                    order.push_back(w);
                }
        }
        BoundaryTracker set(g);
        for (std::size_t i = 0; i < best_prefix; ++i) set.insert(order[i]);

        // Local refinement: add outside neighbours of the boundary while the
        // ratio strictly improves.
        bool improved = true;
        int rounds = 0;
        while (improved && rounds++ < 64) {
            improved = false;
            std::vector<VertexId> candidates;
            for (VertexId v : set.members())
                if (set.on_boundary(v))
                    for (VertexId w : g.neighbors(v))
                        if (!set.contains(w)) candidates.push_back(w);
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
            for (VertexId w : candidates) {
                const std::int64_t nb = set.boundary_if_inserted(w);
                if (better(nb, set.size() + 1, set.boundary(), set.size())) {
                    set.insert(w);
                    improved = true;
                }
            }
        }
        if (!have || better(set.boundary(), set.size(), best.boundary, best.size)) {
            have = true;
            best.boundary = set.boundary();
            best.size = set.size();
            best.witness = VertexSet(set.members());
        }
    }
    best.ratio = static_cast<double>(best.boundary) / static_cast<double>(best.size);
    return best;
}

int safe_radius(const Graph& g, VertexId x) { return g.frontier_distance(x); }

GrowthProfile growth_profile(const Graph& g, VertexId x, int n) {
    if (n < 0) throw ArgumentError("n must be non-negative");
    if (n > safe_radius(g, x))
        throw RangeError("radius " + std::to_string(n) + " exceeds the safe radius " +
                         std::to_string(safe_radius(g, x)) + " around vertex " +
                         std::to_string(x));
    const auto dist = hop_distances(g, {x}, n);
    GrowthProfile prof;
    prof.sizes.assign(n + 1, 0);
    for (int d : dist)
        if (d >= 0) ++prof.sizes[d];
    for (int k = 1; k <= n; ++k) prof.sizes[k] += prof.sizes[k - 1];
    if (n >= 1) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int k = 0; k <= n; ++k) {
            const double y = std::log(static_cast<double>(prof.sizes[k]));
            sx += k;
            sy += y;
            sxx += double(k) * k;
            sxy += k * y;
        }
        const double m = n + 1;
        prof.growth_rate = std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
    }
    return prof;
}

}  // namespace fpphe
