#include "fpphe/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "fpphe/errors.hpp"
#include "fpphe/metric.hpp"
#include "fpphe/rng.hpp"

namespace fpphe {

namespace {

void check_vertex(const Graph& g, VertexId v) {
    if (v < 0 || v >= g.vertex_count()) throw ArgumentError("vertex id out of range");
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b, bool& saturated) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) {
        saturated = true;
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a + b;
}

}  // namespace

bool distance_is_exact(const Graph& g, VertexId a, VertexId b, int d) {
    const int fa = g.frontier_distance(a);
    const int fb = g.frontier_distance(b);
    if (fa == kFar || fb == kFar) return true;
    return static_cast<std::int64_t>(d) <= static_cast<std::int64_t>(fa) + fb + 1;
}

Path canonical_geodesic(const Graph& g, VertexId x, VertexId y) {
    check_vertex(g, x);
    check_vertex(g, y);
    const auto dy = hop_distances(g, {y});
    if (dy[x] < 0) throw NoPathError("vertices are disconnected");
    Path path{x};
    VertexId u = x;
    while (u != y) {
        for (VertexId w : g.neighbors(u)) {
            if (dy[w] == dy[u] - 1) {
                u = w;
                break;
            }
        }
        path.push_back(u);
    }
    return path;
}

GeodesicSet enumerate_geodesics(const Graph& g, VertexId x, VertexId y, int cap) {
    check_vertex(g, x);
    check_vertex(g, y);
    if (cap < 1) throw ArgumentError("geodesic cap must be positive");
    const auto dx = hop_distances(g, {x});
    if (dx[y] < 0) throw NoPathError("vertices are disconnected");
    const auto dy = hop_distances(g, {y});
    const int d = dx[y];

    GeodesicSet out;
    out.x = x;
    out.y = y;
    out.length = d;
    out.cap = cap;
    out.contaminated = !distance_is_exact(g, x, y, d);

    std::vector<std::vector<VertexId>> layers(d + 1);
    std::vector<char> on(g.vertex_count(), 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (dx[v] >= 0 && dy[v] >= 0 && dx[v] + dy[v] == d) {
            on[v] = 1;
            layers[dx[v]].push_back(v);
        }
    }
    out.dag = VertexSet::from_mask(on);

    // Paths from each DAG vertex to y, accumulated from the y end.
    std::vector<std::uint64_t> paths_to_y(g.vertex_count(), 0);
    bool saturated = false;
    paths_to_y[y] = 1;
    for (int k = d - 1; k >= 0; --k) {
        for (VertexId v : layers[k]) {
            std::uint64_t c = 0;
            for (VertexId w : g.neighbors(v))
                if (on[w] && dx[w] == k + 1) c = saturating_add(c, paths_to_y[w], saturated);
            paths_to_y[v] = c;
        }
    }
    out.count = paths_to_y[x];
    out.count_exact = !saturated;

    Path current{x};
    auto dfs = [&](auto&& self, VertexId u) -> void {
        if (static_cast<int>(out.paths.size()) >= cap) return;
        if (u == y) {
            out.paths.push_back(current);
            return;
        }
        for (VertexId w : g.neighbors(u)) {
            if (!on[w] || dx[w] != dx[u] + 1) continue;
            current.push_back(w);
            self(self, w);
            current.pop_back();
            if (static_cast<int>(out.paths.size()) >= cap) return;
        }
    };
    dfs(dfs, x);
    out.complete = out.count_exact && out.paths.size() == out.count;
    return out;
}

int triangle_defect(const Graph& g, VertexId a, VertexId b, VertexId c) {
    const std::array<Path, 3> sides{canonical_geodesic(g, a, b), canonical_geodesic(g, b, c),
                                    canonical_geodesic(g, c, a)};
    int defect = 0;
    for (int i = 0; i < 3; ++i) {
        std::vector<VertexId> others = sides[(i + 1) % 3];
        others.insert(others.end(), sides[(i + 2) % 3].begin(), sides[(i + 2) % 3].end());
        const auto dist = hop_distances(g, others);
        for (VertexId u : sides[i]) defect = std::max(defect, dist[u]);
    }
    return defect;
}

DeltaEstimate delta_thin_estimate(const Graph& g, std::int64_t samples, std::uint64_t rng_seed) {
    if (samples < 1) throw ArgumentError("delta estimate needs at least one sample");
    DeltaEstimate out;
    const std::int64_t n = g.vertex_count();
    auto consider = [&](VertexId a, VertexId b, VertexId c) {
        if (g.depth(a) < 0 || g.depth(b) < 0 || g.depth(c) < 0) return;
        ++out.triangles;
        const int d = triangle_defect(g, a, b, c);
        if (d > out.delta || out.witness[0] == kNoVertex) {
            out.delta = d;
            out.witness = {a, b, c};
        }
    };
    if (n < 3) return out;
    const std::int64_t all = n * (n - 1) * (n - 2) / 6;
    if (samples >= all) {
        for (VertexId a = 0; a < n; ++a)
            for (VertexId b = a + 1; b < n; ++b)
                for (VertexId c = b + 1; c < n; ++c) consider(a, b, c);
        return out;
    }
    Rng rng(rng_seed);
    for (std::int64_t s = 0; s < samples; ++s) {
        const auto a = static_cast<VertexId>(rng.below(n));
        auto b = static_cast<VertexId>(rng.below(n - 1));
        if (b >= a) ++b;
        auto c = static_cast<VertexId>(rng.below(n));
        while (c == a || c == b) c = static_cast<VertexId>(rng.below(n));
        consider(a, b, c);
    }
    return out;
}

Cylinder build_cylinder(const Graph& g, VertexId x, VertexId y, int width) {
    check_vertex(g, x);
    check_vertex(g, y);
    if (width < 0) throw ArgumentError("cylinder width must be non-negative");
    const auto dx = hop_distances(g, {x});
    if (dx[y] < 0) throw NoPathError("vertices are disconnected");
    const auto dy = hop_distances(g, {y});
    const int d = dx[y];
    std::vector<VertexId> core;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (dx[v] >= 0 && dy[v] >= 0 && dx[v] + dy[v] == d) core.push_back(v);

    Cylinder out;
    out.x = x;
    out.y = y;
    out.width = width;
    out.members = ball(g, VertexSet(std::move(core)), width);
    out.contaminated = !distance_is_exact(g, x, y, d);
    for (VertexId v : out.members)
        if (g.is_frontier(v)) out.contaminated = true;
    return out;
}

std::optional<int> detour_length(const Graph& g, VertexId a, VertexId b,
                                 const VertexSet& forbidden) {
    check_vertex(g, a);
    check_vertex(g, b);
    if (forbidden.contains(a) || forbidden.contains(b))
        throw ArgumentError("detour endpoints must lie outside the forbidden set");
    const auto blocked = forbidden.mask(g.vertex_count());
    const auto dist = hop_distances(g, {a}, kFar, &blocked);
    if (dist[b] < 0) return std::nullopt;
    return dist[b];
}

int EmbeddedTree::generation(int v) {
    int k = 0;
    while (v > 0) {
        v = parent(v);
        ++k;
    }
    return k;
}

int EmbeddedTree::ancestor(int v, int n) {
    for (int k = generation(v); k > n; --k) v = parent(v);
    return v;
}

int EmbeddedTree::tree_distance(int a, int b) {
    int ga = generation(a);
    int gb = generation(b);
    int d = 0;
    while (ga > gb) {
        a = parent(a);
        --ga;
        ++d;
    }
    while (gb > ga) {
        b = parent(b);
        --gb;
        ++d;
    }
    while (a != b) {
        a = parent(a);
        b = parent(b);
        d += 2;
    }
    return d;
}

double measure_distortion(const Graph& g, const EmbeddedTree& t, std::int64_t pair_budget,
                          std::int64_t* checked, bool* exhaustive) {
    const auto n = static_cast<std::int64_t>(t.size());
    std::int64_t sources = n;
    if (n * (n - 1) / 2 > pair_budget) sources = std::max<std::int64_t>(1, pair_budget / n + 1);
    const bool all = sources >= n;
    double alpha = 1.0;
    std::int64_t pairs = 0;
    for (std::int64_t i = 0; i < sources; ++i) {
        // Evenly spaced sources keep every generation represented.
        const auto a = static_cast<int>(all ? i : (i * n) / sources);
        const auto dist = hop_distances(g, {t.image[a]});
        for (int b = all ? a + 1 : 0; b < n; ++b) {
            if (b == a) continue;
            const double dg = dist[t.image[b]];
            const double dt = static_cast<double>(t.r) * EmbeddedTree::tree_distance(a, b);
            if (dg <= 0) return std::numeric_limits<double>::infinity();
            alpha = std::max({alpha, dg / dt, dt / dg});
            ++pairs;
        }
    }
    if (checked) *checked = pairs;
    if (exhaustive) *exhaustive = all;
    return alpha;
}

EmbeddedTree embed_binary_tree(const Graph& g, int r, int depth, double alpha_target,
                               std::int64_t pair_budget) {
    if (r < 2) throw ParameterError("embedding scale r must be at least 2");
    if (depth < 0) throw ParameterError("embedding depth must be non-negative");
    if (!(alpha_target >= 1.0)) throw ParameterError("alpha_target must be at least 1");
    if (depth > 20) throw SizeError("embedding depth too large");

    EmbeddedTree t;
    t.r = r;
    t.depth = depth;
    t.alpha_target = alpha_target;
    const int total = (1 << (depth + 1)) - 1;
    t.image.assign(total, kNoVertex);
    t.edge_path.assign(total, {});
    t.image[0] = g.origin();

    std::vector<char> used(g.vertex_count(), 0);
    used[g.origin()] = 1;
    const int reach = static_cast<int>(std::floor(alpha_target * r + 1e-9));
    const double climb = r / alpha_target - 1e-9;
    BoundedBfs around(g);
    BoundedBfs pair_bfs(g);

    for (int v = 0; v < (1 << depth) - 1; ++v) {
        const VertexId u = t.image[v];
        struct Candidate {
            int du;
            VertexId id;
        };
        std::vector<Candidate> cand;
        for (VertexId w : around.run(u, reach)) {
            const int du = around.dist(w);
            if (du < r || used[w] || g.is_frontier(w)) continue;
            if (g.depth(w) - g.depth(u) < climb) continue;
            cand.push_back({du, w});
        }
        std::sort(cand.begin(), cand.end(),
                  [](const Candidate& a, const Candidate& b) { return std::tie(a.du, a.id) < std::tie(b.du, b.id); });

        // Key: (twice the Gromov product at u, d(u,w)+d(u,z), lower id, higher id).
        std::tuple<int, int, VertexId, VertexId> best{std::numeric_limits<int>::max(), 0, 0, 0};
        bool found = false;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            pair_bfs.run(cand[i].id, 2 * reach);
            for (std::size_t j = i + 1; j < cand.size(); ++j) {
                // Both lie within reach of u, so the search radius always covers z.
                const int dwz = pair_bfs.dist(cand[j].id);
                if (dwz < r) continue;
                const auto key = std::tuple{cand[i].du + cand[j].du - dwz, cand[i].du + cand[j].du,
                                            std::min(cand[i].id, cand[j].id),
                                            std::max(cand[i].id, cand[j].id)};
                if (!found || key < best) {
                    best = key;
                    found = true;
                }
            }
        }
        if (!found)
            throw EmbeddingFailure("no admissible child pair for tree vertex " + std::to_string(v),
                                   v, EmbeddedTree::generation(v));
        const VertexId left = std::get<2>(best);
        const VertexId right = std::get<3>(best);
        t.image[2 * v + 1] = left;
        t.image[2 * v + 2] = right;
        used[left] = used[right] = 1;
        t.edge_path[2 * v + 1] = canonical_geodesic(g, u, left);
        t.edge_path[2 * v + 2] = canonical_geodesic(g, u, right);
    }

    t.alpha = measure_distortion(g, t, pair_budget, &t.pairs_checked, &t.pairs_exhaustive);

    // Routes from the root along tree edges, compared with direct geodesics.
    std::vector<Path> route(total);
    route[0] = {g.origin()};
    for (int v = 1; v < total; ++v) {
        route[v] = route[EmbeddedTree::parent(v)];
        route[v].insert(route[v].end(), t.edge_path[v].begin() + 1, t.edge_path[v].end());
        const Path geo = canonical_geodesic(g, g.origin(), t.image[v]);
        const auto from_route = hop_distances(g, route[v]);
        const auto from_geo = hop_distances(g, geo);
        for (VertexId w : geo) t.kappa = std::max(t.kappa, from_route[w]);
        for (VertexId w : route[v]) t.kappa = std::max(t.kappa, from_geo[w]);
    }

    for (int a = 0; a < total && !t.contaminated; ++a)
        if (g.frontier_distance(t.image[a]) != kFar &&
            g.frontier_distance(t.image[a]) < static_cast<int>(std::ceil(alpha_target * r)))
            t.contaminated = true;
    return t;
}

int integer_slack(double delta) {
    if (!(delta >= 0.0)) throw ParameterError("delta must be non-negative");
    return static_cast<int>(std::ceil(16.0 * delta));
}

VertexId far_point_from(const Graph& g, VertexId x, std::int64_t s, double delta) {
    check_vertex(g, x);
    if (s < 1) throw ParameterError("far point radius must be positive");
    if (g.frontier_distance(x) != kFar && g.frontier_distance(x) <= s)
        throw RangeError("ball of radius " + std::to_string(s) + " reaches the truncation frontier");
    const int radius = static_cast<int>(std::min<std::int64_t>(s, kFar - 1));
    BoundedBfs bfs(g);
    VertexId best = kNoVertex;
    for (VertexId v : bfs.run(x, radius)) {
        if (bfs.dist(v) != s) continue;
        if (best == kNoVertex || g.depth(v) > g.depth(best) ||
            (g.depth(v) == g.depth(best) && v < best))
            best = v;
    }
    if (best == kNoVertex) throw RangeError("sphere around the base vertex is empty");
    if (g.depth(best) < g.depth(x) + s - integer_slack(delta))
        throw ConsistencyError("far point shallower than d(o,x) + s - ceil(16 delta); delta too small");
    return best;
}

VertexId deepest_boundary_vertex(const Graph& g, const VertexSet& occupied) {
    if (!occupied.contains(g.origin())) throw ArgumentError("occupied set must contain the origin");
    const auto boundary = internal_boundary(g, occupied);
    if (boundary.empty()) throw ArgumentError("occupied set has no boundary");
    VertexId best = *boundary.begin();
    for (VertexId v : boundary)
        if (g.depth(v) > g.depth(best)) best = v;
    return best;
}

VertexId far_point(const Graph& g, const VertexSet& occupied, std::int64_t s, double delta) {
    return far_point_from(g, deepest_boundary_vertex(g, occupied), s, delta);
}

std::int64_t escape_step_radius(int R1, int k, int slack) {
    if (R1 < 2 || k < 1) throw ParameterError("escape radius needs R1 >= 2 and k >= 1");
    std::int64_t low = 1;
    for (int i = 0; i < 2 * k - 1; ++i) {
        if (low > (std::int64_t{1} << 61) / R1) throw SizeError("escape radius overflows");
        low *= R1;
    }
    return low * R1 + low + slack;
}

EscapeRay build_escape_ray(const Graph& g, const VertexSet& occupied, int R1, int steps,
                           double delta) {
    if (R1 < 2) throw ParameterError("R1 must be at least 2");
    if (steps < 0) throw ParameterError("steps must be non-negative");
    EscapeRay ray;
    ray.R1 = R1;
    ray.delta = delta;
    ray.slack = integer_slack(delta);
    ray.requested_steps = steps;

    const VertexId base = deepest_boundary_vertex(g, occupied);
    const auto from_occupied = hop_distances(g, occupied.members());
    ray.waypoints.push_back(base);
    ray.occupied_distance.push_back(from_occupied[base]);
    ray.path = canonical_geodesic(g, g.origin(), base);

    std::int64_t power_sum = 0;
    std::int64_t power = 1;
    for (int k = 1; k <= steps; ++k) {
        const std::int64_t s = escape_step_radius(R1, k, ray.slack);
        VertexId w;
        try {
            w = far_point_from(g, ray.waypoints.back(), s, delta);
        } catch (const RangeError&) {
            ray.partial = true;
            break;
        }
        const Path seg = canonical_geodesic(g, ray.waypoints.back(), w);
        ray.path.insert(ray.path.end(), seg.begin() + 1, seg.end());
        ray.waypoints.push_back(w);
        ray.step_radii.push_back(s);
        ray.occupied_distance.push_back(from_occupied[w]);

        for (int i = 0; i < 2; ++i) {
            power *= R1;
            power_sum += power;
        }
        const std::int64_t d = from_occupied[w];
        if (d < power_sum || d > power_sum + static_cast<std::int64_t>(ray.slack) * k)
            ray.sandwich_ok = false;
        if (g.depth(w) <= g.depth(ray.waypoints[k - 1])) ray.sandwich_ok = false;
    }
    return ray;
}

}  // namespace fpphe
