#include "fpphe/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "fpphe/errors.hpp"
#include "fpphe/metric.hpp"
#include "fpphe/rng.hpp"

namespace fpphe {

namespace {

int floor_int(double v) {
    if (!(v < static_cast<double>(std::numeric_limits<int>::max())))
        throw SizeError("window bound does not fit in an int");
    return static_cast<int>(std::floor(v));
}

int ceil_int(double v) {
    if (!(v < static_cast<double>(std::numeric_limits<int>::max())))
        throw SizeError("window bound does not fit in an int");
    return static_cast<int>(std::ceil(v));
}

// Sandwich check for one start vertex over every integer t in the window.
// Returns the smallest violating t, or -1. Sets `incomplete` when some t could
// only be decided with vertices beyond the truncation.
int sandwich_violation(const Graph& g, VertexId w, const ScaleParams& p, const CheckWindows& win,
                       const PassageTimeField& pt, BoundedBfs& bfs, bool& incomplete) {
    const double lo_rate = std::min(1.0, p.lambda);
    const double hi_rate = std::max(1.0, p.lambda);
    auto inner_radius = [&](int t) { return floor_int(lo_rate * p.c_in * t); };
    auto outer_radius = [&](int t) { return floor_int(hi_rate * p.c_out * t); };

    const double horizon = win.t_high;
    const auto t_min = run_single_fpp(g, VertexSet{w}, lo_rate, pt, horizon);
    const auto t_max = run_single_fpp(g, VertexSet{w}, hi_rate, pt, horizon);
    const int reach = std::max(inner_radius(win.t_high), outer_radius(win.t_high)) + 1;
    bfs.run(w, reach);

    // Every path of cost at most t avoids the frontier when t < first_frontier,
    // so truncated times at or below t are the true times.
    double first_frontier = kInfinity;
    for (VertexId f : g.frontier()) first_frontier = std::min(first_frontier, t_max[f]);
    const int fd_w = g.frontier_distance(w);

    int worst = -1;
    auto record = [&](int t) {
        if (worst < 0 || t < worst) worst = t;
    };
    auto first_t_at_or_after = [&](double time) {
        return std::max(win.t_low, static_cast<int>(std::ceil(time)));
    };

    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const int d = bfs.dist(v);
        // Outer containment: v joins A^max at its first integer t >= T_max(v).
        if (t_max[v] <= horizon) {
            const int t = first_t_at_or_after(t_max[v]);
            if (t <= win.t_high) {
                const int R = outer_radius(t);
                const bool beyond = d < 0 || d > R;
                if (beyond) {
                    // Shortcuts through the missing part leave and re-enter at frontier vertices.
                    const std::int64_t via_outside =
                        static_cast<std::int64_t>(fd_w) + g.frontier_distance(v) + 2;
                    const std::int64_t lower = d < 0 ? via_outside : std::min<std::int64_t>(d, via_outside);
                    if (lower > R)
                        record(t);
                    else
                        incomplete = true;
                }
            }
        }
        if (t_min[v] <= horizon && !(t_max[v] <= t_min[v])) record(first_t_at_or_after(t_min[v]));
        // Inner ball: v must be in A^min from the first t whose inner radius covers it.
        if (d >= 0 && d <= inner_radius(win.t_high)) {
            int t0 = win.t_low;
            while (t0 <= win.t_high && inner_radius(t0) < d) ++t0;
            if (t0 <= win.t_high && t_min[v] > t0) {
                if (t0 < first_frontier)
                    record(t0);
                else
                    incomplete = true;
            }
        }
    }
    if (first_frontier <= win.t_high && worst < 0) incomplete = true;
    return worst;
}

class PathScanner {
public:
    PathScanner(const Graph& g, const PassageTimeField& pt, const CheckWindows& win, double c_out)
        : g_(g), pt_(pt), win_(win), c_out_(c_out), on_path_(g.vertex_count(), 0) {}

    // Exhaustive enumeration from w with pruning once no extension can be fast
    // enough. Returns false when `budget` prefixes were exceeded.
    bool enumerate(VertexId w, std::int64_t& budget, Path& witness, bool& incomplete) {
        path_.assign(1, w);
        on_path_[w] = 1;
        const bool ok = dfs(0.0, budget, witness, incomplete);
        on_path_[w] = 0;
        return ok;
    }

    // One random self-avoiding walk from w, stopped at the frontier.
    bool sample(VertexId w, Rng& rng, Path& witness) {
        Path walk{w};
        on_path_[w] = 1;
        double T = 0.0;
        bool bad = false;
        std::vector<VertexId> options;
        while (static_cast<int>(walk.size()) - 1 < win_.path_high && !g_.is_frontier(walk.back())) {
            options.clear();
            for (VertexId u : g_.neighbors(walk.back()))
                if (!on_path_[u]) options.push_back(u);
            if (options.empty()) break;
            const VertexId next = options[rng.below(options.size())];
            T += pt_(walk.back(), next);
            walk.push_back(next);
            on_path_[next] = 1;
            const int L = static_cast<int>(walk.size()) - 1;
            if (L >= win_.path_low && T < L / c_out_) {
                witness = walk;
                bad = true;
                break;
            }
        }
        for (VertexId v : walk) on_path_[v] = 0;
        return !bad;
    }

private:
    bool dfs(double T, std::int64_t& budget, Path& witness, bool& incomplete) {
        if (--budget < 0) return false;
        const int L = static_cast<int>(path_.size()) - 1;
        if (L >= win_.path_low && T < L / c_out_) {
            if (witness.empty()) witness = path_;
            return true;
        }
        if (L == win_.path_high) return true;
        // T only grows along extensions, so no extension can violate.
        if (T >= win_.path_high / c_out_) return true;
        const VertexId v = path_.back();
        if (g_.is_frontier(v)) incomplete = true;
        for (VertexId u : g_.neighbors(v)) {
            if (on_path_[u]) continue;
            path_.push_back(u);
            on_path_[u] = 1;
            const bool ok = dfs(T + pt_(v, u), budget, witness, incomplete);
            on_path_[u] = 0;
            path_.pop_back();
            if (!ok) return false;
            if (!witness.empty()) return true;
        }
        return true;
    }

    const Graph& g_;
    const PassageTimeField& pt_;
    const CheckWindows& win_;
    double c_out_;
    std::vector<char> on_path_;
    Path path_;
};

// Distinct indices sampled uniformly from [0, n).
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t m, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    m = std::min(m, n);
    for (std::size_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
    idx.resize(m);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::int64_t checked_power(int base, int exponent) {
    std::int64_t out = 1;
    for (int i = 0; i < exponent; ++i) {
        if (out > std::numeric_limits<std::int64_t>::max() / base)
            throw SizeError("ball-chain constant overflows 64 bits");
        out *= base;
    }
    return out;
}

int as_radius(double r) {
    if (!(r < static_cast<double>(kFar))) throw SizeError("ball-chain radius does not fit in an int");
    return static_cast<int>(std::floor(r));
}

bool reaches_frontier(const Graph& g, const std::vector<int>& dist, std::int64_t radius) {
    for (VertexId f : g.frontier())
        if (dist[f] >= 0 && dist[f] < radius) return true;
    return false;
}

// Passage sums from `center` to every vertex of the ball along the geodesic
// that steps to the lowest-id closer vertex at each move, read from the far
// end. Returns the maximum.
double max_ball_sum(const Graph& g, VertexId center, int radius, const PassageTimeField& pt) {
    const auto dist = hop_distances(g, {center}, radius);
    std::vector<std::vector<VertexId>> layers(radius + 1);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (dist[v] >= 0) layers[dist[v]].push_back(v);
    std::vector<double> sum(g.vertex_count(), 0.0);
    double best = 0.0;
    for (int d = 1; d <= radius; ++d)
        for (VertexId v : layers[d]) {
            for (VertexId u : g.neighbors(v))  // sorted, so the first hit is the lowest id
                if (dist[u] == d - 1) {
                    sum[v] = sum[u] + pt(u, v);
                    break;
                }
            best = std::max(best, sum[v]);
        }
    return best;
}

double segment_sum(const Path& ray, std::size_t a, std::size_t b, const PassageTimeField& pt) {
    if (a > b) std::swap(a, b);
    double s = 0.0;
    for (std::size_t i = a; i < b; ++i) s += pt(ray[i], ray[i + 1]);
    return s;
}

}  // namespace

double scale_beta(double epsilon, double alpha, double c_in, double c_out, double lambda) {
    return (6.0 + epsilon) * (1.0 + alpha) * alpha * alpha * (c_out / c_in) * std::max(lambda, 1.0 / lambda);
}

int scale_eta(double epsilon, double c_in, double c_out, double lambda) {
    return static_cast<int>(std::ceil(epsilon + 4.0 * std::max(1.0, lambda) * c_out * c_out / (c_in * c_in) + 1.0));
}

ScaleParams derive_scale_params(int r, double epsilon, double c_in, double c_out, double lambda,
                                double alpha) {
    if (r < 1) throw ParameterError("r must be a positive integer");
    if (!(epsilon >= 0.0) || !(c_in > 0.0) || !(c_out > 0.0) || !(lambda > 0.0) || !(alpha > 0.0) ||
        !std::isfinite(c_out) || !std::isfinite(lambda) || !std::isfinite(alpha))
        throw ParameterError("scale parameters must be positive and finite");
    ScaleParams p;
    p.r = r;
    p.epsilon = epsilon;
    p.c_in = c_in;
    p.c_out = c_out;
    p.lambda = lambda;
    p.alpha = alpha;
    p.beta = scale_beta(epsilon, alpha, c_in, c_out, lambda);
    p.eta = scale_eta(epsilon, c_in, c_out, lambda);
    p.range_ok = c_in < 1.0 && c_out > 1.0 && epsilon > 0.0 && epsilon < 1.0;
    p.c_out_ok = c_out > alpha * std::max(lambda, 1.0 / lambda);
    const double eps_cap = std::pow(2.0 * alpha * c_out * std::max(1.0, lambda), -2.0);
    p.epsilon_ok = epsilon < std::min(1.0 / alpha, eps_cap);
    return p;
}

CheckWindows check_windows(const ScaleParams& p, int scale) {
    if (scale < 1) throw ArgumentError("scale must be at least 1");
    const double jr = static_cast<double>(scale) * p.r;
    const double root_eps = std::sqrt(p.epsilon);
    CheckWindows w;
    w.width = floor_int(p.epsilon * jr);
    w.t_low = ceil_int(root_eps * jr);
    w.t_high = floor_int(p.t_window * (p.c_out / (p.c_in * p.c_in)) * jr);
    w.path_low = std::max(1, ceil_int(root_eps * p.c_out * jr));
    w.path_high = floor_int(p.path_window * (p.c_out * p.c_out / (p.c_in * p.c_in)) * jr);
    if (scale == 1) w.seed_width = floor_int(p.epsilon * p.r + p.beta * p.r);
    return w;
}

CylinderVerdict check_good_cylinder(const Graph& g, const EmbeddedTree& emb, const SeedField& seeds,
                                    const PassageTimeField& pt, int x, int y, const ScaleParams& params,
                                    const CheckBudget& budget) {
    const int tree_size = static_cast<int>(emb.size());
    if (x < 0 || y < 0 || x >= tree_size || y >= tree_size) throw ArgumentError("tree vertex out of range");
    if (x == y) throw ArgumentError("cylinder endpoints must differ");

    CylinderVerdict out;
    out.x = x;
    out.y = y;
    out.scale = EmbeddedTree::tree_distance(x, y);
    out.gx = emb.image[x];
    out.gy = emb.image[y];
    const CheckWindows win = check_windows(params, out.scale);
    out.width = win.width;

    const Cylinder cyl = build_cylinder(g, out.gx, out.gy, win.width);
    if (cyl.contaminated)
        throw ContaminationError("cylinder between tree vertices " + std::to_string(x) + " and " +
                                 std::to_string(y) + " reaches the truncation");
    out.cylinder_size = static_cast<std::int64_t>(cyl.members.size());
    const auto& members = cyl.members.members();
    Rng rng(mix(budget.seed, static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y)));
    bool sandwich_incomplete = false;
    bool paths_incomplete = false;
    bool seeds_incomplete = false;

    // Condition (a).
    if (win.t_low <= win.t_high) {
        const std::int64_t t_count = win.t_high - win.t_low + 1;
        out.sandwich_total = out.cylinder_size * t_count;
        std::vector<std::size_t> chosen;
        if (out.sandwich_total <= budget.sandwich_pairs) {
            chosen = sample_indices(members.size(), members.size(), rng);
        } else {
            out.sandwich_exhaustive = false;
            const auto m = static_cast<std::size_t>(std::max<std::int64_t>(1, budget.sandwich_pairs / t_count));
            chosen = sample_indices(members.size(), m, rng);
        }
        BoundedBfs bfs(g);
        for (std::size_t i : chosen) {
            const int t = sandwich_violation(g, members[i], params, win, pt, bfs, sandwich_incomplete);
            out.sandwich_checked += t_count;
            if (t >= 0) {
                out.sandwich_ok = false;
                out.bad_w = members[i];
                out.bad_t = t;
                break;
            }
        }
    }

    // Condition (b).
    if (win.path_low <= win.path_high) {
        PathScanner scanner(g, pt, win, params.c_out);
        std::int64_t left = budget.paths;
        bool within_budget = true;
        for (VertexId w : members) {
            if (!scanner.enumerate(w, left, out.bad_path, paths_incomplete)) {
                within_budget = false;
                break;
            }
            if (!out.bad_path.empty()) break;
        }
        out.paths_checked = budget.paths - std::max<std::int64_t>(left, 0);
        if (!within_budget) {
            out.paths_exhaustive = false;
            paths_incomplete = false;
            out.bad_path.clear();
            out.paths_checked = 0;
            for (std::int64_t s = 0; s < budget.path_samples; ++s) {
                ++out.paths_checked;
                if (!scanner.sample(members[rng.below(members.size())], rng, out.bad_path)) break;
            }
        }
        out.path_time_ok = out.bad_path.empty();
    }

    if (out.scale == 1) {
        out.seed_checked = true;
        const Cylinder wide = build_cylinder(g, out.gx, out.gy, win.seed_width);
        for (VertexId v : wide.members)
            if (seeds.is_seed(v, g.origin())) {
                out.seed_free_ok = false;
                out.seed_found = v;
                break;
            }
        // Forced seeds live inside the graph, and mu = 0 places none anywhere.
        const bool exact = !wide.contaminated || seeds.is_forced() || seeds.mu() == 0.0;
        if (out.seed_free_ok && !exact) seeds_incomplete = true;
    }

    if (sandwich_incomplete && out.sandwich_ok) out.undecided.push_back("sandwich");
    if (paths_incomplete && out.path_time_ok) out.undecided.push_back("path-time");
    if (seeds_incomplete) out.undecided.push_back("seed-free");
    out.good = out.sandwich_ok && out.path_time_ok && out.seed_free_ok;
    if (out.good && !out.undecided.empty())
        throw ContaminationError("the " + out.undecided.front() +
                                 " condition depends on vertices beyond the truncation");
    return out;
}

VertexSet prune_bad_subtrees(int tree_depth, const std::vector<BadCylinder>& bad, const ScaleParams& params) {
    if (tree_depth < 0) throw ArgumentError("tree depth must be non-negative");
    if (tree_depth > 24) throw SizeError("tree depth above 24");
    const std::int64_t size = (std::int64_t{1} << (tree_depth + 1)) - 1;
    std::vector<char> removed(static_cast<std::size_t>(size), 0);
    const double step = 3.0 * params.alpha * params.alpha * params.eta;
    for (const auto& b : bad) {
        if (b.x < 0 || b.y < 0 || b.x >= size || b.y >= size) throw ArgumentError("tree vertex out of range");
        if (b.scale < 1) throw ArgumentError("bad cylinder scale must be at least 1");
        int x = b.x;
        int y = b.y;
        if (EmbeddedTree::generation(y) < EmbeddedTree::generation(x) ||
            (EmbeddedTree::generation(y) == EmbeddedTree::generation(x) && y < x))
            std::swap(x, y);
        const int i = EmbeddedTree::generation(x);
        const int n = std::max(0, i - static_cast<int>(std::ceil(step * b.scale)));
        const int u = EmbeddedTree::ancestor(x, n);
        if (removed[u]) continue;
        // Heap numbering: the descendants of u at depth g below it are a contiguous block.
        std::int64_t lo = u;
        std::int64_t hi = u;
        while (lo < size) {
            for (std::int64_t v = lo; v <= std::min(hi, size - 1); ++v) removed[v] = 1;
            lo = 2 * lo + 1;
            hi = 2 * hi + 2;
        }
    }
    return VertexSet::from_mask(removed);
}

VertexSet prune_bad_subtrees(const EmbeddedTree& emb, const std::vector<BadCylinder>& bad,
                             const ScaleParams& params) {
    return prune_bad_subtrees(emb.depth, bad, params);
}

GoodPathResult find_good_path(int depth, const VertexSet& removed) {
    if (depth < 0 || depth > 30) throw ArgumentError("depth must lie in [0, 30]");
    GoodPathResult out;
    const std::int64_t limit = (std::int64_t{1} << (depth + 1)) - 1;

    // Leftmost DFS; a vertex is dead once both children are dead.
    std::vector<int> path{0};
    std::vector<int> next_child{0};
    if (!removed.contains(0)) {
        while (!path.empty()) {
            const int v = path.back();
            if (static_cast<int>(path.size()) - 1 == depth) {
                out.found = true;
                out.path = path;
                return out;
            }
            if (next_child.back() == 2) {
                path.pop_back();
                next_child.pop_back();
                continue;
            }
            const int c = 2 * v + 1 + next_child.back()++;
            if (!removed.contains(c)) {
                path.push_back(c);
                next_child.push_back(0);
            }
        }
    }
    // Shallowest removed vertex on every root path: removed vertices with no
    // removed ancestor. They form an antichain, so the cutset is minimal.
    std::vector<VertexId> cut;
    for (VertexId v : removed) {
        if (v >= limit) break;
        bool top = true;
        for (int a = v; a > 0 && top;) {
            a = EmbeddedTree::parent(a);
            if (removed.contains(a)) top = false;
        }
        if (top) cut.push_back(v);
    }
    out.cutset = VertexSet(std::move(cut));
    return out;
}

std::uint64_t count_minimal_cutsets(int k) {
    if (k < 1 || k > 30) throw ArgumentError("cutset size must lie in [1, 30]");
    unsigned __int128 c = 1;  // C_0
    for (int n = 1; n <= k - 1; ++n) {
        const unsigned __int128 next = c * static_cast<unsigned>(4 * n - 2);
        if (next % static_cast<unsigned>(n + 1) != 0) throw ConsistencyError("Catalan recurrence is not integral");
        c = next / static_cast<unsigned>(n + 1);
    }
    if (k >= 2 && c >= (static_cast<unsigned __int128>(1) << (2 * (k - 1))))
        throw ConsistencyError("Catalan number exceeds 4^n");
    return static_cast<std::uint64_t>(c);
}

std::vector<int> nearest_tree_vertex_cells(const Graph& g, const EmbeddedTree& emb,
                                           const std::vector<int>& tree_path, int width) {
    if (width < 0) throw ArgumentError("width must be non-negative");
    if (tree_path.empty()) throw ArgumentError("tree path is empty");
    std::vector<VertexId> route;
    for (int t : tree_path) {
        if (t < 0 || t >= static_cast<int>(emb.size())) throw ArgumentError("tree vertex out of range");
        route.push_back(emb.image[t]);
        if (t > 0 && std::find(tree_path.begin(), tree_path.end(), EmbeddedTree::parent(t)) != tree_path.end())
            route.insert(route.end(), emb.edge_path[t].begin(), emb.edge_path[t].end());
    }
    const auto near_route = hop_distances(g, VertexSet(route).members(), width);

    // Layered BFS from every image; a vertex takes the lowest owner id among
    // its neighbours in the previous layer.
    const int n = g.vertex_count();
    std::vector<int> owner(n, -1);
    std::vector<int> dist(n, -1);
    std::vector<int> sorted = tree_path;
    std::sort(sorted.begin(), sorted.end());
    std::vector<VertexId> layer;
    for (int t : sorted) {
        const VertexId v = emb.image[t];
        if (dist[v] < 0) {
            dist[v] = 0;
            owner[v] = t;
            layer.push_back(v);
        }
    }
    for (int d = 1; !layer.empty(); ++d) {
        std::vector<VertexId> next;
        for (VertexId u : layer)
            for (VertexId v : g.neighbors(u)) {
                if (dist[v] < 0) {
                    dist[v] = d;
                    owner[v] = owner[u];
                    next.push_back(v);
                } else if (dist[v] == d) {
                    owner[v] = std::min(owner[v], owner[u]);
                }
            }
        layer = std::move(next);
    }
    for (VertexId v = 0; v < n; ++v)
        if (near_route[v] < 0) owner[v] = -1;
    return owner;
}

std::int64_t ball_chain_radius(int R1, int k) {
    if (R1 < 2) throw ParameterError("R1 must be at least 2");
    if (k < 1) throw ArgumentError("ball index starts at 1");
    return k == 1 ? R1 : checked_power(R1, 2 * (k - 1));
}

std::int64_t ball_chain_budget(int R1, int j) {
    if (R1 < 2) throw ParameterError("R1 must be at least 2");
    if (j < 1) throw ArgumentError("budget index starts at 1");
    return checked_power(R1, 2 * j + 4);
}

BallChainPlan plan_ball_chain(const Graph& g, const EscapeRay& ray, const VertexSet& occupied, int K,
                              double c_out) {
    if (K < 1) throw ArgumentError("K must be at least 1");
    if (!(c_out > 0.0) || !std::isfinite(c_out)) throw ParameterError("c_out must be positive");
    if (ray.waypoints.empty()) throw ArgumentError("escape ray has no base vertex");

    BallChainPlan plan;
    plan.R1 = ray.R1;
    plan.K = K;
    plan.c_out = c_out;
    for (int k = 1; k <= K; ++k) {
        plan.radii.push_back(ball_chain_radius(ray.R1, k));
        plan.budgets.push_back(ball_chain_budget(ray.R1, k));
    }
    plan.base = ray.waypoints[0];

    // The ray from the base on, with the position of every waypoint.
    std::size_t start = 0;
    while (start < ray.path.size() && ray.path[start] != plan.base) ++start;
    if (start == ray.path.size()) throw ConsistencyError("escape ray path misses its base vertex");
    plan.ray.assign(ray.path.begin() + static_cast<std::ptrdiff_t>(start), ray.path.end());
    std::size_t pos = 0;
    for (VertexId w : ray.waypoints) {
        while (pos < plan.ray.size() && plan.ray[pos] != w) ++pos;
        if (pos == plan.ray.size()) throw ConsistencyError("escape ray path misses a waypoint");
        plan.waypoint_index.push_back(pos);
    }

    const int built = std::min(K, ray.steps());
    double budget_sum = 0.0;
    for (int k = 1; k <= built; ++k) {
        BallChainLevel lv;
        lv.k = k;
        lv.center = ray.waypoints[k];
        lv.radius = plan.radii[k - 1];
        const int radius = as_radius(static_cast<double>(lv.radius));
        const auto dist = hop_distances(g, {lv.center}, radius);
        std::vector<VertexId> members;
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            if (dist[v] >= 0) members.push_back(v);
        lv.ball = VertexSet(std::move(members));
        lv.ball_truncated = reaches_frontier(g, dist, lv.radius);
        plan.levels.push_back(std::move(lv));
    }
    for (int k = 1; k < built; ++k) {
        BallChainLevel& lv = plan.levels[k - 1];
        const BallChainLevel& nx = plan.levels[k];
        budget_sum += static_cast<double>(plan.budgets[k - 1]);
        lv.has_target = true;
        std::vector<VertexId> target(nx.ball.begin(), nx.ball.end());
        for (std::size_t i = plan.waypoint_index[k]; i <= plan.waypoint_index[k + 1]; ++i)
            if (!lv.ball.contains(plan.ray[i])) target.push_back(plan.ray[i]);
        lv.target = VertexSet(std::move(target));

        const auto blocked = lv.ball.mask(g.vertex_count());
        std::vector<VertexId> sources;
        for (VertexId v : lv.target)
            if (!blocked[v]) sources.push_back(v);
        lv.enlargement_radius = as_radius(c_out * budget_sum);
        const auto dist = hop_distances(g, sources, static_cast<int>(lv.enlargement_radius), &blocked);
        std::vector<char> in_ep(g.vertex_count(), 0);
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            if (dist[v] >= 0) in_ep[v] = 1;
        lv.enlargement = VertexSet::from_mask(in_ep);
        lv.enlargement_truncated = reaches_frontier(g, dist, lv.enlargement_radius);
        std::vector<VertexId> boundary;
        for (VertexId v : lv.enlargement) {
            bool edge = g.is_frontier(v);
            for (VertexId u : g.neighbors(v))
                if (!blocked[u] && !in_ep[u]) edge = true;
            if (edge) boundary.push_back(v);
        }
        lv.enlargement_boundary = VertexSet(std::move(boundary));

        const auto from_ep = hop_distances(g, lv.enlargement.members(), kFar, &blocked);
        lv.separation = kFar;
        for (VertexId v : occupied)
            if (!blocked[v] && from_ep[v] >= 0) lv.separation = std::min(lv.separation, from_ep[v]);
        if (lv.separation == 0) plan.separated = false;
    }

    plan.usable = 0;
    for (int k = 1; k <= built; ++k) {
        const auto& lv = plan.levels[k - 1];
        if (lv.ball_truncated) break;
        plan.usable = k;
        if (lv.has_target && lv.enlargement_truncated) break;
    }
    plan.truncated = plan.usable < K;
    return plan;
}

BallChainEvents check_ball_chain_events(const Graph& g, const Trace& trace, const BallChainPlan& plan,
                                        double lambda, const PassageTimeField& pt) {
    if (trace.vertex_count() != g.vertex_count()) throw ConsistencyError("trace does not belong to this graph");
    if (trace.pt_seed != pt.seed()) throw ConsistencyError("trace was recorded on a different passage-time field");
    if (trace.lambda != lambda) throw ConsistencyError("trace was recorded with a different lambda");
    if (plan.truncated) throw ContaminationError("ball-chain plan is truncated");

    auto inside = [&](int k, std::size_t i) { return plan.levels[k - 1].ball.contains(plan.ray[i]); };
    auto last_inside = [&](int k) {
        std::size_t last = plan.waypoint_index[k];
        for (std::size_t i = 0; i < plan.ray.size(); ++i)
            if (inside(k, i)) last = i;
        return last;
    };

    BallChainEvents ev;
    const double inv = 1.0 / lambda;
    double budget_sum = 0.0;
    for (int k = 2; k <= plan.K; ++k) {
        const auto& prev = plan.levels[k - 2];
        const auto& cur = plan.levels[k - 1];
        budget_sum += static_cast<double>(plan.budgets[k - 2]);
        double f1 = 0.0;
        if (k == 2) {
            std::size_t first = plan.waypoint_index[1];
            for (std::size_t i = 0; i < plan.waypoint_index[1]; ++i)
                if (inside(1, i)) {
                    first = i;
                    break;
                }
            f1 = std::max(1.0, inv) * segment_sum(plan.ray, 0, first, pt) +
                 inv * segment_sum(plan.ray, first, plan.waypoint_index[2], pt) +
                 inv * max_ball_sum(g, prev.center, static_cast<int>(prev.radius), pt) +
                 inv * max_ball_sum(g, cur.center, static_cast<int>(cur.radius), pt);
        } else {
            f1 = inv * segment_sum(plan.ray, last_inside(k - 1), last_inside(k), pt) +
                 inv * max_ball_sum(g, cur.center, static_cast<int>(cur.radius), pt);
        }

        // Rate-one passage from the target to the enlargement boundary, with
        // the previous ball removed. Paths reach the boundary before leaving EP.
        const auto in_ep = prev.enlargement.mask(g.vertex_count());
        const auto on_boundary = prev.enlargement_boundary.mask(g.vertex_count());
        std::vector<double> time(g.vertex_count(), kInfinity);
        using Item = std::pair<double, VertexId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        for (VertexId v : prev.target)
            if (in_ep[v]) {
                time[v] = 0.0;
                queue.push({0.0, v});
            }
        double f2 = kInfinity;
        while (!queue.empty()) {
            const auto [t, u] = queue.top();
            queue.pop();
            if (t > time[u]) continue;
            if (on_boundary[u]) {
                f2 = t;
                break;
            }
            for (VertexId v : g.neighbors(u)) {
                if (!in_ep[v]) continue;
                const double cand = t + pt(u, v);
                if (cand < time[v]) {
                    time[v] = cand;
                    queue.push({cand, v});
                }
            }
        }

        const bool f1_ok = static_cast<double>(plan.budgets[k - 2]) >= f1;
        const bool f2_ok = f2 > budget_sum;
        ev.k.push_back(k);
        ev.f1.push_back(f1_ok);
        ev.f2.push_back(f2_ok);
        ev.e.push_back(f1_ok && f2_ok);
        ev.f1_sum.push_back(f1);
        ev.f2_time.push_back(f2);
        if (!(f1_ok && f2_ok) && ev.first_failure == 0) ev.first_failure = k;
    }
    return ev;
}

}  // namespace fpphe
