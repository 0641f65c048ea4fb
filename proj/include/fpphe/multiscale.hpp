#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpphe/fpp.hpp"
#include "fpphe/geometry.hpp"
#include "fpphe/graph.hpp"

namespace fpphe {

struct ScaleParams {
    int r = 2;
    double epsilon = 0.0;
    double c_in = 0.5;
    double c_out = 2.0;
    double lambda = 1.0;
    double alpha = 1.0;

    double beta = 0.0;
    int eta = 0;

    // Upper ends of the time and path-length windows, as multiples of
    // c_out/c_in^2 * jr and c_out^2/c_in^2 * jr.
    double t_window = 4.0;
    double path_window = 4.0;

    bool range_ok = false;     // 0 < c_in < 1 < c_out
    bool c_out_ok = false;     // c_out > alpha * max(lambda, 1/lambda)
    bool epsilon_ok = false;   // epsilon < min(1/alpha, (2 alpha c_out max(1,lambda))^-2)
    bool strict_ok() const { return range_ok && c_out_ok && epsilon_ok; }

    bool operator==(const ScaleParams&) const = default;
};

double scale_beta(double epsilon, double alpha, double c_in, double c_out, double lambda);
int scale_eta(double epsilon, double c_in, double c_out, double lambda);

// Throws ParameterError for non-positive inputs; constraint violations are
// reported through the *_ok flags only.
ScaleParams derive_scale_params(int r, double epsilon, double c_in, double c_out, double lambda,
                                double alpha);

struct CheckBudget {
    std::int64_t sandwich_pairs = 20'000;  // (w, t) pairs checked exhaustively up to this count
    std::int64_t paths = 10'000;           // self-avoiding paths enumerated exhaustively up to this count
    std::int64_t path_samples = 2'000;     // random paths when enumeration is over budget
    std::uint64_t seed = 0;
};

struct CylinderVerdict {
    int x = 0;
    int y = 0;
    int scale = 0;
    VertexId gx = kNoVertex;
    VertexId gy = kNoVertex;
    int width = 0;
    std::int64_t cylinder_size = 0;

    bool sandwich_ok = true;
    bool path_time_ok = true;
    bool seed_free_ok = true;
    bool seed_checked = false;  // scale 1 only
    bool good = true;

    bool sandwich_exhaustive = true;
    bool paths_exhaustive = true;
    std::int64_t sandwich_checked = 0;
    std::int64_t sandwich_total = 0;
    std::int64_t paths_checked = 0;

    // First violation found, if any.
    VertexId bad_w = kNoVertex;
    int bad_t = -1;
    Path bad_path;
    VertexId seed_found = kNoVertex;
    // Sub-checks left undecided by the truncation; only possible when bad.
    std::vector<std::string> undecided;

    bool exhaustive() const { return sandwich_exhaustive && paths_exhaustive; }
    bool operator==(const CylinderVerdict&) const = default;
};

// Integer windows used by the cylinder check at scale j.
struct CheckWindows {
    int width = 0;
    int t_low = 0;
    int t_high = 0;
    int path_low = 1;
    int path_high = 0;
    int seed_width = 0;  // scale 1 only
};

CheckWindows check_windows(const ScaleParams& p, int scale);

// Decides whether the cylinder between tree vertices x and y is good at scale
// d_T(x,y). Violations are only reported when they persist in the untruncated
// graph; a good verdict that would depend on vertices beyond the truncation
// throws ContaminationError, as does a cylinder that reaches the truncation.
CylinderVerdict check_good_cylinder(const Graph& g, const EmbeddedTree& emb, const SeedField& seeds,
                                    const PassageTimeField& pt, int x, int y, const ScaleParams& params,
                                    const CheckBudget& budget = {});

struct BadCylinder {
    int x = 0;
    int y = 0;
    int scale = 0;
};

// Removes, for each bad cylinder, the subtree rooted at the ancestor of x at
// generation max(0, i - ceil(3 alpha^2 eta j)), where x is the shallower
// endpoint and i its generation. Returns tree vertices; tree_depth <= 24.
VertexSet prune_bad_subtrees(int tree_depth, const std::vector<BadCylinder>& bad, const ScaleParams& params);
VertexSet prune_bad_subtrees(const EmbeddedTree& emb, const std::vector<BadCylinder>& bad,
                             const ScaleParams& params);

struct GoodPathResult {
    bool found = false;
    std::vector<int> path;  // root to the requested generation
    VertexSet cutset;       // removed vertices separating the root from that generation

    bool operator==(const GoodPathResult&) const = default;
};

GoodPathResult find_good_path(int depth, const VertexSet& removed);

// Number of minimal cutsets of size k in the rooted binary tree, C_{k-1}.
std::uint64_t count_minimal_cutsets(int k);

// Owner of each vertex within `width` of the route of a tree path: the
// tree vertex whose image is nearest, lowest tree id on ties. -1 elsewhere.
std::vector<int> nearest_tree_vertex_cells(const Graph& g, const EmbeddedTree& emb,
                                           const std::vector<int>& tree_path, int width);

struct BallChainLevel {
    int k = 1;
    VertexId center = kNoVertex;
    std::int64_t radius = 0;
    VertexSet ball;
    bool ball_truncated = false;

    // Present when the next waypoint exists.
    bool has_target = false;
    VertexSet target;                // B^(k+1) plus the ray segment outside B^(k)
    std::int64_t enlargement_radius = 0;
    VertexSet enlargement;           // computed in G minus B^(k)
    VertexSet enlargement_boundary;
    bool enlargement_truncated = false;
    int separation = kFar;           // d_{G^(k)}(occupied, EP^(k)); kFar if disconnected

    bool operator==(const BallChainLevel&) const = default;
};

struct BallChainPlan {
    int R1 = 2;
    int K = 1;
    double c_out = 1.0;
    std::vector<std::int64_t> radii;    // R_1 .. R_K
    std::vector<std::int64_t> budgets;  // T_1 .. T_K
    VertexId base = kNoVertex;
    Path ray;                           // from the base vertex through every waypoint
    std::vector<std::size_t> waypoint_index;  // position of w^(k) in ray, k = 1..
    std::vector<BallChainLevel> levels;
    int usable = 0;                     // largest K' <= K with complete, untruncated data
    bool truncated = false;
    bool separated = true;

    bool operator==(const BallChainPlan&) const = default;
};

std::int64_t ball_chain_radius(int R1, int k);
std::int64_t ball_chain_budget(int R1, int j);

BallChainPlan plan_ball_chain(const Graph& g, const EscapeRay& ray, const VertexSet& occupied, int K,
                              double c_out);

struct BallChainEvents {
    std::vector<int> k;  // 2 .. K
    std::vector<bool> f1;
    std::vector<bool> f2;
    std::vector<bool> e;
    std::vector<double> f1_sum;   // the passage-time sum compared with T_{k-1}
    std::vector<double> f2_time;  // ball-avoiding time from P^(k-1) to the boundary of EP^(k-1)
    int first_failure = 0;        // 0 when every event holds
    bool all_hold() const { return first_failure == 0; }
    bool operator==(const BallChainEvents&) const = default;
};

// Evaluates the chain events on the realized passage times. Throws
// ConsistencyError if the trace was not produced with `pt` or `lambda`, and
// ContaminationError on a truncated plan.
BallChainEvents check_ball_chain_events(const Graph& g, const Trace& trace, const BallChainPlan& plan,
                                        double lambda, const PassageTimeField& pt);

}  // namespace fpphe
