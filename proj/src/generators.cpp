#include "fpphe/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>

#include "fpphe/errors.hpp"

namespace fpphe {

namespace {

void check_budget(std::int64_t count, std::int64_t budget, const char* what) {
    if (count > budget)
        throw SizeError(std::string(what) + " exceeds vertex budget (" + std::to_string(budget) +
                        ")");
}

void sort_unique(std::vector<Edge>& edges) {
    for (auto& e : edges)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

// 3x3 real matrices acting on the root space of a rank-3 Coxeter group.
using Mat3 = std::array<double, 9>;

Mat3 multiply(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[i * 3 + k] * b[k * 3 + j];
            c[i * 3 + j] = s;
        }
    return c;
}

constexpr Mat3 kIdentity{1, 0, 0, 0, 1, 0, 0, 0, 1};

double column_sum(const Mat3& m, int col) { return m[col] + m[3 + col] + m[6 + col]; }

// The (2,p,q) triangle reflection group. Generator 0 reflects in the
// perpendicular bisector of a tiling edge, generator 1 in the line through a
// tiling vertex and a face center, generator 2 in the tiling edge itself.
// Generators 1 and 2 fix the base vertex.
class TriangleGroup {
public:
    TriangleGroup(int p, int q) {
        const double pi = std::numbers::pi;
        gram_ = {1.0, -std::cos(pi / p), 0.0, -std::cos(pi / p), 1.0, -std::cos(pi / q),
                 0.0, -std::cos(pi / q), 1.0};
        for (int s = 0; s < 3; ++s) {
            Mat3 m = kIdentity;
            for (int c = 0; c < 3; ++c) m[s * 3 + c] -= 2.0 * gram_[s * 3 + c];
            refl_[s] = m;
        }
    }

    const Mat3& reflection(int s) const { return refl_[s]; }

    // m * reflection(s), touching only column s.
    void right_reflect(Mat3& m, int s) const {
        for (int i = 0; i < 3; ++i) {
            const double a = m[i * 3 + s];
            for (int c = 0; c < 3; ++c) m[i * 3 + c] -= 2.0 * a * gram_[s * 3 + c];
        }
    }

    // reflection(s) * m, touching only row s.
    void left_reflect(Mat3& m, int s) const {
        for (int c = 0; c < 3; ++c) {
            double a = 0.0;
            for (int k = 0; k < 3; ++k) a += gram_[s * 3 + k] * m[k * 3 + c];
            m[s * 3 + c] -= 2.0 * a;
        }
    }
    const Mat3& gram() const { return gram_; }

    double form(const std::array<double, 3>& u, const std::array<double, 3>& v) const {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += u[i] * gram_[i * 3 + j] * v[j];
        return s;
    }

private:
    Mat3 gram_{};
    std::array<Mat3, 3> refl_{};
};

// A group element stored with its inverse so that both left and right
// descents can be read off as signs of roots.
struct Element {
    Mat3 m = kIdentity;
    Mat3 inv = kIdentity;
};

// Replaces g by the minimal-length representative of the coset g<s1,s2>.
void reduce_to_coset_rep(const TriangleGroup& w, Element& g) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int s = 1; s <= 2; ++s) {
            if (column_sum(g.m, s) < 0.0) {
                w.right_reflect(g.m, s);
                w.left_reflect(g.inv, s);
                changed = true;
            }
        }
    }
}

// Lexicographically first reduced word of g: repeatedly strip the smallest
// left descent.
std::string normal_form(const TriangleGroup& w, const Element& g) {
    std::string word;
    Mat3 inv = g.inv;
    for (;;) {
        int descent = -1;
        for (int s = 0; s < 3; ++s)
            if (column_sum(inv, s) < 0.0) {
                descent = s;
                break;
            }
        if (descent < 0) break;
        word.push_back(static_cast<char>('0' + descent));
        w.right_reflect(inv, descent);
    }
    return word;
}

}  // namespace

Graph generate_regular_tree(int branching, int depth, std::int64_t vertex_budget) {
    if (branching < 2) throw ParameterError("branching must be at least 2");
    if (depth < 0) throw ParameterError("depth must be non-negative");
    std::int64_t count = 1;
    std::int64_t level = 1;
    for (int k = 1; k <= depth; ++k) {
        level *= branching;
        count += level;
        check_budget(count, vertex_budget, "regular tree");
    }
    const auto n = static_cast<VertexId>(count);
    std::vector<Edge> edges;
    edges.reserve(n > 0 ? n - 1 : 0);
    for (VertexId v = 1; v < n; ++v) edges.emplace_back((v - 1) / branching, v);
    const auto first_leaf = static_cast<VertexId>(count - level);
    std::vector<VertexId> frontier;
    for (VertexId v = first_leaf; v < n; ++v) frontier.push_back(v);
    GraphFamily fam{"regular_tree", {{"branching", branching}, {"depth", depth}}};
    return Graph::from_edges(n, edges, 0, std::move(fam), {}, std::move(frontier));
}

Graph generate_tessellation(int p, int q, int layers, std::int64_t vertex_budget) {
    if (p < 3 || q < 3 || (p - 2) * (q - 2) <= 4)
        throw ParameterError("{" + std::to_string(p) + "," + std::to_string(q) +
                             "} is not a hyperbolic tiling");
    if (layers < 0) throw ParameterError("layers must be non-negative");

    const TriangleGroup w(p, q);

    // Neighbours of the base vertex are rho^k a V with rho = s1 s2 the rotation
    // by 2pi/q about V and a = s0.
    const Mat3 rho = multiply(w.reflection(1), w.reflection(2));
    const Mat3 rho_inv = multiply(w.reflection(2), w.reflection(1));
    std::vector<Element> steps(q);
    Mat3 rot = kIdentity;
    Mat3 rot_inv = kIdentity;
    for (int k = 0; k < q; ++k) {
        steps[k].m = multiply(rot, w.reflection(0));
        steps[k].inv = multiply(w.reflection(0), rot_inv);
        rot = multiply(rot, rho);
        rot_inv = multiply(rho_inv, rot_inv);
    }

    std::vector<Element> elements{Element{}};
    std::vector<int> layer{0};
    std::unordered_map<std::string, VertexId> index{{std::string(), 0}};
    std::vector<Edge> edges;
    std::vector<VertexId> frontier;

    for (VertexId u = 0; u < static_cast<VertexId>(elements.size()); ++u) {
        bool missing = false;
        for (int k = 0; k < q; ++k) {
            Element cand{multiply(elements[u].m, steps[k].m),
                         multiply(steps[k].inv, elements[u].inv)};
            reduce_to_coset_rep(w, cand);
            const std::string key = normal_form(w, cand);
            auto it = index.find(key);
            if (it == index.end()) {
                if (layer[u] == layers) {
                    missing = true;
                    continue;
                }
                const auto v = static_cast<VertexId>(elements.size());
                check_budget(static_cast<std::int64_t>(v) + 1, vertex_budget, "tessellation");
                index.emplace(key, v);
                elements.push_back(cand);
                layer.push_back(layer[u] + 1);
                edges.emplace_back(u, v);
            } else if (it->second != u) {
                edges.emplace_back(u, it->second);
            }
        }
        if (missing) frontier.push_back(u);
    }
    sort_unique(edges);

    // Hyperboloid coordinates in a B-orthonormal frame centered at the base
    // vertex, then projected to the Poincare disk.
    const Mat3& b = w.gram();
    const double det = b[0] * (b[4] * b[8] - b[5] * b[7]) - b[1] * (b[3] * b[8] - b[5] * b[6]) +
                       b[2] * (b[3] * b[7] - b[4] * b[6]);
    std::array<double, 3> base{(b[4] * b[8] - b[5] * b[7]) / det,
                               -(b[3] * b[8] - b[5] * b[6]) / det,
                               (b[3] * b[7] - b[4] * b[6]) / det};
    const double norm = std::sqrt(-w.form(base, base));
    for (double& c : base) c /= norm;
    const std::array<double, 3> e1{0.0, 1.0, 0.0};
    std::array<double, 3> e2{0.0, 0.0, 1.0};
    const double proj = w.form(e2, e1);
    for (int i = 0; i < 3; ++i) e2[i] -= proj * e1[i];
    const double e2n = std::sqrt(w.form(e2, e2));
    for (double& c : e2) c /= e2n;

    std::vector<Point2> layout(elements.size());
    for (std::size_t v = 0; v < elements.size(); ++v) {
        const Mat3& m = elements[v].m;
        std::array<double, 3> pt{};
        for (int i = 0; i < 3; ++i)
            pt[i] = m[i * 3] * base[0] + m[i * 3 + 1] * base[1] + m[i * 3 + 2] * base[2];
        const double t = -w.form(pt, base);
        layout[v] = {w.form(pt, e1) / (1.0 + t), w.form(pt, e2) / (1.0 + t)};
    }

    GraphFamily fam{"tessellation", {{"p", p}, {"q", q}, {"layers", layers}}};
    return Graph::from_edges(static_cast<VertexId>(elements.size()), edges, 0, std::move(fam),
                             std::move(layout), std::move(frontier));
}

namespace {

struct LatticeBfs {
    std::vector<std::array<int, 3>> coords;
    std::vector<Edge> edges;
    std::vector<VertexId> frontier;
};

LatticeBfs lattice_bfs(int d, int radius) {
    const int side = 2 * radius + 1;
    std::int64_t total = 1;
    for (int i = 0; i < d; ++i) total *= side;
    auto flat = [&](const std::array<int, 3>& c) {
        std::int64_t idx = 0;
        for (int i = d - 1; i >= 0; --i) idx = idx * side + (c[i] + radius);
        return idx;
    };
    std::vector<VertexId> id(total, kNoVertex);
    LatticeBfs out;
    out.coords.reserve(total);
    out.coords.push_back({0, 0, 0});
    id[flat({0, 0, 0})] = 0;
    for (std::size_t head = 0; head < out.coords.size(); ++head) {
        const auto c = out.coords[head];
        const auto u = static_cast<VertexId>(head);
        bool boundary = false;
        for (int axis = 0; axis < d; ++axis) {
            for (int sign : {+1, -1}) {
                auto nc = c;
                nc[axis] += sign;
                if (nc[axis] < -radius || nc[axis] > radius) {
                    boundary = true;
                    continue;
                }
                VertexId& slot = id[flat(nc)];
                if (slot == kNoVertex) {
                    slot = static_cast<VertexId>(out.coords.size());
                    out.coords.push_back(nc);
                }
                if (u < slot) out.edges.emplace_back(u, slot);
            }
        }
        if (boundary) out.frontier.push_back(u);
    }
    return out;
}

}  // namespace

Graph generate_lattice(int d, int radius, std::int64_t vertex_budget) {
    if (d < 1 || d > 3) throw ParameterError("lattice dimension must be 1, 2 or 3");
    if (radius < 0) throw ParameterError("radius must be non-negative");
    std::int64_t total = 1;
    for (int i = 0; i < d; ++i) {
        total *= 2 * static_cast<std::int64_t>(radius) + 1;
        check_budget(total, vertex_budget, "lattice box");
    }
    auto bfs = lattice_bfs(d, radius);
    std::vector<Point2> layout;
    if (d <= 2) {
        layout.reserve(bfs.coords.size());
        for (const auto& c : bfs.coords) layout.push_back({double(c[0]), double(c[1])});
    }
    GraphFamily fam{"lattice", {{"d", d}, {"radius", radius}}};
    return Graph::from_edges(static_cast<VertexId>(bfs.coords.size()), bfs.edges, 0,
                             std::move(fam), std::move(layout), std::move(bfs.frontier));
}

std::vector<std::array<int, 3>> lattice_coordinates(const Graph& g) {
    const auto& fam = g.family();
    if (fam.name != "lattice") throw ArgumentError("graph is not a lattice box");
    return lattice_bfs(fam.params.at("d").get<int>(), fam.params.at("radius").get<int>()).coords;
}

VertexId lattice_vertex(const Graph& g, std::array<int, 3> coords) {
    const auto all = lattice_coordinates(g);
    for (std::size_t v = 0; v < all.size(); ++v)
        if (all[v] == coords) return static_cast<VertexId>(v);
    throw ArgumentError("coordinates outside the lattice box");
}

Graph generate_free_product(const std::vector<int>& factor_sizes, int radius,
                            std::int64_t vertex_budget) {
    if (factor_sizes.size() < 2)
        throw ParameterError("free product needs at least two factors");
    for (int n : factor_sizes)
        if (n < 2) throw ParameterError("every factor must have order at least 2");
    if (radius < 0) throw ParameterError("radius must be non-negative");

    // Elements are reduced words of syllables (factor, exponent) with
    // consecutive syllables in distinct factors.
    using Word = std::vector<std::pair<int, int>>;
    std::vector<Word> words{Word{}};
    std::vector<int> length{0};
    std::map<Word, VertexId> index{{Word{}, 0}};
    std::vector<Edge> edges;
    std::vector<VertexId> frontier;

    for (VertexId u = 0; u < static_cast<VertexId>(words.size()); ++u) {
        bool missing = false;
        for (int f = 0; f < static_cast<int>(factor_sizes.size()); ++f) {
            const int n = factor_sizes[f];
            for (int e = 1; e < n; ++e) {
                Word next = words[u];
                if (!next.empty() && next.back().first == f) {
                    const int ex = (next.back().second + e) % n;
                    if (ex == 0)
                        next.pop_back();
                    else
                        next.back().second = ex;
                } else {
                    next.emplace_back(f, e);
                }
                auto it = index.find(next);
                if (it == index.end()) {
                    if (length[u] == radius) {
                        missing = true;
                        continue;
                    }
                    const auto v = static_cast<VertexId>(words.size());
                    check_budget(static_cast<std::int64_t>(v) + 1, vertex_budget,
                                 "free product ball");
                    index.emplace(next, v);
                    length.push_back(static_cast<int>(next.size()));
                    words.push_back(std::move(next));
                    edges.emplace_back(u, v);
                } else if (it->second != u) {
                    edges.emplace_back(u, it->second);
                }
            }
        }
        if (missing) frontier.push_back(u);
    }
    sort_unique(edges);
    GraphFamily fam{"free_product", {{"factors", factor_sizes}, {"radius", radius}}};
    return Graph::from_edges(static_cast<VertexId>(words.size()), edges, 0, std::move(fam), {},
                             std::move(frontier));
}

}  // namespace fpphe
