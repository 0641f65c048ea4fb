#include "fpphe/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "fpphe/errors.hpp"

namespace fpphe {

namespace {

// Dark-to-light sequential ramp for FPP1 epochs.
constexpr const char* kEpochRamp[] = {"#2d1e6b", "#3b3b8f", "#3f5ca8", "#3c7cb8", "#3b9bbf",
                                      "#47b8b8", "#6ccfa2", "#a0df86", "#d3ea6f", "#f7f060"};
constexpr const char* kFppLambda = "#c8283a";
constexpr const char* kDormantSeed = "#111111";
constexpr const char* kUnreached = "#ececec";
constexpr const char* kParticle = "#8c8c8c";
constexpr const char* kAggregate = "#1f3f8f";

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    // Avoid "-0.00".
    return std::string(buf) == "-0.00" ? "0.00" : buf;
}

std::string epoch_colour(int band, int epochs) {
    constexpr int ramp = static_cast<int>(std::size(kEpochRamp));
    const int idx = epochs <= 1 ? 0 : static_cast<int>(std::lround(band * (ramp - 1.0) / (epochs - 1)));
    return kEpochRamp[std::clamp(idx, 0, ramp - 1)];
}

struct Frame {
    double min_x = 0, min_y = 0, scale = 1, pad = 0;
    double x(double v) const { return pad + (v - min_x) * scale; }
    double y(double v) const { return pad + (v - min_y) * scale; }
};

Frame frame_for(const std::vector<Point2>& layout, int size, double pad) {
    double lo_x = layout[0].x, hi_x = lo_x, lo_y = layout[0].y, hi_y = lo_y;
    for (const auto& p : layout) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
    return {lo_x, lo_y, (size - 2 * pad) / span, pad};
}

// One colour class per group keeps files small: shapes inherit the fill.
struct Groups {
    std::vector<std::string> order;
    std::map<std::string, std::pair<std::string, std::string>> body;  // class -> (fill, shapes)

    void declare(const std::string& cls, const std::string& fill) {
        if (body.emplace(cls, std::pair{fill, std::string()}).second) order.push_back(cls);
    }
    std::string& shapes(const std::string& cls) { return body.at(cls).second; }

    std::string svg() const {
        std::string out;
        for (const auto& cls : order) {
            const auto& [fill, shapes] = body.at(cls);
            if (shapes.empty()) continue;
            out += "<g class=\"" + cls + "\" fill=\"" + fill + "\">\n" + shapes + "</g>\n";
        }
        return out;
    }
};

std::string header(int size) {
    const std::string s = std::to_string(size);
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + s + "\" height=\"" + s + "\" viewBox=\"0 0 " + s +
           " " + s + "\">\n<rect width=\"" + s + "\" height=\"" + s + "\" fill=\"#ffffff\"/>\n";
}

bool is_grid(const Graph& g) {
    return g.family().name == "lattice" && g.family().params.value("d", 0) == 2 && g.has_layout();
}

// Merges horizontal runs of equal class into single rectangles.
void grid_rects(const Graph& g, const std::vector<int>& cls_of, const std::vector<std::string>& classes,
                Groups& groups, const Frame& f) {
    const auto& layout = g.layout();
    std::vector<VertexId> ids(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) ids[v] = v;
    std::sort(ids.begin(), ids.end(), [&](VertexId a, VertexId b) {
        return std::pair{layout[a].y, layout[a].x} < std::pair{layout[b].y, layout[b].x};
    });
    const double cell = f.scale;
    for (std::size_t i = 0; i < ids.size();) {
        const VertexId a = ids[i];
        std::size_t j = i + 1;
        while (j < ids.size() && cls_of[ids[j]] == cls_of[a] && layout[ids[j]].y == layout[a].y &&
               layout[ids[j]].x == layout[ids[j - 1]].x + 1)
            ++j;
        if (cls_of[a] >= 0) {
            const double x0 = f.x(layout[a].x) - cell / 2;
            const double y0 = f.y(layout[a].y) - cell / 2;
            groups.shapes(classes[cls_of[a]]) += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" +
                                                 fmt(cell * static_cast<double>(j - i)) + "\" height=\"" +
                                                 fmt(cell) + "\"/>\n";
        }
        i = j;
    }
}

void point_shapes(const Graph& g, const std::vector<int>& cls_of, const std::vector<std::string>& classes,
                  Groups& groups, const Frame& f, const RenderStyle& style, std::string& edges_svg) {
    const auto& layout = g.layout();
    const bool disk = g.family().name == "tessellation";
    const double base = style.vertex_radius > 0
                            ? style.vertex_radius
                            : std::clamp(style.size / (2.5 * std::sqrt(double(g.vertex_count()))), 0.6, 6.0);
    if (style.draw_edges && static_cast<std::int64_t>(g.edge_count()) <= style.max_edges) {
        edges_svg = "<g stroke=\"#bbbbbb\" stroke-width=\"" + fmt(std::max(0.2, base / 4)) + "\">\n";
        for (const auto& [u, v] : g.edges())
            edges_svg += "<line x1=\"" + fmt(f.x(layout[u].x)) + "\" y1=\"" + fmt(f.y(layout[u].y)) + "\" x2=\"" +
                         fmt(f.x(layout[v].x)) + "\" y2=\"" + fmt(f.y(layout[v].y)) + "\"/>\n";
        edges_svg += "</g>\n";
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (cls_of[v] < 0) continue;
        // Poincare-disk vertices shrink with the conformal factor.
        const double r2 = layout[v].x * layout[v].x + layout[v].y * layout[v].y;
        const double r = disk ? base * std::max(0.15, 1.0 - r2) : base;
        groups.shapes(classes[cls_of[v]]) += "<circle cx=\"" + fmt(f.x(layout[v].x)) + "\" cy=\"" +
                                             fmt(f.y(layout[v].y)) + "\" r=\"" + fmt(r) + "\"/>\n";
    }
}

std::string draw(const Graph& g, const std::vector<int>& cls_of, const std::vector<std::string>& classes,
                 const std::vector<std::string>& fills, const RenderStyle& style, const std::string& comment) {
    if (!g.has_layout())
        throw ArgumentError("graph has no layout coordinates; render a 2D lattice or a tessellation");
    if (style.size < 16) throw ParameterError("canvas size must be at least 16");
    Groups groups;
    for (std::size_t i = 0; i < classes.size(); ++i) groups.declare(classes[i], fills[i]);

    const bool grid = is_grid(g);
    Frame f = frame_for(g.layout(), style.size, grid ? 4.0 : 8.0);
    if (grid) {
        // Cells are one lattice unit wide, so widen the frame by half a cell.
        const double span = (style.size - 8.0) / f.scale + 1.0;
        f.scale = (style.size - 8.0) / span;
        f.pad = 4.0 + f.scale / 2;
    }
    std::string edges_svg;
    if (grid)
        grid_rects(g, cls_of, classes, groups, f);
    else
        point_shapes(g, cls_of, classes, groups, f, style, edges_svg);
    std::string out = header(style.size);
    out += "<!-- " + comment + " -->\n";
    out += edges_svg + groups.svg();
    const auto& o = g.layout()[g.origin()];
    out += "<circle class=\"origin\" cx=\"" + fmt(f.x(o.x)) + "\" cy=\"" + fmt(f.y(o.y)) +
           "\" r=\"8.00\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2.00\"/>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace

std::vector<int> fpp1_epoch_bands(const Trace& trace, int epochs) {
    if (epochs < 1) throw ParameterError("epochs must be positive");
    std::vector<int> band(trace.vertex_count(), -1);
    std::vector<VertexId> fpp1;
    for (VertexId v : trace.order)
        if (trace.state[v] == Occupier::Fpp1) fpp1.push_back(v);
    const auto n = static_cast<std::int64_t>(fpp1.size());
    for (std::int64_t i = 0; i < n; ++i) band[fpp1[i]] = static_cast<int>(i * epochs / n);
    return band;
}

std::string render_trace_svg(const Graph& g, const Trace& trace, const RenderStyle& style) {
    if (trace.vertex_count() != g.vertex_count()) throw ConsistencyError("trace does not belong to this graph");
    if (!g.has_layout())
        throw ArgumentError("graph has no layout coordinates; render a 2D lattice or a tessellation");
    const std::vector<int> band = fpp1_epoch_bands(trace, style.epochs);

    std::vector<std::string> classes{"unreached", "seed", "fppl"};
    std::vector<std::string> fills{kUnreached, kDormantSeed, kFppLambda};
    for (int k = 0; k < style.epochs; ++k) {
        classes.push_back("fpp1-epoch-" + std::to_string(k));
        fills.push_back(epoch_colour(k, style.epochs));
    }
    std::vector<int> cls_of(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        switch (trace.state[v]) {
            case Occupier::Unreached: cls_of[v] = 0; break;
            case Occupier::DormantSeed: cls_of[v] = 1; break;
            case Occupier::FppLambda: cls_of[v] = 2; break;
            case Occupier::Fpp1: cls_of[v] = 3 + band[v]; break;
        }
    }
    char comment[160];
    std::snprintf(comment, sizeof comment, "lambda=%.17g mu=%.17g fpp1=%lld fppl=%lld seeds=%lld", trace.lambda,
                  trace.mu, static_cast<long long>(trace.count(Occupier::Fpp1)),
                  static_cast<long long>(trace.count(Occupier::FppLambda)),
                  static_cast<long long>(trace.count(Occupier::DormantSeed)));
    return draw(g, cls_of, classes, fills, style, comment);
}

std::string render_mdla_svg(const Graph& lattice, const MdlaState& state, const RenderStyle& style) {
    if (static_cast<VertexId>(state.site.size()) != lattice.vertex_count())
        throw ConsistencyError("state does not belong to this lattice");
    if (!is_grid(lattice)) throw ArgumentError("MDLA renders need a 2D lattice box");
    std::vector<int> cls_of(lattice.vertex_count());
    // Empty sites stay background.
    for (VertexId v = 0; v < lattice.vertex_count(); ++v) cls_of[v] = static_cast<int>(state.site[v]) - 1;
    char comment[128];
    std::snprintf(comment, sizeof comment, "rho=%.17g time=%.17g aggregate=%lld", state.rho, state.time,
                  static_cast<long long>(state.aggregate_size()));
    return draw(lattice, cls_of, {"particle", "aggregate"}, {kParticle, kAggregate}, style,
                comment);
}

}  // namespace fpphe
