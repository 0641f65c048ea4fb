#pragma once

#include <cstdint>
#include <string>

#include "fpphe/fpp.hpp"
#include "fpphe/graph.hpp"
#include "fpphe/mdla.hpp"

namespace fpphe {

struct RenderStyle {
    int size = 800;            // canvas width and height in pixels
    int epochs = 10;           // FPP1 bands of equal occupied count
    bool draw_edges = true;    // point layouts only
    std::int64_t max_edges = 200'000;
    double vertex_radius = 0;  // 0: derived from the canvas and vertex count
};

// FPP1 vertices are coloured by epoch: the k-th band holds occupied ranks
// [k n / epochs, (k+1) n / epochs) in occupation order. FPPlambda, dormant
// seeds and unreached vertices get their own colours; the origin is ringed.
// 2D lattices are drawn as pixel rows, other layouts as dots.
std::string render_trace_svg(const Graph& g, const Trace& trace, const RenderStyle& style = {});

// Aggregate, free particles and empty sites of a 2D lattice MDLA state.
std::string render_mdla_svg(const Graph& lattice, const MdlaState& state, const RenderStyle& style = {});

// Band of each vertex under the epoch rule, -1 for non-FPP1 vertices.
std::vector<int> fpp1_epoch_bands(const Trace& trace, int epochs);

}  // namespace fpphe
