#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpphe/render.hpp"

namespace fpphe {

// FPPHE panels share one passage-time seed and one seed-field seed, so their
// seed sets are nested in mu. Box sizes, stopping radius and horizon are
// choices, not given parameters.
struct FigureRecipe {
    std::uint64_t seed = 2024;
    int fpphe_box = 300;
    int fpphe_stop_radius = 280;
    double lambda = 0.7;
    std::vector<double> mus{0.027, 0.029, 0.030};
    int mdla_box = 80;
    double mdla_time = 2000.0;
    std::vector<double> rhos{0.1, 0.2, 0.3};
    RenderStyle style;
};

struct FigurePanel {
    std::string file;
    std::string svg;
    nlohmann::json summary;  // parameters and occupied counts
};

std::vector<FigurePanel> render_figures(const FigureRecipe& recipe);

}  // namespace fpphe
