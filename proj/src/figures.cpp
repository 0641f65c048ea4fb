#include "fpphe/figures.hpp"

#include <cstdio>

#include "fpphe/generators.hpp"
#include "fpphe/mdla.hpp"
#include "fpphe/rng.hpp"

namespace fpphe {

namespace {

std::string tag(const char* prefix, double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s_%g.svg", prefix, x);
    return buf;
}

}  // namespace

std::vector<FigurePanel> render_figures(const FigureRecipe& recipe) {
    std::vector<FigurePanel> panels;
    const std::uint64_t pt_seed = mix(recipe.seed, 1);
    const std::uint64_t seed_seed = mix(recipe.seed, 2);

    const Graph box = generate_lattice(2, recipe.fpphe_box);
    for (double mu : recipe.mus) {
        const Trace t = run_fpphe(box, recipe.lambda, mu, pt_seed, seed_seed, StopRule::radius(recipe.fpphe_stop_radius));
        const auto fpp1 = t.count(Occupier::Fpp1);
        const auto fppl = t.count(Occupier::FppLambda);
        panels.push_back({tag("fpphe_mu", mu), render_trace_svg(box, t, recipe.style),
                          {{"kind", "fpphe"},
                           {"lambda", recipe.lambda},
                           {"mu", mu},
                           {"box", recipe.fpphe_box},
                           {"stop", t.stop.to_string()},
                           {"fpp1", fpp1},
                           {"fppl", fppl},
                           {"dormant_seeds", t.count(Occupier::DormantSeed)},
                           {"fppl_fraction", static_cast<double>(fppl) / static_cast<double>(fpp1 + fppl)},
                           {"frontier_touched", t.frontier_touched}}});
    }

    const Graph mbox = generate_lattice(2, recipe.mdla_box);
    for (double rho : recipe.rhos) {
        const MdlaState s = run_mdla(mbox, rho, mix(recipe.seed, 3), MdlaStop{recipe.mdla_time});
        panels.push_back({tag("mdla_rho", rho), render_mdla_svg(mbox, s, recipe.style),
                          {{"kind", "mdla"},
                           {"rho", rho},
                           {"box", recipe.mdla_box},
                           {"time", s.time},
                           {"aggregate", s.aggregate_size()},
                           {"radius", s.aggregate_radius(mbox)},
                           {"frontier_touched", s.frontier_touched}}});
    }
    return panels;
}

}  // namespace fpphe
