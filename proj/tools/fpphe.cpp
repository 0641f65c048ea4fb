// Command-line front end: graph generation, single runs, MDLA, multiscale
// analyses, sweeps and SVG rendering.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fpphe/errors.hpp"
#include "fpphe/figures.hpp"
#include "fpphe/generators.hpp"
#include "fpphe/geometry.hpp"
#include "fpphe/io.hpp"
#include "fpphe/metric.hpp"
#include "fpphe/multiscale.hpp"
#include "fpphe/render.hpp"
#include "fpphe/rng.hpp"
#include "fpphe/sweep.hpp"

using namespace fpphe;
namespace fs = std::filesystem;

namespace {

// Accepts inline JSON ({"family": ...}) or a path to a saved graph.
json graph_ref(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') return parse_text(arg);
    return {{"file", arg}};
}

// Writes a document with the graph reference attached, so renders can find
// the layout later.
template <class T>
void save_with_graph(const std::string& path, const T& value, const json& ref) {
    json doc = wrap_document(document_kind<T>(), to_json(value));
    json stored = ref;
    if (stored.contains("file"))
        stored["file"] = fs::absolute(stored["file"].get<std::string>()).lexically_normal().string();
    doc["graph"] = stored;
    write_text_file(path, dump_canonical(doc));
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::uint64_t derived_seed(std::uint64_t base, std::uint64_t salt) { return mix(base, salt); }

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stod(item));
    return out;
}

VertexSet parse_vertices(const std::string& text) {
    std::vector<VertexId> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(static_cast<VertexId>(std::stol(item)));
    return VertexSet(std::move(out));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Competing first passage percolation with dormant seeds"};
    app.require_subcommand(1);

    // graph
    auto* graph_cmd = app.add_subcommand("graph", "Generate a graph and save it");
    std::string graph_spec, graph_out;
    graph_cmd->add_option("--ref", graph_spec, "Graph reference, e.g. '{\"family\":\"tessellation\",\"p\":3,\"q\":7,\"layers\":8}'")
        ->required();
    graph_cmd->add_option("--out", graph_out, "Output file");

    // geom
    auto* geom_cmd = app.add_subcommand("geom", "Hyperbolicity, tree embeddings and escape rays");
    geom_cmd->require_subcommand(1);
    std::string geom_graph, geom_out;
    std::int64_t delta_samples = 20'000;
    std::uint64_t geom_seed = 1;
    int embed_r = 4, embed_depth = 4, ray_R1 = 2, ray_steps = 2;
    double embed_alpha = 1.5, ray_delta = 0.0;
    auto* delta_cmd = geom_cmd->add_subcommand("delta", "Estimate the thin-triangles constant");
    auto* embed_cmd = geom_cmd->add_subcommand("embed", "Embed a binary tree at scale r");
    auto* ray_cmd = geom_cmd->add_subcommand("ray", "Build an escape ray from the origin");
    for (auto* c : {delta_cmd, embed_cmd, ray_cmd}) {
        c->add_option("--graph", geom_graph, "Graph reference or file")->required();
        c->add_option("--out", geom_out, "Output file");
    }
    delta_cmd->add_option("--samples", delta_samples, "Sampled triples");
    delta_cmd->add_option("--seed", geom_seed, "Sampling seed");
    embed_cmd->add_option("--r", embed_r, "Edge scale");
    embed_cmd->add_option("--depth", embed_depth, "Tree depth");
    embed_cmd->add_option("--alpha", embed_alpha, "Target bilipschitz constant");
    ray_cmd->add_option("--R1", ray_R1, "First ray radius");
    ray_cmd->add_option("--steps", ray_steps, "Waypoints after the base");
    ray_cmd->add_option("--delta", ray_delta, "Hyperbolicity constant");

    // run
    auto* run_cmd = app.add_subcommand("run", "Run FPPHE once and save the trace");
    std::string run_graph, run_out, run_stop = "none";
    double run_lambda = 1.0, run_mu = 0.0;
    std::uint64_t run_seed = 1;
    int run_classify = 0;
    run_cmd->add_option("--graph", run_graph, "Graph reference or file")->required();
    run_cmd->add_option("--lambda", run_lambda, "FPPlambda rate");
    run_cmd->add_option("--mu", run_mu, "Seed density");
    run_cmd->add_option("--seed", run_seed, "Base seed for passage times and seeds");
    run_cmd->add_option("--stop", run_stop, "none, time:T, count:N or radius:R");
    run_cmd->add_option("--classify", run_classify, "Print survival proxies at this radius");
    run_cmd->add_option("--out", run_out, "Trace output file");

    // mdla
    auto* mdla_cmd = app.add_subcommand("mdla", "Run MDLA on a 2D box and save the state");
    int mdla_radius = 60;
    double mdla_rho = 0.2, mdla_time = 1000.0;
    std::int64_t mdla_cap = std::numeric_limits<std::int64_t>::max();
    std::uint64_t mdla_seed = 1;
    std::string mdla_out;
    mdla_cmd->add_option("--radius", mdla_radius, "Box radius");
    mdla_cmd->add_option("--rho", mdla_rho, "Initial particle density");
    mdla_cmd->add_option("--time", mdla_time, "Time horizon");
    mdla_cmd->add_option("--cap", mdla_cap, "Stop once the aggregate has this many sites");
    mdla_cmd->add_option("--seed", mdla_seed, "Seed");
    mdla_cmd->add_option("--out", mdla_out, "State output file");

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "Multiscale analyses");
    analyze_cmd->require_subcommand(1);
    std::string an_graph, an_out, an_removed;
    int an_r = 4, an_depth = 3, an_R1 = 2, an_K = 2;
    double an_eps = 0.01, an_cin = 0.5, an_cout = 4.0, an_lambda = 1.0, an_mu = 0.0, an_alpha = 1.5;
    std::uint64_t an_seed = 1;
    auto* cyl_cmd = analyze_cmd->add_subcommand("cylinders", "Check every parent-child cylinder of an embedded tree");
    cyl_cmd->add_option("--graph", an_graph, "Graph reference or file")->required();
    cyl_cmd->add_option("--r", an_r, "Edge scale");
    cyl_cmd->add_option("--depth", an_depth, "Tree depth");
    cyl_cmd->add_option("--epsilon", an_eps, "Cylinder width factor");
    cyl_cmd->add_option("--c-in", an_cin, "Inner spread constant");
    cyl_cmd->add_option("--c-out", an_cout, "Outer spread constant");
    cyl_cmd->add_option("--lambda", an_lambda, "FPPlambda rate");
    cyl_cmd->add_option("--mu", an_mu, "Seed density");
    cyl_cmd->add_option("--alpha", an_alpha, "Target bilipschitz constant");
    cyl_cmd->add_option("--seed", an_seed, "Seed for passage times and seeds");
    cyl_cmd->add_option("--out", an_out, "Output file");
    auto* gp_cmd = analyze_cmd->add_subcommand("goodpath", "Find a root path avoiding removed tree vertices");
    gp_cmd->add_option("--depth", an_depth, "Target generation");
    gp_cmd->add_option("--removed", an_removed, "Comma-separated heap indices");
    gp_cmd->add_option("--out", an_out, "Output file");
    auto* bc_cmd = analyze_cmd->add_subcommand("ballchain", "Plan a ball chain along an escape ray and check its events");
    bc_cmd->add_option("--graph", an_graph, "Graph reference or file")->required();
    bc_cmd->add_option("--R1", an_R1, "First radius");
    bc_cmd->add_option("--K", an_K, "Number of balls");
    bc_cmd->add_option("--c-out", an_cout, "Outer spread constant");
    bc_cmd->add_option("--lambda", an_lambda, "FPPlambda rate");
    bc_cmd->add_option("--seed", an_seed, "Passage-time seed");
    bc_cmd->add_option("--out", an_out, "Output file");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a (lambda, mu) sweep from a spec file");
    std::string sweep_spec, sweep_out;
    std::uint64_t sweep_seed = 0;
    int sweep_threads = 0;
    sweep_cmd->add_option("--spec", sweep_spec, "Sweep spec JSON (plain or as an fpphe document)")->required();
    sweep_cmd->add_option("--out", sweep_out, "Output directory")->required();
    auto* seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "Base seed; overrides the spec's seeds");
    sweep_cmd->add_option("--threads", sweep_threads, "Worker threads; default FPPHE_THREADS or all cores");

    // render
    auto* render_cmd = app.add_subcommand("render", "Render a saved trace or MDLA state as SVG");
    std::string render_in, render_graph, render_out;
    RenderStyle style;
    render_cmd->add_option("--trace", render_in, "Trace or MDLA state file")->required();
    render_cmd->add_option("--graph", render_graph, "Graph reference or file; default: the one recorded in the input");
    render_cmd->add_option("--out", render_out, "SVG output file")->required();
    render_cmd->add_option("--size", style.size, "Canvas size in pixels");
    render_cmd->add_option("--epochs", style.epochs, "FPP1 epoch bands");

    // figures
    auto* fig_cmd = app.add_subcommand("figures", "Render the figure-regime recipes");
    std::string fig_out;
    FigureRecipe recipe;
    fig_cmd->add_option("--out", fig_out, "Output directory")->required();
    fig_cmd->add_option("--seed", recipe.seed, "Seed shared by every panel");
    fig_cmd->add_option("--box", recipe.fpphe_box, "Lattice box radius for FPPHE panels");
    fig_cmd->add_option("--stop-radius", recipe.fpphe_stop_radius, "Stop FPPHE once an occupied vertex is this deep");
    fig_cmd->add_option("--mdla-box", recipe.mdla_box, "Lattice box radius for MDLA panels");
    fig_cmd->add_option("--mdla-time", recipe.mdla_time, "MDLA time horizon");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*graph_cmd) {
            const Graph g = build_graph(parse_text(graph_spec));
            if (!graph_out.empty()) save_file(graph_out, g);
            print_json({{"vertices", g.vertex_count()},
                        {"edges", g.edge_count()},
                        {"frontier", g.frontier().size()},
                        {"max_degree", g.max_degree()},
                        {"family", g.family().name}});
        } else if (*geom_cmd) {
            const Graph g = build_graph(graph_ref(geom_graph));
            if (*delta_cmd) {
                const auto d = delta_thin_estimate(g, delta_samples, geom_seed);
                print_json({{"delta", d.delta}, {"triangles", d.triangles}, {"witness", d.witness}});
            } else if (*embed_cmd) {
                const auto t = embed_binary_tree(g, embed_r, embed_depth, embed_alpha);
                if (!geom_out.empty()) save_file(geom_out, t);
                print_json({{"alpha", t.alpha}, {"kappa", t.kappa}, {"size", t.size()}, {"contaminated", t.contaminated}});
            } else {
                const auto r = build_escape_ray(g, VertexSet{g.origin()}, ray_R1, ray_steps, ray_delta);
                if (!geom_out.empty()) save_file(geom_out, r);
                print_json({{"steps", r.steps()}, {"partial", r.partial}, {"length", r.path.size()}});
            }
        } else if (*run_cmd) {
            const json ref = graph_ref(run_graph);
            const Graph g = build_graph(ref);
            const Trace t = run_fpphe(g, run_lambda, run_mu, derived_seed(run_seed, 1), derived_seed(run_seed, 2),
                                      StopRule::parse(run_stop));
            if (!run_out.empty()) save_with_graph(run_out, t, ref);
            json summary = {{"fpp1", t.count(Occupier::Fpp1)},
                            {"fppl", t.count(Occupier::FppLambda)},
                            {"dormant_seeds", t.count(Occupier::DormantSeed)},
                            {"final_time", t.final_time},
                            {"frontier_touched", t.frontier_touched}};
            if (run_classify > 0) summary["outcome"] = to_json(classify_outcome(g, t, run_classify));
            print_json(summary);
        } else if (*mdla_cmd) {
            const json ref = {{"family", "lattice"}, {"d", 2}, {"radius", mdla_radius}};
            const Graph g = build_graph(ref);
            const MdlaState s = run_mdla(g, mdla_rho, mdla_seed, MdlaStop{mdla_time, mdla_cap});
            if (!mdla_out.empty()) save_with_graph(mdla_out, s, ref);
            print_json({{"aggregate", s.aggregate_size()},
                        {"radius", s.aggregate_radius(g)},
                        {"time", s.time},
                        {"frontier_touched", s.frontier_touched}});
        } else if (*analyze_cmd) {
            json result;
            if (*gp_cmd) {
                std::vector<VertexId> removed = parse_vertices(an_removed).members();
                const auto r = find_good_path(an_depth, VertexSet(removed));
                result = wrap_document(document_kind<GoodPathResult>(), to_json(r));
            } else if (*cyl_cmd) {
                const Graph g = build_graph(graph_ref(an_graph));
                const auto emb = embed_binary_tree(g, an_r, an_depth, an_alpha);
                const auto params = derive_scale_params(an_r, an_eps, an_cin, an_cout, an_lambda, emb.alpha);
                const PassageTimeField pt(derived_seed(an_seed, 1));
                const SeedField seeds(derived_seed(an_seed, 2), an_mu);
                json verdicts = json::array();
                for (int v = 1; v < static_cast<int>(emb.size()); ++v) {
                    try {
                        verdicts.push_back(to_json(
                            check_good_cylinder(g, emb, seeds, pt, EmbeddedTree::parent(v), v, params)));
                    } catch (const ContaminationError& e) {
                        verdicts.push_back({{"x", EmbeddedTree::parent(v)}, {"y", v}, {"contaminated", e.what()}});
                    }
                }
                result = {{"params", to_json(params)}, {"alpha", emb.alpha}, {"verdicts", std::move(verdicts)}};
            } else {
                const Graph g = build_graph(graph_ref(an_graph));
                const VertexSet occ{g.origin()};
                const auto ray = build_escape_ray(g, occ, an_R1, an_K, 0.0);
                const auto plan = plan_ball_chain(g, ray, occ, an_K, an_cout);
                json out = {{"plan", {{"radii", plan.radii}, {"budgets", plan.budgets}, {"usable", plan.usable},
                                      {"truncated", plan.truncated}, {"separated", plan.separated}}}};
                if (!plan.truncated) {
                    const PassageTimeField pt(derived_seed(an_seed, 1));
                    const Trace t = run_fpphe(g, an_lambda, 0.0, pt, SeedField::forced({}), StopRule::none());
                    out["events"] = to_json(check_ball_chain_events(g, t, plan, an_lambda, pt));
                }
                result = out;
            }
            if (!an_out.empty()) write_text_file(an_out, dump_canonical(result));
            print_json(result);
        } else if (*sweep_cmd) {
            json raw = read_json_file(sweep_spec);
            const json& body = raw.contains("format") ? unwrap_document(raw, document_kind<SweepSpec>()) : raw;
            SweepSpec spec = rethrow_as_parse_error([&] { return from_json<SweepSpec>(body); });
            if (*seed_opt) {
                spec.pt_seed = derived_seed(sweep_seed, 1);
                spec.seed_seed = derived_seed(sweep_seed, 2);
            }
            if (sweep_threads > 0) spec.threads = sweep_threads;
            const std::string base = fs::absolute(sweep_spec).parent_path().string();
            const Graph g = build_graph(spec.graph, base);
            SweepTiming timing;
            const SweepResult r = sweep(g, spec, &timing);
            fs::create_directories(sweep_out);
            write_text_file((fs::path(sweep_out) / "sweep.csv").string(), sweep_csv(r));
            save_file((fs::path(sweep_out) / "sweep.json").string(), r);
            // Wall-clock numbers vary between runs, so they live apart from
            // the deterministic outputs.
            write_text_file((fs::path(sweep_out) / "timing.json").string(),
                            json{{"threads", timing.threads},
                                 {"total_seconds", timing.total_seconds},
                                 {"cell_seconds", timing.cell_seconds}}
                                    .dump(2) +
                                "\n");
            std::cout << sweep_csv(r);
        } else if (*render_cmd) {
            const json doc = read_json_file(render_in);
            if (!doc.is_object() || !doc.contains("kind")) throw ParseError("input is not an fpphe document");
            json ref;
            if (!render_graph.empty())
                ref = graph_ref(render_graph);
            else if (doc.contains("graph"))
                ref = doc["graph"];
            else
                throw ArgumentError("input records no graph; pass --graph");
            const Graph g = build_graph(ref);
            std::string svg;
            if (doc["kind"] == document_kind<MdlaState>())
                svg = render_mdla_svg(g, rethrow_as_parse_error([&] {
                                          return from_json<MdlaState>(unwrap_document(doc, document_kind<MdlaState>()));
                                      }),
                                      style);
            else
                svg = render_trace_svg(g, rethrow_as_parse_error([&] {
                                           return from_json<Trace>(unwrap_document(doc, document_kind<Trace>()));
                                       }),
                                       style);
            write_text_file(render_out, svg);
        } else if (*fig_cmd) {
            fs::create_directories(fig_out);
            const auto panels = render_figures(recipe);
            json index = json::array();
            for (const auto& p : panels) {
                write_text_file((fs::path(fig_out) / p.file).string(), p.svg);
                index.push_back(p.summary);
            }
            write_text_file((fs::path(fig_out) / "figures.json").string(), dump_canonical(index));
            print_json(index);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
