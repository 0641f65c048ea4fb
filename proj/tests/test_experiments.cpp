#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <regex>

#include <unistd.h>

#include "fpphe/errors.hpp"
#include "fpphe/generators.hpp"
#include "fpphe/io.hpp"
#include "fpphe/render.hpp"
#include "fpphe/sweep.hpp"
#include "test_support.hpp"

using namespace fpphe;

namespace {

template <class T>
void expect_round_trip(const T& x) {
    const std::string text = save_document(x);
    const T back = load_document<T>(text);
    EXPECT_TRUE(back == x) << document_kind<T>();
    EXPECT_EQ(save_document(back), text) << document_kind<T>();
}

SweepSpec t3_spec(std::vector<double> lambdas, std::vector<double> mus, std::int64_t runs) {
    SweepSpec s;
    s.graph = {{"family", "t3"}, {"radius", 12}};
    s.lambdas = std::move(lambdas);
    s.mus = std::move(mus);
    s.runs = runs;
    s.r_survive = 6;
    s.stop = StopRule::none();
    s.threads = 1;
    return s;
}

std::string temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / ("fpphe_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir.string();
}

int count_of(const std::string& text, const std::string& needle) {
    int n = 0;
    for (std::size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
    return n;
}

// Shapes inside the group with the given class attribute.
int shapes_in(const std::string& svg, const std::string& cls) {
    const std::string open = "<g class=\"" + cls + "\"";
    const auto start = svg.find(open);
    if (start == std::string::npos) return 0;
    const auto end = svg.find("</g>", start);
    const std::string body = svg.substr(start, end - start);
    return count_of(body, "<rect") + count_of(body, "<circle");
}

}  // namespace

// ---- persistence ----

TEST(Persistence, RoundTripsEveryExportedType) {
    const Graph tess = generate_tessellation(3, 7, 3);
    expect_round_trip(tess);
    expect_round_trip(generate_lattice(2, 4));
    expect_round_trip(generate_t3(4));

    const Trace trace = run_fpphe(tess, 0.7, 0.2, 11, 12, StopRule::radius(2));
    ASSERT_TRUE(std::isinf(trace.time[tess.vertex_count() - 1]));
    expect_round_trip(trace);
    expect_round_trip(run_fpphe(tess, 1.5, 0.1, 3, 4, StopRule::time(0.3)));
    expect_round_trip(run_richardson(tess, 2.0, 5, PassageTimeField(2), StopRule::count(30)));
    expect_round_trip(StopRule::time(1.0 / 3.0));

    const Graph t3 = generate_t3(9);
    const Trace closed = run_fpphe(t3, 1.0, 0.4, 5, 6, StopRule::radius(7));
    expect_round_trip(classify_outcome(t3, closed, 4));

    const Graph box = generate_lattice(2, 6);
    expect_round_trip(run_mdla(box, 0.3, 9, MdlaStop{5.0}));

    const auto emb = embed_binary_tree(t3, 2, 3);
    expect_round_trip(emb);
    expect_round_trip(build_escape_ray(generate_lattice(1, 300), VertexSet{0}, 2, 2, 0.0));

    const auto params = derive_scale_params(2, 0.01, 0.5, 4.0, 1.0, 1.0);
    expect_round_trip(params);
    CylinderVerdict v;
    v.x = 1;
    v.y = 4;
    v.scale = 1;
    v.good = false;
    v.sandwich_ok = false;
    v.bad_w = 17;
    v.bad_t = 3;
    v.bad_path = {1, 2, 3};
    v.undecided = {"path_time"};
    expect_round_trip(v);
    expect_round_trip(find_good_path(4, VertexSet{1, 5, 6}));

    const Graph line = generate_lattice(1, 400);
    const auto ray = build_escape_ray(line, VertexSet{line.origin()}, 2, 2, 0.0);
    const auto plan = plan_ball_chain(line, ray, VertexSet{line.origin()}, 2, 4.0);
    expect_round_trip(plan);
    const auto pt = PassageTimeField::forced([](VertexId, VertexId) { return 0.5; });
    const Trace lt = run_fpphe(line, 1.0, 0.0, pt, SeedField::forced({}), StopRule::none());
    expect_round_trip(check_ball_chain_events(line, lt, plan, 1.0, pt));

    SweepSpec spec = t3_spec({1.0, 0.5}, {0.0, 0.3}, 4);
    spec.stop = StopRule::radius(8);
    expect_round_trip(spec);
    expect_round_trip(sweep(generate_t3(12), spec));
}

TEST(Persistence, NonFiniteDoublesAndKeyOrder) {
    EXPECT_EQ(encode_double(kInfinity), "inf");
    EXPECT_EQ(encode_double(-kInfinity), "-inf");
    EXPECT_EQ(encode_double(std::nan("")), "nan");
    EXPECT_TRUE(std::isnan(decode_double("nan")));
    EXPECT_EQ(decode_double(json(0.1)), 0.1);
    EXPECT_THROW(decode_double("infinity"), ParseError);

    const std::string text = save_document(StopRule::radius(3));
    EXPECT_EQ(text, "{\"data\":\"radius:3\",\"format\":\"fpphe\",\"kind\":\"stop_rule\",\"version\":1}\n");
}

TEST(Persistence, CorruptInputRaisesExplicitErrors) {
    const Graph g = generate_t3(3);
    const std::string good = save_document(g);

    json doc = json::parse(good);
    doc["version"] = 2;
    EXPECT_THROW(load_document<Graph>(doc.dump()), VersionError);

    EXPECT_THROW(load_document<Graph>(good.substr(0, good.size() / 2)), ParseError);
    EXPECT_THROW(load_document<Graph>("not json"), ParseError);
    EXPECT_THROW(load_document<Graph>("[1,2,3]"), ParseError);
    EXPECT_THROW(load_document<Trace>(good), ParseError);  // wrong kind

    doc = json::parse(good);
    doc["data"].erase("edges");
    EXPECT_THROW(load_document<Graph>(doc.dump()), ParseError);

    doc = json::parse(good);
    doc["data"]["edges"].push_back(0);
    EXPECT_THROW(load_document<Graph>(doc.dump()), ParseError);

    doc = json::parse(good);
    doc["data"]["edges"] = {0, 0};  // self-loop
    EXPECT_THROW(load_document<Graph>(doc.dump()), ParseError);

    json trace = json::parse(save_document(run_fpphe(g, 1.0, 0.0, 1, 1, StopRule::none())));
    trace["data"]["state"][0] = 7;
    EXPECT_THROW(load_document<Trace>(trace.dump()), ParseError);
    trace = json::parse(save_document(run_fpphe(g, 1.0, 0.0, 1, 1, StopRule::none())));
    trace["data"]["time"].erase(0);
    EXPECT_THROW(load_document<Trace>(trace.dump()), ParseError);

    EXPECT_THROW(load_file<Graph>("/nonexistent/graph.json"), ArgumentError);
}

TEST(Persistence, GraphReferences) {
    EXPECT_EQ(build_graph({{"family", "t3"}, {"radius", 4}}), generate_t3(4));
    EXPECT_EQ(build_graph({{"family", "tessellation"}, {"p", 3}, {"q", 7}, {"layers", 3}}),
              generate_tessellation(3, 7, 3));
    EXPECT_EQ(build_graph({{"family", "lattice"}, {"d", 2}, {"radius", 5}}), generate_lattice(2, 5));
    EXPECT_EQ(build_graph({{"family", "regular_tree"}, {"branching", 2}, {"depth", 5}}),
              generate_regular_tree(2, 5));
    EXPECT_EQ(build_graph({{"family", "free_product"}, {"factors", {2, 3}}, {"radius", 4}}),
              generate_free_product({2, 3}, 4));
    // A generated graph's family record is itself a valid reference.
    const Graph tess = generate_tessellation(4, 5, 3);
    json ref = tess.family().params;
    ref["family"] = tess.family().name;
    EXPECT_EQ(build_graph(ref), tess);

    const std::string dir = temp_dir();
    save_file(dir + "/g.json", tess);
    EXPECT_EQ(build_graph({{"file", "g.json"}}, dir), tess);
    EXPECT_EQ(build_graph({{"file", dir + "/g.json"}}), tess);

    EXPECT_THROW(build_graph({{"family", "torus"}}), ParameterError);
    EXPECT_THROW(build_graph({{"family", "lattice"}, {"d", 2}}), ParameterError);
    EXPECT_THROW(build_graph(json::array()), ParameterError);
}

// ---- sweeps ----

TEST(Sweep, WithoutSeedsFpp1AlwaysSurvives) {
    const auto r = sweep(generate_t3(12), t3_spec({1.0}, {0.0}, 10));
    ASSERT_EQ(r.cells.size(), 1u);
    const auto& c = r.cells[0];
    EXPECT_EQ(c.fpp1, 10);
    EXPECT_EQ(c.extinct, 0);
    EXPECT_EQ(c.contaminated, 0);
    EXPECT_TRUE(c.usable);
}

TEST(Sweep, DenseSeedsDriveFpp1Extinct) {
    // The seed-free component of the origin is a Galton-Watson tree with
    // mean offspring 2 * 0.1 below the root's 3 * 0.1, so reaching depth 6
    // needs one of the 3 * 2^5 seed-free paths: probability <= 96e-6.
    const double miss_bound = 3.0 * std::pow(2.0, 5) * std::pow(0.1, 6);
    const auto r = sweep(generate_t3(12), t3_spec({1.0}, {0.9}, 200));
    const auto& c = r.cells[0];
    EXPECT_LE(c.contaminated, 2);
    EXPECT_EQ(c.fpp1, 0);
    EXPECT_TRUE(c.extinct_ci.contains(1.0 - miss_bound));
    EXPECT_GE(c.extinct, c.clean_runs() - 1);
}

TEST(Sweep, ExclusiveClassesPartitionRuns) {
    const Graph g = generate_t3(12);
    SweepSpec spec = t3_spec({0.5, 1.0, 2.0}, {0.0, 0.2, 0.5, 0.8}, 25);
    spec.stop = StopRule::radius(10);
    for (const auto& c : sweep(g, spec).cells) {
        EXPECT_EQ(c.coexist + c.strong + c.extinct + c.fppl_only + c.undecided + c.contaminated, c.runs);
        EXPECT_LE(c.coexist + c.strong, c.fpp1);
        EXPECT_LE(c.fpp1, c.coexist + c.strong + c.undecided);
        EXPECT_LE(c.coexist + c.fppl_only, c.fppl);
        const auto ci = wilson_interval(c.fpp1, c.clean_runs());
        EXPECT_EQ(c.fpp1_ci, ci);
    }
}

TEST(Sweep, DeterministicAcrossRerunsOrderAndThreads) {
    const Graph g = generate_t3(12);
    SweepSpec spec = t3_spec({0.5, 1.5}, {0.05, 0.3, 0.6}, 12);
    spec.stop = StopRule::radius(10);
    const auto a = sweep(g, spec);
    const auto b = sweep(g, spec);
    EXPECT_EQ(sweep_csv(a), sweep_csv(b));
    EXPECT_EQ(save_document(a), save_document(b));

    SweepSpec threaded = spec;
    threaded.threads = 3;
    EXPECT_EQ(sweep(g, threaded).cells, a.cells);

    SweepSpec permuted = spec;
    std::reverse(permuted.lambdas.begin(), permuted.lambdas.end());
    std::rotate(permuted.mus.begin(), permuted.mus.begin() + 1, permuted.mus.end());
    std::map<std::pair<double, double>, SweepCell> by_key;
    for (const auto& c : a.cells) by_key[{c.lambda, c.mu}] = c;
    const auto p = sweep(g, permuted);
    ASSERT_EQ(p.cells.size(), a.cells.size());
    for (const auto& c : p.cells) EXPECT_EQ(c, by_key.at({c.lambda, c.mu}));

    // Sub-grids reproduce the same cells.
    SweepSpec single = spec;
    single.lambdas = {1.5};
    single.mus = {0.3};
    EXPECT_EQ(sweep(g, single).cells[0], by_key.at({1.5, 0.3}));
}

TEST(Sweep, FullyContaminatedCellsAreUnusable) {
    // Frontier at depth 7 is within r_survive + margin of the origin.
    SweepSpec spec = t3_spec({1.0}, {0.1}, 5);
    const auto r = sweep(generate_t3(7), spec);
    const auto& c = r.cells[0];
    EXPECT_EQ(c.contaminated, 5);
    EXPECT_FALSE(c.usable);
    EXPECT_EQ(c.fpp1_ci, (Interval{0.0, 1.0}));
}

TEST(Sweep, RejectsInvalidSpecs) {
    const Graph g = generate_t3(6);
    auto bad = [&](auto edit) {
        SweepSpec s = t3_spec({1.0}, {0.1}, 2);
        edit(s);
        EXPECT_THROW(sweep(g, s), ParameterError);
    };
    bad([](SweepSpec& s) { s.lambdas.clear(); });
    bad([](SweepSpec& s) { s.mus.clear(); });
    bad([](SweepSpec& s) { s.runs = 0; });
    bad([](SweepSpec& s) { s.lambdas = {0.0}; });
    bad([](SweepSpec& s) { s.mus = {1.0}; });
    bad([](SweepSpec& s) { s.r_survive = 0; });
    SweepSpec huge = t3_spec({1.0}, {0.1}, 10'000'000);
    EXPECT_THROW(sweep(generate_t3(12), huge), SizeError);
}

TEST(Sweep, CsvSchema) {
    SweepResult r;
    SweepCell c;
    c.lambda = 0.7;
    c.mu = 0.029;
    c.runs = 10;
    c.fpp1 = 4;
    c.fppl = 6;
    c.coexist = 3;
    c.extinct = 2;
    c.contaminated = 1;
    c.fpp1_ci = wilson_interval(4, 9);
    r.cells.push_back(c);
    const auto ci = wilson_interval(4, 9);
    const std::string csv = sweep_csv(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda,mu,runs,fpp1,fppl,coexist,extinct,contaminated,ci_low,ci_high");
    const std::string row = csv.substr(csv.find('\n') + 1);
    const std::string counts = "0.7,0.029,10,4,6,3,2,1,";
    ASSERT_EQ(row.substr(0, counts.size()), counts);
    // Shortest round-trip formatting of the interval.
    const auto fields = row.substr(counts.size());
    const double lo = std::stod(fields.substr(0, fields.find(',')));
    const double hi = std::stod(fields.substr(fields.find(',') + 1));
    EXPECT_EQ(lo, ci.low);
    EXPECT_EQ(hi, ci.high);
}

TEST(Sweep, PerRunSeedsIgnoreCellPosition) {
    SweepSpec s = t3_spec({0.5, 1.0}, {0.1}, 3);
    EXPECT_EQ(run_pt_seed(s, 1.0, 0.1, 2), run_pt_seed(t3_spec({1.0}, {0.1}, 3), 1.0, 0.1, 2));
    EXPECT_NE(run_pt_seed(s, 1.0, 0.1, 2), run_pt_seed(s, 1.0, 0.1, 1));
    EXPECT_NE(run_pt_seed(s, 1.0, 0.1, 2), run_seed_seed(s, 1.0, 0.1, 2));
    s.pt_seed = 99;
    EXPECT_NE(run_pt_seed(s, 1.0, 0.1, 2), run_pt_seed(t3_spec({1.0}, {0.1}, 3), 1.0, 0.1, 2));
    EXPECT_EQ(resolve_threads(4), 4);
    EXPECT_GE(resolve_threads(0), 1);
}

// ---- rendering ----

TEST(Render, OriginOnlyTraceIsOneMarkedVertex) {
    const Graph box = generate_lattice(2, 5);
    const Trace t = run_fpphe(box, 1.0, 0.0, 1, 1, StopRule::count(1));
    ASSERT_EQ(t.count(Occupier::Fpp1), 1);
    const std::string svg = render_trace_svg(box, t);
    EXPECT_EQ(shapes_in(svg, "fpp1-epoch-0"), 1);
    for (int k = 1; k < 10; ++k) EXPECT_EQ(shapes_in(svg, "fpp1-epoch-" + std::to_string(k)), 0);
    EXPECT_EQ(shapes_in(svg, "fppl"), 0);
    EXPECT_EQ(count_of(svg, "class=\"origin\""), 1);
    // The origin sits at the canvas center.
    EXPECT_NE(svg.find("class=\"origin\" cx=\"400.00\" cy=\"400.00\""), std::string::npos);
}

TEST(Render, EpochBandsHaveEqualCounts) {
    const Graph box = generate_lattice(2, 20);
    const Trace t = run_fpphe(box, 0.7, 0.03, 5, 6, StopRule::radius(15));
    const auto band = fpp1_epoch_bands(t, 10);
    // Rank FPP1 vertices by occupation time directly.
    std::vector<VertexId> fpp1;
    for (VertexId v = 0; v < box.vertex_count(); ++v)
        if (t.state[v] == Occupier::Fpp1) fpp1.push_back(v);
    std::sort(fpp1.begin(), fpp1.end(), [&](VertexId a, VertexId b) { return t.time[a] < t.time[b]; });
    const auto n = static_cast<std::int64_t>(fpp1.size());
    std::vector<std::int64_t> sizes(10, 0);
    for (std::int64_t i = 0; i < n; ++i) {
        EXPECT_EQ(band[fpp1[i]], static_cast<int>(10 * i / n));
        ++sizes[band[fpp1[i]]];
    }
    EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1);
    for (VertexId v = 0; v < box.vertex_count(); ++v)
        if (t.state[v] != Occupier::Fpp1) EXPECT_EQ(band[v], -1);
}

TEST(Render, LatticeRowsCoverEveryVertexOnce) {
    const Graph box = generate_lattice(2, 12);
    const Trace t = run_fpphe(box, 0.7, 0.05, 2, 3, StopRule::radius(10));
    const std::string svg = render_trace_svg(box, t);
    // Summed rectangle widths per class equal the vertex counts.
    const std::regex rect("<rect x=\"[-0-9.]+\" y=\"[-0-9.]+\" width=\"([0-9.]+)\" height=\"([0-9.]+)\"/>");
    double cells = 0.0;
    double cell_size = 0.0;
    for (std::sregex_iterator it(svg.begin(), svg.end(), rect), end; it != end; ++it) {
        cells += std::stod((*it)[1]);
        cell_size = std::stod((*it)[2]);
    }
    ASSERT_GT(cell_size, 0.0);
    EXPECT_NEAR(cells / cell_size, box.vertex_count(), 0.5);
}

TEST(Render, DeterministicAndLayoutRequired) {
    const Graph tess = generate_tessellation(3, 7, 4);
    const Trace t = run_fpphe(tess, 0.7, 0.1, 1, 2, StopRule::radius(3));
    const std::string a = render_trace_svg(tess, t);
    EXPECT_EQ(a, render_trace_svg(tess, t));
    EXPECT_EQ(shapes_in(a, "seed") + shapes_in(a, "fppl") + shapes_in(a, "unreached") +
                  [&] {
                      int s = 0;
                      for (int k = 0; k < 10; ++k) s += shapes_in(a, "fpp1-epoch-" + std::to_string(k));
                      return s;
                  }(),
              tess.vertex_count());
    EXPECT_EQ(shapes_in(a, "fppl"), t.count(Occupier::FppLambda));
    EXPECT_EQ(shapes_in(a, "seed"), t.count(Occupier::DormantSeed));

    const Graph t3 = generate_t3(5);
    const Trace u = run_fpphe(t3, 1.0, 0.0, 1, 1, StopRule::radius(3));
    try {
        render_trace_svg(t3, u);
        FAIL() << "expected ArgumentError";
    } catch (const ArgumentError& e) {
        EXPECT_NE(std::string(e.what()).find("lattice"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("tessellation"), std::string::npos);
    }
    EXPECT_THROW(render_trace_svg(tess, u), ConsistencyError);
}

TEST(Render, MdlaSitesByKind) {
    const Graph box = generate_lattice(2, 10);
    const auto s = run_mdla(box, 0.2, 4, MdlaStop{20.0});
    const std::string svg = render_mdla_svg(box, s);
    EXPECT_EQ(svg, render_mdla_svg(box, s));
    EXPECT_NE(svg.find("class=\"aggregate\""), std::string::npos);
    EXPECT_NE(svg.find("rho=0.20000000000000001"), std::string::npos);
    EXPECT_THROW(render_mdla_svg(generate_lattice(1, 10), run_mdla(generate_lattice(1, 10), 0.2, 1, MdlaStop{1.0})),
                 ArgumentError);
}
