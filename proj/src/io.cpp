#include "fpphe/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fpphe/errors.hpp"
#include "fpphe/generators.hpp"

namespace fpphe {

namespace {

json encode_doubles(const std::vector<double>& xs) {
    json out = json::array();
    for (double x : xs) out.push_back(encode_double(x));
    return out;
}

std::vector<double> decode_doubles(const json& j) {
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(decode_double(x));
    return out;
}

json encode_set(const VertexSet& s) { return s.members(); }
VertexSet decode_set(const json& j) { return VertexSet(j.get<std::vector<VertexId>>()); }

json encode_interval(const Interval& i) { return {{"low", encode_double(i.low)}, {"high", encode_double(i.high)}}; }
Interval decode_interval(const json& j) { return {decode_double(j.at("low")), decode_double(j.at("high"))}; }

template <class E>
json encode_enums(const std::vector<E>& xs) {
    json out = json::array();
    for (E x : xs) out.push_back(static_cast<int>(x));
    return out;
}

template <class E>
std::vector<E> decode_enums(const json& j, int max_value) {
    std::vector<E> out;
    out.reserve(j.size());
    for (const auto& x : j) {
        const int v = x.get<int>();
        if (v < 0 || v > max_value) throw ParseError("enum value out of range: " + std::to_string(v));
        out.push_back(static_cast<E>(v));
    }
    return out;
}

json encode_bools(const std::vector<bool>& xs) {
    json out = json::array();
    for (bool b : xs) out.push_back(b);
    return out;
}

std::vector<bool> decode_bools(const json& j) {
    std::vector<bool> out;
    for (const auto& x : j) out.push_back(x.get<bool>());
    return out;
}

std::vector<char> decode_flags(const json& j) {
    std::vector<char> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(static_cast<char>(x.get<int>() != 0));
    return out;
}

json encode_flags(const std::vector<char>& xs) {
    json out = json::array();
    for (char c : xs) out.push_back(c ? 1 : 0);
    return out;
}

json encode_paths(const std::vector<Path>& ps) {
    json out = json::array();
    for (const auto& p : ps) out.push_back(p);
    return out;
}

}  // namespace

json encode_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double decode_double(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ParseError("expected a number, got " + j.dump());
}

json wrap_document(const std::string& kind, json data) {
    return {{"format", "fpphe"}, {"version", kSchemaVersion}, {"kind", kind}, {"data", std::move(data)}};
}

const json& unwrap_document(const json& doc, const std::string& kind) {
    if (!doc.is_object() || !doc.contains("format") || doc["format"] != "fpphe")
        throw ParseError("not an fpphe document");
    if (!doc.contains("version") || !doc["version"].is_number_integer())
        throw ParseError("document has no schema version");
    const int version = doc["version"].get<int>();
    if (version != kSchemaVersion)
        throw VersionError("schema version " + std::to_string(version) + " is not supported (expected " +
                           std::to_string(kSchemaVersion) + ")");
    if (!doc.contains("kind") || doc["kind"] != kind)
        throw ParseError("expected a " + kind + " document, got " + (doc.contains("kind") ? doc["kind"].dump() : "none"));
    if (!doc.contains("data")) throw ParseError("document has no data");
    return doc["data"];
}

std::string dump_canonical(const json& doc) { return doc.dump() + "\n"; }

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot write " + path);
    out << text;
    if (!out) throw ArgumentError("write failed for " + path);
}

// ---- Graph ----

json to_json(const Graph& g) {
    json edges = json::array();
    for (const auto& [u, v] : g.edges()) {
        edges.push_back(u);
        edges.push_back(v);
    }
    json layout = json::array();
    for (const auto& p : g.layout()) {
        layout.push_back(encode_double(p.x));
        layout.push_back(encode_double(p.y));
    }
    return {{"vertices", g.vertex_count()},
            {"origin", g.origin()},
            {"edges", std::move(edges)},
            {"family", {{"name", g.family().name}, {"params", g.family().params}}},
            {"layout", std::move(layout)},
            {"frontier", g.frontier()}};
}

template <>
Graph from_json<Graph>(const json& j) {
    const auto flat = j.at("edges").get<std::vector<VertexId>>();
    if (flat.size() % 2) throw ParseError("edge list has odd length");
    std::vector<Edge> edges;
    edges.reserve(flat.size() / 2);
    for (std::size_t i = 0; i < flat.size(); i += 2) edges.emplace_back(flat[i], flat[i + 1]);
    const auto coords = decode_doubles(j.at("layout"));
    if (coords.size() % 2) throw ParseError("layout has odd length");
    std::vector<Point2> layout;
    for (std::size_t i = 0; i < coords.size(); i += 2) layout.push_back({coords[i], coords[i + 1]});
    GraphFamily family{j.at("family").at("name").get<std::string>(), j.at("family").at("params")};
    try {
        return Graph::from_edges(j.at("vertices").get<VertexId>(), edges, j.at("origin").get<VertexId>(),
                                 std::move(family), std::move(layout),
                                 j.at("frontier").get<std::vector<VertexId>>());
    } catch (const Error& e) {
        throw ParseError(std::string("invalid graph: ") + e.what());
    }
}

// ---- FPP ----

json to_json(const StopRule& s) { return s.to_string(); }

template <>
StopRule from_json<StopRule>(const json& j) {
    return StopRule::parse(j.get<std::string>());
}

json to_json(const Trace& t) {
    return {{"lambda", encode_double(t.lambda)},
            {"mu", encode_double(t.mu)},
            {"pt_seed", t.pt_seed},
            {"seed_seed", t.seed_seed},
            {"stop", to_json(t.stop)},
            {"origin", t.origin},
            {"richardson_seed", t.richardson_seed},
            {"state", encode_enums(t.state)},
            {"time", encode_doubles(t.time)},
            {"pred", t.pred},
            {"activation", encode_doubles(t.activation)},
            {"seed", encode_flags(t.seed)},
            {"order", t.order},
            {"stop_met", t.stop_met},
            {"frontier_touched", t.frontier_touched},
            {"final_time", encode_double(t.final_time)}};
}

template <>
Trace from_json<Trace>(const json& j) {
    Trace t;
    t.lambda = decode_double(j.at("lambda"));
    t.mu = decode_double(j.at("mu"));
    t.pt_seed = j.at("pt_seed").get<std::uint64_t>();
    t.seed_seed = j.at("seed_seed").get<std::uint64_t>();
    t.stop = from_json<StopRule>(j.at("stop"));
    t.origin = j.at("origin").get<VertexId>();
    t.richardson_seed = j.at("richardson_seed").get<VertexId>();
    t.state = decode_enums<Occupier>(j.at("state"), 3);
    t.time = decode_doubles(j.at("time"));
    t.pred = j.at("pred").get<std::vector<VertexId>>();
    t.activation = decode_doubles(j.at("activation"));
    t.seed = decode_flags(j.at("seed"));
    t.order = j.at("order").get<std::vector<VertexId>>();
    t.stop_met = j.at("stop_met").get<bool>();
    t.frontier_touched = j.at("frontier_touched").get<bool>();
    t.final_time = decode_double(j.at("final_time"));
    const std::size_t n = t.state.size();
    if (t.time.size() != n || t.pred.size() != n || t.activation.size() != n || t.seed.size() != n)
        throw ParseError("trace arrays have inconsistent lengths");
    return t;
}

json to_json(const OutcomeProxies& o) {
    return {{"r_survive", o.r_survive},         {"fpp1_survives", o.fpp1_survives},
            {"fppl_survives", o.fppl_survives}, {"coexist", o.coexist},
            {"extinction", o.extinction},       {"fpp1_enclosed", o.fpp1_enclosed},
            {"fpp1_confined", o.fpp1_confined},
            {"fpp1_reach", o.fpp1_reach},       {"fppl_diameter", o.fppl_diameter},
            {"cluster_sizes", o.cluster_sizes}, {"horizon", encode_double(o.horizon)},
            {"fppl_decided", o.fppl_decided}};
}

template <>
OutcomeProxies from_json<OutcomeProxies>(const json& j) {
    OutcomeProxies o;
    o.r_survive = j.at("r_survive").get<int>();
    o.fpp1_survives = j.at("fpp1_survives").get<bool>();
    o.fppl_survives = j.at("fppl_survives").get<bool>();
    o.coexist = j.at("coexist").get<bool>();
    o.extinction = j.at("extinction").get<bool>();
    o.fpp1_enclosed = j.at("fpp1_enclosed").get<bool>();
    o.fpp1_confined = j.at("fpp1_confined").get<bool>();
    o.fpp1_reach = j.at("fpp1_reach").get<int>();
    o.fppl_diameter = j.at("fppl_diameter").get<int>();
    o.cluster_sizes = j.at("cluster_sizes").get<std::vector<std::int64_t>>();
    o.horizon = decode_double(j.at("horizon"));
    o.fppl_decided = j.at("fppl_decided").get<bool>();
    return o;
}

// ---- MDLA ----

json to_json(const MdlaState& s) {
    json growth = json::array();
    for (const auto& p : s.growth) growth.push_back({encode_double(p.time), p.size, p.radius});
    return {{"rho", encode_double(s.rho)},
            {"seed", s.seed},
            {"slots", s.slots},
            {"time", encode_double(s.time)},
            {"site", encode_enums(s.site)},
            {"start", s.start},
            {"position", s.position},
            {"frozen", encode_flags(s.frozen)},
            {"rings", s.rings},
            {"jumps", s.jumps},
            {"exclusions", s.exclusions},
            {"wall_hits", s.wall_hits},
            {"frontier_touched", s.frontier_touched},
            {"stop_met", s.stop_met},
            {"growth", std::move(growth)}};
}

template <>
MdlaState from_json<MdlaState>(const json& j) {
    MdlaState s;
    s.rho = decode_double(j.at("rho"));
    s.seed = j.at("seed").get<std::uint64_t>();
    s.slots = j.at("slots").get<int>();
    s.time = decode_double(j.at("time"));
    s.site = decode_enums<Site>(j.at("site"), 2);
    s.start = j.at("start").get<std::vector<VertexId>>();
    s.position = j.at("position").get<std::vector<VertexId>>();
    s.frozen = decode_flags(j.at("frozen"));
    s.rings = j.at("rings").get<std::int64_t>();
    s.jumps = j.at("jumps").get<std::int64_t>();
    s.exclusions = j.at("exclusions").get<std::int64_t>();
    s.wall_hits = j.at("wall_hits").get<std::int64_t>();
    s.frontier_touched = j.at("frontier_touched").get<bool>();
    s.stop_met = j.at("stop_met").get<bool>();
    for (const auto& p : j.at("growth"))
        s.growth.push_back({decode_double(p.at(0)), p.at(1).get<std::int64_t>(), p.at(2).get<int>()});
    if (s.position.size() != s.start.size() || s.frozen.size() != s.start.size())
        throw ParseError("particle arrays have inconsistent lengths");
    return s;
}

// ---- Geometry ----

json to_json(const EmbeddedTree& t) {
    return {{"r", t.r},
            {"depth", t.depth},
            {"alpha_target", encode_double(t.alpha_target)},
            {"image", t.image},
            {"edge_path", encode_paths(t.edge_path)},
            {"alpha", encode_double(t.alpha)},
            {"kappa", t.kappa},
            {"pairs_checked", t.pairs_checked},
            {"pairs_exhaustive", t.pairs_exhaustive},
            {"contaminated", t.contaminated}};
}

template <>
EmbeddedTree from_json<EmbeddedTree>(const json& j) {
    EmbeddedTree t;
    t.r = j.at("r").get<int>();
    t.depth = j.at("depth").get<int>();
    t.alpha_target = decode_double(j.at("alpha_target"));
    t.image = j.at("image").get<std::vector<VertexId>>();
    t.edge_path = j.at("edge_path").get<std::vector<Path>>();
    t.alpha = decode_double(j.at("alpha"));
    t.kappa = j.at("kappa").get<int>();
    t.pairs_checked = j.at("pairs_checked").get<std::int64_t>();
    t.pairs_exhaustive = j.at("pairs_exhaustive").get<bool>();
    t.contaminated = j.at("contaminated").get<bool>();
    return t;
}

json to_json(const EscapeRay& r) {
    return {{"R1", r.R1},
            {"delta", encode_double(r.delta)},
            {"slack", r.slack},
            {"requested_steps", r.requested_steps},
            {"waypoints", r.waypoints},
            {"step_radii", r.step_radii},
            {"occupied_distance", r.occupied_distance},
            {"path", r.path},
            {"partial", r.partial},
            {"sandwich_ok", r.sandwich_ok}};
}

template <>
EscapeRay from_json<EscapeRay>(const json& j) {
    EscapeRay r;
    r.R1 = j.at("R1").get<int>();
    r.delta = decode_double(j.at("delta"));
    r.slack = j.at("slack").get<int>();
    r.requested_steps = j.at("requested_steps").get<int>();
    r.waypoints = j.at("waypoints").get<std::vector<VertexId>>();
    r.step_radii = j.at("step_radii").get<std::vector<std::int64_t>>();
    r.occupied_distance = j.at("occupied_distance").get<std::vector<int>>();
    r.path = j.at("path").get<Path>();
    r.partial = j.at("partial").get<bool>();
    r.sandwich_ok = j.at("sandwich_ok").get<bool>();
    return r;
}

// ---- Multiscale ----

json to_json(const ScaleParams& p) {
    return {{"r", p.r},
            {"epsilon", encode_double(p.epsilon)},
            {"c_in", encode_double(p.c_in)},
            {"c_out", encode_double(p.c_out)},
            {"lambda", encode_double(p.lambda)},
            {"alpha", encode_double(p.alpha)},
            {"beta", encode_double(p.beta)},
            {"eta", p.eta},
            {"t_window", encode_double(p.t_window)},
            {"path_window", encode_double(p.path_window)},
            {"range_ok", p.range_ok},
            {"c_out_ok", p.c_out_ok},
            {"epsilon_ok", p.epsilon_ok}};
}

template <>
ScaleParams from_json<ScaleParams>(const json& j) {
    ScaleParams p;
    p.r = j.at("r").get<int>();
    p.epsilon = decode_double(j.at("epsilon"));
    p.c_in = decode_double(j.at("c_in"));
    p.c_out = decode_double(j.at("c_out"));
    p.lambda = decode_double(j.at("lambda"));
    p.alpha = decode_double(j.at("alpha"));
    p.beta = decode_double(j.at("beta"));
    p.eta = j.at("eta").get<int>();
    p.t_window = decode_double(j.at("t_window"));
    p.path_window = decode_double(j.at("path_window"));
    p.range_ok = j.at("range_ok").get<bool>();
    p.c_out_ok = j.at("c_out_ok").get<bool>();
    p.epsilon_ok = j.at("epsilon_ok").get<bool>();
    return p;
}

json to_json(const CylinderVerdict& v) {
    return {{"x", v.x},
            {"y", v.y},
            {"scale", v.scale},
            {"gx", v.gx},
            {"gy", v.gy},
            {"width", v.width},
            {"cylinder_size", v.cylinder_size},
            {"sandwich_ok", v.sandwich_ok},
            {"path_time_ok", v.path_time_ok},
            {"seed_free_ok", v.seed_free_ok},
            {"seed_checked", v.seed_checked},
            {"good", v.good},
            {"sandwich_exhaustive", v.sandwich_exhaustive},
            {"paths_exhaustive", v.paths_exhaustive},
            {"sandwich_checked", v.sandwich_checked},
            {"sandwich_total", v.sandwich_total},
            {"paths_checked", v.paths_checked},
            {"bad_w", v.bad_w},
            {"bad_t", v.bad_t},
            {"bad_path", v.bad_path},
            {"seed_found", v.seed_found},
            {"undecided", v.undecided}};
}

template <>
CylinderVerdict from_json<CylinderVerdict>(const json& j) {
    CylinderVerdict v;
    v.x = j.at("x").get<int>();
    v.y = j.at("y").get<int>();
    v.scale = j.at("scale").get<int>();
    v.gx = j.at("gx").get<VertexId>();
    v.gy = j.at("gy").get<VertexId>();
    v.width = j.at("width").get<int>();
    v.cylinder_size = j.at("cylinder_size").get<std::int64_t>();
    v.sandwich_ok = j.at("sandwich_ok").get<bool>();
    v.path_time_ok = j.at("path_time_ok").get<bool>();
    v.seed_free_ok = j.at("seed_free_ok").get<bool>();
    v.seed_checked = j.at("seed_checked").get<bool>();
    v.good = j.at("good").get<bool>();
    v.sandwich_exhaustive = j.at("sandwich_exhaustive").get<bool>();
    v.paths_exhaustive = j.at("paths_exhaustive").get<bool>();
    v.sandwich_checked = j.at("sandwich_checked").get<std::int64_t>();
    v.sandwich_total = j.at("sandwich_total").get<std::int64_t>();
    v.paths_checked = j.at("paths_checked").get<std::int64_t>();
    v.bad_w = j.at("bad_w").get<VertexId>();
    v.bad_t = j.at("bad_t").get<int>();
    v.bad_path = j.at("bad_path").get<Path>();
    v.seed_found = j.at("seed_found").get<VertexId>();
    v.undecided = j.at("undecided").get<std::vector<std::string>>();
    return v;
}

json to_json(const GoodPathResult& r) {
    return {{"found", r.found}, {"path", r.path}, {"cutset", encode_set(r.cutset)}};
}

template <>
GoodPathResult from_json<GoodPathResult>(const json& j) {
    return {j.at("found").get<bool>(), j.at("path").get<std::vector<int>>(), decode_set(j.at("cutset"))};
}

namespace {

json level_to_json(const BallChainLevel& l) {
    return {{"k", l.k},
            {"center", l.center},
            {"radius", l.radius},
            {"ball", encode_set(l.ball)},
            {"ball_truncated", l.ball_truncated},
            {"has_target", l.has_target},
            {"target", encode_set(l.target)},
            {"enlargement_radius", l.enlargement_radius},
            {"enlargement", encode_set(l.enlargement)},
            {"enlargement_boundary", encode_set(l.enlargement_boundary)},
            {"enlargement_truncated", l.enlargement_truncated},
            {"separation", l.separation}};
}

BallChainLevel level_from_json(const json& j) {
    BallChainLevel l;
    l.k = j.at("k").get<int>();
    l.center = j.at("center").get<VertexId>();
    l.radius = j.at("radius").get<std::int64_t>();
    l.ball = decode_set(j.at("ball"));
    l.ball_truncated = j.at("ball_truncated").get<bool>();
    l.has_target = j.at("has_target").get<bool>();
    l.target = decode_set(j.at("target"));
    l.enlargement_radius = j.at("enlargement_radius").get<std::int64_t>();
    l.enlargement = decode_set(j.at("enlargement"));
    l.enlargement_boundary = decode_set(j.at("enlargement_boundary"));
    l.enlargement_truncated = j.at("enlargement_truncated").get<bool>();
    l.separation = j.at("separation").get<int>();
    return l;
}

}  // namespace

json to_json(const BallChainPlan& p) {
    json levels = json::array();
    for (const auto& l : p.levels) levels.push_back(level_to_json(l));
    return {{"R1", p.R1},
            {"K", p.K},
            {"c_out", encode_double(p.c_out)},
            {"radii", p.radii},
            {"budgets", p.budgets},
            {"base", p.base},
            {"ray", p.ray},
            {"waypoint_index", p.waypoint_index},
            {"levels", std::move(levels)},
            {"usable", p.usable},
            {"truncated", p.truncated},
            {"separated", p.separated}};
}

template <>
BallChainPlan from_json<BallChainPlan>(const json& j) {
    BallChainPlan p;
    p.R1 = j.at("R1").get<int>();
    p.K = j.at("K").get<int>();
    p.c_out = decode_double(j.at("c_out"));
    p.radii = j.at("radii").get<std::vector<std::int64_t>>();
    p.budgets = j.at("budgets").get<std::vector<std::int64_t>>();
    p.base = j.at("base").get<VertexId>();
    p.ray = j.at("ray").get<Path>();
    p.waypoint_index = j.at("waypoint_index").get<std::vector<std::size_t>>();
    for (const auto& l : j.at("levels")) p.levels.push_back(level_from_json(l));
    p.usable = j.at("usable").get<int>();
    p.truncated = j.at("truncated").get<bool>();
    p.separated = j.at("separated").get<bool>();
    return p;
}

json to_json(const BallChainEvents& e) {
    return {{"k", e.k},
            {"f1", encode_bools(e.f1)},
            {"f2", encode_bools(e.f2)},
            {"e", encode_bools(e.e)},
            {"f1_sum", encode_doubles(e.f1_sum)},
            {"f2_time", encode_doubles(e.f2_time)},
            {"first_failure", e.first_failure}};
}

template <>
BallChainEvents from_json<BallChainEvents>(const json& j) {
    BallChainEvents e;
    e.k = j.at("k").get<std::vector<int>>();
    e.f1 = decode_bools(j.at("f1"));
    e.f2 = decode_bools(j.at("f2"));
    e.e = decode_bools(j.at("e"));
    e.f1_sum = decode_doubles(j.at("f1_sum"));
    e.f2_time = decode_doubles(j.at("f2_time"));
    e.first_failure = j.at("first_failure").get<int>();
    return e;
}

// ---- Sweeps ----

json to_json(const SweepSpec& s) {
    return {{"graph", s.graph},
            {"lambdas", encode_doubles(s.lambdas)},
            {"mus", encode_doubles(s.mus)},
            {"runs", s.runs},
            {"r_survive", s.r_survive},
            {"margin", s.margin},
            {"stop", to_json(s.stop)},
            {"pt_seed", s.pt_seed},
            {"seed_seed", s.seed_seed},
            {"threads", s.threads}};
}

// Missing optional keys keep their defaults so hand-written specs stay short.
template <>
SweepSpec from_json<SweepSpec>(const json& j) {
    SweepSpec s;
    s.graph = j.at("graph");
    s.lambdas = decode_doubles(j.at("lambdas"));
    s.mus = decode_doubles(j.at("mus"));
    s.runs = j.value("runs", s.runs);
    s.r_survive = j.value("r_survive", s.r_survive);
    s.margin = j.value("margin", s.margin);
    if (j.contains("stop")) s.stop = from_json<StopRule>(j.at("stop"));
    s.pt_seed = j.value("pt_seed", s.pt_seed);
    s.seed_seed = j.value("seed_seed", s.seed_seed);
    s.threads = j.value("threads", s.threads);
    return s;
}

json to_json(const SweepResult& r) {
    json cells = json::array();
    for (const auto& c : r.cells)
        cells.push_back({{"lambda", encode_double(c.lambda)},
                         {"mu", encode_double(c.mu)},
                         {"runs", c.runs},
                         {"fpp1", c.fpp1},
                         {"fppl", c.fppl},
                         {"coexist", c.coexist},
                         {"strong", c.strong},
                         {"extinct", c.extinct},
                         {"fppl_only", c.fppl_only},
                         {"undecided", c.undecided},
                         {"contaminated", c.contaminated},
                         {"usable", c.usable},
                         {"fpp1_ci", encode_interval(c.fpp1_ci)},
                         {"fppl_ci", encode_interval(c.fppl_ci)},
                         {"coexist_ci", encode_interval(c.coexist_ci)},
                         {"extinct_ci", encode_interval(c.extinct_ci)}});
    return {{"spec", to_json(r.spec)}, {"cells", std::move(cells)}};
}

template <>
SweepResult from_json<SweepResult>(const json& j) {
    SweepResult r;
    r.spec = from_json<SweepSpec>(j.at("spec"));
    for (const auto& c : j.at("cells")) {
        SweepCell cell;
        cell.lambda = decode_double(c.at("lambda"));
        cell.mu = decode_double(c.at("mu"));
        cell.runs = c.at("runs").get<std::int64_t>();
        cell.fpp1 = c.at("fpp1").get<std::int64_t>();
        cell.fppl = c.at("fppl").get<std::int64_t>();
        cell.coexist = c.at("coexist").get<std::int64_t>();
        cell.strong = c.at("strong").get<std::int64_t>();
        cell.extinct = c.at("extinct").get<std::int64_t>();
        cell.fppl_only = c.at("fppl_only").get<std::int64_t>();
        cell.undecided = c.at("undecided").get<std::int64_t>();
        cell.contaminated = c.at("contaminated").get<std::int64_t>();
        cell.usable = c.at("usable").get<bool>();
        cell.fpp1_ci = decode_interval(c.at("fpp1_ci"));
        cell.fppl_ci = decode_interval(c.at("fppl_ci"));
        cell.coexist_ci = decode_interval(c.at("coexist_ci"));
        cell.extinct_ci = decode_interval(c.at("extinct_ci"));
        r.cells.push_back(cell);
    }
    return r;
}

// ---- Kinds ----

template <> const char* document_kind<Graph>() { return "graph"; }
template <> const char* document_kind<Trace>() { return "trace"; }
template <> const char* document_kind<StopRule>() { return "stop_rule"; }
template <> const char* document_kind<OutcomeProxies>() { return "outcome"; }
template <> const char* document_kind<MdlaState>() { return "mdla_state"; }
template <> const char* document_kind<EmbeddedTree>() { return "embedded_tree"; }
template <> const char* document_kind<EscapeRay>() { return "escape_ray"; }
template <> const char* document_kind<ScaleParams>() { return "scale_params"; }
template <> const char* document_kind<CylinderVerdict>() { return "cylinder_verdict"; }
template <> const char* document_kind<GoodPathResult>() { return "good_path"; }
template <> const char* document_kind<BallChainPlan>() { return "ball_chain_plan"; }
template <> const char* document_kind<BallChainEvents>() { return "ball_chain_events"; }
template <> const char* document_kind<SweepSpec>() { return "sweep_spec"; }
template <> const char* document_kind<SweepResult>() { return "sweep_result"; }

// ---- Graph references ----

Graph build_graph(const json& ref, const std::string& base_dir) {
    if (!ref.is_object()) throw ParameterError("graph reference must be an object");
    if (ref.contains("file")) {
        std::filesystem::path p = ref.at("file").get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        return load_file<Graph>(p.string());
    }
    const std::string family = ref.value("family", std::string());
    const std::int64_t budget = ref.value("vertex_budget", kDefaultVertexBudget);
    auto need = [&](const char* key) {
        if (!ref.contains(key)) throw ParameterError("graph family " + family + " needs '" + key + "'");
        return ref.at(key);
    };
    if (family == "regular_tree")
        return generate_regular_tree(need("branching").get<int>(), need("depth").get<int>(), budget);
    if (family == "tessellation")
        return generate_tessellation(need("p").get<int>(), need("q").get<int>(), need("layers").get<int>(), budget);
    if (family == "lattice") return generate_lattice(need("d").get<int>(), need("radius").get<int>(), budget);
    if (family == "free_product")
        return generate_free_product(need("factors").get<std::vector<int>>(), need("radius").get<int>(), budget);
    if (family == "t3") return generate_t3(need("radius").get<int>(), budget);
    throw ParameterError("unknown graph family '" + family +
                         "' (expected regular_tree, tessellation, lattice, free_product, t3 or a file)");
}

}  // namespace fpphe
