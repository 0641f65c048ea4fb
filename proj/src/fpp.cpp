#include "fpphe/fpp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <tuple>

#include "fpphe/errors.hpp"
#include "fpphe/metric.hpp"
#include "fpphe/rng.hpp"

namespace fpphe {

namespace {

constexpr std::uint64_t kSeedSalt = 0x5eed5eed0f0f0f0fULL;

std::uint64_t edge_key(VertexId u, VertexId v) {
    const auto a = static_cast<std::uint32_t>(std::min(u, v));
    const auto b = static_cast<std::uint32_t>(std::max(u, v));
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct Attempt {
    double time;
    int process;
    VertexId target;
    VertexId source;

    bool operator>(const Attempt& o) const {
        return std::tie(time, process, target, source) > std::tie(o.time, o.process, o.target, o.source);
    }
};

using AttemptQueue = std::priority_queue<Attempt, std::vector<Attempt>, std::greater<>>;

class Simulation {
public:
    Simulation(const Graph& g, double lambda, const PassageTimeField& pt, StopRule stop, Trace& trace)
        : g_(g), lambda_(lambda), pt_(pt), stop_(stop), t_(trace) {}

    bool occupy(VertexId v, Occupier who, double time, VertexId source) {
        t_.state[v] = who;
        t_.time[v] = time;
        t_.pred[v] = source;
        t_.order.push_back(v);
        t_.final_time = time;
        if (g_.is_frontier(v)) t_.frontier_touched = true;
        ++occupied_;
        const int process = who == Occupier::Fpp1 ? kProcessFpp1 : kProcessFppLambda;
        const double rate = who == Occupier::Fpp1 ? 1.0 : lambda_;
        for (VertexId w : g_.neighbors(v)) {
            const Occupier s = t_.state[w];
            if (s == Occupier::Unreached || s == Occupier::DormantSeed)
                queue_.push({time + pt_(v, w) / rate, process, w, v});
        }
        return should_stop(v);
    }

    void run() {
        while (!queue_.empty()) {
            const Attempt a = queue_.top();
            if (stop_.kind == StopRule::Kind::Time && a.time > stop_.value) {
                t_.stop_met = true;
                return;
            }
            queue_.pop();
            const Occupier s = t_.state[a.target];
            bool done = false;
            if (s == Occupier::Unreached) {
                done = occupy(a.target, a.process == kProcessFpp1 ? Occupier::Fpp1 : Occupier::FppLambda,
                              a.time, a.source);
            } else if (s == Occupier::DormantSeed) {
                // The attempt fails and wakes the seed.
                t_.activation[a.target] = a.time;
                done = occupy(a.target, Occupier::FppLambda, a.time, a.source);
            }
            if (done) {
                t_.stop_met = true;
                return;
            }
        }
    }

private:
    bool should_stop(VertexId v) const {
        switch (stop_.kind) {
            case StopRule::Kind::Count: return static_cast<double>(occupied_) >= stop_.value;
            case StopRule::Kind::Radius: return g_.depth(v) >= stop_.value;
            default: return false;
        }
    }

    const Graph& g_;
    double lambda_;
    const PassageTimeField& pt_;
    StopRule stop_;
    Trace& t_;
    AttemptQueue queue_;
    std::int64_t occupied_ = 0;
};

void validate_run(const Graph& g, double lambda, StopRule stop) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be positive");
    if (g.vertex_count() == 0) throw ArgumentError("empty graph");
    if (stop.kind != StopRule::Kind::None && !(stop.value >= 0.0))
        throw ParameterError("stop value must be non-negative");
}

Trace empty_trace(const Graph& g, double lambda, double mu, std::uint64_t pt_seed,
                  std::uint64_t seed_seed, StopRule stop) {
    const auto n = static_cast<std::size_t>(g.vertex_count());
    Trace t;
    t.lambda = lambda;
    t.mu = mu;
    t.pt_seed = pt_seed;
    t.seed_seed = seed_seed;
    t.stop = stop;
    t.origin = g.origin();
    t.state.assign(n, Occupier::Unreached);
    t.time.assign(n, kInfinity);
    t.pred.assign(n, kNoVertex);
    t.activation.assign(n, kInfinity);
    t.seed.assign(n, 0);
    return t;
}

}  // namespace

PassageTimeField::PassageTimeField(std::uint64_t seed, double scale) : seed_(seed), scale_(scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("time scale must be positive");
}

PassageTimeField PassageTimeField::forced(Override fn, std::uint64_t seed) {
    PassageTimeField f(seed);
    f.override_ = std::move(fn);
    return f;
}

double PassageTimeField::operator()(VertexId u, VertexId v) const {
    if (override_) return override_(std::min(u, v), std::max(u, v));
    const double t = exponential1(mix(seed_, edge_key(u, v)));
    return scale_ == 1.0 ? t : scale_ * t;
}

SeedField::SeedField(std::uint64_t seed, double mu) : seed_(seed), mu_(mu) {
    if (!(mu >= 0.0 && mu < 1.0)) throw ParameterError("mu must lie in [0,1)");
}

SeedField SeedField::forced(std::vector<VertexId> seeds, double mu) {
    SeedField f(0, mu);
    f.forced_ = VertexSet(std::move(seeds));
    return f;
}

bool SeedField::is_seed(VertexId v, VertexId origin) const {
    if (v == origin) return false;
    if (forced_) return forced_->contains(v);
    if (mu_ == 0.0) return false;
    return unit_open(mix(seed_, kSeedSalt, static_cast<std::uint64_t>(v))) < mu_;
}

std::vector<char> SeedField::materialize(const Graph& g) const {
    std::vector<char> out(g.vertex_count(), 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) out[v] = is_seed(v, g.origin()) ? 1 : 0;
    return out;
}

StopRule StopRule::parse(const std::string& text) {
    if (text == "none") return none();
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("stop rule must look like kind:value");
    const std::string kind = text.substr(0, colon);
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1) throw ParseError("trailing characters in stop rule");
    } catch (const std::logic_error&) {
        throw ParseError("bad stop rule value: " + text);
    }
    if (!(value >= 0.0)) throw ParseError("stop value must be non-negative");
    if (kind == "time") return time(value);
    if (kind == "count") return count(static_cast<std::int64_t>(value));
    if (kind == "radius") return radius(static_cast<int>(value));
    throw ParseError("unknown stop rule kind: " + kind);
}

std::string StopRule::to_string() const {
    switch (kind) {
        case Kind::Time: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "time:%.17g", value);
            return buf;
        }
        case Kind::Count: return "count:" + std::to_string(static_cast<std::int64_t>(value));
        case Kind::Radius: return "radius:" + std::to_string(static_cast<int>(value));
        default: return "none";
    }
}

std::int64_t Trace::count(Occupier who) const {
    return std::count(state.begin(), state.end(), who);
}

Trace run_fpphe(const Graph& g, double lambda, double mu, const PassageTimeField& pt,
                const SeedField& seeds, StopRule stop) {
    validate_run(g, lambda, stop);
    if (seeds.mu() != mu) throw ConsistencyError("seed field was built for a different mu");
    Trace t = empty_trace(g, lambda, mu, pt.seed(), seeds.seed(), stop);
    t.seed = seeds.materialize(g);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (t.seed[v]) t.state[v] = Occupier::DormantSeed;
    Simulation sim(g, lambda, pt, stop, t);
    if (sim.occupy(g.origin(), Occupier::Fpp1, 0.0, kNoVertex)) {
        t.stop_met = true;
        return t;
    }
    sim.run();
    return t;
}

Trace run_fpphe(const Graph& g, double lambda, double mu, std::uint64_t pt_seed,
                std::uint64_t seed_seed, StopRule stop) {
    return run_fpphe(g, lambda, mu, PassageTimeField(pt_seed), SeedField(seed_seed, mu), stop);
}

Trace run_richardson(const Graph& g, double lambda, VertexId seed_vertex,
                     const PassageTimeField& pt, StopRule stop) {
    validate_run(g, lambda, stop);
    if (seed_vertex < 0 || seed_vertex >= g.vertex_count() || seed_vertex == g.origin())
        throw ArgumentError("seed vertex must be a vertex other than the origin");
    Trace t = empty_trace(g, lambda, 0.0, pt.seed(), 0, stop);
    t.richardson_seed = seed_vertex;
    t.seed[seed_vertex] = 1;
    t.activation[seed_vertex] = 0.0;
    Simulation sim(g, lambda, pt, stop, t);
    if (sim.occupy(g.origin(), Occupier::Fpp1, 0.0, kNoVertex) ||
        sim.occupy(seed_vertex, Occupier::FppLambda, 0.0, kNoVertex)) {
        t.stop_met = true;
        return t;
    }
    sim.run();
    return t;
}

std::vector<double> run_single_fpp(const Graph& g, const VertexSet& sources, double rate,
                                   const PassageTimeField& pt, double horizon) {
    if (sources.empty()) throw ArgumentError("run_single_fpp needs at least one source");
    if (!(rate > 0.0)) throw ParameterError("rate must be positive");
    std::vector<double> time(g.vertex_count(), kInfinity);
    std::vector<char> done(g.vertex_count(), 0);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (VertexId s : sources) {
        time[s] = 0.0;
        queue.push({0.0, s});
    }
    while (!queue.empty()) {
        const auto [t, u] = queue.top();
        queue.pop();
        if (done[u]) continue;
        if (t > horizon) break;
        done[u] = 1;
        for (VertexId w : g.neighbors(u)) {
            if (done[w]) continue;
            const double cand = t + pt(u, w) / rate;
            if (cand < time[w]) {
                time[w] = cand;
                queue.push({cand, w});
            }
        }
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (!done[v]) time[v] = kInfinity;
    return time;
}

OutcomeProxies classify_outcome(const Graph& g, const Trace& trace, int r_survive, int margin) {
    if (trace.vertex_count() != g.vertex_count())
        throw ConsistencyError("trace does not belong to this graph");
    if (r_survive < 1) throw ParameterError("r_survive must be positive");
    int frontier_depth = kFar;
    for (VertexId f : g.frontier()) frontier_depth = std::min(frontier_depth, g.depth(f));
    if (frontier_depth != kFar && frontier_depth <= r_survive + margin)
        throw ContaminationError("graph is truncated at depth " + std::to_string(frontier_depth) +
                                 ", within r_survive + margin");

    // Before the first frontier occupation the truncated run coincides with
    // the run on the full graph, so only that prefix is used.
    OutcomeProxies out;
    out.r_survive = r_survive;
    if (trace.frontier_touched)
        for (VertexId f : g.frontier()) out.horizon = std::min(out.horizon, trace.time[f]);
    const double horizon = out.horizon;
    auto occupied_by = [&](VertexId v, Occupier who) { return trace.state[v] == who && trace.time[v] < horizon; };

    out.fpp1_enclosed = true;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (trace.state[v] != Occupier::Fpp1) continue;
        if (!(trace.time[v] < horizon)) {
            out.fpp1_enclosed = false;
            continue;
        }
        out.fpp1_reach = std::max(out.fpp1_reach, g.depth(v));
        for (VertexId w : g.neighbors(v))
            if (!trace.seed[w] && !(trace.time[w] < horizon)) out.fpp1_enclosed = false;
    }
    out.fpp1_survives = out.fpp1_reach >= r_survive;

    // FPP1 never leaves the seed-free component of the origin. When that
    // component is shallower than r_survive and clear of the frontier, it is
    // the same component in the full graph.
    if (!out.fpp1_survives && !out.fpp1_enclosed) {
        std::vector<char> in(g.vertex_count(), 0);
        std::vector<VertexId> comp{g.origin()};
        in[g.origin()] = 1;
        out.fpp1_confined = true;
        for (std::size_t h = 0; h < comp.size() && out.fpp1_confined; ++h) {
            const VertexId v = comp[h];
            if (g.is_frontier(v) || g.depth(v) >= r_survive) out.fpp1_confined = false;
            for (VertexId w : g.neighbors(v))
                if (!in[w] && !trace.seed[w]) {
                    in[w] = 1;
                    comp.push_back(w);
                }
        }
    }
    if (trace.frontier_touched && !out.fpp1_survives && !out.fpp1_enclosed && !out.fpp1_confined)
        throw ContaminationError("trace reached the truncation frontier before FPP1 was decided");

    std::vector<char> seen(g.vertex_count(), 0);
    BoundedBfs bfs(g);
    for (VertexId s = 0; s < g.vertex_count(); ++s) {
        if (!occupied_by(s, Occupier::FppLambda) || seen[s]) continue;
        std::vector<VertexId> comp{s};
        seen[s] = 1;
        for (std::size_t h = 0; h < comp.size(); ++h)
            for (VertexId w : g.neighbors(comp[h]))
                if (!seen[w] && occupied_by(w, Occupier::FppLambda)) {
                    seen[w] = 1;
                    comp.push_back(w);
                }
        out.cluster_sizes.push_back(static_cast<std::int64_t>(comp.size()));
        if (static_cast<std::int64_t>(comp.size()) - 1 <= out.fppl_diameter) continue;

        // Farthest member from `from` within radius r_survive; -1 if some
        // member lies beyond it.
        auto sweep = [&](VertexId from, VertexId& far) {
            bfs.run(from, r_survive);
            int ecc = 0;
            far = from;
            for (VertexId v : comp) {
                const int d = bfs.dist(v);
                if (d < 0) {
                    far = v;
                    return -1;
                }
                if (d > ecc) {
                    ecc = d;
                    far = v;
                }
            }
            return ecc;
        };
        VertexId b = s;
        VertexId c = s;
        int diameter = 0;
        const int ecc_a = sweep(s, b);
        if (ecc_a < 0) {
            diameter = r_survive;
        } else {
            const int ecc_b = sweep(b, c);
            diameter = ecc_b < 0 ? r_survive : std::max(ecc_a, ecc_b);
            if (diameter < r_survive && 2 * ecc_a >= r_survive) {
                for (VertexId v : comp) {
                    const int e = sweep(v, c);
                    diameter = e < 0 ? r_survive : std::max(diameter, e);
                    if (diameter >= r_survive) break;
                }
            }
        }
        out.fppl_diameter = std::max(out.fppl_diameter, std::min(diameter, r_survive));
    }
    std::sort(out.cluster_sizes.rbegin(), out.cluster_sizes.rend());
    out.fppl_survives = out.fppl_diameter >= r_survive;
    out.fppl_decided = !trace.frontier_touched || out.fppl_survives;
    out.coexist = out.fpp1_survives && out.fppl_survives;
    out.extinction = (out.fpp1_enclosed || out.fpp1_confined) && !out.fpp1_survives;
    return out;
}

double poisson_cdf(int k, double S) {
    if (k < 0) return 0.0;
    double sum = 0.0;
    for (int i = 0; i <= k; ++i) sum += std::exp(-S + i * std::log(S) - std::lgamma(i + 1.0));
    return std::min(1.0, sum);
}

double poisson_upper_tail(int k, double S) {
    if (k <= 0) return 1.0;
    // Sum the tail directly so small probabilities keep full relative precision.
    double sum = 0.0;
    for (int i = k;; ++i) {
        const double term = std::exp(-S + i * std::log(S) - std::lgamma(i + 1.0));
        sum += term;
        if (i > S && term < 1e-18 * sum) break;
        if (i > k + 100000) break;
    }
    return std::min(1.0, sum);
}

TailBounds passage_tail_bounds(int l, double S) {
    if (l < 1 || !(S > 0.0) || !std::isfinite(S))
        throw ArgumentError("tail bounds need l >= 1 and S > 0");
    TailBounds b;
    b.exact_low = poisson_upper_tail(l, S);
    b.bound_low = 2.0 * std::exp(-S + l * std::log(S) - std::lgamma(l + 1.0));
    b.low_applicable = l >= 2.0 * S;
    b.exact_high = poisson_cdf(l, S);
    b.tail_high = poisson_cdf(l - 1, S);
    b.bound_high = l * std::exp(l * std::log(S * std::exp(1.0) / l) - S);
    b.high_applicable = l <= S && S >= 1.0;
    if (b.low_applicable && b.exact_low > b.bound_low)
        throw ConsistencyError("lower-tail bound violated");
    if (b.high_applicable && b.exact_high > b.bound_high)
        throw ConsistencyError("upper-tail bound violated");
    return b;
}

namespace {

// Range of c with 1 - e^{-cT} inside the interval.
Interval rate_range(const Interval& ci, double T) {
    const double lo = ci.low >= 1.0 ? kInfinity : -std::log1p(-ci.low) / T;
    const double hi = ci.high >= 1.0 ? kInfinity : -std::log1p(-ci.high) / T;
    return {lo, hi};
}

// The containment bound is one-sided, P >= 1 - e^{-cT}, so the admissible
// rates at one T are [0, c_hi(T)] and the fit is their intersection. The form
// is increasing in T; a frequency significantly below that of a smaller T
// (disjoint intervals) cannot be fitted by any c and is flagged.
void fit_rate(const std::vector<SpreadRow>& rows, bool outer, Interval& rate, bool& consistent,
              std::vector<double>& flagged) {
    rate = {0.0, kInfinity};
    std::vector<const SpreadRow*> used;
    for (const auto& row : rows)
        if (row.trials - row.contaminated > 0) used.push_back(&row);
    std::sort(used.begin(), used.end(), [](const SpreadRow* a, const SpreadRow* b) { return a->T < b->T; });
    double best_low = 0.0;
    for (const SpreadRow* row : used) {
        const Interval& ci = outer ? row->outer_ci : row->inner_ci;
        rate.high = std::min(rate.high, rate_range(ci, row->T).high);
        if (ci.high < best_low) flagged.push_back(row->T);
        best_low = std::max(best_low, ci.low);
    }
    consistent = flagged.empty() && rate.high > 0.0;
}

}  // namespace

SpreadReport linear_spread_check(const Graph& g, VertexId x, double rate,
                                 const std::vector<double>& T_values, std::int64_t trials,
                                 std::uint64_t pt_seed_base, double c_in, double c_out) {
    if (x < 0 || x >= g.vertex_count()) throw ArgumentError("vertex out of range");
    if (!(rate > 0.0) || trials < 1 || T_values.empty())
        throw ParameterError("spread check needs rate > 0, trials >= 1 and T values");
    if (!(c_in >= 0.0) || !(c_out > 0.0)) throw ParameterError("need c_in >= 0 and c_out > 0");
    double t_max = 0.0;
    for (double T : T_values) {
        if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("T values must be positive");
        t_max = std::max(t_max, T);
    }

    SpreadReport report;
    for (double T : T_values) {
        SpreadRow row;
        row.T = T;
        row.trials = trials;
        row.inner_radius = static_cast<int>(std::floor(c_in * rate * T));
        row.outer_radius = std::isinf(c_out) ? kFar : static_cast<int>(std::floor(c_out * rate * T));
        if (row.outer_radius != kFar && g.frontier_distance(x) != kFar &&
            row.outer_radius >= g.frontier_distance(x))
            throw RangeError("outer ball reaches the truncation frontier");
        report.rows.push_back(row);
    }

    const auto dist = hop_distances(g, {x});
    for (std::int64_t i = 0; i < trials; ++i) {
        const PassageTimeField pt(mix(pt_seed_base, static_cast<std::uint64_t>(i)));
        const auto time = run_single_fpp(g, VertexSet{x}, rate, pt, t_max);
        for (auto& row : report.rows) {
            bool contaminated = false;
            bool outer = true;
            bool inner = true;
            for (VertexId v = 0; v < g.vertex_count(); ++v) {
                const bool in_a = time[v] <= row.T;
                if (in_a && g.is_frontier(v)) contaminated = true;
                if (in_a && row.outer_radius != kFar && (dist[v] < 0 || dist[v] > row.outer_radius))
                    outer = false;
                if (!in_a && dist[v] >= 0 && dist[v] <= row.inner_radius) inner = false;
            }
            if (contaminated) {
                ++row.contaminated;
                continue;
            }
            row.outer_hits += outer;
            row.inner_hits += inner;
        }
    }
    for (auto& row : report.rows) {
        const std::int64_t m = row.trials - row.contaminated;
        row.outer_ci = wilson_interval(row.outer_hits, m);
        row.inner_ci = wilson_interval(row.inner_hits, m);
    }
    fit_rate(report.rows, true, report.outer_rate, report.outer_consistent, report.flagged_outer_T);
    fit_rate(report.rows, false, report.inner_rate, report.inner_consistent, report.flagged_inner_T);
    return report;
}

}  // namespace fpphe
