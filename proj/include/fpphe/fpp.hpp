#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fpphe/graph.hpp"
#include "fpphe/stats.hpp"

namespace fpphe {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Mean-one exponential edge times as a pure function of (seed, edge).
class PassageTimeField {
public:
    using Override = std::function<double(VertexId, VertexId)>;

    explicit PassageTimeField(std::uint64_t seed = 0, double scale = 1.0);

    // Replaces every edge time; the callback receives (min, max) endpoints.
    static PassageTimeField forced(Override fn, std::uint64_t seed = 0);

    double operator()(VertexId u, VertexId v) const;

    std::uint64_t seed() const { return seed_; }
    double scale() const { return scale_; }
    bool is_forced() const { return static_cast<bool>(override_); }

private:
    std::uint64_t seed_;
    double scale_;
    Override override_;
};

// Independent Bernoulli(mu) seed indicators; the origin is never a seed.
class SeedField {
public:
    SeedField(std::uint64_t seed, double mu);

    // Explicit seed set; `mu` is only recorded in traces.
    static SeedField forced(std::vector<VertexId> seeds, double mu = 0.0);

    bool is_seed(VertexId v, VertexId origin) const;
    std::vector<char> materialize(const Graph& g) const;

    std::uint64_t seed() const { return seed_; }
    double mu() const { return mu_; }
    bool is_forced() const { return forced_.has_value(); }

private:
    std::uint64_t seed_;
    double mu_;
    std::optional<VertexSet> forced_;
};

struct StopRule {
    enum class Kind { None, Time, Count, Radius };
    Kind kind = Kind::None;
    double value = 0.0;

    static StopRule none() { return {}; }
    static StopRule time(double t) { return {Kind::Time, t}; }
    static StopRule count(std::int64_t n) { return {Kind::Count, static_cast<double>(n)}; }
    static StopRule radius(int r) { return {Kind::Radius, static_cast<double>(r)}; }

    // "none", "time:T", "count:N" or "radius:R".
    static StopRule parse(const std::string& text);
    std::string to_string() const;

    bool operator==(const StopRule&) const = default;
};

enum class Occupier : std::uint8_t { Unreached = 0, DormantSeed = 1, Fpp1 = 2, FppLambda = 3 };

// Attacking-process ids used for tie-breaking: FPP1 before FPPlambda.
inline constexpr int kProcessFpp1 = 1;
inline constexpr int kProcessFppLambda = 2;

struct Trace {
    double lambda = 1.0;
    double mu = 0.0;
    std::uint64_t pt_seed = 0;
    std::uint64_t seed_seed = 0;
    StopRule stop;
    VertexId origin = 0;
    VertexId richardson_seed = kNoVertex;  // set by run_richardson only

    std::vector<Occupier> state;
    std::vector<double> time;        // occupation time, infinity if never occupied
    std::vector<VertexId> pred;      // vertex whose attempt occupied or activated v
    std::vector<double> activation;  // seed activation time, infinity otherwise
    std::vector<char> seed;          // initial seed indicator
    std::vector<VertexId> order;     // occupations in event order

    bool stop_met = false;
    bool frontier_touched = false;
    double final_time = 0.0;

    VertexId vertex_count() const { return static_cast<VertexId>(state.size()); }
    std::int64_t count(Occupier who) const;
    bool operator==(const Trace&) const = default;
};

Trace run_fpphe(const Graph& g, double lambda, double mu, const PassageTimeField& pt,
                const SeedField& seeds, StopRule stop);

// Convenience overload building both fields from their seeds.
Trace run_fpphe(const Graph& g, double lambda, double mu, std::uint64_t pt_seed,
                std::uint64_t seed_seed, StopRule stop);

Trace run_richardson(const Graph& g, double lambda, VertexId seed_vertex,
                     const PassageTimeField& pt, StopRule stop);

// Multi-source first-passage times under weights t_e / rate; infinity beyond
// the horizon.
std::vector<double> run_single_fpp(const Graph& g, const VertexSet& sources, double rate,
                                   const PassageTimeField& pt, double horizon = kInfinity);

struct OutcomeProxies {
    int r_survive = 0;
    bool fpp1_survives = false;
    bool fppl_survives = false;
    bool coexist = false;
    bool extinction = false;
    bool fpp1_enclosed = false;
    bool fpp1_confined = false;  // seed-free component of the origin is finite and shallower than r_survive
    int fpp1_reach = 0;                    // deepest FPP1 vertex
    int fppl_diameter = 0;                 // lower bound on the largest cluster diameter
    std::vector<std::int64_t> cluster_sizes;  // FPPlambda components, descending
    double horizon = kInfinity;            // first frontier occupation; later events are ignored
    bool fppl_decided = true;              // false when a truncated run left FPPlambda short of r_survive

    bool operator==(const OutcomeProxies&) const = default;
};

// Finite-radius survival proxies. FPPlambda clusters are connected components
// of FPPlambda-occupied vertices, measured with graph distances. A trace that
// touched the frontier is read only up to its first frontier occupation, and
// refused unless FPP1 had already reached r_survive or been enclosed by then,
// or the seeds alone confine it.
// Graphs truncated within r_survive + margin of the origin are refused.
OutcomeProxies classify_outcome(const Graph& g, const Trace& trace, int r_survive, int margin = 2);

struct TailBounds {
    double exact_low = 0.0;      // P[Poi(S) >= l] = P[T(P) <= S]
    double bound_low = 0.0;      // 2 e^-S S^l / l!
    bool low_applicable = false; // l >= 2S
    double exact_high = 0.0;     // P[Poi(S) <= l]
    double tail_high = 0.0;      // P[Poi(S) <= l-1] = P[T(P) >= S]
    double bound_high = 0.0;     // l (S e / l)^l e^-S
    bool high_applicable = false;  // l <= S and S >= 1
};

TailBounds passage_tail_bounds(int l, double S);

double poisson_cdf(int k, double S);
double poisson_upper_tail(int k, double S);  // P[Poi(S) >= k]

struct SpreadRow {
    double T = 0.0;
    int outer_radius = 0;
    int inner_radius = 0;
    std::int64_t trials = 0;
    std::int64_t contaminated = 0;
    std::int64_t outer_hits = 0;
    std::int64_t inner_hits = 0;
    Interval outer_ci;
    Interval inner_ci;
};

struct SpreadReport {
    std::vector<SpreadRow> rows;
    Interval outer_rate;  // values of c with 1 - e^{-cT} <= CI upper end at every T
    Interval inner_rate;
    bool outer_consistent = true;
    bool inner_consistent = true;
    std::vector<double> flagged_outer_T;
    std::vector<double> flagged_inner_T;
};

// Monte Carlo frequencies of A_T ⊆ B(x, c_out rate T) and B(x, c_in rate T) ⊆ A_T.
// c_out may be infinity. Trials share one field per trial index across T. A
// T is flagged when its interval lies wholly below that of a smaller T, which
// no increasing 1 - e^{-cT} fits.
SpreadReport linear_spread_check(const Graph& g, VertexId x, double rate,
                                 const std::vector<double>& T_values, std::int64_t trials,
                                 std::uint64_t pt_seed_base, double c_in, double c_out);

}  // namespace fpphe
