#include "fpphe/mdla.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "fpphe/errors.hpp"
#include "fpphe/rng.hpp"

namespace fpphe {

namespace {

constexpr std::uint64_t kInitSalt = 0x1a7715e5ULL;
constexpr std::uint64_t kWaitSalt = 1;
constexpr std::uint64_t kSlotSalt = 2;

int lattice_slots(const Graph& g) {
    if (g.family().name != "lattice") throw ArgumentError("MDLA runs on boxes from generate_lattice");
    return 2 * g.family().params.at("d").get<int>();
}

}  // namespace

ClockRing mdla_ring(std::uint64_t seed, VertexId particle, std::uint64_t n, int slots) {
    const auto p = static_cast<std::uint64_t>(particle);
    const double wait = exponential1(mix(seed, p, n, kWaitSalt));
    const auto slot = static_cast<int>(Rng(mix(seed, p, n, kSlotSalt)).below(static_cast<std::uint64_t>(slots)));
    return {wait, slot};
}

std::int64_t MdlaState::aggregate_size() const { return std::count(site.begin(), site.end(), Site::Aggregate); }

std::int64_t MdlaState::active_particles() const { return std::count(frozen.begin(), frozen.end(), 0); }

int MdlaState::aggregate_radius(const Graph& lattice) const {
    int r = 0;
    for (VertexId v = 0; v < lattice.vertex_count(); ++v)
        if (site[v] == Site::Aggregate) r = std::max(r, lattice.depth(v));
    return r;
}

std::vector<VertexId> mdla_initial_particles(const Graph& lattice, double rho, std::uint64_t seed) {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < lattice.vertex_count(); ++v)
        if (v != lattice.origin() && unit_open(mix(seed, kInitSalt, static_cast<std::uint64_t>(v))) < rho)
            out.push_back(v);
    return out;
}

MdlaState run_mdla(const Graph& lattice, double rho, std::uint64_t seed, MdlaStop stop) {
    if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must lie in (0,1)");
    return run_mdla_from(lattice, VertexSet(mdla_initial_particles(lattice, rho, seed)), seed, stop, rho);
}

MdlaState run_mdla_from(const Graph& lattice, const VertexSet& particles, std::uint64_t seed,
                        MdlaStop stop, double rho) {
    const int slots = lattice_slots(lattice);
    if (particles.contains(lattice.origin())) throw ArgumentError("the origin cannot hold a particle");
    if (!(stop.time >= 0.0) || stop.aggregate_cap < 1) throw ParameterError("bad MDLA stop condition");

    MdlaState s;
    s.rho = rho;
    s.seed = seed;
    s.slots = slots;
    s.site.assign(lattice.vertex_count(), Site::Empty);
    s.site[lattice.origin()] = Site::Aggregate;
    s.start = particles.members();
    s.position = s.start;
    s.frozen.assign(s.start.size(), 0);
    s.frontier_touched = lattice.is_frontier(lattice.origin());
    s.growth.push_back({0.0, 1, 0});

    // (ring time, particle index); each active particle has exactly one pending ring.
    using Ring = std::pair<double, std::size_t>;
    std::priority_queue<Ring, std::vector<Ring>, std::greater<>> queue;
    std::vector<std::uint64_t> ring_count(s.start.size(), 0);
    for (std::size_t k = 0; k < s.start.size(); ++k) {
        s.site[s.start[k]] = Site::Particle;
        queue.push({mdla_ring(seed, s.start[k], 0, slots).wait, k});
    }

    std::int64_t aggregate = 1;
    int radius = 0;
    if (aggregate >= stop.aggregate_cap) {
        s.stop_met = true;
        return s;
    }
    while (!queue.empty()) {
        const auto [t, k] = queue.top();
        if (t > stop.time) {
            s.time = stop.time;
            s.stop_met = true;
            return s;
        }
        queue.pop();
        s.time = t;
        ++s.rings;
        const VertexId x = s.position[k];
        const int slot = mdla_ring(seed, s.start[k], ring_count[k], slots).slot;
        const auto nb = lattice.neighbors(x);
        if (slot >= static_cast<int>(nb.size())) {
            ++s.wall_hits;
        } else {
            const VertexId y = nb[slot];
            if (s.site[y] == Site::Particle) {
                ++s.exclusions;
            } else if (s.site[y] == Site::Empty) {
                s.site[x] = Site::Empty;
                s.site[y] = Site::Particle;
                s.position[k] = y;
                ++s.jumps;
            } else {
                s.site[x] = Site::Aggregate;
                s.frozen[k] = 1;
                if (lattice.is_frontier(x)) s.frontier_touched = true;
                ++aggregate;
                radius = std::max(radius, lattice.depth(x));
                s.growth.push_back({t, aggregate, radius});
                if (aggregate >= stop.aggregate_cap) {
                    s.stop_met = true;
                    return s;
                }
                continue;
            }
        }
        ++ring_count[k];
        queue.push({t + mdla_ring(seed, s.start[k], ring_count[k], slots).wait, k});
    }
    return s;
}

}  // namespace fpphe
