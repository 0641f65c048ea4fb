#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "fpphe/graph.hpp"

namespace fpphe {

enum class Site : std::uint8_t { Empty = 0, Particle = 1, Aggregate = 2 };

struct MdlaStop {
    double time = std::numeric_limits<double>::infinity();
    std::int64_t aggregate_cap = std::numeric_limits<std::int64_t>::max();
};

struct GrowthPoint {
    double time = 0.0;
    std::int64_t size = 0;
    int radius = 0;

    bool operator==(const GrowthPoint&) const = default;
};

// One ring of a particle clock: waiting time and the direction slot in
// [0, 2d). Slots beyond the site's degree point out of the box.
struct ClockRing {
    double wait;
    int slot;
};

// The n-th ring (n = 0, 1, ...) of the particle that started at `particle`.
ClockRing mdla_ring(std::uint64_t seed, VertexId particle, std::uint64_t n, int slots);

struct MdlaState {
    double rho = 0.0;
    std::uint64_t seed = 0;
    int slots = 0;  // 2d
    double time = 0.0;

    std::vector<Site> site;
    // Per particle, ordered by starting site.
    std::vector<VertexId> start;
    std::vector<VertexId> position;
    std::vector<char> frozen;

    std::int64_t rings = 0;
    std::int64_t jumps = 0;
    std::int64_t exclusions = 0;    // suppressed jumps onto particles
    std::int64_t wall_hits = 0;     // suppressed jumps out of the box
    bool frontier_touched = false;  // aggregate reached the box boundary
    bool stop_met = false;
    std::vector<GrowthPoint> growth;

    std::int64_t aggregate_size() const;
    std::int64_t active_particles() const;
    int aggregate_radius(const Graph& lattice) const;
    bool operator==(const MdlaState&) const = default;
};

// Continuous-time MDLA on a box from generate_lattice. Each non-origin site
// starts with a particle independently with probability rho.
MdlaState run_mdla(const Graph& lattice, double rho, std::uint64_t seed, MdlaStop stop);

// Same dynamics from an explicit initial particle set. `rho` is only recorded.
MdlaState run_mdla_from(const Graph& lattice, const VertexSet& particles, std::uint64_t seed,
                        MdlaStop stop, double rho = 0.0);

std::vector<VertexId> mdla_initial_particles(const Graph& lattice, double rho, std::uint64_t seed);

}  // namespace fpphe
