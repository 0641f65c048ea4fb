#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpphe/fpp.hpp"
#include "fpphe/graph.hpp"
#include "fpphe/stats.hpp"

namespace fpphe {

struct SweepSpec {
    nlohmann::json graph;  // reference accepted by build_graph
    std::vector<double> lambdas;
    std::vector<double> mus;
    std::int64_t runs = 1;
    int r_survive = 1;
    int margin = 2;
    StopRule stop;
    std::uint64_t pt_seed = 1;
    std::uint64_t seed_seed = 2;
    int threads = 0;  // 0: FPPHE_THREADS, else hardware concurrency

    bool operator==(const SweepSpec&) const = default;
};

// Outcome counts of one (lambda, mu) cell. Every run falls in exactly one of
// coexist, strong, extinct, fppl_only, undecided or contaminated; fpp1 and
// fppl are the marginal survival counts.
struct SweepCell {
    double lambda = 1.0;
    double mu = 0.0;
    std::int64_t runs = 0;
    std::int64_t fpp1 = 0;
    std::int64_t fppl = 0;
    std::int64_t coexist = 0;
    std::int64_t strong = 0;     // FPP1 survives, FPPlambda does not
    std::int64_t extinct = 0;    // FPP1 enclosed or confined short of r_survive
    std::int64_t fppl_only = 0;  // FPPlambda survives, FPP1 undecided
    std::int64_t undecided = 0;
    std::int64_t contaminated = 0;
    bool usable = true;  // false when every run was contaminated

    // Wilson intervals over the uncontaminated runs.
    Interval fpp1_ci;
    Interval fppl_ci;
    Interval coexist_ci;
    Interval extinct_ci;

    std::int64_t clean_runs() const { return runs - contaminated; }
    bool operator==(const SweepCell&) const = default;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepCell> cells;  // lambda-major over the grids

    bool operator==(const SweepResult&) const = default;
};

struct SweepTiming {
    std::vector<double> cell_seconds;
    double total_seconds = 0.0;
    int threads = 1;
};

// Per-run field seeds depend on the cell's (lambda, mu) values and the run
// index, never on the cell position, so reordering the grids permutes rows
// without changing them.
std::uint64_t run_pt_seed(const SweepSpec& spec, double lambda, double mu, std::int64_t run);
std::uint64_t run_seed_seed(const SweepSpec& spec, double lambda, double mu, std::int64_t run);

int resolve_threads(int requested);

SweepResult sweep(const Graph& g, const SweepSpec& spec, SweepTiming* timing = nullptr);

// Rows of lambda,mu,runs,fpp1,fppl,coexist,extinct,contaminated,ci_low,ci_high;
// the interval is for the FPP1 survival rate.
std::string sweep_csv(const SweepResult& r);

}  // namespace fpphe
