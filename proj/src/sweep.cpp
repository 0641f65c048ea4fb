#include "fpphe/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "fpphe/errors.hpp"
#include "fpphe/rng.hpp"

namespace fpphe {

namespace {

// Total vertex visits a sweep may schedule.
constexpr double kWorkBudget = 2e10;

enum class RunClass : std::uint8_t { Coexist, Strong, Extinct, FpplOnly, Undecided, Contaminated };

struct RunOutcome {
    RunClass cls = RunClass::Contaminated;
    bool fpp1 = false;
    bool fppl = false;
    double seconds = 0.0;
};

void validate(const Graph& g, const SweepSpec& spec) {
    if (spec.lambdas.empty() || spec.mus.empty()) throw ParameterError("sweep grids must be non-empty");
    if (spec.runs < 1) throw ParameterError("runs per cell must be at least 1");
    if (spec.r_survive < 1) throw ParameterError("r_survive must be positive");
    if (spec.margin < 0) throw ParameterError("margin must be non-negative");
    for (double l : spec.lambdas)
        if (!(l > 0.0) || !std::isfinite(l)) throw ParameterError("lambda must be positive and finite");
    for (double m : spec.mus)
        if (!(m >= 0.0 && m < 1.0)) throw ParameterError("mu must lie in [0, 1)");
    const double work = static_cast<double>(g.vertex_count()) * static_cast<double>(spec.runs) *
                        static_cast<double>(spec.lambdas.size() * spec.mus.size());
    if (work > kWorkBudget)
        throw SizeError("sweep would schedule " + std::to_string(work) + " vertex visits, above the budget");
}

RunOutcome run_one(const Graph& g, const SweepSpec& spec, double lambda, double mu, std::int64_t run) {
    const auto start = std::chrono::steady_clock::now();
    RunOutcome out;
    const Trace t = run_fpphe(g, lambda, mu, run_pt_seed(spec, lambda, mu, run),
                              run_seed_seed(spec, lambda, mu, run), spec.stop);
    try {
        const OutcomeProxies o = classify_outcome(g, t, spec.r_survive, spec.margin);
        out.fpp1 = o.fpp1_survives;
        out.fppl = o.fppl_survives;
        if (o.fpp1_survives && !o.fppl_decided)
            out.cls = RunClass::Undecided;
        else if (o.fpp1_survives)
            out.cls = o.fppl_survives ? RunClass::Coexist : RunClass::Strong;
        else if (o.extinction)
            out.cls = RunClass::Extinct;
        else
            out.cls = o.fppl_survives ? RunClass::FpplOnly : RunClass::Undecided;
    } catch (const ContaminationError&) {
        out.cls = RunClass::Contaminated;
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace

std::uint64_t run_pt_seed(const SweepSpec& spec, double lambda, double mu, std::int64_t run) {
    return mix(spec.pt_seed, std::bit_cast<std::uint64_t>(lambda), std::bit_cast<std::uint64_t>(mu),
               static_cast<std::uint64_t>(run));
}

std::uint64_t run_seed_seed(const SweepSpec& spec, double lambda, double mu, std::int64_t run) {
    return mix(spec.seed_seed ^ 0xa0761d6478bd642fULL, std::bit_cast<std::uint64_t>(lambda),
               std::bit_cast<std::uint64_t>(mu), static_cast<std::uint64_t>(run));
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FPPHE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult sweep(const Graph& g, const SweepSpec& spec, SweepTiming* timing) {
    validate(g, spec);
    const auto wall_start = std::chrono::steady_clock::now();

    const std::size_t n_cells = spec.lambdas.size() * spec.mus.size();
    const std::size_t runs = static_cast<std::size_t>(spec.runs);
    const std::size_t jobs = n_cells * runs;
    std::vector<RunOutcome> outcomes(jobs);

    auto cell_params = [&](std::size_t cell) {
        return std::pair{spec.lambdas[cell / spec.mus.size()], spec.mus[cell % spec.mus.size()]};
    };

    const int threads = static_cast<int>(std::min<std::size_t>(resolve_threads(spec.threads), jobs));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t job; !failed && (job = next.fetch_add(1)) < jobs;) {
            try {
                const auto [lambda, mu] = cell_params(job / runs);
                outcomes[job] = run_one(g, spec, lambda, mu, static_cast<std::int64_t>(job % runs));
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    SweepResult result;
    result.spec = spec;
    if (timing) *timing = SweepTiming{{}, 0.0, threads};
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        SweepCell c;
        std::tie(c.lambda, c.mu) = cell_params(cell);
        c.runs = spec.runs;
        double seconds = 0.0;
        for (std::size_t r = 0; r < runs; ++r) {
            const RunOutcome& o = outcomes[cell * runs + r];
            seconds += o.seconds;
            switch (o.cls) {
                case RunClass::Coexist: ++c.coexist; break;
                case RunClass::Strong: ++c.strong; break;
                case RunClass::Extinct: ++c.extinct; break;
                case RunClass::FpplOnly: ++c.fppl_only; break;
                case RunClass::Undecided: ++c.undecided; break;
                case RunClass::Contaminated: ++c.contaminated; break;
            }
            c.fpp1 += o.fpp1;
            c.fppl += o.fppl;
        }
        const std::int64_t clean = c.clean_runs();
        c.usable = clean > 0;
        c.fpp1_ci = wilson_interval(c.fpp1, clean);
        c.fppl_ci = wilson_interval(c.fppl, clean);
        c.coexist_ci = wilson_interval(c.coexist, clean);
        c.extinct_ci = wilson_interval(c.extinct, clean);
        result.cells.push_back(c);
        if (timing) timing->cell_seconds.push_back(seconds);
    }
    if (timing)
        timing->total_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return result;
}

std::string sweep_csv(const SweepResult& r) {
    std::string out = "lambda,mu,runs,fpp1,fppl,coexist,extinct,contaminated,ci_low,ci_high\n";
    for (const auto& c : r.cells) {
        out += format_double(c.lambda) + ',' + format_double(c.mu) + ',' + std::to_string(c.runs) + ',' +
               std::to_string(c.fpp1) + ',' + std::to_string(c.fppl) + ',' + std::to_string(c.coexist) + ',' +
               std::to_string(c.extinct) + ',' + std::to_string(c.contaminated) + ',' +
               format_double(c.fpp1_ci.low) + ',' + format_double(c.fpp1_ci.high) + '\n';
    }
    return out;
}

}  // namespace fpphe
