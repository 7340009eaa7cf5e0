#pragma once

#include "mgsize/core.hpp"
#include "mgsize/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

// Global-best particle swarm minimizer, independent of the microgrid model.
namespace mgsize::pso
{

struct Bound
{
    double lower = 0.0;
    double upper = 1.0;
};

struct Settings
{
    std::size_t swarm_size = 50;
    std::size_t iterations = 200;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    std::uint64_t seed = 1;
    std::size_t threads = 1;

    void validate() const
    {
        if (swarm_size < 2) {
            throw Error("swarm_size must be >= 2");
        }
        if (!(inertia >= 0.0 && cognitive >= 0.0 && social >= 0.0)) {
            throw Error("PSO coefficients must be non-negative");
        }
    }
};

/// What a fitness function returns: the value to minimize and whether the
/// point satisfies the caller's constraints.
struct Score
{
    double value = std::numeric_limits<double>::infinity();
    bool feasible = true;
};

struct HistoryEntry
{
    std::size_t iteration = 0;
    double best = 0.0;
    bool feasible = false;

    friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct Result
{
    std::vector<double> best_position;   // best feasible if any, else best overall
    Score best_score;
    bool found_feasible = false;
    std::vector<HistoryEntry> history; // entry 0 is the initial swarm
    std::size_t evaluations = 0;
};

namespace detail
{

/// Mirrors an out-of-range coordinate back inside and flips its velocity.
inline void reflect(double& x, double& v, const Bound& b)
{
    if (x < b.lower) {
        x = b.lower + (b.lower - x);
        v = -v;
    } else if (x > b.upper) {
        x = b.upper - (x - b.upper);
        v = -v;
    }
    if (x < b.lower || x > b.upper) {
        x = x < b.lower ? b.lower : b.upper;
        v = 0.0;
    }
}

inline bool better(const Score& a, const Score& b)
{
    return a.value < b.value;
}

} // namespace detail

/// Minimizes `fitness(const std::vector<double>&) -> Score` over the box.
/// Each particle draws from its own RNG stream seeded from (seed, index), so
/// the result does not depend on how evaluations are spread over threads.
template <class Fitness>
Result minimize(Fitness&& fitness, const std::vector<Bound>& bounds, const Settings& settings)
{
    settings.validate();
    const std::size_t dim = bounds.size();
    for (const auto& b : bounds) {
        if (!(b.lower < b.upper)) {
            throw Error("every PSO bound needs lower < upper");
        }
    }
    const std::size_t n = settings.swarm_size;

    std::vector<std::mt19937_64> rngs;
    rngs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::seed_seq seq{static_cast<std::uint32_t>(settings.seed), static_cast<std::uint32_t>(settings.seed >> 32),
                          static_cast<std::uint32_t>(i)};
        rngs.emplace_back(seq);
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::vector<double>> x(n, std::vector<double>(dim));
    std::vector<std::vector<double>> v(n, std::vector<double>(dim));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double range = bounds[d].upper - bounds[d].lower;
            x[i][d] = bounds[d].lower + unit(rngs[i]) * range;
            v[i][d] = (2.0 * unit(rngs[i]) - 1.0) * 0.1 * range;
        }
    }

    std::vector<Score> score(n);
    auto evaluate_all = [&] {
        parallel_for(n, settings.threads, [&](std::size_t i) { score[i] = fitness(x[i]); });
    };

    Result result;
    evaluate_all();
    result.evaluations += n;

    std::vector<std::vector<double>> pbest = x;
    std::vector<Score> pbest_score = score;
    std::size_t g = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (detail::better(score[i], score[g])) {
            g = i;
        }
    }
    std::vector<double> gbest = x[g];
    Score gbest_score = score[g];

    std::vector<double> best_feasible;
    Score best_feasible_score;
    auto track_feasible = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            if (score[i].feasible && detail::better(score[i], best_feasible_score)) {
                best_feasible_score = score[i];
                best_feasible = x[i];
            }
        }
    };
    track_feasible();
    result.history.push_back({0, gbest_score.value, gbest_score.feasible});

    for (std::size_t it = 1; it <= settings.iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double range = bounds[d].upper - bounds[d].lower;
                const double r1 = unit(rngs[i]);
                const double r2 = unit(rngs[i]);
                double vel = settings.inertia * v[i][d] + settings.cognitive * r1 * (pbest[i][d] - x[i][d]) +
                             settings.social * r2 * (gbest[d] - x[i][d]);
                vel = std::clamp(vel, -range, range);
                double pos = x[i][d] + vel;
                detail::reflect(pos, vel, bounds[d]);
                x[i][d] = pos;
                v[i][d] = vel;
            }
        }
        evaluate_all();
        result.evaluations += n;
        for (std::size_t i = 0; i < n; ++i) {
            if (detail::better(score[i], pbest_score[i])) {
                pbest_score[i] = score[i];
                pbest[i] = x[i];
            }
            if (detail::better(score[i], gbest_score)) {
                gbest_score = score[i];
                gbest = x[i];
            }
        }
        track_feasible();
        result.history.push_back({it, gbest_score.value, gbest_score.feasible});
    }

    result.found_feasible = !best_feasible.empty();
    if (result.found_feasible) {
        result.best_position = best_feasible;
        result.best_score = best_feasible_score;
    } else {
        result.best_position = gbest;
        result.best_score = gbest_score;
    }
    return result;
}

} // namespace mgsize::pso
