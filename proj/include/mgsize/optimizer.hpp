#pragma once

#include "mgsize/economics.hpp"
#include "mgsize/pso.hpp"

#include <algorithm>
#include <vector>

namespace mgsize
{

struct PsoConfig
{
    pso::Settings settings;
    /// Upper search bound per sizing dimension; lower bounds are zero.
    SizingVector ceiling{5000, 1000, 3000.0, 3000.0, 1000.0, 1000.0, 1000.0, 500.0};
    double penalty_weight = 1e8; // $ per unit of constraint violation

    std::vector<pso::Bound> bounds() const
    {
        std::vector<pso::Bound> b;
        for (double upper : ceiling.to_vector()) {
            b.push_back({0.0, upper});
        }
        return b;
    }

    void validate() const
    {
        settings.validate();
        for (double upper : ceiling.to_vector()) {
            if (!(upper > 0.0)) {
                throw Error("every PSO ceiling must be > 0");
            }
        }
        if (!(penalty_weight > 0.0)) {
            throw Error("penalty_weight must be > 0");
        }
    }
};

/// Everything a fitness evaluation needs besides the position.
struct SizingProblem
{
    const ProfileSet& profiles;
    ScenarioPolicy policy;
    DeviceCatalog catalog;
    FinanceParams finance;
    double penalty_weight = 1e8;
    double initial_tank_fraction = 0.5;
};

/// Sum of the three constraint violations; zero for a feasible design.
inline double constraint_violation(const Feasibility& f, double tank_capacity)
{
    double v = std::max(0.0, f.elf_el - kElfLimit) + std::max(0.0, f.elf_th - kElfLimit);
    if (tank_capacity > 0.0) {
        v += std::max(0.0, (f.tank_initial - f.tank_end) / tank_capacity);
    }
    return v;
}

/// Total NPC plus the exterior penalty. Counts are rounded before simulation.
inline pso::Score fitness(const std::vector<double>& position, const SizingProblem& problem)
{
    const auto sizes = SizingVector::from_vector(position);
    const auto e = evaluate(sizes, problem.profiles, problem.policy, problem.catalog, problem.finance,
                            {problem.initial_tank_fraction, false});
    const double violation = constraint_violation(e.feasibility, e.simulation.totals.tank_capacity);
    return {e.costs.total + problem.penalty_weight * violation, violation == 0.0};
}

struct OptimizationResult
{
    SizingVector best;
    Evaluation evaluation; // full-ledger evaluation of `best`
    bool found_feasible = false;
    std::vector<pso::HistoryEntry> history;
    std::size_t evaluations = 0;
};

inline OptimizationResult optimize(const ProfileSet& profiles, const ScenarioPolicy& policy, const DeviceCatalog& cat,
                                   const FinanceParams& fin, const PsoConfig& config,
                                   double initial_tank_fraction = 0.5)
{
    config.validate();
    cat.validate();
    fin.validate();
    policy.validate();
    profiles.validate();

    const SizingProblem problem{profiles, policy, cat, fin, config.penalty_weight, initial_tank_fraction};
    auto pr = pso::minimize([&](const std::vector<double>& x) { return fitness(x, problem); }, config.bounds(),
                            config.settings);

    OptimizationResult out;
    out.best = SizingVector::from_vector(pr.best_position);
    out.evaluation = evaluate(out.best, profiles, policy, cat, fin, {initial_tank_fraction, true});
    out.found_feasible = pr.found_feasible;
    out.history = std::move(pr.history);
    out.evaluations = pr.evaluations;
    return out;
}

} // namespace mgsize
