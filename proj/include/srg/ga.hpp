#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "srg/aco.hpp"  // HistoryPoint
#include "srg/fitness.hpp"
#include "srg/model.hpp"

namespace srg {

// Position i holds the group label of student i; labels lie in [0, m-1].
struct Individual {
    std::vector<int> alleles;
    std::optional<PenaltyBreakdown> cached_fitness;

    [[nodiscard]] double fitness() const {
        if (!cached_fitness) throw ContractViolation("individual has not been evaluated");
        return cached_fitness->fitness;
    }

    friend bool operator==(const Individual& a, const Individual& b) { return a.alleles == b.alleles; }
};

enum class CrossoverKind { SinglePoint, TwoPoint, Uniform };
enum class SelectionKind { Tournament, Roulette };

struct GaConfig {
    int population_size = 100;
    int tournament_size = 3;
    double p_crossover = 0.5;
    double p_mutation = 0.5;
    CrossoverKind crossover_kind = CrossoverKind::SinglePoint;
    SelectionKind selection_kind = SelectionKind::Tournament;
    int stall_generations = 20;
    std::uint64_t seed = 1;
};

inline Grouping decode(const Individual& individual, const Instance& instance) {
    const auto m = static_cast<int>(instance.student_count());
    if (static_cast<int>(individual.alleles.size()) != m) throw ContractViolation("allele count != student count");
    for (int a : individual.alleles) {
        if (a < 0 || a >= m) throw ContractViolation("allele " + std::to_string(a) + " outside [0, m-1]");
    }
    return Grouping::from_labels(instance, std::span<const int>(individual.alleles));
}

inline void evaluate_individual(Individual& individual, const Instance& instance, const FitnessConfig& config) {
    if (!individual.cached_fitness) individual.cached_fitness = evaluate(instance, decode(individual, instance), config);
}

template <class Rng>
std::vector<Individual> init_population(const Instance& instance, const GaConfig& config, Rng& rng) {
    const auto m = static_cast<int>(instance.student_count());
    std::uniform_int_distribution<int> allele(0, m - 1);
    std::vector<Individual> population(static_cast<std::size_t>(config.population_size));
    for (auto& ind : population) {
        ind.alleles.resize(static_cast<std::size_t>(m));
        for (auto& a : ind.alleles) a = allele(rng);
    }
    return population;
}

// With probability p_mutation, resets one uniformly chosen allele to a uniform label.
template <class Rng>
Individual mutate(Individual individual, const GaConfig& config, Rng& rng) {
    std::bernoulli_distribution fire(config.p_mutation);
    if (individual.alleles.empty() || !fire(rng)) return individual;
    const auto m = static_cast<int>(individual.alleles.size());
    std::uniform_int_distribution<int> pos(0, m - 1);
    std::uniform_int_distribution<int> value(0, m - 1);
    auto& slot = individual.alleles[static_cast<std::size_t>(pos(rng))];
    const int next = value(rng);
    if (next != slot) {
        slot = next;
        individual.cached_fitness.reset();
    }
    return individual;
}

// Swaps the suffixes starting at `cut`.
inline std::pair<Individual, Individual> single_point_crossover(const Individual& a, const Individual& b,
                                                                std::size_t cut) {
    if (a.alleles.size() != b.alleles.size()) throw ContractViolation("crossover parents differ in length");
    Individual x{a.alleles, std::nullopt};
    Individual y{b.alleles, std::nullopt};
    for (std::size_t i = cut; i < x.alleles.size(); ++i) std::swap(x.alleles[i], y.alleles[i]);
    return {std::move(x), std::move(y)};
}

// Swaps the segment [first, last).
inline std::pair<Individual, Individual> two_point_crossover(const Individual& a, const Individual& b,
                                                             std::size_t first, std::size_t last) {
    if (a.alleles.size() != b.alleles.size()) throw ContractViolation("crossover parents differ in length");
    Individual x{a.alleles, std::nullopt};
    Individual y{b.alleles, std::nullopt};
    for (std::size_t i = first; i < last && i < x.alleles.size(); ++i) std::swap(x.alleles[i], y.alleles[i]);
    return {std::move(x), std::move(y)};
}

template <class Rng>
std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b, const GaConfig& config, Rng& rng) {
    if (a.alleles.size() != b.alleles.size()) throw ContractViolation("crossover parents differ in length");
    const std::size_t m = a.alleles.size();
    std::bernoulli_distribution fire(config.p_crossover);
    if (m < 2 || !fire(rng)) return {a, b};
    switch (config.crossover_kind) {
        case CrossoverKind::SinglePoint: {
            std::uniform_int_distribution<std::size_t> cut(1, m - 1);
            return single_point_crossover(a, b, cut(rng));
        }
        case CrossoverKind::TwoPoint: {
            std::uniform_int_distribution<std::size_t> cut(1, m);
            auto c1 = cut(rng);
            auto c2 = cut(rng);
            if (c1 > c2) std::swap(c1, c2);
            return two_point_crossover(a, b, c1, c2);
        }
        case CrossoverKind::Uniform: {
            Individual x{a.alleles, std::nullopt};
            Individual y{b.alleles, std::nullopt};
            std::bernoulli_distribution swap_gene(0.5);
            for (std::size_t i = 0; i < m; ++i)
                if (swap_gene(rng)) std::swap(x.alleles[i], y.alleles[i]);
            return {std::move(x), std::move(y)};
        }
    }
    return {a, b};
}

// Next generation from an evaluated pool. Slot 0 always carries the pool's
// best; the remaining slots come from tournaments (draws with replacement) or
// a roulette wheel weighted by 1 / (1 + fitness).
template <class Rng>
std::vector<Individual> select(std::span<const Individual> pool, const GaConfig& config, Rng& rng) {
    if (pool.empty()) throw ContractViolation("selection pool is empty");
    const auto best = std::min_element(pool.begin(), pool.end(), [](const Individual& x, const Individual& y) {
        return x.fitness() < y.fitness();
    });
    std::vector<Individual> next;
    const auto target = static_cast<std::size_t>(std::max(config.population_size, 1));
    next.reserve(target);
    next.push_back(*best);

    if (config.selection_kind == SelectionKind::Tournament) {
        std::uniform_int_distribution<std::size_t> draw(0, pool.size() - 1);
        const int rounds = std::max(config.tournament_size, 1);
        while (next.size() < target) {
            std::size_t winner = draw(rng);
            for (int k = 1; k < rounds; ++k) {
                const auto c = draw(rng);
                if (pool[c].fitness() < pool[winner].fitness()) winner = c;
            }
            next.push_back(pool[winner]);
        }
    } else {
        std::vector<double> weights;
        weights.reserve(pool.size());
        for (const auto& ind : pool) weights.push_back(1.0 / (1.0 + ind.fitness()));
        std::discrete_distribution<std::size_t> wheel(weights.begin(), weights.end());
        while (next.size() < target) next.push_back(pool[wheel(rng)]);
    }
    return next;
}

struct GaResult {
    Grouping best;
    PenaltyBreakdown breakdown;
    Individual best_individual;
    std::vector<HistoryPoint> history;  // best-ever fitness; entry 0 is the initial population
    int generations = 0;
};

inline GaResult ga_solve(const Instance& instance, const GaConfig& config, const FitnessConfig& fitness_config) {
    if (config.population_size < 1) throw ContractViolation("population size must be >= 1");
    std::mt19937_64 rng(config.seed);
    auto population = init_population(instance, config, rng);
    for (auto& ind : population) evaluate_individual(ind, instance, fitness_config);

    auto best_of = [](const std::vector<Individual>& pop) {
        return *std::min_element(pop.begin(), pop.end(),
                                 [](const Individual& x, const Individual& y) { return x.fitness() < y.fitness(); });
    };
    Individual best = best_of(population);
    std::vector<HistoryPoint> history{{0, best.fitness()}};
    constexpr double kImprovement = 1e-9;

    int stall = 0;
    int generation = 0;
    while (stall < config.stall_generations) {
        ++generation;
        std::vector<Individual> parents = population;
        std::shuffle(parents.begin(), parents.end(), rng);
        std::vector<Individual> pool = population;
        pool.reserve(population.size() * 2);
        for (std::size_t i = 0; i < parents.size(); i += 2) {
            if (i + 1 == parents.size()) {
                pool.push_back(mutate(parents[i], config, rng));
                break;
            }
            auto [x, y] = crossover(parents[i], parents[i + 1], config, rng);
            pool.push_back(mutate(std::move(x), config, rng));
            pool.push_back(mutate(std::move(y), config, rng));
        }
        for (auto& ind : pool) evaluate_individual(ind, instance, fitness_config);
        population = select(std::span<const Individual>(pool), config, rng);

        const Individual& gen_best = population.front();
        if (gen_best.fitness() < best.fitness() - kImprovement) {
            best = gen_best;
            stall = 0;
        } else {
            ++stall;
        }
        history.push_back({static_cast<std::size_t>(generation), best.fitness()});
    }
    auto grouping = decode(best, instance);
    return GaResult{std::move(grouping), *best.cached_fitness, best, std::move(history), generation};
}

}  // namespace srg
