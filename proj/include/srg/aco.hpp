#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "srg/constructive.hpp"
#include "srg/fitness.hpp"
#include "srg/model.hpp"

namespace srg {

// Max-Min trail matrix: one row per group slot, one column per student.
// Entries start at t_max and stay inside [t_min, t_max].
class PheromoneMatrix {
public:
    PheromoneMatrix(std::size_t slots, std::size_t students, double t_max = 10.0, double t_min = 0.1)
        : slots_(slots), students_(students), t_max_(t_max), t_min_(t_min), trails_(slots * students, t_max) {
        if (!(t_min > 0.0) || t_min > t_max) throw ContractViolation("pheromone bounds must satisfy 0 < t_min <= t_max");
    }

    [[nodiscard]] std::size_t slots() const noexcept { return slots_; }
    [[nodiscard]] std::size_t students() const noexcept { return students_; }
    [[nodiscard]] double t_max() const noexcept { return t_max_; }
    [[nodiscard]] double t_min() const noexcept { return t_min_; }

    [[nodiscard]] double at(std::size_t slot, std::size_t student) const { return trails_[index(slot, student)]; }

    // Stores `value` clamped into [t_min, t_max].
    void set(std::size_t slot, std::size_t student, double value) {
        trails_[index(slot, student)] = std::clamp(value, t_min_, t_max_);
    }

    [[nodiscard]] std::span<const double> values() const noexcept { return trails_; }
    [[nodiscard]] std::span<double> values() noexcept { return trails_; }

    [[nodiscard]] bool within_bounds() const {
        return std::all_of(trails_.begin(), trails_.end(), [&](double t) { return t >= t_min_ && t <= t_max_; });
    }

    friend bool operator==(const PheromoneMatrix&, const PheromoneMatrix&) = default;

private:
    [[nodiscard]] std::size_t index(std::size_t slot, std::size_t student) const {
        if (slot >= slots_ || student >= students_) throw ContractViolation("pheromone index out of range");
        return slot * students_ + student;
    }

    std::size_t slots_;
    std::size_t students_;
    double t_max_;
    double t_min_;
    std::vector<double> trails_;
};

struct AcoConfig {
    double rho = 0.02;
    double alpha = 0.0;  // exponent on the hardest-first desirability (registration count)
    double beta = 1.0;   // exponent on the trail value
    double fit_exponent = 4.0;  // exponent on 1 / (1 + course columns a pair adds); 0 = trail only
    int num_ants = 10;
    int num_iterations = 500;
    int stall_limit = 100;
    double t_max = 10.0;
    double t_min = 0.1;
    std::uint64_t seed = 1;
};

// Amount deposited on the cycle-best path. Capped at 1 so a cycle best worse
// than the global best never earns more than an improving one.
inline double reward(std::optional<double> global_best, double current_quality) {
    if (!global_best || *global_best >= current_quality) return 1.0;
    return std::min(1.0, 1.0 / (current_quality - *global_best));
}

inline void evaporate(PheromoneMatrix& matrix, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw ContractViolation("rho must lie in (0, 1)");
    const double keep = 1.0 - rho;
    for (auto& t : matrix.values()) t = std::max(matrix.t_min(), t * keep);
}

// Adds `amount` to T[slot_of[s]][s] for every student, capped at t_max.
inline void deposit(PheromoneMatrix& matrix, std::span<const std::size_t> slot_of, double amount) {
    if (amount < 0.0) throw ContractViolation("deposit amount must be non-negative");
    if (slot_of.size() != matrix.students()) throw ContractViolation("path length != student count");
    for (std::size_t s = 0; s < slot_of.size(); ++s) {
        matrix.set(slot_of[s], s, std::min(matrix.t_max(), matrix.at(slot_of[s], s) + amount));
    }
}

inline void deposit(PheromoneMatrix& matrix, const Grouping& grouping, double amount) {
    if (!grouping.complete()) throw ContractViolation("deposit needs a complete grouping");
    std::vector<std::size_t> slot_of(grouping.student_count());
    for (std::size_t s = 0; s < slot_of.size(); ++s) slot_of[s] = *grouping.group_of(s);
    deposit(matrix, slot_of, amount);
}

// One ant's walk: the slot chosen for each student plus the (student, slot)
// picks in the order they were made.
struct AntPath {
    std::vector<std::size_t> slot_of;
    std::vector<std::pair<std::size_t, std::size_t>> picks;
};

// Builds a complete assignment of students to the matrix's slots. Each step
// draws an (unassigned student, slot) pair with probability proportional to
//   eta(s)^alpha * T[g][s]^beta * (1 / (1 + added(s, g)))^fit_exponent
// among pairs that keep the slot within limits, where eta(s) is the student's
// registration count and added(s, g) the course columns s would add to g.
// fit_exponent = 0 gives pure trail selection. A student left with no such
// slot is placed where the unfit penalty grows the least (ties: higher trail,
// then lower slot).
template <class Rng>
AntPath ant_traverse(const Instance& instance, const PheromoneMatrix& matrix, const AcoConfig& config,
                     const ColumnLimits& limits, Rng& rng) {
    const std::size_t m = instance.student_count();
    const std::size_t n = matrix.slots();
    if (matrix.students() != m) throw ContractViolation("pheromone matrix not sized for instance");
    if (n == 0) throw ContractViolation("pheromone matrix has no slots");

    std::vector<double> fit_factor(instance.course_count() + 1, 1.0);
    if (config.fit_exponent != 0.0) {
        for (std::size_t a = 0; a < fit_factor.size(); ++a)
            fit_factor[a] = std::pow(1.0 / (1.0 + static_cast<double>(a)), config.fit_exponent);
    }
    std::vector<double> base(n * m);  // eta^alpha * T^beta, indexed [s * n + g]
    for (std::size_t s = 0; s < m; ++s) {
        const double eta = config.alpha == 0.0 ? 1.0 : std::pow(instance.registration_count(s), config.alpha);
        for (std::size_t g = 0; g < n; ++g) {
            const double t = matrix.at(g, s);
            base[s * n + g] = eta * (config.beta == 1.0 ? t : std::pow(t, config.beta));
        }
    }

    std::vector<GroupState> slot_state(n, GroupState(instance));
    std::vector<CourseProfile> slot_profile(n);
    std::vector<double> weight(n * m, 0.0);  // zero marks an infeasible pair
    std::vector<int> feasible_slots(m, 0);
    std::vector<double> student_weight(m, 0.0);
    std::vector<char> assigned(m, 0);
    std::size_t remaining = m;

    auto profile_after = [&](std::size_t g, std::size_t s, int& added) {
        const int add_new = slot_state[g].new_courses.count_added(instance.new_courses(s));
        const int add_old = slot_state[g].old_courses.count_added(instance.old_courses(s));
        added = add_new + add_old;
        return CourseProfile{slot_profile[g].new_count + add_new, slot_profile[g].old_count + add_old};
    };
    auto refresh_student = [&](std::size_t s) {
        double w = 0.0;
        for (std::size_t g = 0; g < n; ++g) w += weight[s * n + g];
        student_weight[s] = w;
    };
    auto update_pair = [&](std::size_t s, std::size_t g) {
        int added = 0;
        const bool fits = profile_fits(profile_after(g, s, added), limits);
        const bool was = weight[s * n + g] > 0.0;
        weight[s * n + g] = fits ? base[s * n + g] * fit_factor[static_cast<std::size_t>(added)] : 0.0;
        feasible_slots[s] += static_cast<int>(fits) - static_cast<int>(was);
    };

    for (std::size_t s = 0; s < m; ++s) {
        for (std::size_t g = 0; g < n; ++g) update_pair(s, g);
        refresh_student(s);
    }

    AntPath path;
    path.slot_of.assign(m, 0);
    path.picks.reserve(m);

    auto place = [&](std::size_t s, std::size_t g) {
        slot_state[g].add(instance, s);
        slot_profile[g] = slot_state[g].profile();
        assigned[s] = 1;
        --remaining;
        path.slot_of[s] = g;
        path.picks.emplace_back(s, g);
        for (std::size_t o = 0; o < m; ++o) {
            if (assigned[o] || weight[o * n + g] == 0.0) continue;
            update_pair(o, g);
            refresh_student(o);
        }
    };

    auto least_violation_slot = [&](std::size_t s) {
        std::size_t best = 0;
        std::int64_t best_increase = std::numeric_limits<std::int64_t>::max();
        for (std::size_t g = 0; g < n; ++g) {
            const auto size = static_cast<std::int64_t>(slot_state[g].members.size());
            int added = 0;
            const auto increase = profile_penalty(profile_after(g, s, added), limits) * (size + 1) -
                                  profile_penalty(slot_profile[g], limits) * size;
            if (increase < best_increase || (increase == best_increase && matrix.at(g, s) > matrix.at(best, s))) {
                best = g;
                best_increase = increase;
            }
        }
        return best;
    };

    while (remaining > 0) {
        bool forced = true;
        while (forced && remaining > 0) {
            forced = false;
            for (std::size_t s = 0; s < m; ++s) {
                if (!assigned[s] && feasible_slots[s] == 0) {
                    place(s, least_violation_slot(s));
                    forced = true;
                }
            }
        }
        if (remaining == 0) break;

        double total = 0.0;
        for (std::size_t s = 0; s < m; ++s)
            if (!assigned[s]) total += student_weight[s];
        std::uniform_real_distribution<double> dist(0.0, total);
        double u = dist(rng);

        std::size_t chosen_student = m;
        for (std::size_t s = 0; s < m; ++s) {
            if (assigned[s] || student_weight[s] <= 0.0) continue;
            chosen_student = s;
            if (u < student_weight[s]) break;
            u -= student_weight[s];
        }
        std::size_t chosen_slot = n;
        for (std::size_t g = 0; g < n; ++g) {
            const double w = weight[chosen_student * n + g];
            if (w == 0.0) continue;
            chosen_slot = g;
            if (u < w) break;
            u -= w;
        }
        place(chosen_student, chosen_slot);
    }
    return path;
}

struct HistoryPoint {
    std::size_t step = 0;
    double best_fitness = 0.0;
};

struct AcoResult {
    Grouping best;
    PenaltyBreakdown breakdown;
    std::vector<std::size_t> path;  // slot per student for `best`
    std::size_t slots = 0;
    std::vector<HistoryPoint> history;  // global best after each iteration
};

// Slot count comes from the hardest-first grouping; each iteration runs the
// ants, evaporates, deposits on the cycle best, then updates the global best.
inline AcoResult aco_solve(const Instance& instance, const AcoConfig& config, const FitnessConfig& fitness_config) {
    if (config.num_ants < 1 || config.num_iterations < 1) throw ContractViolation("ants and iterations must be >= 1");
    const Grouping seed_grouping = hfo_solve(instance, fitness_config);
    const std::size_t slots = seed_grouping.group_count();
    PheromoneMatrix matrix(slots, instance.student_count(), config.t_max, config.t_min);
    std::mt19937_64 rng(config.seed);

    std::optional<AcoResult> global;
    std::vector<HistoryPoint> history;
    int stall = 0;
    for (int it = 0; it < config.num_iterations; ++it) {
        std::optional<AcoResult> cycle;
        for (int ant = 0; ant < config.num_ants; ++ant) {
            auto walk = ant_traverse(instance, matrix, config, fitness_config.limits, rng);
            auto grouping = Grouping::from_labels(instance, std::span<const std::size_t>(walk.slot_of));
            auto breakdown = evaluate(instance, grouping, fitness_config);
            if (!cycle || breakdown.fitness < cycle->breakdown.fitness) {
                cycle = AcoResult{std::move(grouping), breakdown, std::move(walk.slot_of), slots, {}};
            }
        }
        evaporate(matrix, config.rho);
        const std::optional<double> best_quality =
            global ? std::optional<double>(global->breakdown.fitness) : std::nullopt;
        deposit(matrix, cycle->path, reward(best_quality, cycle->breakdown.fitness));
        if (!global || cycle->breakdown.fitness < global->breakdown.fitness) {
            global = std::move(cycle);
            stall = 0;
        } else {
            ++stall;
        }
        history.push_back({static_cast<std::size_t>(it), global->breakdown.fitness});
        if (stall >= config.stall_limit) break;
    }
    global->history = std::move(history);
    return std::move(*global);
}

}  // namespace srg
