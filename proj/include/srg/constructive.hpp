#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "srg/fitness.hpp"
#include "srg/model.hpp"

namespace srg {

// A group under construction with its course unions maintained incrementally.
struct GroupState {
    std::vector<std::size_t> members;
    CourseSet new_courses;
    CourseSet old_courses;

    explicit GroupState(const Instance& instance)
        : new_courses(instance.course_count()), old_courses(instance.course_count()) {}

    void add(const Instance& instance, std::size_t student) {
        members.push_back(student);
        new_courses |= instance.new_courses(student);
        old_courses |= instance.old_courses(student);
    }

    [[nodiscard]] CourseProfile profile() const { return {new_courses.count(), old_courses.count()}; }

    // Profile after adding `student`, without mutating the group.
    [[nodiscard]] CourseProfile profile_with(const Instance& instance, std::size_t student) const {
        return {new_courses.count() + new_courses.count_added(instance.new_courses(student)),
                old_courses.count() + old_courses.count_added(instance.old_courses(student))};
    }

    [[nodiscard]] int added_courses(const Instance& instance, std::size_t student) const {
        return new_courses.count_added(instance.new_courses(student)) +
               old_courses.count_added(instance.old_courses(student));
    }

    // True when the cached unions equal the unions recomputed from `members`.
    [[nodiscard]] bool consistent(const Instance& instance) const {
        GroupState fresh(instance);
        for (auto s : members) fresh.add(instance, s);
        return fresh.new_courses == new_courses && fresh.old_courses == old_courses;
    }
};

// Among groups that can take `student` within `limits`, the one gaining the
// fewest new course columns; ties go to the larger group, then the lower index.
inline std::optional<std::size_t> try_assign_best_fit(std::span<const GroupState> groups, std::size_t student,
                                                      const Instance& instance, const ColumnLimits& limits) {
    std::optional<std::size_t> best;
    int best_added = 0;
    std::size_t best_size = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (!profile_fits(groups[g].profile_with(instance, student), limits)) continue;
        const int added = groups[g].added_courses(instance, student);
        const auto size = groups[g].members.size();
        if (!best || added < best_added || (added == best_added && size > best_size)) {
            best = g;
            best_added = added;
            best_size = size;
        }
    }
    return best;
}

// Greedy construction over a fixed processing order. A student that fits no
// existing group opens a new one, so the result is always complete.
inline Grouping greedy_group(const Instance& instance, std::span<const std::size_t> order, const ColumnLimits& limits) {
    std::vector<GroupState> state;
    for (auto s : order) {
        auto g = try_assign_best_fit(state, s, instance, limits);
        if (!g) {
            state.emplace_back(instance);
            g = state.size() - 1;
        }
        state[*g].add(instance, s);
    }
    std::vector<std::vector<std::size_t>> groups;
    groups.reserve(state.size());
    for (auto& gs : state) groups.push_back(std::move(gs.members));
    return Grouping::from_groups(instance, std::move(groups));
}

// Students by decreasing registration count; equal counts keep input order.
inline std::vector<std::size_t> hardest_first_order(const Instance& instance) {
    std::vector<std::size_t> order(instance.student_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return instance.registration_count(a) > instance.registration_count(b);
    });
    return order;
}

inline Grouping hfo_solve(const Instance& instance, const FitnessConfig& config) {
    const auto order = hardest_first_order(instance);
    return greedy_group(instance, order, config.limits);
}

inline Grouping ro_solve(const Instance& instance, const FitnessConfig& config, std::uint64_t seed) {
    std::vector<std::size_t> order(instance.student_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return greedy_group(instance, order, config.limits);
}

}  // namespace srg
