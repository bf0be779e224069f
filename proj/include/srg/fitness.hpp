#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "srg/model.hpp"

namespace srg {

// Strict uses log2(max(sp, 1)) for the size term. PaperCompat uses
// log2(sp + n + 1), which reproduces the published single-group anchors
// (25 students -> 4.70, 18 students -> 4.25).
enum class FitnessMode { Strict, PaperCompat };

struct FitnessConfig {
    ColumnLimits limits{};
    FitnessMode fitness_mode = FitnessMode::PaperCompat;
};

struct PenaltyBreakdown {
    std::int64_t unfit = 0;
    std::int64_t size = 0;
    std::int64_t unassigned = 0;
    std::int64_t group_count = 0;
    double fitness = 0.0;
    FitnessMode mode = FitnessMode::PaperCompat;

    friend bool operator==(const PenaltyBreakdown&, const PenaltyBreakdown&) = default;
};

// Penalty weights are fixed so published numbers stay reproducible.
inline constexpr double kUnassignedWeight = 1000.0;
inline constexpr double kUnfitWeight = 1000.0;

// Columns over the limit; zero at or below it.
constexpr std::int64_t group_penalty(std::int64_t count, std::int64_t limit) noexcept {
    return count >= limit ? count - limit : 0;
}

// Unfit penalty of a single group with the given profile, before multiplying by size.
constexpr std::int64_t profile_penalty(const CourseProfile& profile, const ColumnLimits& limits) noexcept {
    if (limits.mode == ColumnMode::Dynamic) return group_penalty(profile.total(), limits.total_limit);
    return group_penalty(profile.new_count, limits.new_limit) + group_penalty(profile.old_count, limits.old_limit);
}

constexpr bool profile_fits(const CourseProfile& profile, const ColumnLimits& limits) noexcept {
    if (limits.mode == ColumnMode::Dynamic) return profile.total() <= limits.total_limit;
    return profile.new_count <= limits.new_limit && profile.old_count <= limits.old_limit;
}

inline std::int64_t unfit_penalty(const Instance& instance, const Grouping& grouping, const ColumnLimits& limits) {
    std::int64_t up = 0;
    for (const auto& members : grouping.groups()) {
        up += profile_penalty(course_profile(instance, members), limits) * static_cast<std::int64_t>(members.size());
    }
    return up;
}

inline std::int64_t size_penalty(const Instance& instance, const Grouping& grouping) {
    const auto n = static_cast<std::int64_t>(instance.student_count());
    std::int64_t sp = 0;
    for (const auto& members : grouping.groups()) {
        const auto size = static_cast<std::int64_t>(members.size());
        sp += (n - size) * size;
    }
    return sp;
}

inline std::int64_t unassigned_penalty(const Instance& instance, const Grouping& grouping) {
    return static_cast<std::int64_t>(instance.student_count()) - static_cast<std::int64_t>(grouping.assigned_count());
}

// Weighted fitness from already-computed penalty terms. Lower is better.
inline double combine_penalties(std::int64_t unfit, std::int64_t size, std::int64_t unassigned, std::int64_t groups,
                                std::int64_t students, FitnessMode mode) {
    const double size_term = mode == FitnessMode::Strict
                                 ? std::log2(static_cast<double>(std::max<std::int64_t>(size, 1)))
                                 : std::log2(static_cast<double>(size + students + 1));
    return kUnassignedWeight * static_cast<double>(unassigned) +
           (size_term + static_cast<double>(unfit) * kUnfitWeight) * static_cast<double>(groups);
}

inline PenaltyBreakdown evaluate(const Instance& instance, const Grouping& grouping, const FitnessConfig& config) {
    PenaltyBreakdown b;
    b.unfit = unfit_penalty(instance, grouping, config.limits);
    b.size = size_penalty(instance, grouping);
    b.unassigned = unassigned_penalty(instance, grouping);
    b.group_count = static_cast<std::int64_t>(grouping.group_count());
    b.mode = config.fitness_mode;
    b.fitness = combine_penalties(b.unfit, b.size, b.unassigned, b.group_count,
                                  static_cast<std::int64_t>(instance.student_count()), config.fitness_mode);
    return b;
}

inline bool is_feasible(const Instance& instance, const Grouping& grouping, const ColumnLimits& limits) {
    return unassigned_penalty(instance, grouping) == 0 && unfit_penalty(instance, grouping, limits) == 0;
}

inline bool is_feasible(const PenaltyBreakdown& b) { return b.unassigned == 0 && b.unfit == 0; }

inline std::string to_string(FitnessMode mode) { return mode == FitnessMode::Strict ? "strict" : "paper-compat"; }
inline std::string to_string(ColumnMode mode) { return mode == ColumnMode::Fixed ? "fixed" : "dynamic"; }

}  // namespace srg
