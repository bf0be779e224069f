#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "srg/fitness.hpp"
#include "srg/io.hpp"
#include "srg/model.hpp"

namespace srg {

// Constraint numbering follows the grouping rules:
//   1 every student is assigned, 2 no student in more than one group,
//   3 unique courses per group within total_limit, 4 new courses within
//   new_limit, 5 old courses within old_limit.
// Number 0 marks structural problems (unknown ids, empty groups).
struct Violation {
    int constraint = 0;
    std::optional<std::size_t> group;
    std::string message;
};

struct CheckReport {
    std::vector<Violation> violations;
    std::size_t group_count = 0;

    [[nodiscard]] bool feasible() const noexcept { return violations.empty(); }
};

// Validates grouping files without trusting them. In Fixed mode constraint 3
// is implied by 4 and 5 and is not checked separately; in Dynamic mode only
// the pooled limit (3) applies.
inline CheckReport check_grouping(const Instance& instance, const RawGrouping& raw, const ColumnLimits& limits) {
    CheckReport report;
    report.group_count = raw.groups.size();
    if (!raw.instance.empty() && raw.instance != instance.name()) {
        report.violations.push_back({0, std::nullopt, "grouping names instance '" + raw.instance + "'"});
    }
    std::vector<int> times_seen(instance.student_count(), 0);
    for (std::size_t g = 0; g < raw.groups.size(); ++g) {
        if (raw.groups[g].empty()) report.violations.push_back({0, g, "group is empty"});
        std::vector<std::size_t> members;
        for (const auto& id : raw.groups[g]) {
            auto s = instance.find_student(id);
            if (!s) {
                report.violations.push_back({0, g, "unknown student '" + id + "'"});
                continue;
            }
            if (++times_seen[*s] == 2) {
                report.violations.push_back({2, g, "student '" + id + "' is assigned to more than one group"});
            }
            members.push_back(*s);
        }
        const auto profile = course_profile(instance, members);
        if (limits.mode == ColumnMode::Dynamic) {
            if (profile.total() > limits.total_limit) {
                report.violations.push_back({3, g, std::to_string(profile.total()) + " unique courses exceed limit " +
                                                       std::to_string(limits.total_limit)});
            }
        } else {
            if (profile.new_count > limits.new_limit) {
                report.violations.push_back({4, g, std::to_string(profile.new_count) +
                                                       " unique new courses exceed limit " +
                                                       std::to_string(limits.new_limit)});
            }
            if (profile.old_count > limits.old_limit) {
                report.violations.push_back({5, g, std::to_string(profile.old_count) +
                                                       " unique old courses exceed limit " +
                                                       std::to_string(limits.old_limit)});
            }
        }
    }
    for (std::size_t s = 0; s < times_seen.size(); ++s) {
        if (times_seen[s] == 0) {
            report.violations.push_back({1, std::nullopt, "student '" + instance.students()[s].id + "' is not assigned"});
        }
    }
    return report;
}

inline CheckReport check_grouping(const Instance& instance, const Grouping& grouping, const ColumnLimits& limits) {
    return check_grouping(instance, raw_grouping_from_json(grouping_to_json(instance, grouping)), limits);
}

}  // namespace srg
