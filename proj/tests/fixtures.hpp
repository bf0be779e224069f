#pragma once

#include <string>
#include <vector>

#include "oracle.hpp"
#include "srg/srg.hpp"

namespace fixtures {

inline std::vector<srg::Registration> to_registrations(const std::vector<oracle::Row>& rows) {
    std::vector<srg::Registration> out;
    for (const auto& r : rows) out.push_back({r.student, r.course, r.year});
    return out;
}

inline srg::Instance make(const std::vector<oracle::Row>& rows, std::string name = "fixture",
                          std::optional<int> cohort = 4) {
    const auto regs = to_registrations(rows);
    return srg::Instance::from_registrations(std::move(name), regs, cohort);
}

// Adds rows for `student` taking courses prefix0..prefix(count-1) in `year`.
inline void take(std::vector<oracle::Row>& rows, const std::string& student, const std::string& prefix, int first,
                 int last, int year) {
    for (int c = first; c <= last; ++c) rows.push_back({student, prefix + std::to_string(c), year});
}

// Rows of a generated instance, for feeding the oracle.
inline std::vector<oracle::Row> rows_of(const srg::Instance& instance) {
    std::vector<oracle::Row> rows;
    for (const auto& s : instance.students())
        for (auto c : s.registrations) rows.push_back({s.id, instance.courses()[c].id, instance.courses()[c].intro_year});
    return rows;
}

// Small generated instances with tight limits so feasibility actually binds.
inline srg::Instance desk_instance(int students, std::uint64_t seed) {
    srg::GeneratorSpec spec;
    spec.students = students;
    spec.new_courses = 9;
    spec.old_courses = 9;
    spec.min_registrations = 2;
    spec.max_registrations = 8;
    spec.seed = seed;
    return srg::generate_instance(spec, "desk" + std::to_string(seed));
}

inline srg::ColumnLimits tight_limits() {
    srg::ColumnLimits limits;
    limits.new_limit = 5;
    limits.old_limit = 5;
    limits.total_limit = 9;
    return limits;
}

}  // namespace fixtures
