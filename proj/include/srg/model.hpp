#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "srg/course_set.hpp"

namespace srg {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Raised when a caller breaks an operation's precondition (bad index, mismatched sizes).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class ColumnMode { Fixed, Dynamic };
enum class CourseKind { New, Old };

// Result-sheet column budget per group. Fixed mode limits new and old course
// columns separately; Dynamic mode pools them into `total_limit`.
struct ColumnLimits {
    int new_limit = 13;
    int old_limit = 13;
    int total_limit = 26;
    ColumnMode mode = ColumnMode::Fixed;

    friend bool operator==(const ColumnLimits&, const ColumnLimits&) = default;
};

inline ColumnLimits dynamic_limits(int total = 26) {
    ColumnLimits limits;
    limits.total_limit = total;
    limits.mode = ColumnMode::Dynamic;
    return limits;
}

struct Course {
    std::string id;
    int intro_year = 1;

    friend bool operator==(const Course&, const Course&) = default;
};

struct Student {
    std::string id;
    std::vector<std::size_t> registrations;  // sorted course indices

    friend bool operator==(const Student&, const Student&) = default;
};

// One (student, course, year) row of an instance file.
struct Registration {
    std::string student;
    std::string course;
    int year = 1;
};

// A single-cohort grouping problem. Immutable once built; safe to share
// between concurrent solver runs.
class Instance {
public:
    // Aggregates rows into students (first-appearance order) and courses.
    // Duplicate (student, course) pairs are dropped. A course listed with two
    // different years is rejected. The cohort year defaults to the largest
    // year seen.
    static Instance from_registrations(std::string name, std::span<const Registration> rows,
                                       std::optional<int> cohort_year_override = std::nullopt,
                                       ColumnLimits limits = {}) {
        if (rows.empty()) throw std::invalid_argument("instance has no registrations");
        Instance inst;
        inst.name_ = std::move(name);
        inst.limits_ = limits;

        std::unordered_map<std::string, std::size_t> student_index;
        std::vector<std::vector<std::size_t>> regs;
        int max_year = 0;
        for (const auto& row : rows) {
            if (row.year < 1) throw std::invalid_argument("course " + row.course + " has year < 1");
            auto [cit, cnew] = inst.course_index_.try_emplace(row.course, inst.courses_.size());
            if (cnew) {
                inst.courses_.push_back({row.course, row.year});
            } else if (inst.courses_[cit->second].intro_year != row.year) {
                throw std::invalid_argument("course " + row.course + " listed with years " +
                                            std::to_string(inst.courses_[cit->second].intro_year) + " and " +
                                            std::to_string(row.year));
            }
            auto [sit, snew] = student_index.try_emplace(row.student, inst.students_.size());
            if (snew) {
                inst.students_.push_back({row.student, {}});
                regs.emplace_back();
            }
            regs[sit->second].push_back(cit->second);
            max_year = std::max(max_year, row.year);
        }
        for (std::size_t s = 0; s < regs.size(); ++s) {
            auto& r = regs[s];
            std::sort(r.begin(), r.end());
            r.erase(std::unique(r.begin(), r.end()), r.end());
            inst.students_[s].registrations = std::move(r);
        }
        inst.student_index_ = std::move(student_index);
        inst.cohort_year_ = cohort_year_override.value_or(max_year);
        if (inst.cohort_year_ < 1) throw std::invalid_argument("cohort year must be >= 1");
        inst.classify();
        return inst;
    }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] int cohort_year() const noexcept { return cohort_year_; }
    [[nodiscard]] const ColumnLimits& limits() const noexcept { return limits_; }
    [[nodiscard]] std::span<const Course> courses() const noexcept { return courses_; }
    [[nodiscard]] std::span<const Student> students() const noexcept { return students_; }
    [[nodiscard]] std::size_t student_count() const noexcept { return students_.size(); }
    [[nodiscard]] std::size_t course_count() const noexcept { return courses_.size(); }

    [[nodiscard]] CourseKind kind(std::size_t course) const { return kinds_.at(course); }
    [[nodiscard]] const CourseSet& new_courses(std::size_t student) const { return new_sets_.at(student); }
    [[nodiscard]] const CourseSet& old_courses(std::size_t student) const { return old_sets_.at(student); }
    [[nodiscard]] int registration_count(std::size_t student) const {
        return static_cast<int>(students_.at(student).registrations.size());
    }

    [[nodiscard]] std::optional<std::size_t> find_student(std::string_view id) const {
        auto it = student_index_.find(std::string(id));
        if (it == student_index_.end()) return std::nullopt;
        return it->second;
    }
    [[nodiscard]] std::optional<std::size_t> find_course(std::string_view id) const {
        auto it = course_index_.find(std::string(id));
        if (it == course_index_.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] int new_course_total() const {
        return static_cast<int>(std::count(kinds_.begin(), kinds_.end(), CourseKind::New));
    }
    [[nodiscard]] int old_course_total() const { return static_cast<int>(courses_.size()) - new_course_total(); }

    // Courses whose year is later than the cohort year. They are kept (and
    // classified OLD) but reported so callers can surface the data problem.
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    [[nodiscard]] Instance with_limits(ColumnLimits limits) const {
        Instance copy = *this;
        copy.limits_ = limits;
        return copy;
    }

    friend bool operator==(const Instance& a, const Instance& b) {
        return a.name_ == b.name_ && a.cohort_year_ == b.cohort_year_ && a.courses_ == b.courses_ &&
               a.students_ == b.students_ && a.limits_ == b.limits_;
    }

private:
    void classify() {
        kinds_.clear();
        warnings_.clear();
        for (const auto& c : courses_) {
            kinds_.push_back(c.intro_year == cohort_year_ ? CourseKind::New : CourseKind::Old);
            if (c.intro_year > cohort_year_) {
                warnings_.push_back("course " + c.id + " introduced in year " + std::to_string(c.intro_year) +
                                    " after cohort year " + std::to_string(cohort_year_));
            }
        }
        new_sets_.assign(students_.size(), CourseSet(courses_.size()));
        old_sets_.assign(students_.size(), CourseSet(courses_.size()));
        for (std::size_t s = 0; s < students_.size(); ++s) {
            for (auto c : students_[s].registrations) {
                (kinds_[c] == CourseKind::New ? new_sets_[s] : old_sets_[s]).insert(c);
            }
        }
    }

    std::string name_;
    int cohort_year_ = 1;
    ColumnLimits limits_;
    std::vector<Course> courses_;
    std::vector<Student> students_;
    std::unordered_map<std::string, std::size_t> course_index_;
    std::unordered_map<std::string, std::size_t> student_index_;
    std::vector<CourseKind> kinds_;
    std::vector<CourseSet> new_sets_;
    std::vector<CourseSet> old_sets_;
    std::vector<std::string> warnings_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\v\f";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    const char delim = line.find('\t') != std::string_view::npos && line.find(',') == std::string_view::npos ? '\t' : ',';
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(delim, start);
        fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

}  // namespace detail

// Reads comma- or tab-separated (student, course, year) rows. A first row whose
// year field is not an integer is treated as a header.
inline Instance parse_instance(std::istream& in, std::string name = "instance",
                               std::optional<int> cohort_year_override = std::nullopt, ColumnLimits limits = {}) {
    std::vector<Registration> rows;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data_or_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto view = detail::trim(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (view.empty()) continue;
        auto fields = detail::split_fields(view);
        if (fields.size() != 3) {
            throw ParseError(line_no, "expected 3 fields (student, course, year), got " + std::to_string(fields.size()));
        }
        auto year = detail::parse_int(fields[2]);
        if (!year) {
            if (!seen_data_or_header) {
                seen_data_or_header = true;
                continue;
            }
            throw ParseError(line_no, "year '" + std::string(fields[2]) + "' is not an integer");
        }
        seen_data_or_header = true;
        if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty student or course id");
        if (*year < 1) throw ParseError(line_no, "year must be >= 1");
        rows.push_back({std::string(fields[0]), std::string(fields[1]), *year});
    }
    if (rows.empty()) throw ParseError(line_no, "no registrations found");
    try {
        return Instance::from_registrations(std::move(name), rows, cohort_year_override, limits);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
    }
}

// Writes one row per registration, students in instance order, with a header.
inline void write_instance(std::ostream& out, const Instance& instance) {
    out << "Student,Course,Year\n";
    for (const auto& s : instance.students()) {
        for (auto c : s.registrations) {
            const auto& course = instance.courses()[c];
            out << s.id << ',' << course.id << ',' << course.intro_year << '\n';
        }
    }
}

struct CourseProfile {
    int new_count = 0;
    int old_count = 0;

    [[nodiscard]] int total() const noexcept { return new_count + old_count; }
    friend bool operator==(const CourseProfile&, const CourseProfile&) = default;
};

// Unique NEW and OLD courses over a set of students.
inline CourseProfile course_profile(const Instance& instance, std::span<const std::size_t> members) {
    CourseSet new_union(instance.course_count());
    CourseSet old_union(instance.course_count());
    for (auto s : members) {
        if (s >= instance.student_count()) {
            throw ContractViolation("student index " + std::to_string(s) + " out of range");
        }
        new_union |= instance.new_courses(s);
        old_union |= instance.old_courses(s);
    }
    return {new_union.count(), old_union.count()};
}

// A possibly partial partition of an instance's students into dense groups
// 0..k-1. Members of each group are kept in ascending student order.
class Grouping {
public:
    explicit Grouping(const Instance& instance)
        : instance_name_(instance.name()), assignment_(instance.student_count()) {}

    // Groups are taken in the given order; empty groups, duplicates, and
    // out-of-range indices are contract violations.
    static Grouping from_groups(const Instance& instance, std::vector<std::vector<std::size_t>> groups) {
        Grouping g(instance);
        for (auto& members : groups) {
            if (members.empty()) throw ContractViolation("empty group");
            std::sort(members.begin(), members.end());
            const auto index = g.groups_.size();
            for (auto s : members) {
                if (s >= g.assignment_.size()) throw ContractViolation("student index out of range");
                if (g.assignment_[s]) throw ContractViolation("student assigned to more than one group");
                g.assignment_[s] = index;
            }
            g.groups_.push_back(std::move(members));
        }
        return g;
    }

    // Complete grouping from one label per student; labels are relabelled densely
    // in order of first appearance.
    template <class Label>
    static Grouping from_labels(const Instance& instance, std::span<const Label> labels) {
        if (labels.size() != instance.student_count()) throw ContractViolation("label count != student count");
        Grouping g(instance);
        std::unordered_map<Label, std::size_t> dense;
        for (std::size_t s = 0; s < labels.size(); ++s) {
            auto [it, inserted] = dense.try_emplace(labels[s], g.groups_.size());
            if (inserted) g.groups_.emplace_back();
            g.groups_[it->second].push_back(s);
            g.assignment_[s] = it->second;
        }
        return g;
    }

    [[nodiscard]] const std::string& instance_name() const noexcept { return instance_name_; }
    [[nodiscard]] std::size_t student_count() const noexcept { return assignment_.size(); }
    [[nodiscard]] std::size_t group_count() const noexcept { return groups_.size(); }
    [[nodiscard]] const std::vector<std::vector<std::size_t>>& groups() const noexcept { return groups_; }
    [[nodiscard]] std::span<const std::size_t> members(std::size_t group) const { return groups_.at(group); }
    [[nodiscard]] std::optional<std::size_t> group_of(std::size_t student) const { return assignment_.at(student); }

    [[nodiscard]] std::size_t assigned_count() const {
        std::size_t n = 0;
        for (const auto& g : groups_) n += g.size();
        return n;
    }
    [[nodiscard]] bool complete() const { return assigned_count() == assignment_.size(); }

    [[nodiscard]] std::vector<std::size_t> unassigned() const {
        std::vector<std::size_t> out;
        for (std::size_t s = 0; s < assignment_.size(); ++s)
            if (!assignment_[s]) out.push_back(s);
        return out;
    }

    // Re-derives every invariant from scratch; returns a description of each breach.
    [[nodiscard]] std::vector<std::string> validate(const Instance& instance) const {
        std::vector<std::string> problems;
        if (instance.name() != instance_name_) problems.push_back("grouping belongs to instance " + instance_name_);
        if (assignment_.size() != instance.student_count()) {
            problems.push_back("student count mismatch");
            return problems;
        }
        std::vector<int> seen(assignment_.size(), 0);
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            if (groups_[g].empty()) problems.push_back("group " + std::to_string(g) + " is empty");
            for (auto s : groups_[g]) {
                if (s >= assignment_.size()) {
                    problems.push_back("group " + std::to_string(g) + " holds out-of-range student");
                    continue;
                }
                ++seen[s];
                if (assignment_[s] != g) problems.push_back("assignment table disagrees for student " + std::to_string(s));
            }
        }
        for (std::size_t s = 0; s < seen.size(); ++s) {
            if (seen[s] > 1) problems.push_back("student " + std::to_string(s) + " is in more than one group");
            if (seen[s] == 0 && assignment_[s]) problems.push_back("student " + std::to_string(s) + " has a dangling label");
        }
        return problems;
    }

    friend bool operator==(const Grouping&, const Grouping&) = default;

private:
    std::string instance_name_;
    std::vector<std::optional<std::size_t>> assignment_;
    std::vector<std::vector<std::size_t>> groups_;
};

// Parameters for synthetic instances. NEW courses sit in year 4 (the cohort
// year); OLD courses are spread over years 1-3.
struct GeneratorSpec {
    int students = 10;
    int new_courses = 5;
    int old_courses = 5;
    int min_registrations = 1;
    int max_registrations = 5;
    std::uint64_t seed = 1;
};

inline Instance generate_instance(const GeneratorSpec& spec, std::string name = "generated") {
    const int total = spec.new_courses + spec.old_courses;
    if (spec.students < 1 || spec.new_courses < 0 || spec.old_courses < 0 || total < 1) {
        throw std::invalid_argument("generator counts must be positive");
    }
    if (spec.min_registrations < 1 || spec.min_registrations > spec.max_registrations || spec.max_registrations > total) {
        throw std::invalid_argument("registration range infeasible for " + std::to_string(total) + " courses");
    }
    constexpr int cohort = 4;
    std::mt19937_64 rng(spec.seed);
    std::vector<Registration> rows;
    std::vector<int> courses(static_cast<std::size_t>(total));
    std::iota(courses.begin(), courses.end(), 0);
    auto course_name = [&](int c) {
        return c < spec.new_courses ? "N" + std::to_string(c) : "O" + std::to_string(c - spec.new_courses);
    };
    auto course_year = [&](int c) { return c < spec.new_courses ? cohort : 1 + (c - spec.new_courses) % (cohort - 1); };
    std::uniform_int_distribution<int> count_dist(spec.min_registrations, spec.max_registrations);
    for (int s = 0; s < spec.students; ++s) {
        const int k = count_dist(rng);
        // partial Fisher-Yates: first k entries become a uniform k-subset
        for (int i = 0; i < k; ++i) {
            std::uniform_int_distribution<int> pick(i, total - 1);
            std::swap(courses[static_cast<std::size_t>(i)], courses[static_cast<std::size_t>(pick(rng))]);
        }
        for (int i = 0; i < k; ++i) {
            const int c = courses[static_cast<std::size_t>(i)];
            rows.push_back({"S" + std::to_string(s), course_name(c), course_year(c)});
        }
    }
    return Instance::from_registrations(std::move(name), rows, cohort);
}

}  // namespace srg
