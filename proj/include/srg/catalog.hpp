#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "srg/model.hpp"

namespace srg {

// Published description of one instance of the RGD final-year dataset.
struct CatalogEntry {
    std::string_view name;
    int new_courses;
    int old_courses;
    int students;
};

inline constexpr std::array<CatalogEntry, 16> kRgdCatalog{{
    {"RGD41107", 28, 15, 140}, {"RGD4152", 13, 20, 97},  {"RGD4185", 27, 20, 121},  {"RGD42118", 8, 0, 25},
    {"RGD4263", 19, 20, 132},  {"RGD4296", 23, 17, 193}, {"RGD41118", 10, 1, 18},   {"RGD4196", 26, 17, 185},
    {"RGD4241", 8, 21, 67},    {"RGD4274", 20, 23, 147}, {"RGD4141", 9, 17, 68},    {"RGD4174", 29, 19, 149},
    {"RGD42107", 26, 16, 123}, {"RGD4252", 9, 24, 95},   {"RGD4285", 19, 21, 128},  {"RGD4163", 26, 17, 128},
}};

// The one dataset instance that cannot be grouped feasibly with fixed columns.
inline constexpr std::string_view kFixedInfeasibleInstance = "RGD4252";

inline std::optional<CatalogEntry> find_catalog_entry(std::string_view name) {
    for (const auto& e : kRgdCatalog)
        if (e.name == name) return e;
    return std::nullopt;
}

namespace detail {

constexpr std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail

// Synthetic stand-in for a catalog instance: exactly the published number of
// students and NEW/OLD courses, cohort year 4. Course popularity decays
// exponentially; each student takes 3-7 NEW courses and a geometric number
// (at most 4) of OLD ones. Every student stays within 13/13 except
// in the fixed-infeasible instance, where the first student takes 14 OLD
// courses (so only pooled columns can hold it).
inline Instance make_surrogate(const CatalogEntry& entry, std::uint64_t seed = 2020) {
    constexpr int cohort = 4;
    std::mt19937_64 rng(seed ^ detail::fnv1a(entry.name));
    const bool overloaded = entry.name == kFixedInfeasibleInstance && entry.old_courses >= 14;

    auto popularity = [&](int count) {
        std::vector<double> w;
        for (int i = 0; i < count; ++i) w.push_back(std::exp(-0.25 * i));
        return w;
    };
    const auto new_weights = popularity(entry.new_courses);
    const auto old_weights = popularity(entry.old_courses);

    auto draw_subset = [&](const std::vector<double>& weights, int k) {
        std::vector<int> picked;
        std::vector<double> w = weights;
        for (int i = 0; i < k; ++i) {
            std::discrete_distribution<int> pick(w.begin(), w.end());
            const int c = pick(rng);
            picked.push_back(c);
            w[static_cast<std::size_t>(c)] = 0.0;
        }
        return picked;
    };

    std::vector<std::vector<int>> new_regs(static_cast<std::size_t>(entry.students));
    std::vector<std::vector<int>> old_regs(static_cast<std::size_t>(entry.students));
    const int new_hi = std::min(entry.new_courses, 7);
    const int new_lo = std::min(new_hi, 3);
    const int old_hi = std::min(entry.old_courses, 4);
    std::uniform_int_distribution<int> new_count(new_lo, new_hi);
    std::geometric_distribution<int> old_count(0.5);
    for (int s = 0; s < entry.students; ++s) {
        new_regs[static_cast<std::size_t>(s)] = draw_subset(new_weights, new_count(rng));
        old_regs[static_cast<std::size_t>(s)] = draw_subset(old_weights, std::min(old_hi, old_count(rng)));
        if (new_regs[static_cast<std::size_t>(s)].empty() && old_regs[static_cast<std::size_t>(s)].empty()) {
            (entry.new_courses > 0 ? new_regs : old_regs)[static_cast<std::size_t>(s)].push_back(0);
        }
    }
    if (overloaded) old_regs[0] = draw_subset(old_weights, 14);

    // every listed course gets at least one student
    std::uniform_int_distribution<int> any_student(overloaded ? 1 : 0, entry.students - 1);
    auto cover = [&](std::vector<std::vector<int>>& regs, int courses) {
        for (int c = 0; c < courses; ++c) {
            const bool used = std::any_of(regs.begin(), regs.end(), [&](const auto& r) {
                return std::find(r.begin(), r.end(), c) != r.end();
            });
            if (!used) regs[static_cast<std::size_t>(any_student(rng))].push_back(c);
        }
    };
    cover(new_regs, entry.new_courses);
    cover(old_regs, entry.old_courses);

    std::vector<Registration> rows;
    for (int s = 0; s < entry.students; ++s) {
        const std::string sid = std::to_string(400000 + s);
        for (int c : new_regs[static_cast<std::size_t>(s)]) rows.push_back({sid, "NEW" + std::to_string(c), cohort});
        for (int c : old_regs[static_cast<std::size_t>(s)]) {
            rows.push_back({sid, "OLD" + std::to_string(c), 1 + c % (cohort - 1)});
        }
    }
    return Instance::from_registrations(std::string(entry.name), rows, cohort);
}

}  // namespace srg
