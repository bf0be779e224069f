#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "srg/aco.hpp"
#include "srg/fitness.hpp"
#include "srg/model.hpp"

namespace srg {

using json = nlohmann::json;

inline json grouping_to_json(const Instance& instance, const Grouping& grouping) {
    json groups = json::array();
    for (const auto& members : grouping.groups()) {
        json ids = json::array();
        for (auto s : members) ids.push_back(instance.students()[s].id);
        groups.push_back(std::move(ids));
    }
    json unassigned = json::array();
    for (auto s : grouping.unassigned()) unassigned.push_back(instance.students()[s].id);
    return {{"instance", instance.name()}, {"groups", std::move(groups)}, {"unassigned", std::move(unassigned)}};
}

// Student-id lists as they appear in a grouping file, before any validation.
struct RawGrouping {
    std::string instance;
    std::vector<std::vector<std::string>> groups;
    std::vector<std::string> unassigned;
};

inline RawGrouping raw_grouping_from_json(const json& j) {
    RawGrouping raw;
    raw.instance = j.value("instance", std::string{});
    for (const auto& g : j.at("groups")) raw.groups.push_back(g.get<std::vector<std::string>>());
    if (j.contains("unassigned")) raw.unassigned = j.at("unassigned").get<std::vector<std::string>>();
    return raw;
}

// Strict conversion; unknown ids, duplicates, and empty groups throw.
inline Grouping grouping_from_json(const Instance& instance, const json& j) {
    const auto raw = raw_grouping_from_json(j);
    std::vector<std::vector<std::size_t>> groups;
    for (const auto& ids : raw.groups) {
        auto& members = groups.emplace_back();
        for (const auto& id : ids) {
            auto s = instance.find_student(id);
            if (!s) throw ContractViolation("unknown student '" + id + "'");
            members.push_back(*s);
        }
    }
    return Grouping::from_groups(instance, std::move(groups));
}

inline json breakdown_to_json(const PenaltyBreakdown& b) {
    return {{"unfit", b.unfit},       {"size", b.size},       {"unassigned", b.unassigned},
            {"groups", b.group_count}, {"fitness", b.fitness}, {"mode", to_string(b.mode)}};
}

inline json history_to_json(std::span<const HistoryPoint> history, const std::string& step_key) {
    json out = json::array();
    for (const auto& h : history) out.push_back({{step_key, h.step}, {"best_fitness", h.best_fitness}});
    return out;
}

inline Instance load_instance(const std::string& path, std::optional<int> cohort_year = std::nullopt,
                              ColumnLimits limits = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    auto name = path;
    if (auto slash = name.find_last_of("/\\"); slash != std::string::npos) name = name.substr(slash + 1);
    if (auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return parse_instance(in, name, cohort_year, limits);
}

}  // namespace srg
