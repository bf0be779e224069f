#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "srg/aco.hpp"
#include "srg/constructive.hpp"
#include "srg/fitness.hpp"
#include "srg/ga.hpp"
#include "srg/io.hpp"
#include "srg/model.hpp"

namespace srg {

enum class Algorithm { HFO, RO, ACO, GA };

inline constexpr std::array<Algorithm, 4> kAllAlgorithms{Algorithm::HFO, Algorithm::RO, Algorithm::ACO, Algorithm::GA};

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::HFO: return "HFO";
        case Algorithm::RO: return "RO";
        case Algorithm::ACO: return "ACO";
        case Algorithm::GA: return "GA";
    }
    return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "hfo") return Algorithm::HFO;
    if (lower == "ro") return Algorithm::RO;
    if (lower == "aco") return Algorithm::ACO;
    if (lower == "ga") return Algorithm::GA;
    return std::nullopt;
}

struct SolverSettings {
    FitnessConfig fitness{};
    AcoConfig aco{};
    GaConfig ga{};
};

struct SolveOutcome {
    Grouping grouping;
    PenaltyBreakdown breakdown;
    std::vector<HistoryPoint> history;  // empty for HFO/RO
    double wall_seconds = 0.0;
};

inline SolveOutcome run_algorithm(const Instance& instance, Algorithm algorithm, const SolverSettings& settings,
                                  std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&](Grouping g, std::vector<HistoryPoint> history) {
        auto breakdown = evaluate(instance, g, settings.fitness);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        return SolveOutcome{std::move(g), breakdown, std::move(history), elapsed.count()};
    };
    switch (algorithm) {
        case Algorithm::HFO: return finish(hfo_solve(instance, settings.fitness), {});
        case Algorithm::RO: return finish(ro_solve(instance, settings.fitness, seed), {});
        case Algorithm::ACO: {
            auto cfg = settings.aco;
            cfg.seed = seed;
            auto r = aco_solve(instance, cfg, settings.fitness);
            return finish(std::move(r.best), std::move(r.history));
        }
        case Algorithm::GA: {
            auto cfg = settings.ga;
            cfg.seed = seed;
            auto r = ga_solve(instance, cfg, settings.fitness);
            return finish(std::move(r.best), std::move(r.history));
        }
    }
    throw ContractViolation("unknown algorithm");
}

struct RunRecord {
    std::uint64_t seed = 0;
    double fitness = 0.0;
    std::size_t groups = 0;
    bool feasible = false;
    double wall_time = 0.0;
};

struct RunReport {
    std::string instance;
    Algorithm algorithm = Algorithm::HFO;
    ColumnMode column_mode = ColumnMode::Fixed;
    FitnessMode fitness_mode = FitnessMode::PaperCompat;
    std::vector<RunRecord> runs;
    double min = 0.0;
    double max = 0.0;
    double avg = 0.0;
};

struct BenchError {
    std::string instance;
    std::string message;
};

struct BenchResult {
    std::vector<RunReport> reports;
    std::vector<BenchError> errors;
};

inline void summarize(RunReport& report) {
    if (report.runs.empty()) return;
    auto [lo, hi] = std::minmax_element(report.runs.begin(), report.runs.end(),
                                        [](const RunRecord& a, const RunRecord& b) { return a.fitness < b.fitness; });
    report.min = lo->fitness;
    report.max = hi->fitness;
    double sum = 0.0;
    for (const auto& r : report.runs) sum += r.fitness;
    report.avg = sum / static_cast<double>(report.runs.size());
    // the mean of identical doubles can drift by an ulp
    report.avg = std::clamp(report.avg, report.min, report.max);
}

// Seeds are base_seed + run index. HFO is deterministic: it runs once and its
// record is replicated across the repetitions.
inline RunReport bench_cell(const Instance& instance, Algorithm algorithm, const SolverSettings& settings,
                            int repetitions, std::uint64_t base_seed) {
    RunReport report;
    report.instance = instance.name();
    report.algorithm = algorithm;
    report.column_mode = settings.fitness.limits.mode;
    report.fitness_mode = settings.fitness.fitness_mode;
    std::optional<SolveOutcome> hfo;
    for (int i = 0; i < repetitions; ++i) {
        const auto seed = base_seed + static_cast<std::uint64_t>(i);
        SolveOutcome outcome = algorithm == Algorithm::HFO && hfo ? *hfo : run_algorithm(instance, algorithm, settings, seed);
        if (algorithm == Algorithm::HFO && !hfo) hfo = outcome;
        report.runs.push_back({seed, outcome.breakdown.fitness, outcome.grouping.group_count(),
                               is_feasible(outcome.breakdown), outcome.wall_seconds});
    }
    summarize(report);
    return report;
}

struct BenchPlan {
    int repetitions = 10;
    std::uint64_t base_seed = 1;
    std::vector<ColumnMode> column_modes{ColumnMode::Fixed};
    FitnessMode fitness_mode = FitnessMode::PaperCompat;
    bool all_algorithms_dynamic = false;  // dynamic columns run ACO only unless set
    SolverSettings settings{};
};

inline std::vector<Algorithm> algorithms_for(ColumnMode mode, const BenchPlan& plan) {
    if (mode == ColumnMode::Dynamic && !plan.all_algorithms_dynamic) return {Algorithm::ACO};
    return {kAllAlgorithms.begin(), kAllAlgorithms.end()};
}

inline ColumnLimits limits_for(ColumnMode mode, ColumnLimits base) {
    base.mode = mode;
    return base;
}

inline void bench_instance(const Instance& instance, const BenchPlan& plan, BenchResult& result) {
    for (auto mode : plan.column_modes) {
        SolverSettings settings = plan.settings;
        settings.fitness.limits = limits_for(mode, settings.fitness.limits);
        settings.fitness.fitness_mode = plan.fitness_mode;
        for (auto algorithm : algorithms_for(mode, plan)) {
            result.reports.push_back(bench_cell(instance, algorithm, settings, plan.repetitions, plan.base_seed));
        }
    }
}

// Instance files in `dir` in name order (regular files only).
inline std::vector<std::filesystem::path> instance_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().filename().string().front() != '.') files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

// Unreadable or malformed files become error rows; the rest still run.
inline BenchResult bench_files(const std::vector<std::filesystem::path>& files, const BenchPlan& plan,
                               std::optional<int> cohort_year = std::nullopt) {
    BenchResult result;
    for (const auto& f : files) {
        std::optional<Instance> instance;
        try {
            instance = load_instance(f.string(), cohort_year);
        } catch (const std::exception& e) {
            result.errors.push_back({f.stem().string(), e.what()});
            continue;
        }
        bench_instance(*instance, plan, result);
    }
    return result;
}

inline std::string format_fitness(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline json report_to_json(const RunReport& r) {
    json runs = json::array();
    for (const auto& run : r.runs) {
        runs.push_back({{"seed", run.seed},
                        {"fitness", run.fitness},
                        {"groups", run.groups},
                        {"feasible", run.feasible},
                        {"wall_time", run.wall_time}});
    }
    return {{"instance", r.instance},
            {"algorithm", to_string(r.algorithm)},
            {"mode", {{"columns", to_string(r.column_mode)}, {"fitness", to_string(r.fitness_mode)}}},
            {"runs", std::move(runs)},
            {"min", r.min},
            {"max", r.max},
            {"avg", r.avg}};
}

inline json bench_to_json(const BenchResult& result) {
    json reports = json::array();
    for (const auto& r : result.reports) reports.push_back(report_to_json(r));
    json errors = json::array();
    for (const auto& e : result.errors) errors.push_back({{"instance", e.instance}, {"error", e.message}});
    return {{"reports", std::move(reports)}, {"errors", std::move(errors)}};
}

// One table per (column mode, fitness mode): a row per instance, Min/Max/Avg
// columns per algorithm, fitness to two decimals.
inline std::string bench_to_markdown(const BenchResult& result) {
    std::ostringstream out;
    std::vector<std::pair<ColumnMode, FitnessMode>> modes;
    for (const auto& r : result.reports) {
        std::pair key{r.column_mode, r.fitness_mode};
        if (std::find(modes.begin(), modes.end(), key) == modes.end()) modes.push_back(key);
    }
    for (const auto& [cols, fit] : modes) {
        std::vector<Algorithm> algos;
        std::vector<std::string> instances;
        for (const auto& r : result.reports) {
            if (r.column_mode != cols || r.fitness_mode != fit) continue;
            if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end()) algos.push_back(r.algorithm);
            if (std::find(instances.begin(), instances.end(), r.instance) == instances.end()) instances.push_back(r.instance);
        }
        out << "### " << to_string(cols) << " columns, " << to_string(fit) << " fitness\n\n| Instance |";
        for (auto a : algos) out << ' ' << to_string(a) << " Min | " << to_string(a) << " Max | " << to_string(a) << " Avg |";
        out << "\n|---|";
        for (std::size_t i = 0; i < algos.size(); ++i) out << "---|---|---|";
        out << '\n';
        for (const auto& inst : instances) {
            out << "| " << inst << " |";
            for (auto a : algos) {
                auto it = std::find_if(result.reports.begin(), result.reports.end(), [&](const RunReport& r) {
                    return r.instance == inst && r.algorithm == a && r.column_mode == cols && r.fitness_mode == fit;
                });
                if (it == result.reports.end()) {
                    out << " - | - | - |";
                } else {
                    out << ' ' << format_fitness(it->min) << " | " << format_fitness(it->max) << " | "
                        << format_fitness(it->avg) << " |";
                }
            }
            out << '\n';
        }
        out << '\n';
    }
    if (!result.errors.empty()) {
        out << "### Errors\n\n| Instance | Error |\n|---|---|\n";
        for (const auto& e : result.errors) out << "| " << e.instance << " | " << e.message << " |\n";
    }
    return out.str();
}

}  // namespace srg
