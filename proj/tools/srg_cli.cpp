#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "srg/srg.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string mode = "fixed";
    std::string fitness = "paper-compat";
    std::optional<int> cohort_year;
    int new_limit = 13;
    int old_limit = 13;
    int total_limit = 26;
};

const std::map<std::string, srg::ColumnMode> kModes{{"fixed", srg::ColumnMode::Fixed},
                                                    {"dynamic", srg::ColumnMode::Dynamic}};
const std::map<std::string, srg::FitnessMode> kFitness{{"strict", srg::FitnessMode::Strict},
                                                       {"paper-compat", srg::FitnessMode::PaperCompat}};
const std::map<std::string, srg::CrossoverKind> kCrossover{{"single", srg::CrossoverKind::SinglePoint},
                                                           {"two", srg::CrossoverKind::TwoPoint},
                                                           {"uniform", srg::CrossoverKind::Uniform}};
const std::map<std::string, srg::SelectionKind> kSelection{{"tournament", srg::SelectionKind::Tournament},
                                                           {"roulette", srg::SelectionKind::Roulette}};

void add_limit_flags(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("--cohort-year", opts.cohort_year, "Current year of study (default: latest year in the file)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--new-limit", opts.new_limit, "New-course columns per group")->check(CLI::NonNegativeNumber);
    cmd.add_option("--old-limit", opts.old_limit, "Old-course columns per group")->check(CLI::NonNegativeNumber);
    cmd.add_option("--total-limit", opts.total_limit, "Pooled columns per group (dynamic mode)")
        ->check(CLI::NonNegativeNumber);
}

void add_mode_flags(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("--mode", opts.mode, "Column limits: fixed or dynamic")
        ->check(CLI::IsMember({"fixed", "dynamic"}));
    cmd.add_option("--fitness", opts.fitness, "Size term: strict or paper-compat")
        ->check(CLI::IsMember({"strict", "paper-compat"}));
    add_limit_flags(cmd, opts);
}

srg::ColumnLimits limits_of(const CommonOptions& opts, srg::ColumnMode mode) {
    srg::ColumnLimits limits;
    limits.new_limit = opts.new_limit;
    limits.old_limit = opts.old_limit;
    limits.total_limit = opts.total_limit;
    limits.mode = mode;
    return limits;
}

struct AlgoOptions {
    std::string crossover = "single";
    std::string selection = "tournament";
};

void add_solver_flags(CLI::App& cmd, srg::SolverSettings& s, AlgoOptions& algo) {
    auto& aco = s.aco;
    cmd.add_option("--aco-rho", aco.rho, "Evaporation rate")->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--aco-alpha", aco.alpha, "Exponent on registration count");
    cmd.add_option("--aco-beta", aco.beta, "Exponent on trail value");
    cmd.add_option("--aco-fit-exponent", aco.fit_exponent, "Exponent on 1/(1+added columns)");
    cmd.add_option("--aco-ants", aco.num_ants, "Ants per iteration")->check(CLI::PositiveNumber);
    cmd.add_option("--aco-iterations", aco.num_iterations, "Iteration cap")->check(CLI::PositiveNumber);
    cmd.add_option("--aco-stall", aco.stall_limit, "Stop after this many iterations without improvement")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--aco-tmax", aco.t_max, "Upper trail bound")->check(CLI::PositiveNumber);
    cmd.add_option("--aco-tmin", aco.t_min, "Lower trail bound")->check(CLI::PositiveNumber);

    auto& ga = s.ga;
    cmd.add_option("--ga-population", ga.population_size, "Population size")->check(CLI::PositiveNumber);
    cmd.add_option("--ga-tournament", ga.tournament_size, "Tournament size")->check(CLI::PositiveNumber);
    cmd.add_option("--ga-pcx", ga.p_crossover, "Crossover probability")->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--ga-pmut", ga.p_mutation, "Mutation probability")->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--ga-crossover", algo.crossover, "single, two or uniform")
        ->check(CLI::IsMember({"single", "two", "uniform"}));
    cmd.add_option("--ga-selection", algo.selection, "tournament or roulette")
        ->check(CLI::IsMember({"tournament", "roulette"}));
    cmd.add_option("--ga-stall", ga.stall_generations, "Stop after this many generations without improvement")
        ->check(CLI::PositiveNumber);
}

void finish_solver_settings(srg::SolverSettings& s, const AlgoOptions& algo, const CommonOptions& opts,
                            srg::ColumnMode mode) {
    s.ga.crossover_kind = kCrossover.at(algo.crossover);
    s.ga.selection_kind = kSelection.at(algo.selection);
    s.fitness.limits = limits_of(opts, mode);
    s.fitness.fitness_mode = kFitness.at(opts.fitness);
    if (s.aco.t_min > s.aco.t_max) throw CLI::ValidationError("--aco-tmin", "must not exceed --aco-tmax");
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::optional<fs::path> default_dataset_dir() {
    if (const char* dir = std::getenv("SRG_DATASET_DIR"); dir && *dir) return fs::path(dir);
    return std::nullopt;
}

// --- solve ---

struct SolveArgs {
    std::string instance;
    std::string algorithm = "hfo";
    std::uint64_t seed = 1;
    std::string out;
    CommonOptions common;
    AlgoOptions algo;
    srg::SolverSettings settings;
};

int run_solve(SolveArgs& a) {
    const auto algorithm = srg::parse_algorithm(a.algorithm);
    if (!algorithm) {
        std::cerr << "unknown algorithm '" << a.algorithm << "' (expected hfo, ro, aco or ga)\n";
        return 1;
    }
    finish_solver_settings(a.settings, a.algo, a.common, kModes.at(a.common.mode));
    const auto instance = srg::load_instance(a.instance, a.common.cohort_year, a.settings.fitness.limits);
    for (const auto& w : instance.warnings()) std::cerr << "warning: " << w << '\n';

    const auto outcome = srg::run_algorithm(instance, *algorithm, a.settings, a.seed);
    auto doc = srg::grouping_to_json(instance, outcome.grouping);
    doc["breakdown"] = srg::breakdown_to_json(outcome.breakdown);
    doc["algorithm"] = srg::to_string(*algorithm);
    doc["seed"] = a.seed;
    doc["history"] = srg::history_to_json(outcome.history, *algorithm == srg::Algorithm::GA ? "generation" : "iteration");
    write_text(a.out, doc.dump(2) + "\n");

    const bool feasible = srg::is_feasible(outcome.breakdown);
    std::cerr << instance.name() << ' ' << srg::to_string(*algorithm) << " fitness "
              << srg::format_fitness(outcome.breakdown.fitness) << " groups " << outcome.grouping.group_count()
              << (feasible ? " feasible" : " infeasible") << '\n';
    return feasible ? 0 : 2;
}

// --- bench ---

struct BenchArgs {
    std::string dir;
    bool surrogate = false;
    int runs = 10;
    std::uint64_t seed = 1;
    std::string mode = "fixed";
    bool all_algorithms = false;
    std::string out;
    CommonOptions common;
    AlgoOptions algo;
    srg::SolverSettings settings;
};

int run_bench(BenchArgs& a) {
    srg::BenchPlan plan;
    plan.repetitions = a.runs;
    plan.base_seed = a.seed;
    plan.all_algorithms_dynamic = a.all_algorithms;
    if (a.mode == "both") {
        plan.column_modes = {srg::ColumnMode::Fixed, srg::ColumnMode::Dynamic};
    } else {
        plan.column_modes = {kModes.at(a.mode)};
    }
    finish_solver_settings(a.settings, a.algo, a.common, srg::ColumnMode::Fixed);
    plan.fitness_mode = a.settings.fitness.fitness_mode;
    plan.settings = a.settings;

    srg::BenchResult result;
    if (a.surrogate) {
        for (const auto& entry : srg::kRgdCatalog) {
            srg::bench_instance(srg::make_surrogate(entry).with_limits(a.settings.fitness.limits), plan, result);
        }
    } else {
        fs::path dir = a.dir;
        if (dir.empty()) {
            auto env = default_dataset_dir();
            if (!env) {
                std::cerr << "no instance directory given and SRG_DATASET_DIR is not set\n";
                return 1;
            }
            dir = *env;
        }
        if (!fs::is_directory(dir)) {
            std::cerr << "not a directory: " << dir.string() << '\n';
            return 1;
        }
        result = srg::bench_files(srg::instance_files(dir), plan, a.common.cohort_year);
    }

    const auto json_text = srg::bench_to_json(result).dump(2) + "\n";
    const auto md_text = srg::bench_to_markdown(result);
    if (a.out.empty()) {
        std::cout << md_text;
    } else {
        fs::create_directories(a.out);
        write_text((fs::path(a.out) / "report.json").string(), json_text);
        write_text((fs::path(a.out) / "report.md").string(), md_text);
        std::cerr << "wrote " << (fs::path(a.out) / "report.json").string() << " and report.md\n";
    }
    for (const auto& e : result.errors) std::cerr << "error: " << e.instance << ": " << e.message << '\n';
    return result.reports.empty() ? 1 : 0;
}

// --- check ---

struct CheckArgs {
    std::string instance;
    std::string grouping;
    CommonOptions common;
};

int run_check(CheckArgs& a) {
    const auto limits = limits_of(a.common, kModes.at(a.common.mode));
    const auto instance = srg::load_instance(a.instance, a.common.cohort_year, limits);
    std::ifstream in(a.grouping);
    if (!in) throw std::runtime_error("cannot open " + a.grouping);
    const auto raw = srg::raw_grouping_from_json(srg::json::parse(in));
    const auto report = srg::check_grouping(instance, raw, limits);
    for (const auto& v : report.violations) {
        std::cout << "constraint " << v.constraint;
        if (v.group) std::cout << " group " << *v.group;
        std::cout << ": " << v.message << '\n';
    }
    std::cout << (report.feasible() ? "feasible" : "infeasible") << " (" << report.group_count << " groups, "
              << report.violations.size() << " violations)\n";
    return report.feasible() ? 0 : 2;
}

// --- gen ---

struct GenArgs {
    srg::GeneratorSpec spec;
    std::string name = "generated";
    bool surrogate = false;
    std::uint64_t surrogate_seed = 2020;
    std::string out;
};

int run_gen(const GenArgs& a) {
    if (a.surrogate) {
        if (a.out.empty()) {
            std::cerr << "--surrogate needs --out DIR\n";
            return 1;
        }
        fs::create_directories(a.out);
        for (const auto& entry : srg::kRgdCatalog) {
            std::ofstream file(fs::path(a.out) / (std::string(entry.name) + ".csv"));
            if (!file) throw std::runtime_error("cannot write into " + a.out);
            srg::write_instance(file, srg::make_surrogate(entry, a.surrogate_seed));
        }
        std::cerr << "wrote " << srg::kRgdCatalog.size() << " instances to " << a.out << '\n';
        return 0;
    }
    const auto instance = srg::generate_instance(a.spec, a.name);
    std::ostringstream text;
    srg::write_instance(text, instance);
    write_text(a.out, text.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Student result grouping: solve, benchmark, check and generate instances"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Group one instance and write the grouping as JSON");
    solve_cmd->add_option("instance", solve.instance, "Registration file (Student,Course,Year)")->required();
    solve_cmd->add_option("--algorithm", solve.algorithm, "hfo, ro, aco or ga");
    solve_cmd->add_option("--seed", solve.seed, "Random seed");
    solve_cmd->add_option("--out", solve.out, "Output file (default: stdout)");
    add_mode_flags(*solve_cmd, solve.common);
    add_solver_flags(*solve_cmd, solve.settings, solve.algo);

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run every algorithm on a directory of instances");
    bench_cmd->add_option("dir", bench.dir, "Instance directory (default: $SRG_DATASET_DIR)");
    bench_cmd->add_flag("--surrogate", bench.surrogate, "Use the built-in synthetic stand-ins for the 16 instances");
    bench_cmd->add_option("--runs", bench.runs, "Runs per instance and algorithm")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench.seed, "Base seed; run i uses seed + i");
    bench_cmd->add_option("--mode", bench.mode, "fixed, dynamic or both")
        ->check(CLI::IsMember({"fixed", "dynamic", "both"}));
    bench_cmd->add_option("--fitness", bench.common.fitness, "strict or paper-compat")
        ->check(CLI::IsMember({"strict", "paper-compat"}));
    bench_cmd->add_flag("--all-algorithms", bench.all_algorithms, "Run every algorithm in dynamic mode, not only ACO");
    bench_cmd->add_option("--out", bench.out, "Directory for report.json and report.md (default: Markdown to stdout)");
    add_limit_flags(*bench_cmd, bench.common);
    add_solver_flags(*bench_cmd, bench.settings, bench.algo);

    CheckArgs check;
    auto* check_cmd = app.add_subcommand("check", "Validate a grouping file against an instance");
    check_cmd->add_option("instance", check.instance, "Registration file")->required();
    check_cmd->add_option("grouping", check.grouping, "Grouping JSON")->required();
    add_mode_flags(*check_cmd, check.common);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write a random instance (or the synthetic stand-in set)");
    gen_cmd->add_option("--students", gen.spec.students)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--new", gen.spec.new_courses, "NEW courses")->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--old", gen.spec.old_courses, "OLD courses")->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--min-reg", gen.spec.min_registrations)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--max-reg", gen.spec.max_registrations)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.spec.seed);
    gen_cmd->add_option("--name", gen.name, "Instance name");
    gen_cmd->add_flag("--surrogate", gen.surrogate, "Write the 16 synthetic stand-ins into --out DIR");
    gen_cmd->add_option("--surrogate-seed", gen.surrogate_seed);
    gen_cmd->add_option("--out", gen.out, "Output file, or directory with --surrogate (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*solve_cmd) return run_solve(solve);
        if (*bench_cmd) return run_bench(bench);
        if (*check_cmd) return run_check(check);
        if (*gen_cmd) return run_gen(gen);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const srg::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
