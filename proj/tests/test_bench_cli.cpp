#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "fixtures.hpp"

using namespace srg;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("srg_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& capture = {}) {
    std::string cmd = std::string(SRG_CLI_PATH) + " " + args;
    cmd += capture.empty() ? " >/dev/null 2>&1" : " >" + capture.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string instance_csv(const Instance& inst) {
    std::ostringstream out;
    write_instance(out, inst);
    return out.str();
}

// 25 students over 8 NEW courses: any grouping fits, one group is optimal.
std::string anchor_csv() {
    std::string text = "Student,Course,Year\n";
    for (int s = 0; s < 25; ++s)
        for (int c = s % 4; c < s % 4 + 5; ++c) text += std::to_string(500 + s) + ",N" + std::to_string(c) + ",4\n";
    return text;
}

std::string overloaded_csv() {
    std::string text;
    for (int c = 0; c < 14; ++c) text += "heavy,N" + std::to_string(c) + ",4\n";
    text += "light,N0,4\nlight,O1,2\n";
    return text;
}

}  // namespace

TEST(Bench, ParseAlgorithmNames) {
    EXPECT_EQ(parse_algorithm("hfo"), Algorithm::HFO);
    EXPECT_EQ(parse_algorithm("ACO"), Algorithm::ACO);
    EXPECT_EQ(parse_algorithm("Ga"), Algorithm::GA);
    EXPECT_EQ(parse_algorithm("ro"), Algorithm::RO);
    EXPECT_FALSE(parse_algorithm("xyz").has_value());
    for (auto a : kAllAlgorithms) EXPECT_EQ(parse_algorithm(to_string(a)), a);
}

TEST(Bench, ReportInvariants) {
    auto inst = fixtures::desk_instance(10, 3);
    SolverSettings settings;
    settings.fitness.limits = fixtures::tight_limits();
    settings.aco.num_iterations = 50;
    for (auto algo : kAllAlgorithms) {
        auto r = bench_cell(inst, algo, settings, 4, 7);
        ASSERT_EQ(r.runs.size(), 4u);
        EXPECT_LE(r.min, r.avg);
        EXPECT_LE(r.avg, r.max);
        for (std::size_t i = 0; i < r.runs.size(); ++i) EXPECT_EQ(r.runs[i].seed, 7u + i);
        if (algo == Algorithm::HFO) {
            EXPECT_EQ(r.min, r.max);
            EXPECT_EQ(r.avg, r.min);
        }
        auto one = bench_cell(inst, algo, settings, 1, 7);
        EXPECT_EQ(one.min, one.max);
        EXPECT_EQ(one.avg, one.min);
    }
}

TEST(Bench, ReproducibleApartFromWallTime) {
    auto inst = fixtures::desk_instance(9, 8);
    BenchPlan plan;
    plan.repetitions = 3;
    plan.column_modes = {ColumnMode::Fixed, ColumnMode::Dynamic};
    plan.settings.aco.num_iterations = 40;
    BenchResult a, b;
    bench_instance(inst, plan, a);
    bench_instance(inst, plan, b);
    ASSERT_EQ(a.reports.size(), b.reports.size());
    EXPECT_EQ(a.reports.size(), 5u);  // four fixed + ACO dynamic
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
        ASSERT_EQ(a.reports[i].runs.size(), b.reports[i].runs.size());
        for (std::size_t k = 0; k < a.reports[i].runs.size(); ++k) {
            EXPECT_EQ(a.reports[i].runs[k].fitness, b.reports[i].runs[k].fitness);
            EXPECT_EQ(a.reports[i].runs[k].groups, b.reports[i].runs[k].groups);
        }
    }
    plan.all_algorithms_dynamic = true;
    BenchResult c;
    bench_instance(inst, plan, c);
    EXPECT_EQ(c.reports.size(), 8u);
}

TEST(Bench, JsonAndMarkdownFromSameValues) {
    BenchResult result;
    RunReport r;
    r.instance = "X";
    r.algorithm = Algorithm::ACO;
    r.runs = {{1, 4.7004397, 1, true, 0.1}, {2, 5.126, 2, true, 0.2}};
    summarize(r);
    result.reports.push_back(r);
    result.errors.push_back({"broken", "bad row"});
    auto j = bench_to_json(result);
    EXPECT_DOUBLE_EQ(j["reports"][0]["min"].get<double>(), 4.7004397);
    EXPECT_EQ(j["reports"][0]["runs"].size(), 2u);
    EXPECT_EQ(j["reports"][0]["mode"]["columns"], "fixed");
    EXPECT_EQ(j["errors"][0]["instance"], "broken");
    auto md = bench_to_markdown(result);
    EXPECT_NE(md.find("| X | 4.70 | 5.13 | 4.91 |"), std::string::npos) << md;
    EXPECT_NE(md.find("| broken | bad row |"), std::string::npos);
    EXPECT_EQ(format_fitness(4044.654), "4044.65");
}

TEST(Bench, BadFilesBecomeErrorRows) {
    auto dir = scratch_dir("bench_errors");
    write_file(dir / "good.csv", instance_csv(fixtures::desk_instance(6, 1)));
    write_file(dir / "bad.csv", "a,b\n");
    BenchPlan plan;
    plan.repetitions = 1;
    plan.settings.aco.num_iterations = 20;
    auto result = bench_files(instance_files(dir), plan);
    ASSERT_EQ(result.errors.size(), 1u);
    EXPECT_EQ(result.errors[0].instance, "bad");
    EXPECT_EQ(result.reports.size(), 4u);
    fs::remove_all(dir);
}

TEST(Check, ReportsEachConstraint) {
    std::vector<oracle::Row> rows;
    fixtures::take(rows, "a", "n", 0, 7, 4);
    fixtures::take(rows, "b", "n", 6, 13, 4);
    fixtures::take(rows, "c", "o", 0, 2, 2);
    auto inst = fixtures::make(rows, "chk");

    RawGrouping ok{"chk", {{"a", "c"}, {"b"}}, {}};
    EXPECT_TRUE(check_grouping(inst, ok, {}).feasible());

    RawGrouping missing{"chk", {{"a", "c"}}, {"b"}};
    auto r1 = check_grouping(inst, missing, {});
    ASSERT_EQ(r1.violations.size(), 1u);
    EXPECT_EQ(r1.violations[0].constraint, 1);

    RawGrouping wide{"chk", {{"c"}, {"a", "b"}}, {}};
    auto r4 = check_grouping(inst, wide, {});
    ASSERT_EQ(r4.violations.size(), 1u);
    EXPECT_EQ(r4.violations[0].constraint, 4);
    EXPECT_EQ(r4.violations[0].group, std::optional<std::size_t>(1));
    EXPECT_TRUE(check_grouping(inst, wide, dynamic_limits()).feasible());
    EXPECT_FALSE(check_grouping(inst, wide, dynamic_limits(13)).feasible());
    EXPECT_EQ(check_grouping(inst, wide, dynamic_limits(13)).violations[0].constraint, 3);

    RawGrouping twice{"chk", {{"a", "c"}, {"b", "c"}}, {}};
    EXPECT_EQ(check_grouping(inst, twice, {}).violations.at(0).constraint, 2);

    RawGrouping stranger{"chk", {{"a", "b", "c", "zed"}}, {}};
    auto rz = check_grouping(inst, stranger, {});
    EXPECT_FALSE(rz.feasible());
    EXPECT_EQ(rz.violations[0].constraint, 0);
}

TEST(Check, AgreesWithIsFeasible) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto inst = fixtures::desk_instance(5, seed);
        for (auto mode : {ColumnMode::Fixed, ColumnMode::Dynamic}) {
            auto lim = fixtures::tight_limits();
            lim.mode = mode;
            oracle::for_each_partition(5, [&](const std::vector<int>& labels) {
                auto g = Grouping::from_labels(inst, std::span<const int>(labels));
                EXPECT_EQ(check_grouping(inst, g, lim).feasible(), is_feasible(inst, g, lim));
            });
        }
    }
}

TEST(Io, GroupingJsonRoundTrip) {
    auto inst = fixtures::desk_instance(7, 2);
    auto g = Grouping::from_groups(inst, {{0, 3}, {1, 2, 6}, {4}});
    auto j = grouping_to_json(inst, g);
    EXPECT_EQ(j["unassigned"].size(), 1u);
    EXPECT_EQ(grouping_from_json(inst, j), g);
    auto h = history_to_json(std::vector<HistoryPoint>{{0, 5.0}, {1, 4.0}}, "generation");
    EXPECT_EQ(h[1]["generation"], 1);
    EXPECT_DOUBLE_EQ(h[1]["best_fitness"].get<double>(), 4.0);
    auto b = breakdown_to_json(evaluate(inst, g, {}));
    for (const char* key : {"unfit", "size", "unassigned", "groups", "fitness", "mode"}) EXPECT_TRUE(b.contains(key));
}

TEST(Surrogate, MatchesCatalogCounts) {
    for (const auto& entry : kRgdCatalog) {
        auto inst = make_surrogate(entry);
        EXPECT_EQ(static_cast<int>(inst.student_count()), entry.students) << entry.name;
        EXPECT_EQ(inst.new_course_total(), entry.new_courses) << entry.name;
        EXPECT_EQ(inst.old_course_total(), entry.old_courses) << entry.name;
        EXPECT_EQ(make_surrogate(entry), inst);
    }
}

TEST(Cli, SolveExitCodes) {
    auto dir = scratch_dir("cli_solve");
    write_file(dir / "anchor.csv", anchor_csv());
    write_file(dir / "heavy.csv", overloaded_csv());
    const auto out = dir / "out.json";
    EXPECT_EQ(run_cli("solve " + (dir / "anchor.csv").string() + " --algorithm hfo --out " + out.string()), 0);
    auto j = json::parse(read_file(out));
    EXPECT_NEAR(j["breakdown"]["fitness"].get<double>(), 4.70, 0.005);
    EXPECT_EQ(j["instance"], "anchor");
    EXPECT_EQ(run_cli("solve " + (dir / "heavy.csv").string() + " --out " + out.string()), 2);
    EXPECT_EQ(run_cli("solve " + (dir / "heavy.csv").string() + " --mode dynamic --out " + out.string()), 0);
    EXPECT_EQ(run_cli("solve " + (dir / "anchor.csv").string() + " --algorithm xyz"), 1);
    EXPECT_EQ(run_cli("solve " + (dir / "missing.csv").string()), 1);
    EXPECT_EQ(run_cli("solve " + (dir / "anchor.csv").string() + " --mode sideways"), 1);
    EXPECT_EQ(run_cli("solve"), 1);
    EXPECT_EQ(run_cli("--help"), 0);

    EXPECT_EQ(run_cli("solve " + (dir / "anchor.csv").string() +
                      " --algorithm ga --ga-population 20 --ga-crossover uniform --seed 3 --out " + out.string()),
              0);
    j = json::parse(read_file(out));
    ASSERT_FALSE(j["history"].empty());
    EXPECT_TRUE(j["history"][0].contains("generation"));
    fs::remove_all(dir);
}

TEST(Cli, CheckExitCodesAndMessages) {
    auto dir = scratch_dir("cli_check");
    write_file(dir / "anchor.csv", anchor_csv());
    write_file(dir / "heavy.csv", overloaded_csv());
    const auto out = dir / "g.json";
    const auto log = dir / "log.txt";
    ASSERT_EQ(run_cli("solve " + (dir / "anchor.csv").string() + " --out " + out.string()), 0);
    EXPECT_EQ(run_cli("check " + (dir / "anchor.csv").string() + " " + out.string()), 0);

    write_file(out, R"({"instance":"anchor","groups":[["500","501"]],"unassigned":[]})");
    EXPECT_EQ(run_cli("check " + (dir / "anchor.csv").string() + " " + out.string(), log), 2);
    EXPECT_NE(read_file(log).find("constraint 1"), std::string::npos);

    write_file(out, R"({"instance":"heavy","groups":[["light"],["heavy"]],"unassigned":[]})");
    EXPECT_EQ(run_cli("check " + (dir / "heavy.csv").string() + " " + out.string(), log), 2);
    EXPECT_NE(read_file(log).find("constraint 4 group 1"), std::string::npos) << read_file(log);

    write_file(out, R"({"instance":"heavy","groups":[["light","ghost","heavy"]]})");
    EXPECT_EQ(run_cli("check " + (dir / "heavy.csv").string() + " " + out.string() + " --mode dynamic", log), 2);
    EXPECT_NE(read_file(log).find("ghost"), std::string::npos);

    write_file(out, "not json");
    EXPECT_EQ(run_cli("check " + (dir / "heavy.csv").string() + " " + out.string()), 1);
    fs::remove_all(dir);
}

TEST(Cli, GenAndBench) {
    auto dir = scratch_dir("cli_bench");
    fs::create_directories(dir / "data");
    EXPECT_EQ(run_cli("gen --students 8 --new 4 --old 4 --max-reg 3 --seed 5 --out " + (dir / "data" / "a.csv").string()),
              0);
    write_file(dir / "data" / "b.csv", anchor_csv());
    EXPECT_EQ(run_cli("gen --students 3 --new 1 --old 0 --max-reg 4"), 1);
    EXPECT_EQ(run_cli("bench " + (dir / "data").string() + " --runs 2 --aco-iterations 30 --out " +
                      (dir / "report").string()),
              0);
    auto j = json::parse(read_file(dir / "report" / "report.json"));
    EXPECT_EQ(j["reports"].size(), 8u);
    for (const auto& r : j["reports"]) EXPECT_EQ(r["runs"].size(), 2u);
    auto md = read_file(dir / "report" / "report.md");
    EXPECT_NE(md.find("| b | 4.70 | 4.70 | 4.70 |"), std::string::npos) << md;

    EXPECT_EQ(run_cli("gen --surrogate --out " + (dir / "sur").string()), 0);
    EXPECT_EQ(std::distance(fs::directory_iterator(dir / "sur"), fs::directory_iterator{}), 16);
    EXPECT_EQ(run_cli("bench " + (dir / "nope").string()), 1);
    EXPECT_EQ(run_cli("bench --runs 0"), 1);
    fs::remove_all(dir);
}
