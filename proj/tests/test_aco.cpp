#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"

using namespace srg;

TEST(Pheromone, StartsAtMaxAndClamps) {
    PheromoneMatrix m(3, 4);
    EXPECT_EQ(m.slots(), 3u);
    EXPECT_EQ(m.students(), 4u);
    for (double t : m.values()) EXPECT_DOUBLE_EQ(t, 10.0);
    m.set(1, 2, 50.0);
    EXPECT_DOUBLE_EQ(m.at(1, 2), 10.0);
    m.set(1, 2, 0.0);
    EXPECT_DOUBLE_EQ(m.at(1, 2), 0.1);
    EXPECT_THROW((void)m.at(3, 0), ContractViolation);
    EXPECT_THROW(PheromoneMatrix(1, 1, 1.0, 2.0), ContractViolation);
    EXPECT_THROW(PheromoneMatrix(1, 1, 1.0, 0.0), ContractViolation);
}

TEST(Reward, Examples) {
    EXPECT_DOUBLE_EQ(reward(50.0, 50.0), 1.0);
    EXPECT_DOUBLE_EQ(reward(50.0, 150.0), 0.01);
    EXPECT_DOUBLE_EQ(reward(std::nullopt, 7.0), 1.0);
    EXPECT_DOUBLE_EQ(reward(50.0, 40.0), 1.0);
    EXPECT_DOUBLE_EQ(reward(50.0, 50.5), 1.0);
}

TEST(Reward, AlwaysInUnitInterval) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> q(0.0, 1e4);
    for (int i = 0; i < 100000; ++i) {
        const double best = q(rng);
        const double cur = q(rng);
        const double r = reward(best, cur);
        EXPECT_GT(r, 0.0);
        EXPECT_LE(r, 1.0);
    }
}

TEST(Evaporate, Examples) {
    PheromoneMatrix m(1, 3);
    m.set(0, 1, 0.1);
    m.set(0, 2, 0.101);
    evaporate(m, 0.02);
    EXPECT_NEAR(m.at(0, 0), 9.8, 1e-12);
    EXPECT_DOUBLE_EQ(m.at(0, 1), 0.1);
    EXPECT_DOUBLE_EQ(m.at(0, 2), 0.1);
    EXPECT_THROW(evaporate(m, 0.0), ContractViolation);
    EXPECT_THROW(evaporate(m, 1.0), ContractViolation);
}

TEST(Evaporate, DecayLaw) {
    for (double rho : {0.02, 0.1, 0.5}) {
        PheromoneMatrix m(2, 2);
        for (int k = 1; k <= 400; ++k) {
            evaporate(m, rho);
            const double expected = std::max(0.1, 10.0 * std::pow(1.0 - rho, k));
            for (double t : m.values()) EXPECT_NEAR(t, expected, 1e-12 * expected) << "rho " << rho << " k " << k;
        }
    }
}

TEST(Deposit, Examples) {
    PheromoneMatrix m(2, 3);
    m.set(0, 0, 9.5);
    m.set(1, 1, 5.0);
    m.set(0, 2, 3.0);
    const std::vector<std::size_t> path{0, 1, 0};
    auto before = m;
    deposit(m, path, 0.0);
    EXPECT_EQ(m, before);
    deposit(m, path, 1.0);
    EXPECT_DOUBLE_EQ(m.at(0, 0), 10.0);
    EXPECT_DOUBLE_EQ(m.at(0, 2), 4.0);
    deposit(m, path, 0.01);
    EXPECT_NEAR(m.at(1, 1), 6.01, 1e-12);
    EXPECT_DOUBLE_EQ(m.at(1, 0), 10.0);
    EXPECT_THROW(deposit(m, path, -1.0), ContractViolation);
    EXPECT_THROW(deposit(m, std::vector<std::size_t>{0}, 1.0), ContractViolation);
}

TEST(Deposit, GroupingOverload) {
    auto inst = fixtures::desk_instance(3, 1);
    PheromoneMatrix m(2, 3);
    evaporate(m, 0.5);
    deposit(m, Grouping::from_groups(inst, {{0, 2}, {1}}), 1.0);
    EXPECT_DOUBLE_EQ(m.at(0, 0), 6.0);
    EXPECT_DOUBLE_EQ(m.at(1, 1), 6.0);
    EXPECT_DOUBLE_EQ(m.at(1, 0), 5.0);
    EXPECT_THROW(deposit(m, Grouping(inst), 1.0), ContractViolation);
}

TEST(PheromoneProperties, BoundsHoldUnderRandomSequences) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        PheromoneMatrix m(4, 6);
        std::uniform_int_distribution<std::size_t> slot(0, 3);
        for (int step = 0; step < 300; ++step) {
            if (unit(rng) < 0.5) {
                evaporate(m, 0.001 + 0.998 * unit(rng));
            } else {
                std::vector<std::size_t> path(6);
                for (auto& p : path) p = slot(rng);
                deposit(m, path, 20.0 * unit(rng));
            }
            ASSERT_TRUE(m.within_bounds());
        }
    }
}

namespace {

Instance two_by_two() { return fixtures::make({{"a", "x", 4}, {"b", "y", 4}}); }

}  // namespace

TEST(AntTraverse, SingleStudentSingleSlot) {
    auto inst = fixtures::make({{"a", "x", 4}});
    PheromoneMatrix m(1, 1);
    std::mt19937_64 rng(1);
    auto path = ant_traverse(inst, m, AcoConfig{}, ColumnLimits{}, rng);
    EXPECT_EQ(path.slot_of, std::vector<std::size_t>{0});
    ASSERT_EQ(path.picks.size(), 1u);
}

TEST(AntTraverse, UniformMatrixGivesUniformFirstPick) {
    auto inst = two_by_two();
    PheromoneMatrix m(2, 2);
    for (double gamma : {0.0, 4.0}) {  // every pair adds one column, so gamma does not matter here
        AcoConfig cfg;
        cfg.fit_exponent = gamma;
        std::mt19937_64 rng(99);
        std::array<int, 4> counts{};
        constexpr int draws = 10000;
        for (int i = 0; i < draws; ++i) {
            auto path = ant_traverse(inst, m, cfg, ColumnLimits{}, rng);
            const auto [s, g] = path.picks.front();
            ++counts[s * 2 + g];
        }
        const double p = 0.25;
        const double sigma = std::sqrt(draws * p * (1 - p));
        for (int c : counts) EXPECT_NEAR(c, draws * p, 3 * sigma);
    }
}

TEST(AntTraverse, TrailRatioDrivesSlotChoice) {
    auto inst = fixtures::make({{"a", "x", 4}});
    PheromoneMatrix m(2, 1);
    m.set(1, 0, 0.1);
    std::mt19937_64 rng(5);
    constexpr int draws = 20000;
    int slot0 = 0;
    for (int i = 0; i < draws; ++i) slot0 += ant_traverse(inst, m, AcoConfig{}, ColumnLimits{}, rng).slot_of[0] == 0;
    const double p = 100.0 / 101.0;
    const double sigma = std::sqrt(draws * p * (1 - p));
    EXPECT_NEAR(slot0, draws * p, 3 * sigma);
}

TEST(AntTraverse, DeadEndUsesLeastViolation) {
    // one slot; the heavy student can never fit, the ant still returns a full path
    std::vector<oracle::Row> rows;
    fixtures::take(rows, "heavy", "n", 0, 13, 4);
    fixtures::take(rows, "a", "n", 0, 2, 4);
    auto inst = fixtures::make(rows);
    PheromoneMatrix m(2, 2);
    m.set(1, 0, 5.0);
    std::mt19937_64 rng(1);
    auto path = ant_traverse(inst, m, AcoConfig{}, ColumnLimits{}, rng);
    ASSERT_EQ(path.picks.size(), 2u);
    // both slots start empty and equal in violation; the higher trail (slot 0) wins
    EXPECT_EQ(path.slot_of[0], 0u);
    EXPECT_EQ(path.picks.front().first, 0u);
}

TEST(AntTraverse, EveryPathIsCompleteAndRespectsSlotCount) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto inst = generate_instance({25, 8, 8, 1, 7, seed});
        PheromoneMatrix m(3, inst.student_count());
        std::mt19937_64 rng(seed);
        auto path = ant_traverse(inst, m, AcoConfig{}, fixtures::tight_limits(), rng);
        EXPECT_EQ(path.picks.size(), inst.student_count());
        std::vector<int> seen(inst.student_count(), 0);
        for (auto [s, g] : path.picks) {
            ++seen[s];
            EXPECT_LT(g, 3u);
            EXPECT_EQ(path.slot_of[s], g);
        }
        for (int c : seen) EXPECT_EQ(c, 1);
    }
}

TEST(AcoSolve, SingleGroupInstanceMatchesHfo) {
    std::vector<oracle::Row> rows;
    for (int s = 0; s < 6; ++s) fixtures::take(rows, "s" + std::to_string(s), "n", s, s + 2, 4);
    auto inst = fixtures::make(rows);
    auto hfo = hfo_solve(inst, {});
    ASSERT_EQ(hfo.group_count(), 1u);
    auto r = aco_solve(inst, AcoConfig{}, {});
    EXPECT_EQ(r.slots, 1u);
    EXPECT_EQ(r.best, hfo);
}

TEST(AcoSolve, AnchorInstances) {
    std::vector<oracle::Row> rows;
    for (int s = 0; s < 25; ++s) fixtures::take(rows, "s" + std::to_string(s), "n", s % 4, s % 4 + 4, 4);
    auto inst = fixtures::make(rows);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        AcoConfig cfg;
        cfg.seed = seed;
        EXPECT_NEAR(aco_solve(inst, cfg, {}).breakdown.fitness, 4.70, 0.005);
    }
}

TEST(AcoProperties, GroupCountHistoryAndReproducibility) {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        auto inst = fixtures::desk_instance(14, seed);
        FitnessConfig fc{fixtures::tight_limits(), FitnessMode::PaperCompat};
        AcoConfig cfg;
        cfg.seed = seed;
        cfg.num_iterations = 120;
        cfg.stall_limit = 40;
        auto r = aco_solve(inst, cfg, fc);
        EXPECT_LE(r.best.group_count(), hfo_solve(inst, fc).group_count());
        EXPECT_TRUE(r.best.complete());
        EXPECT_TRUE(r.best.validate(inst).empty());
        EXPECT_DOUBLE_EQ(r.breakdown.fitness, evaluate(inst, r.best, fc).fitness);
        ASSERT_FALSE(r.history.empty());
        for (std::size_t i = 1; i < r.history.size(); ++i) {
            EXPECT_LE(r.history[i].best_fitness, r.history[i - 1].best_fitness);
            EXPECT_EQ(r.history[i].step, i);
        }
        EXPECT_DOUBLE_EQ(r.history.back().best_fitness, r.breakdown.fitness);
        auto again = aco_solve(inst, cfg, fc);
        EXPECT_EQ(again.best, r.best);
        EXPECT_EQ(again.history.size(), r.history.size());
    }
}

TEST(AcoProperties, StallLimitStopsEarly) {
    auto inst = fixtures::desk_instance(6, 4);
    AcoConfig cfg;
    cfg.stall_limit = 5;
    auto r = aco_solve(inst, cfg, {});
    EXPECT_LT(r.history.size(), 500u);
    EXPECT_GE(r.history.size(), 6u);
}

TEST(AcoProperties, MatchesOracleOnSixStudents) {
    for (std::uint64_t inst_seed = 1; inst_seed <= 4; ++inst_seed) {
        auto inst = fixtures::desk_instance(6, 100 + inst_seed);
        FitnessConfig fc{fixtures::tight_limits(), FitnessMode::PaperCompat};
        auto best = oracle::best_partition(oracle::build(fixtures::rows_of(inst), inst.cohort_year()), false, true, 5, 5, 9);
        double found = std::numeric_limits<double>::infinity();
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            AcoConfig cfg;
            cfg.seed = seed;
            found = std::min(found, aco_solve(inst, cfg, fc).breakdown.fitness);
        }
        EXPECT_NEAR(found, best.fitness, 1e-9) << "instance seed " << inst_seed;
    }
}
