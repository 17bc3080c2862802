#include "semiflex/oracle.hpp"

#include "support/reference.hpp"

#include <doctest.h>

#include <random>

using namespace semiflex;
using oracle::SupportMatrix;

TEST_CASE("cut value of fixed supports") {
    const std::vector<Load> unit{1, 1, 1};
    CHECK(oracle::min_max_load_for_support({0b01, 0b11, 0b10}, unit, 2) == Load(3, 2));
    const std::vector<Load> mixed{2, Load(1, 3), 5};
    CHECK(oracle::min_max_load_for_support({0b111, 0b111, 0b111}, mixed, 3) == Load(22, 9));
    const std::vector<Load> two{1, 1};
    CHECK(oracle::min_max_load_for_support({0b1, 0b1}, two, 2) == Load(2));
}

TEST_CASE("cut value equals the flow level on random supports") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = std::uniform_int_distribution<int>(1, 4)(rng);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        std::uniform_int_distribution<std::uint32_t> mask(1, (1u << m) - 1);
        std::uniform_int_distribution<std::int64_t> num(1, 30);
        SupportMatrix support;
        std::vector<Load> loads;
        for (std::size_t i = 0; i < n; ++i) {
            support.push_back(mask(rng));
            loads.push_back(Load(num(rng), 4));
        }
        CHECK(oracle::min_max_load_for_support(support, loads, m) == reference::min_level_by_flow(support, loads, m));
    }
}

TEST_CASE("search matches labeled brute force") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        const int m = std::uniform_int_distribution<int>(1, 3)(rng);
        const std::int64_t Q = std::uniform_int_distribution<std::int64_t>(1, 4)(rng);
        const auto inst = reference::random_instance(rng, n, Q, std::nullopt);
        const auto expected = reference::brute_min_max_load(inst, m);
        if (!expected) {
            CHECK_THROWS_AS(oracle::oracle_min_max_load(inst, m), InfeasibleError);
            continue;
        }
        const auto got = oracle::oracle_min_max_load(inst, m);
        CHECK(got.max_load == *expected);
        const auto a = oracle::assignment_for_support(inst, got.support, m);
        CHECK(validate(inst, a, false).feasible());
        CHECK(max_load(a) == got.max_load);
    }
}

TEST_CASE("optimal max load is non-increasing in m") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const auto inst = reference::random_instance(rng, 5, 3, std::nullopt);
        std::optional<Load> previous;
        for (int m = 1; m <= 4; ++m) {
            Load v;
            try {
                v = oracle::oracle_min_max_load(inst, m).max_load;
            } catch (const InfeasibleError&) {
                CHECK_FALSE(previous.has_value());
                continue;
            }
            if (previous) CHECK(v <= *previous);
            previous = v;
        }
    }
}

TEST_CASE("singleton supports reproduce two-dimensional bin packing") {
    std::mt19937_64 rng(41);
    oracle::Limits limits;
    limits.singleton_supports = true;
    limits.max_machines = 5;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        const auto inst = reference::random_instance(rng, n, 4, Load(3), 18);
        CHECK(oracle::oracle_min_machines(inst, limits) == reference::brute_single_min_machines(inst));
    }
}

TEST_CASE("minimum machines is at least the lower bound") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        const auto inst = reference::random_instance(rng, n, 3, Load(2), 15);
        oracle::Limits limits;
        limits.max_machines = 8;
        const auto m = oracle::oracle_min_machines(inst, limits);
        CHECK(m >= lower_bound_machines(inst));
        const auto at_m = oracle::oracle_min_max_load(inst, m, limits);
        CHECK(at_m.max_load <= Load(2));
        if (m > lower_bound_machines(inst)) {
            std::optional<Load> below;
            try {
                below = oracle::oracle_min_max_load(inst, m - 1, limits).max_load;
            } catch (const InfeasibleError&) {
            }
            if (below) CHECK(*below > Load(2));
        }
    }
}

TEST_CASE("minimum machines on small named instances") {
    const ProblemInstance three({{"a", 2, 2}, {"b", 2, 2}, {"c", 6, 1}}, MachineConfig{3, Load(5)});
    CHECK(oracle::oracle_min_machines(three) == 2);
    const ProblemInstance three_apps({{"a", 2, 1}, {"b", 2, 1}, {"c", 2, 1}}, MachineConfig{2, Load(3)});
    CHECK(oracle::oracle_min_machines(three_apps) == 2);
    const ProblemInstance wide({{"a", 9, 1}}, MachineConfig{1, Load(4)});
    CHECK(oracle::oracle_min_machines(wide) == 3);
    const ProblemInstance unit({{"a", 1, 1}, {"b", 1, 1}, {"c", 1, 1}}, MachineConfig{2, std::nullopt});
    CHECK(oracle::oracle_min_max_load(unit, 2).max_load == Load(3, 2));
    CHECK(oracle::oracle_min_max_load(ProblemInstance({{"x", Load(7, 3), 2}}, MachineConfig{2, std::nullopt}), 3)
              .max_load == Load(7, 9));
}

TEST_CASE("enumeration limits") {
    std::vector<Application> apps;
    for (int i = 0; i < 7; ++i) apps.push_back({std::to_string(i), 1, 1});
    const ProblemInstance big(apps, MachineConfig{7, Load(1)});
    CHECK_THROWS_AS(oracle::oracle_min_max_load(big, 2), oracle::LimitError);
    const ProblemInstance small({{"a", 1, 1}}, MachineConfig{1, Load(1)});
    CHECK_THROWS_AS(oracle::oracle_min_max_load(small, 5), oracle::LimitError);
    const ProblemInstance unbounded({{"a", 1, 1}}, MachineConfig{1, std::nullopt});
    CHECK_THROWS_AS(oracle::oracle_min_machines(unbounded), ContractError);
}

TEST_CASE("memory-infeasible balancing is reported") {
    const ProblemInstance inst({{"a", 1, 2}, {"b", 1, 2}, {"c", 1, 2}}, MachineConfig{2, std::nullopt});
    CHECK_THROWS_AS(oracle::oracle_min_max_load(inst, 2), InfeasibleError);
}
