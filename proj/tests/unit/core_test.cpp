#include "semiflex/core.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace semiflex;

namespace {

// Three unit apps on two machines of memory 2.
ProblemInstance three_unit_apps() {
    return ProblemInstance({{"a", 1, 1}, {"b", 1, 1}, {"c", 1, 1}}, MachineConfig{2, std::nullopt}, 2);
}

ProblemInstance three_apps() { return ProblemInstance({{"a", 2, 1}, {"b", 2, 1}, {"c", 2, 1}}, MachineConfig{2, Load(3)}); }

}  // namespace

TEST_CASE("split assignment of three unit apps on two machines") {
    const Assignment a({{"a", 0, 1}, {"b", 1, 1}, {"c", 0, Load(1, 2)}, {"c", 1, Load(1, 2)}}, 2);
    const auto report = validate(three_unit_apps(), a, false);
    CHECK(report.feasible());
    CHECK(max_load(a) == Load(3, 2));
}

TEST_CASE("whole-app assignment of three unit apps has max load 2") {
    const Assignment a({{"a", 0, 1}, {"c", 0, 1}, {"b", 1, 1}}, 2);
    CHECK(validate(three_unit_apps(), a, false).feasible());
    CHECK(max_load(a) == Load(2));
}

TEST_CASE("single app of load 7") {
    const Assignment a({{"x", 0, 7}}, 1);
    CHECK(max_load(a) == Load(7));
    CHECK(machines_used(a) == 1);
}

TEST_CASE("empty instance and empty assignment") {
    const ProblemInstance inst({}, MachineConfig{4, Load(2)});
    const Assignment a({}, 0);
    CHECK(validate(inst, a, true).feasible());
    CHECK(max_load(a) == Load(0));
    CHECK(machines_used(a) == 0);
}

TEST_CASE("cpu cap is checked only when enforced") {
    const ProblemInstance inst({{"a", 3, 1}, {"b", 3, 1}}, MachineConfig{4, Load(4)});
    const Assignment a({{"a", 0, 3}, {"b", 0, 3}}, 1);
    const auto enforced = validate(inst, a, true);
    REQUIRE(enforced.violations.size() == 1);
    CHECK(enforced.violations[0].kind == ViolationKind::CpuOverflow);
    CHECK(enforced.violations[0].amount == Load(2));
    CHECK(validate(inst, a, false).feasible());
}

TEST_CASE("memory overflow and load deficit are reported with amounts") {
    const ProblemInstance inst({{"a", 2, 2}, {"b", 2, 2}}, MachineConfig{3, std::nullopt});
    const Assignment a({{"a", 0, 2}, {"b", 0, Load(1, 2)}}, 1);
    const auto r = validate(inst, a, false);
    CHECK(r.has(ViolationKind::MemoryOverflow));
    CHECK(r.has(ViolationKind::LoadDeficit));
    for (const auto& v : r.violations) {
        if (v.kind == ViolationKind::MemoryOverflow) {
            CHECK(v.machine == 0);
            CHECK(v.amount == Load(1));
        } else {
            CHECK(v.app == "b");
            CHECK(v.amount == Load(3, 2));
        }
    }
}

TEST_CASE("raw duplicate entries are a duplicate-instance violation only") {
    const Assignment raw = Assignment::from_raw({{"a", 0, 1}, {"a", 0, 1}}, 1);
    const ProblemInstance inst({{"a", 2, 2}}, MachineConfig{2, Load(2)});
    const auto r = validate(inst, raw, true);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].kind == ViolationKind::DuplicateInstance);
}

TEST_CASE("structural errors are not violations") {
    CHECK_THROWS_AS(validate(three_apps(), Assignment({{"zz", 0, 1}}, 1), false), ContractError);
    CHECK_THROWS_AS(validate(three_apps(), Assignment::from_raw({{"a", 3, 1}}, 2), false), ContractError);
}

TEST_CASE("instance construction contracts") {
    CHECK_THROWS_AS(ProblemInstance({{"a", 1, 1}, {"a", 1, 1}}, MachineConfig{2, std::nullopt}), ContractError);
    CHECK_THROWS_AS(ProblemInstance({{"a", 0, 1}}, MachineConfig{2, std::nullopt}), ContractError);
    CHECK_THROWS_AS(ProblemInstance({{"a", 1, 3}}, MachineConfig{2, std::nullopt}), ContractError);
    CHECK_THROWS_AS(ProblemInstance({{"a", 1, 0}}, MachineConfig{2, std::nullopt}), ContractError);
    CHECK_THROWS_AS(ProblemInstance({{"a", 1, 1}}, MachineConfig{2, Load(0)}), ContractError);
}

TEST_CASE("machines_used counts non-empty machines") {
    CHECK(machines_used(Assignment({{"a", 0, 2}, {"c", 0, 1}, {"b", 1, 2}, {"c", 1, 1}}, 2)) == 2);
    // a, b and c on three machines after c took a dedicated one.
    CHECK(machines_used(Assignment({{"c", 0, 5}, {"a", 1, 2}, {"c", 1, 1}, {"b", 2, 2}}, 3)) == 3);
    CHECK(machines_used(Assignment({{"a", 3, 1}}, 5)) == 1);
}

TEST_CASE("lower bound on machines") {
    std::vector<Application> family;
    for (int i = 0; i < 5; ++i) family.push_back({std::to_string(i), 5, 1});
    CHECK(lower_bound_machines(ProblemInstance(family, MachineConfig{3, Load(9)})) == 3);
    CHECK(lower_bound_machines(three_apps()) == 2);
    CHECK(lower_bound_machines(ProblemInstance({{"a", 4, 3}}, MachineConfig{3, Load(4)})) == 1);
    CHECK_THROWS_AS(lower_bound_machines(three_unit_apps()), ContractError);
}

TEST_CASE("normalization merges entries and drops zeros") {
    const Assignment a({{"a", 0, Load(1, 2)}, {"b", 1, 0}, {"a", 0, Load(1, 2)}}, 2);
    REQUIRE(a.entries().size() == 1);
    CHECK(a.entries()[0] == AssignmentEntry{"a", 0, 1});
    const auto raw = Assignment::from_raw({{"a", 0, Load(1, 2)}, {"a", 0, Load(1, 2)}}, 1);
    CHECK(max_load(raw) == max_load(a));
}

TEST_CASE("max_load and machines_used are invariant under machine relabeling") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> machine(0, 5);
    std::uniform_int_distribution<int> amount(1, 12);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<AssignmentEntry> entries;
        for (int k = 0; k < 8; ++k) entries.push_back({"app" + std::to_string(k % 5), machine(rng), Load(amount(rng), 4)});
        std::vector<std::int64_t> perm{0, 1, 2, 3, 4, 5};
        std::shuffle(perm.begin(), perm.end(), rng);
        auto relabeled = entries;
        for (auto& e : relabeled) e.machine = perm[static_cast<std::size_t>(e.machine)];
        const Assignment a(entries, 6);
        const Assignment b(relabeled, 6);
        CHECK(max_load(a) == max_load(b));
        CHECK(machines_used(a) == machines_used(b));
    }
}

TEST_CASE("violation kind names") {
    CHECK(to_string(ViolationKind::MemoryOverflow) == "MEMORY_OVERFLOW");
    CHECK(to_string(ViolationKind::LoadDeficit) == "LOAD_DEFICIT");
    CHECK(to_string(ViolationKind::CpuOverflow) == "CPU_OVERFLOW");
    CHECK(to_string(ViolationKind::DuplicateInstance) == "DUPLICATE_INSTANCE");
}
