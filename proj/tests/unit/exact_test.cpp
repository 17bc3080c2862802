#include "semiflex/exact.hpp"
#include "semiflex/oracle.hpp"

#include <doctest.h>

using namespace semiflex;
using exact::CommonCaseParams;

namespace {

CommonCaseParams params(std::int64_t n, std::int64_t m, Load p, std::int64_t q, std::int64_t Q) {
    return CommonCaseParams{n, m, p, q, Q, std::nullopt};
}

}  // namespace

TEST_CASE("common-case optimum values") {
    CHECK(exact::optimal_max_load_common(params(3, 2, 1, 1, 2)) == Load(3, 2));
    CHECK(exact::optimal_max_load_common(params(4, 2, 3, 1, 5)) == Load(6));
    CHECK(exact::optimal_max_load_common(params(5, 3, 2, 1, 2)) == Load(4));
    CHECK(exact::optimal_max_load_common(params(5, 3, 2, 1, 3)) == Load(10, 3));
    CHECK(exact::optimal_max_load_common(params(4, 4, Load(7, 3), 2, 2)) == Load(7, 3));
}

TEST_CASE("common-case values agree with the oracle") {
    for (auto prm : {params(5, 3, 2, 1, 2), params(5, 3, 2, 1, 3), params(3, 2, 1, 1, 2)}) {
        const auto inst = prm.to_instance();
        CHECK(oracle::oracle_min_max_load(inst, prm.m).max_load == exact::optimal_max_load_common(prm));
    }
}

TEST_CASE("common-case infeasibility and contracts") {
    CHECK_THROWS_AS(exact::optimal_max_load_common(params(5, 2, 1, 1, 2)), InfeasibleError);
    CHECK_THROWS_AS(exact::optimal_max_load_common(params(0, 2, 1, 1, 2)), ContractError);
    CHECK_THROWS_AS(exact::optimal_max_load_common(params(2, 2, 1, 3, 2)), ContractError);
}

TEST_CASE("balanced construction for three unit apps splits one app in halves") {
    const auto prm = params(3, 2, 1, 1, 2);
    const auto a = exact::balance_common(prm);
    CHECK(validate(prm.to_instance(), a, false).feasible());
    CHECK(max_load(a) == Load(3, 2));
    int halves = 0;
    for (const auto& e : a.entries()) halves += e.reserved == Load(1, 2) ? 1 : 0;
    CHECK(halves == 2);
}

TEST_CASE("one app per machine when n equals m") {
    const auto prm = params(4, 4, Load(5, 2), 3, 3);
    const auto a = exact::balance_common(prm);
    CHECK(a.entries().size() == 4);
    CHECK(max_load(a) == Load(5, 2));
}

TEST_CASE("construction matches the formula on a grid") {
    for (std::int64_t n = 1; n <= 12; ++n) {
        for (std::int64_t m = 1; m <= 7; ++m) {
            for (std::int64_t q = 1; q <= 2; ++q) {
                for (std::int64_t Q = q; Q <= 4 * q + 1; ++Q) {
                    const auto prm = params(n, m, Load(3, 2), q, Q);
                    if (m * prm.slots() < n) {
                        CHECK_THROWS_AS(exact::balance_common(prm), InfeasibleError);
                        continue;
                    }
                    CAPTURE(n);
                    CAPTURE(m);
                    CAPTURE(q);
                    CAPTURE(Q);
                    const auto a = exact::balance_common(prm);
                    const auto inst = prm.to_instance();
                    CHECK(validate(inst, a, false).feasible());
                    CHECK(max_load(a) == exact::optimal_max_load_common(prm));
                    std::vector<std::int64_t> per_machine(static_cast<std::size_t>(m), 0);
                    for (const auto& e : a.entries()) ++per_machine[static_cast<std::size_t>(e.machine)];
                    for (auto c : per_machine) CHECK(c <= prm.slots());
                }
            }
        }
    }
}

TEST_CASE("optimum is non-increasing in m") {
    for (std::int64_t n = 1; n <= 30; ++n) {
        for (std::int64_t slots = 1; slots <= 5; ++slots) {
            std::optional<Load> previous;
            for (std::int64_t m = 1; m <= 40; ++m) {
                const auto prm = params(n, m, 1, 1, slots);
                if (m * slots < n) continue;
                const Load v = exact::optimal_max_load_common(prm);
                if (previous) CHECK(v <= *previous);
                previous = v;
            }
        }
    }
}

TEST_CASE("minimum machines in the common case") {
    CHECK(exact::min_machines_common(3, 2, 1, 3, 2) == 2);
    CHECK(exact::min_machines_common(5, 5, 1, 9, 3) == 3);
    CHECK(exact::min_machines_common(1, 4, 3, 4, 3) == 1);
    for (std::int64_t n = 1; n <= 15; ++n) {
        for (std::int64_t p = 1; p <= 4; ++p) {
            for (std::int64_t P = 1; P <= 9; ++P) {
                for (std::int64_t Q = 1; Q <= 4; ++Q) {
                    CAPTURE(n);
                    CAPTURE(p);
                    CAPTURE(P);
                    CAPTURE(Q);
                    CHECK(exact::min_machines_common(n, p, 1, P, Q) == exact::min_machines_common_linear(n, p, 1, P, Q));
                }
            }
        }
    }
}

TEST_CASE("divisible case") {
    CHECK(exact::min_machines_divisible(10, 1, 1, 4, 3) == 4);
    CHECK(exact::min_machines_divisible(3, 2, 1, 4, 1) == 3);
    for (std::int64_t k = 1; k <= 6; ++k) CHECK(exact::min_machines_divisible(3 * k, 2, 2, 6, 7) == k);
    CHECK_THROWS_AS(exact::min_machines_divisible(3, 2, 1, 5, 2), ContractError);
}

TEST_CASE("divisible case agrees with the oracle on small instances") {
    for (std::int64_t n = 1; n <= 5; ++n) {
        for (std::int64_t P : {4, 8}) {
            for (std::int64_t Q : {1, 2, 3}) {
                CommonCaseParams prm{n, 1, Load(2), 1, Q, Load(P)};
                CAPTURE(n);
                CAPTURE(P);
                CAPTURE(Q);
                oracle::Limits limits;
                limits.max_machines = 5;
                CHECK(oracle::oracle_min_machines(prm.to_instance(), limits) ==
                      exact::min_machines_divisible(n, 2, 1, P, Q));
            }
        }
    }
}
