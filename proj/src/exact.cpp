#include "semiflex/exact.hpp"

#include <string>
#include <vector>

namespace semiflex::exact {

namespace {

void check_shape(std::int64_t n, const Load& p, std::int64_t q, std::int64_t Q) {
    if (n < 1) throw ContractError("common case needs n >= 1");
    if (!p.is_positive()) throw ContractError("common case needs p > 0");
    if (q < 1 || Q < 1) throw ContractError("common case needs q >= 1 and Q >= 1");
    if (q > Q) throw ContractError("common case needs q <= Q");
}

void check_params(const CommonCaseParams& c) {
    check_shape(c.n, c.p, c.q, c.Q);
    if (c.m < 1) throw ContractError("common case needs m >= 1");
    if (c.P && !c.P->is_positive()) throw ContractError("common case needs P > 0");
    if (c.m * c.slots() < c.n) {
        throw InfeasibleError(std::to_string(c.n) + " applications do not fit in " + std::to_string(c.m) +
                              " machines of " + std::to_string(c.slots()) + " slots");
    }
}

bool wraps_evenly(const CommonCaseParams& c) {
    return c.n % c.m == 0 || c.slots() > ceil_div(c.n, c.m);
}

Load max_load_at(std::int64_t n, std::int64_t m, const Load& p, std::int64_t q, std::int64_t Q) {
    CommonCaseParams c{n, m, p, q, Q, std::nullopt};
    return optimal_max_load_common(c);
}

// Both bounds from the binary-search formulation; m_U always satisfies the
// predicate because every application then gets ceil(p/P) machines to itself.
std::pair<std::int64_t, std::int64_t> search_range(std::int64_t n, const Load& p, std::int64_t q, const Load& P,
                                                   std::int64_t Q) {
    const std::int64_t slots = Q / q;
    const std::int64_t by_memory = ceil_div(n, slots);
    const std::int64_t by_cpu = (Load(n) * p / P).ceil();
    const std::int64_t lo = std::max(by_memory, by_cpu);
    const std::int64_t hi = std::max(lo, n * (p / P).ceil());
    return {lo, hi};
}

}  // namespace

ProblemInstance CommonCaseParams::to_instance() const {
    std::vector<Application> apps;
    apps.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) apps.push_back({std::to_string(i), p, q});
    return ProblemInstance(std::move(apps), MachineConfig{Q, P}, m);
}

Load optimal_max_load_common(const CommonCaseParams& c) {
    check_params(c);
    if (wraps_evenly(c)) return c.p * Load(c.n, c.m);
    const std::int64_t residual = c.n % c.m;
    return c.p * (Load(c.n / c.m) + Load(1, c.m / residual));
}

Assignment balance_common(const CommonCaseParams& c) {
    check_params(c);
    const std::int64_t whole = c.n / c.m;
    const std::int64_t residual = c.n % c.m;

    std::vector<AssignmentEntry> entries;
    std::int64_t next_app = 0;
    for (std::int64_t j = 0; j < c.m; ++j) {
        for (std::int64_t k = 0; k < whole; ++k) entries.push_back({std::to_string(next_app++), j, c.p});
    }

    if (residual > 0 && wraps_evenly(c)) {
        // Wrap the residual apps at level p * residual / m; an app of length p
        // exceeds the level, so its pieces land on consecutive distinct machines.
        const Load level = c.p * Load(residual, c.m);
        std::int64_t machine = 0;
        Load room = level;
        for (; next_app < c.n; ++next_app) {
            Load left = c.p;
            while (left.is_positive()) {
                const Load take = min(left, room);
                entries.push_back({std::to_string(next_app), machine, take});
                left -= take;
                room -= take;
                if (room.is_zero()) {
                    ++machine;
                    room = level;
                }
            }
        }
    } else if (residual > 0) {
        // One residual instance per machine: floor(m / residual) instances per
        // app, the first (m mod residual) apps taking one more.
        const std::int64_t parts = c.m / residual;
        const std::int64_t longer = c.m - residual * parts;
        std::int64_t machine = 0;
        for (std::int64_t r = 0; next_app < c.n; ++next_app, ++r) {
            const std::int64_t k = parts + (r < longer ? 1 : 0);
            const Load piece = c.p / Load(k);
            for (std::int64_t t = 0; t < k; ++t) entries.push_back({std::to_string(next_app), machine++, piece});
        }
    }
    return Assignment(std::move(entries), c.m);
}

std::int64_t min_machines_common(std::int64_t n, const Load& p, std::int64_t q, const Load& P, std::int64_t Q) {
    check_shape(n, p, q, Q);
    if (!P.is_positive()) throw ContractError("P must be > 0");
    auto [lo, hi] = search_range(n, p, q, P, Q);
    while (hi > lo) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (max_load_at(n, mid, p, q, Q) > P) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo;
}

std::int64_t min_machines_common_linear(std::int64_t n, const Load& p, std::int64_t q, const Load& P,
                                        std::int64_t Q) {
    check_shape(n, p, q, Q);
    if (!P.is_positive()) throw ContractError("P must be > 0");
    auto [lo, hi] = search_range(n, p, q, P, Q);
    for (std::int64_t m = lo; m < hi; ++m) {
        if (max_load_at(n, m, p, q, Q) <= P) return m;
    }
    return hi;
}

std::int64_t min_machines_divisible(std::int64_t n, const Load& p, std::int64_t q, const Load& P, std::int64_t Q) {
    check_shape(n, p, q, Q);
    if (!P.is_positive()) throw ContractError("P must be > 0");
    const Load per_machine_cpu = P / p;
    if (!per_machine_cpu.is_integer()) {
        throw ContractError("p = " + p.to_string() + " does not divide P = " + P.to_string());
    }
    const std::int64_t per_machine = std::min(per_machine_cpu.numerator(), Q / q);
    return ceil_div(n, per_machine);
}

}  // namespace semiflex::exact
