#include "semiflex/heuristics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>

namespace semiflex::heuristics {

namespace {

// Loads rescaled to integers over a common denominator; every operation the
// packers perform (add, subtract, min) stays integral.
struct ScaledInstance {
    std::int64_t scale = 1;
    std::int64_t cap = 0;  // P * scale
    std::vector<std::int64_t> cpu;
    std::vector<std::int64_t> mem;
    std::int64_t Q = 0;

    Load to_load(std::int64_t v) const { return Load(v, scale); }
};

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
    const std::int64_t g = std::gcd(a, b);
    const __int128 r = static_cast<__int128>(a / g) * b;
    if (r > (std::int64_t{1} << 40)) throw std::overflow_error("load denominators too large for list packing");
    return static_cast<std::int64_t>(r);
}

std::int64_t scaled(const Load& l, std::int64_t scale) {
    const __int128 v = static_cast<__int128>(l.numerator()) * (scale / l.denominator());
    if (v > std::numeric_limits<std::int64_t>::max() / 4) throw std::overflow_error("load too large for list packing");
    return static_cast<std::int64_t>(v);
}

ScaledInstance rescale(const ProblemInstance& instance) {
    const auto& P = instance.config().P;
    if (!P) throw ContractError("packing requires a CPU capacity P");
    ScaledInstance s;
    s.scale = P->denominator();
    for (const auto& a : instance.apps()) s.scale = lcm_checked(s.scale, a.p.denominator());
    s.cap = scaled(*P, s.scale);
    s.Q = instance.config().Q;
    for (const auto& a : instance.apps()) {
        s.cpu.push_back(scaled(a.p, s.scale));
        s.mem.push_back(a.q);
    }
    return s;
}

struct Machine {
    std::int64_t free_cpu;
    std::int64_t free_mem;
};

// Machine for a whole application under `rule`, or nullopt. `cursor` is the
// Next-Fit position: the machine that received the previous placement.
std::optional<std::size_t> pick_whole(std::span<const Machine> machines, std::int64_t cpu, std::int64_t mem,
                                      FitRule rule, std::size_t cursor) {
    auto fits = [&](const Machine& mc) { return mc.free_cpu >= cpu && mc.free_mem >= mem; };
    const std::size_t count = machines.size();
    switch (rule) {
        case FitRule::FirstFit:
            for (std::size_t j = 0; j < count; ++j) {
                if (fits(machines[j])) return j;
            }
            return std::nullopt;
        case FitRule::NextFit:
            for (std::size_t k = 0; k < count; ++k) {
                const std::size_t j = (cursor + k) % count;
                if (fits(machines[j])) return j;
            }
            return std::nullopt;
        case FitRule::WorstFit: {
            std::optional<std::size_t> best;
            for (std::size_t j = 0; j < count; ++j) {
                if (fits(machines[j]) && (!best || machines[j].free_mem > machines[*best].free_mem)) best = j;
            }
            return best;
        }
    }
    return std::nullopt;
}

bool id_less(const ProblemInstance& inst, std::size_t a, std::size_t b) {
    return inst.apps()[a].id < inst.apps()[b].id;
}

}  // namespace

std::string to_string(FitRule r) {
    switch (r) {
        case FitRule::FirstFit: return "ff";
        case FitRule::NextFit: return "nf";
        case FitRule::WorstFit: return "wf";
    }
    return "?";
}

std::string to_string(OrderKind o) {
    switch (o) {
        case OrderKind::MemInc: return "mem-inc";
        case OrderKind::MemDec: return "mem-dec";
        case OrderKind::CpuInc: return "cpu-inc";
        case OrderKind::CpuDec: return "cpu-dec";
        case OrderKind::RatioInc: return "ratio-inc";
        case OrderKind::RatioDec: return "ratio-dec";
        case OrderKind::Random: return "random";
    }
    return "?";
}

std::string to_string(MultiStrategy s) { return s == MultiStrategy::CpuOriented ? "cpu" : "mem"; }

FitRule parse_fit_rule(const std::string& s) {
    for (auto r : {FitRule::FirstFit, FitRule::NextFit, FitRule::WorstFit}) {
        if (to_string(r) == s) return r;
    }
    throw std::invalid_argument("unknown fit rule '" + s + "'");
}

OrderKind parse_order(const std::string& s) {
    for (auto o : {OrderKind::MemInc, OrderKind::MemDec, OrderKind::CpuInc, OrderKind::CpuDec, OrderKind::RatioInc,
                   OrderKind::RatioDec, OrderKind::Random}) {
        if (to_string(o) == s) return o;
    }
    throw std::invalid_argument("unknown application order '" + s + "'");
}

MultiStrategy parse_strategy(const std::string& s) {
    if (s == "cpu") return MultiStrategy::CpuOriented;
    if (s == "mem") return MultiStrategy::MemOriented;
    throw std::invalid_argument("unknown strategy '" + s + "'");
}

std::vector<std::size_t> order_apps(const ProblemInstance& instance, const AppOrder& order) {
    const auto& apps = instance.apps();
    std::vector<std::size_t> idx(apps.size());
    std::iota(idx.begin(), idx.end(), 0);
    auto by = [&](auto key_less) {
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (key_less(a, b)) return true;
            if (key_less(b, a)) return false;
            return id_less(instance, a, b);
        });
    };
    // p_a/q_a < p_b/q_b  <=>  p_a*q_b < p_b*q_a
    auto ratio_less = [&](std::size_t a, std::size_t b) {
        return apps[a].p * Load(apps[b].q) < apps[b].p * Load(apps[a].q);
    };
    switch (order.kind) {
        case OrderKind::MemInc: by([&](std::size_t a, std::size_t b) { return apps[a].q < apps[b].q; }); break;
        case OrderKind::MemDec: by([&](std::size_t a, std::size_t b) { return apps[a].q > apps[b].q; }); break;
        case OrderKind::CpuInc: by([&](std::size_t a, std::size_t b) { return apps[a].p < apps[b].p; }); break;
        case OrderKind::CpuDec: by([&](std::size_t a, std::size_t b) { return apps[a].p > apps[b].p; }); break;
        case OrderKind::RatioInc: by(ratio_less); break;
        case OrderKind::RatioDec: by([&](std::size_t a, std::size_t b) { return ratio_less(b, a); }); break;
        case OrderKind::Random: {
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return id_less(instance, a, b); });
            std::mt19937_64 rng(order.seed);
            std::shuffle(idx.begin(), idx.end(), rng);
            break;
        }
    }
    return idx;
}

PackingResult pack_single(const ProblemInstance& instance, FitRule rule, const AppOrder& order) {
    const ScaledInstance s = rescale(instance);
    const auto& apps = instance.apps();
    for (std::size_t i = 0; i < apps.size(); ++i) {
        if (s.cpu[i] > s.cap) {
            throw ContractError("application '" + apps[i].id + "' has p = " + apps[i].p.to_string() +
                                " > P; single-instanced packing cannot place it");
        }
    }

    std::vector<Machine> machines;
    std::vector<AssignmentEntry> entries;
    std::size_t cursor = 0;
    for (std::size_t i : order_apps(instance, order)) {
        auto j = pick_whole(machines, s.cpu[i], s.mem[i], rule, cursor);
        if (!j) {
            machines.push_back({s.cap, s.Q});
            j = machines.size() - 1;
        }
        machines[*j].free_cpu -= s.cpu[i];
        machines[*j].free_mem -= s.mem[i];
        cursor = *j;
        entries.push_back({apps[i].id, static_cast<std::int64_t>(*j), apps[i].p});
    }

    PackingResult result;
    result.assignment = Assignment(std::move(entries), static_cast<std::int64_t>(machines.size()));
    result.machines = machines_used(result.assignment);
    result.lower_bound = lower_bound_machines(instance);
    result.max_load = max_load(result.assignment);
    result.report = validate(instance, result.assignment, true);
    return result;
}

std::optional<Assignment> place_for_m(const ProblemInstance& instance, std::int64_t m, MultiStrategy strategy,
                                      FitRule rule) {
    if (m < 1) throw ContractError("place_for_m needs m >= 1");
    const ScaledInstance s = rescale(instance);
    const auto& apps = instance.apps();
    std::vector<Machine> machines(static_cast<std::size_t>(m), Machine{s.cap, s.Q});
    std::vector<AssignmentEntry> entries;
    std::size_t cursor = 0;

    // Phase 1: whole applications over all m machines.
    const AppOrder phase1{strategy == MultiStrategy::CpuOriented ? OrderKind::CpuInc : OrderKind::MemDec, 0};
    std::vector<std::size_t> deferred;
    for (std::size_t i : order_apps(instance, phase1)) {
        auto j = pick_whole(machines, s.cpu[i], s.mem[i], rule, cursor);
        if (!j) {
            deferred.push_back(i);
            continue;
        }
        machines[*j].free_cpu -= s.cpu[i];
        machines[*j].free_mem -= s.mem[i];
        cursor = *j;
        entries.push_back({apps[i].id, static_cast<std::int64_t>(*j), apps[i].p});
    }

    // Phase 2: cover deferred applications with the largest instances each machine admits.
    if (strategy == MultiStrategy::CpuOriented) {
        std::stable_sort(deferred.begin(), deferred.end(), [&](std::size_t a, std::size_t b) {
            if (apps[a].q != apps[b].q) return apps[a].q > apps[b].q;
            return id_less(instance, a, b);
        });
    }
    for (std::size_t i : deferred) {
        std::int64_t left = s.cpu[i];
        auto eligible = [&](const Machine& mc) { return mc.free_mem >= s.mem[i] && mc.free_cpu > 0; };
        auto reserve = [&](std::size_t j) {
            const std::int64_t take = std::min(left, machines[j].free_cpu);
            machines[j].free_cpu -= take;
            machines[j].free_mem -= s.mem[i];
            left -= take;
            cursor = j;
            entries.push_back({apps[i].id, static_cast<std::int64_t>(j), s.to_load(take)});
        };
        const std::size_t count = machines.size();
        switch (rule) {
            case FitRule::FirstFit:
                for (std::size_t j = 0; j < count && left > 0; ++j) {
                    if (eligible(machines[j])) reserve(j);
                }
                break;
            case FitRule::NextFit: {
                const std::size_t start = cursor;
                for (std::size_t k = 0; k < count && left > 0; ++k) {
                    const std::size_t j = (start + k) % count;
                    if (eligible(machines[j])) reserve(j);
                }
                break;
            }
            case FitRule::WorstFit: {
                // Ranked by free memory before the reservation.
                std::vector<bool> visited(count, false);
                while (left > 0) {
                    std::optional<std::size_t> best;
                    for (std::size_t j = 0; j < count; ++j) {
                        if (visited[j] || !eligible(machines[j])) continue;
                        if (!best || machines[j].free_mem > machines[*best].free_mem) best = j;
                    }
                    if (!best) break;
                    visited[*best] = true;
                    reserve(*best);
                }
                break;
            }
        }
        if (left > 0) return std::nullopt;
    }
    return Assignment(std::move(entries), m);
}

PackingResult pack_multi(const ProblemInstance& instance, MultiStrategy strategy, FitRule rule, SearchMode mode) {
    const auto& P = instance.config().P;
    if (!P) throw ContractError("pack_multi requires a CPU capacity P");

    PackingResult result;
    result.lower_bound = lower_bound_machines(instance);
    std::int64_t upper = 0;
    for (const auto& a : instance.apps()) upper += (a.p / *P).ceil();
    upper = std::max(upper, result.lower_bound);
    // Beyond this every app can take its own machines; reaching it means a bug.
    const std::int64_t scan_limit = 2 * upper + static_cast<std::int64_t>(instance.size()) + 1;

    std::optional<std::pair<std::int64_t, Assignment>> best;
    auto probe = [&](std::int64_t m) {
        auto placed = place_for_m(instance, m, strategy, rule);
        result.probes.push_back({m, placed.has_value()});
        if (placed) best = std::pair{m, std::move(*placed)};
        return result.probes.back().feasible;
    };
    auto scan_from = [&](std::int64_t m) {
        for (; m <= scan_limit; ++m) {
            if (probe(m)) return;
        }
        throw std::logic_error("multi-instanced placement failed up to " + std::to_string(scan_limit) + " machines");
    };

    if (instance.size() == 0) {
        result.report = validate(instance, result.assignment, true);
        return result;
    }
    if (mode == SearchMode::Linear) {
        scan_from(std::max<std::int64_t>(result.lower_bound, 1));
    } else {
        std::int64_t lo = std::max<std::int64_t>(result.lower_bound, 1);
        std::int64_t hi = upper;
        while (lo < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (probe(mid)) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        // lo == hi: either already probed feasible, or the upper end still needs a probe.
        if (!best || best->first != lo) {
            if (!probe(lo)) scan_from(lo + 1);
        }
    }

    result.assignment = std::move(best->second);
    result.machines = machines_used(result.assignment);
    result.max_load = max_load(result.assignment);
    result.report = validate(instance, result.assignment, true);
    return result;
}

PackingResult pack_with_dedicated_machines(const ProblemInstance& instance, FitRule rule, const AppOrder& order) {
    const auto& P = instance.config().P;
    if (!P) throw ContractError("packing requires a CPU capacity P");

    std::vector<AssignmentEntry> dedicated;
    std::vector<Application> remainder;
    std::int64_t next_machine = 0;
    for (const auto& a : instance.apps()) {
        const std::int64_t full = (a.p / *P).floor();
        for (std::int64_t k = 0; k < full; ++k) dedicated.push_back({a.id, next_machine++, *P});
        const Load rest = a.p - Load(full) * *P;
        if (rest.is_positive()) remainder.push_back({a.id, rest, a.q});
    }

    const ProblemInstance rest_instance(std::move(remainder), instance.config());
    PackingResult packed = pack_single(rest_instance, rule, order);
    std::vector<AssignmentEntry> entries = std::move(dedicated);
    for (auto e : packed.assignment.entries()) {
        e.machine += next_machine;
        entries.push_back(std::move(e));
    }

    PackingResult result;
    result.assignment = Assignment(std::move(entries), next_machine + packed.assignment.machine_count());
    result.machines = machines_used(result.assignment);
    result.lower_bound = lower_bound_machines(instance);
    result.max_load = max_load(result.assignment);
    result.report = validate(instance, result.assignment, true);
    return result;
}

}  // namespace semiflex::heuristics
