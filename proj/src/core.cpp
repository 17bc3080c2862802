#include "semiflex/core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <utility>

namespace semiflex {

ProblemInstance::ProblemInstance(std::vector<Application> apps, MachineConfig config,
                                 std::optional<std::int64_t> fixed_m)
    : apps_(std::move(apps)), config_(std::move(config)), fixed_m_(fixed_m) {
    if (config_.Q < 1) throw ContractError("memory capacity Q must be >= 1");
    if (config_.P && !config_.P->is_positive()) throw ContractError("CPU capacity P must be > 0");
    if (fixed_m_ && *fixed_m_ < 1) throw ContractError("fixed_m must be >= 1");
    std::set<std::string> seen;
    for (const auto& app : apps_) {
        if (!seen.insert(app.id).second) throw ContractError("duplicate application id '" + app.id + "'");
        if (!app.p.is_positive()) throw ContractError("application '" + app.id + "' has non-positive load");
        if (app.q < 1) throw ContractError("application '" + app.id + "' has memory < 1");
        if (app.q > config_.Q) {
            throw ContractError("application '" + app.id + "' needs memory " + std::to_string(app.q) +
                                " > Q = " + std::to_string(config_.Q));
        }
    }
}

ProblemInstance ProblemInstance::with_config(MachineConfig config) const {
    return ProblemInstance(apps_, std::move(config), fixed_m_);
}

std::optional<std::size_t> ProblemInstance::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < apps_.size(); ++i) {
        if (apps_[i].id == id) return i;
    }
    return std::nullopt;
}

Load ProblemInstance::total_load() const {
    Load sum;
    for (const auto& app : apps_) sum += app.p;
    return sum;
}

std::int64_t ProblemInstance::total_memory() const {
    std::int64_t sum = 0;
    for (const auto& app : apps_) sum += app.q;
    return sum;
}

Assignment::Assignment(std::vector<AssignmentEntry> entries, std::int64_t machine_count)
    : machine_count_(machine_count) {
    std::map<std::pair<std::int64_t, std::string>, Load> merged;
    for (auto& e : entries) merged[{e.machine, std::move(e.app)}] += e.reserved;
    entries_.reserve(merged.size());
    for (auto& [key, reserved] : merged) {
        if (reserved.is_zero()) continue;
        entries_.push_back({key.second, key.first, reserved});
    }
}

Assignment Assignment::from_raw(std::vector<AssignmentEntry> entries, std::int64_t machine_count) {
    Assignment a;
    a.entries_ = std::move(entries);
    a.machine_count_ = machine_count;
    return a;
}

std::vector<Load> Assignment::machine_loads() const {
    std::vector<Load> loads(static_cast<std::size_t>(std::max<std::int64_t>(machine_count_, 0)));
    for (const auto& e : entries_) {
        if (e.machine >= 0 && e.machine < machine_count_) loads[static_cast<std::size_t>(e.machine)] += e.reserved;
    }
    return loads;
}

std::string to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::MemoryOverflow: return "MEMORY_OVERFLOW";
        case ViolationKind::LoadDeficit: return "LOAD_DEFICIT";
        case ViolationKind::CpuOverflow: return "CPU_OVERFLOW";
        case ViolationKind::DuplicateInstance: return "DUPLICATE_INSTANCE";
    }
    return "UNKNOWN";
}

bool ValidationReport::has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
}

ValidationReport validate(const ProblemInstance& instance, const Assignment& a, bool enforce_cpu_cap) {
    const auto& apps = instance.apps();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < apps.size(); ++i) index.emplace(apps[i].id, i);

    const auto machines = static_cast<std::size_t>(std::max<std::int64_t>(a.machine_count(), 0));
    std::vector<std::int64_t> memory(machines, 0);
    std::vector<Load> cpu(machines);
    std::vector<Load> covered(apps.size());
    std::set<std::pair<std::int64_t, std::size_t>> placed;

    ValidationReport report;
    for (const auto& e : a.entries()) {
        auto it = index.find(e.app);
        if (it == index.end()) throw ContractError("assignment references unknown application '" + e.app + "'");
        if (e.machine < 0 || e.machine >= a.machine_count()) {
            throw ContractError("assignment references machine " + std::to_string(e.machine) +
                                " outside 0.." + std::to_string(a.machine_count() - 1));
        }
        const std::size_t i = it->second;
        const auto j = static_cast<std::size_t>(e.machine);
        if (placed.emplace(e.machine, i).second) {
            memory[j] += apps[i].q;  // x_ij is 0/1: a second entry costs no extra memory
        } else {
            report.violations.push_back({ViolationKind::DuplicateInstance, e.machine, e.app, e.reserved});
        }
        cpu[j] += e.reserved;
        covered[i] += e.reserved;
    }

    const auto& cfg = instance.config();
    for (std::size_t j = 0; j < machines; ++j) {
        if (memory[j] > cfg.Q) {
            report.violations.push_back(
                {ViolationKind::MemoryOverflow, static_cast<std::int64_t>(j), std::nullopt, Load(memory[j] - cfg.Q)});
        }
    }
    for (std::size_t i = 0; i < apps.size(); ++i) {
        if (covered[i] < apps[i].p) {
            report.violations.push_back({ViolationKind::LoadDeficit, std::nullopt, apps[i].id, apps[i].p - covered[i]});
        }
    }
    if (enforce_cpu_cap && cfg.P) {
        for (std::size_t j = 0; j < machines; ++j) {
            if (cpu[j] > *cfg.P) {
                report.violations.push_back(
                    {ViolationKind::CpuOverflow, static_cast<std::int64_t>(j), std::nullopt, cpu[j] - *cfg.P});
            }
        }
    }
    return report;
}

Load max_load(const Assignment& a) {
    Load best;
    for (const auto& l : a.machine_loads()) best = max(best, l);
    return best;
}

std::int64_t machines_used(const Assignment& a) {
    std::set<std::int64_t> used;
    for (const auto& e : a.entries()) used.insert(e.machine);
    return static_cast<std::int64_t>(used.size());
}

std::int64_t lower_bound_machines(const ProblemInstance& instance) {
    const auto& cfg = instance.config();
    if (!cfg.P) throw ContractError("lower_bound_machines requires a CPU capacity P");
    const Load by_cpu = instance.total_load() / *cfg.P;
    return std::max(by_cpu.ceil(), ceil_div(instance.total_memory(), cfg.Q));
}

}  // namespace semiflex
