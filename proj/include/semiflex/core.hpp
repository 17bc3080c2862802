#pragma once

#include "semiflex/load.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace semiflex {

/// Raised when no feasible assignment exists for the requested parameters.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a caller violates an operation's precondition.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Application {
    std::string id;
    Load p;              // total CPU demand
    std::int64_t q = 1;  // memory per instance
};

struct MachineConfig {
    std::int64_t Q = 1;
    std::optional<Load> P;  // absent for pure balancing
};

/// A validated set of applications bound to one machine configuration.
class ProblemInstance {
public:
    ProblemInstance() = default;
    /// Throws ContractError on duplicate ids, p <= 0, q < 1, q > Q, or P <= 0.
    ProblemInstance(std::vector<Application> apps, MachineConfig config,
                    std::optional<std::int64_t> fixed_m = std::nullopt);

    const std::vector<Application>& apps() const { return apps_; }
    const MachineConfig& config() const { return config_; }
    std::optional<std::int64_t> fixed_m() const { return fixed_m_; }
    std::size_t size() const { return apps_.size(); }

    /// Same applications against another machine configuration.
    ProblemInstance with_config(MachineConfig config) const;

    /// Index of `id` in apps(), or nullopt.
    std::optional<std::size_t> index_of(const std::string& id) const;

    Load total_load() const;
    std::int64_t total_memory() const;

private:
    std::vector<Application> apps_;
    MachineConfig config_;
    std::optional<std::int64_t> fixed_m_;
};

struct AssignmentEntry {
    std::string app;
    std::int64_t machine = 0;
    Load reserved;

    friend bool operator==(const AssignmentEntry&, const AssignmentEntry&) = default;
};

/// The (x_ij, p_ij) matrix as a sparse entry list over machines 0..machine_count-1.
///
/// The public constructor normalizes: entries of one app on one machine are
/// merged and zero reservations are dropped. `from_raw` skips normalization
/// so that the validator can be exercised on malformed input.
class Assignment {
public:
    Assignment() = default;
    Assignment(std::vector<AssignmentEntry> entries, std::int64_t machine_count);

    static Assignment from_raw(std::vector<AssignmentEntry> entries, std::int64_t machine_count);

    const std::vector<AssignmentEntry>& entries() const { return entries_; }
    std::int64_t machine_count() const { return machine_count_; }
    bool empty() const { return entries_.empty(); }

    /// Per-machine total reserved CPU, indexed 0..machine_count-1.
    std::vector<Load> machine_loads() const;

private:
    std::vector<AssignmentEntry> entries_;
    std::int64_t machine_count_ = 0;
};

enum class ViolationKind { MemoryOverflow, LoadDeficit, CpuOverflow, DuplicateInstance };

std::string to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    std::optional<std::int64_t> machine;
    std::optional<std::string> app;
    Load amount;  // excess memory, missing load, or excess CPU
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool feasible() const { return violations.empty(); }
    bool has(ViolationKind k) const;
};

/// Checks memory per machine, load coverage per app, duplicate instances and,
/// when `enforce_cpu_cap`, the CPU cap P per machine.
///
/// An entry naming an unknown app or an out-of-range machine is a structural
/// error (ContractError), not a violation.
ValidationReport validate(const ProblemInstance& instance, const Assignment& a, bool enforce_cpu_cap);

Load max_load(const Assignment& a);

std::int64_t machines_used(const Assignment& a);

/// max(ceil(sum p / P), ceil(sum q / Q)). Requires P.
std::int64_t lower_bound_machines(const ProblemInstance& instance);

}  // namespace semiflex
