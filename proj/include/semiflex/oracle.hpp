#pragma once

#include "semiflex/core.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace semiflex::oracle {

/// For each application, the bitmask of machines hosting one of its instances.
using SupportMatrix = std::vector<std::uint32_t>;

struct Limits {
    std::size_t max_apps = 6;
    std::int64_t max_machines = 4;
    /// Restrict every support to a single machine (classic 2-D bin packing).
    bool singleton_supports = false;
};

/// Raised when an instance exceeds the configured enumeration caps.
class LimitError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Exact min-max splittable load for a fixed support:
///   max over non-empty machine sets S of (load of apps whose support lies in S) / |S|.
/// Memory feasibility of `support` is the caller's responsibility.
Load min_max_load_for_support(const SupportMatrix& support, std::span<const Load> loads, std::int64_t m);

struct BalanceResult {
    Load max_load;
    SupportMatrix support;
};

/// Minimum over all memory-feasible supports on m machines. Throws LimitError
/// past the caps and InfeasibleError when no support fits in memory.
BalanceResult oracle_min_max_load(const ProblemInstance& instance, std::int64_t m, const Limits& limits = {});

/// Smallest m >= lower_bound_machines whose optimal max load is <= P.
std::int64_t oracle_min_machines(const ProblemInstance& instance, const Limits& limits = {});

/// Splittable loads on a fixed support: a transportation flow at the
/// support's optimal level. Pairs with SupportMatrix results from the oracle.
Assignment assignment_for_support(const ProblemInstance& instance, const SupportMatrix& support, std::int64_t m);

}  // namespace semiflex::oracle
