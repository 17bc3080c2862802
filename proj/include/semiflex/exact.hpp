#pragma once

#include "semiflex/core.hpp"

#include <cstdint>
#include <optional>

namespace semiflex::exact {

/// n identical applications (load p, memory q each) on m identical machines.
struct CommonCaseParams {
    std::int64_t n = 1;
    std::int64_t m = 1;
    Load p{1};
    std::int64_t q = 1;
    std::int64_t Q = 1;
    std::optional<Load> P;

    /// Instances of one application a machine can host (Q div q).
    std::int64_t slots() const { return Q / q; }

    /// Materializes the applications with ids "0".."n-1".
    ProblemInstance to_instance() const;
};

/// Minimum achievable maximum machine load. Throws InfeasibleError when
/// m * (Q div q) < n, ContractError on malformed parameters.
Load optimal_max_load_common(const CommonCaseParams& params);

/// An assignment attaining optimal_max_load_common with at most Q div q
/// instances per machine. Residual applications are either wrapped across
/// machines (spare slot available) or split evenly over distinct machines.
Assignment balance_common(const CommonCaseParams& params);

/// Least machine count whose optimal max load fits under P, by binary search
/// over [m_L, m_U].
std::int64_t min_machines_common(std::int64_t n, const Load& p, std::int64_t q, const Load& P, std::int64_t Q);

/// Same predicate scanned linearly from m_L; exists to cross-check the search.
std::int64_t min_machines_common_linear(std::int64_t n, const Load& p, std::int64_t q, const Load& P,
                                        std::int64_t Q);

/// ceil(n / min(P div p, Q div q)) when p divides P; whole-app greedy packing
/// is optimal there. Throws ContractError otherwise.
std::int64_t min_machines_divisible(std::int64_t n, const Load& p, std::int64_t q, const Load& P, std::int64_t Q);

}  // namespace semiflex::exact
