#pragma once

#include "semiflex/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace semiflex::heuristics {

enum class FitRule { FirstFit, NextFit, WorstFit };

enum class OrderKind { MemInc, MemDec, CpuInc, CpuDec, RatioInc, RatioDec, Random };

struct AppOrder {
    OrderKind kind = OrderKind::MemDec;
    std::uint64_t seed = 0;  // used by Random only
};

enum class MultiStrategy { CpuOriented, MemOriented };

// Short names used by the CLI and the benchmark ("ff", "mem-dec", "cpu", ...).
std::string to_string(FitRule r);
std::string to_string(OrderKind o);
std::string to_string(MultiStrategy s);
FitRule parse_fit_rule(const std::string& s);
OrderKind parse_order(const std::string& s);
MultiStrategy parse_strategy(const std::string& s);

/// One probe of the machine-count search.
struct Probe {
    std::int64_t m = 0;
    bool feasible = false;
};

struct PackingResult {
    Assignment assignment;
    std::int64_t machines = 0;
    std::int64_t lower_bound = 0;
    Load max_load;
    ValidationReport report;
    std::vector<Probe> probes;
};

/// Application indices in the requested order; ties by id, Random is seeded.
std::vector<std::size_t> order_apps(const ProblemInstance& instance, const AppOrder& order);

/// Single-instanced list packing. Requires p_i <= P for every app.
PackingResult pack_single(const ProblemInstance& instance, FitRule rule, const AppOrder& order);

/// Two-phase multi-instanced placement on exactly m machines; nullopt when
/// some application cannot be covered.
std::optional<Assignment> place_for_m(const ProblemInstance& instance, std::int64_t m, MultiStrategy strategy,
                                      FitRule rule);

enum class SearchMode { Binary, Linear };

/// Multi-instanced packing: searches m over [lower bound, sum ceil(p_i/P)]
/// with place_for_m, scanning upward past the range if needed.
PackingResult pack_multi(const ProblemInstance& instance, MultiStrategy strategy, FitRule rule,
                         SearchMode mode = SearchMode::Binary);

/// Baseline extension for p_i > P: every such app first takes floor(p_i/P)
/// dedicated machines at full load, then the remainders are list-packed.
PackingResult pack_with_dedicated_machines(const ProblemInstance& instance, FitRule rule, const AppOrder& order);

}  // namespace semiflex::heuristics
