#include "semiflex/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <string>

namespace semiflex::oracle {

namespace {

// Non-negative fraction num/den with den > 0, compared exactly.
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

bool less(const Ratio& a, const Ratio& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
    const std::int64_t g = std::gcd(a, b);
    const __int128 r = static_cast<__int128>(a / g) * b;
    if (r > std::numeric_limits<std::int64_t>::max() / 64) throw std::overflow_error("load denominators too large");
    return static_cast<std::int64_t>(r);
}

// Depth-first enumeration of memory-feasible supports, canonical up to
// machine relabeling: an application may use any subset of machines already
// touched plus the next k untouched ones. The cut value of a partial support
// only grows as applications are added, so it bounds every completion.
class SupportSearch {
public:
    SupportSearch(const ProblemInstance& instance, std::int64_t m, bool singleton)
        : m_(static_cast<int>(m)), full_(1u << m), singleton_(singleton), capacity_(instance.config().Q) {
        const auto& apps = instance.apps();
        std::int64_t scale = 1;
        for (const auto& a : apps) scale = lcm_checked(scale, a.p.denominator());
        scale_ = scale;
        order_.resize(apps.size());
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t x, std::size_t y) { return apps[y].p < apps[x].p; });
        for (const auto& a : apps) {
            weight_.push_back(a.p.numerator() * (scale / a.p.denominator()));
            memory_.push_back(a.q);
        }
        contained_.assign(full_, 0);
        used_memory_.assign(static_cast<std::size_t>(m_), 0);
        current_.assign(apps.size(), 0);
    }

    // Minimum cut value over all supports; nullopt when none fits in memory.
    std::optional<std::pair<Load, SupportMatrix>> minimize() {
        threshold_.reset();
        best_.reset();
        descend(0, 0);
        if (!best_) return std::nullopt;
        return std::pair{Load(best_->num, best_->den * scale_), best_support_};
    }

    // True iff some support reaches a cut value <= limit.
    bool reaches(const Load& limit) {
        const Load scaled = limit * Load(scale_);
        threshold_ = Ratio{scaled.numerator(), scaled.denominator()};
        best_.reset();
        stop_ = false;
        descend(0, 0);
        return best_.has_value();
    }

private:
    Ratio cut_value() const {
        Ratio worst{0, 1};
        for (std::uint32_t s = 1; s < full_; ++s) {
            Ratio r{contained_[s], std::popcount(s)};
            if (less(worst, r)) worst = r;
        }
        return worst;
    }

    bool prune(const Ratio& value) const {
        if (threshold_) return less(*threshold_, value);
        return best_ && !less(value, *best_);
    }

    void add(std::size_t app, std::uint32_t mask, int sign) {
        for (std::uint32_t s = mask; s < full_; s = (s + 1) | mask) contained_[s] += sign * weight_[app];
        for (int j = 0; j < m_; ++j) {
            if (mask & (1u << j)) used_memory_[static_cast<std::size_t>(j)] += sign * memory_[app];
        }
    }

    bool fits(std::uint32_t mask, std::int64_t q) const {
        for (int j = 0; j < m_; ++j) {
            if ((mask & (1u << j)) && used_memory_[static_cast<std::size_t>(j)] + q > capacity_) return false;
        }
        return true;
    }

    void descend(std::size_t depth, int touched) {
        if (stop_) return;
        if (depth == order_.size()) {
            best_ = cut_value();
            best_support_ = current_;
            if (threshold_) stop_ = true;
            return;
        }
        const std::size_t app = order_[depth];
        const std::int64_t q = memory_[app];
        const int fresh_max = m_ - touched;
        const std::uint32_t touched_full = (1u << touched) - 1;
        for (int fresh = 0; fresh <= fresh_max; ++fresh) {
            const std::uint32_t fresh_mask = ((1u << fresh) - 1) << touched;
            // Enumerate subsets of touched machines, descending so wide supports come first.
            for (std::uint32_t sub = touched_full;; sub = (sub - 1) & touched_full) {
                const std::uint32_t mask = sub | fresh_mask;
                const bool shape_ok = mask != 0 && (!singleton_ || std::popcount(mask) == 1);
                if (shape_ok && fits(mask, q)) {
                    add(app, mask, +1);
                    current_[app] = mask;
                    if (!prune(cut_value())) descend(depth + 1, touched + fresh);
                    add(app, mask, -1);
                    if (stop_) return;
                }
                if (sub == 0) break;
            }
            if (singleton_ && fresh >= 1) break;
        }
    }

    int m_;
    std::uint32_t full_;
    bool singleton_;
    std::int64_t capacity_;
    std::int64_t scale_ = 1;
    std::vector<std::size_t> order_;
    std::vector<std::int64_t> weight_;
    std::vector<std::int64_t> memory_;
    std::vector<std::int64_t> contained_;
    std::vector<std::int64_t> used_memory_;
    SupportMatrix current_;

    std::optional<Ratio> threshold_;
    std::optional<Ratio> best_;
    SupportMatrix best_support_;
    bool stop_ = false;
};

void check_limits(const ProblemInstance& instance, std::int64_t m, const Limits& limits) {
    if (m < 1) throw ContractError("oracle needs m >= 1");
    if (instance.size() > limits.max_apps) {
        throw LimitError("oracle: " + std::to_string(instance.size()) + " applications exceed cap " +
                         std::to_string(limits.max_apps));
    }
    if (m > limits.max_machines || m > 20) {
        throw LimitError("oracle: " + std::to_string(m) + " machines exceed cap " +
                         std::to_string(std::min<std::int64_t>(limits.max_machines, 20)));
    }
}

}  // namespace

Load min_max_load_for_support(const SupportMatrix& support, std::span<const Load> loads, std::int64_t m) {
    if (support.size() != loads.size()) throw ContractError("support and loads differ in length");
    if (m < 1 || m > 31) throw ContractError("support needs 1 <= m <= 31");
    const std::uint32_t full = 1u << m;
    Load worst;
    for (std::uint32_t s = 1; s < full; ++s) {
        Load inside;
        for (std::size_t i = 0; i < support.size(); ++i) {
            if ((support[i] & ~s) == 0) inside += loads[i];
        }
        worst = max(worst, inside / Load(std::popcount(s)));
    }
    return worst;
}

BalanceResult oracle_min_max_load(const ProblemInstance& instance, std::int64_t m, const Limits& limits) {
    check_limits(instance, m, limits);
    if (instance.size() == 0) return {Load(0), {}};
    SupportSearch search(instance, m, limits.singleton_supports);
    auto found = search.minimize();
    if (!found) throw InfeasibleError("no memory-feasible support on " + std::to_string(m) + " machines");
    return {found->first, std::move(found->second)};
}

std::int64_t oracle_min_machines(const ProblemInstance& instance, const Limits& limits) {
    const auto& P = instance.config().P;
    if (!P) throw ContractError("oracle_min_machines requires a CPU capacity P");
    if (instance.size() == 0) return 0;
    std::int64_t upper = 0;
    for (const auto& a : instance.apps()) {
        if (limits.singleton_supports && a.p > *P) {
            throw InfeasibleError("application '" + a.id + "' exceeds P and cannot be placed whole");
        }
        upper += limits.singleton_supports ? 1 : (a.p / *P).ceil();
    }
    const std::int64_t lower = lower_bound_machines(instance);
    upper = std::max(upper, lower);
    for (std::int64_t m = lower; m <= upper; ++m) {
        check_limits(instance, m, limits);
        SupportSearch search(instance, m, limits.singleton_supports);
        if (search.reaches(*P)) return m;
    }
    throw InfeasibleError("no feasible machine count up to " + std::to_string(upper));
}

Assignment assignment_for_support(const ProblemInstance& instance, const SupportMatrix& support, std::int64_t m) {
    const auto& apps = instance.apps();
    if (support.size() != apps.size()) throw ContractError("support does not match instance");
    std::vector<Load> loads;
    for (const auto& a : apps) loads.push_back(a.p);
    const Load level = min_max_load_for_support(support, loads, m);

    // Nodes: 0 source, 1..n apps, n+1..n+m machines, n+m+1 sink.
    const std::size_t n = apps.size();
    const std::size_t mm = static_cast<std::size_t>(m);
    const std::size_t nodes = n + mm + 2;
    const std::size_t source = 0;
    const std::size_t sink = nodes - 1;
    std::vector<std::vector<Load>> cap(nodes, std::vector<Load>(nodes));
    std::vector<std::vector<Load>> flow(nodes, std::vector<Load>(nodes));
    for (std::size_t i = 0; i < n; ++i) {
        cap[source][1 + i] = apps[i].p;
        for (std::size_t j = 0; j < mm; ++j) {
            if (support[i] & (1u << j)) cap[1 + i][1 + n + j] = apps[i].p;
        }
    }
    for (std::size_t j = 0; j < mm; ++j) cap[1 + n + j][sink] = level;

    // Shortest augmenting paths; the graph has at most a few dozen nodes.
    while (true) {
        std::vector<std::optional<std::size_t>> parent(nodes);
        parent[source] = source;
        std::queue<std::size_t> frontier;
        frontier.push(source);
        while (!frontier.empty() && !parent[sink]) {
            const std::size_t u = frontier.front();
            frontier.pop();
            for (std::size_t v = 0; v < nodes; ++v) {
                if (!parent[v] && cap[u][v] - flow[u][v] > Load(0)) {
                    parent[v] = u;
                    frontier.push(v);
                }
            }
        }
        if (!parent[sink]) break;
        Load push = cap[*parent[sink]][sink] - flow[*parent[sink]][sink];
        for (std::size_t v = sink; v != source; v = *parent[v]) push = min(push, cap[*parent[v]][v] - flow[*parent[v]][v]);
        for (std::size_t v = sink; v != source; v = *parent[v]) {
            flow[*parent[v]][v] += push;
            flow[v][*parent[v]] -= push;
        }
    }

    std::vector<AssignmentEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < mm; ++j) {
            if (flow[1 + i][1 + n + j].is_positive()) {
                entries.push_back({apps[i].id, static_cast<std::int64_t>(j), flow[1 + i][1 + n + j]});
            }
        }
    }
    return Assignment(std::move(entries), m);
}

}  // namespace semiflex::oracle
