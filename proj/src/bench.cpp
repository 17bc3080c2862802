#include "semiflex/bench.hpp"

#include "semiflex/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace semiflex::bench {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<std::int64_t> bucket_upper(std::string_view label, std::initializer_list<std::pair<const char*, std::int64_t>> known,
                                         const char* open_label, const char* what) {
    if (label == open_label) return std::nullopt;
    for (const auto& [name, upper] : known) {
        if (label == name) return upper;
    }
    throw std::invalid_argument(std::string("malformed ") + what + " bucket '" + std::string(label) + "'");
}

Load round_to_milli(const Load& x) {
    // floor(x * 1000 + 1/2) / 1000
    const Load scaled = x * Load(1000) + Load(1, 2);
    return Load(scaled.floor(), 1000);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Mean of a log-normal(mu, sigma) variable clipped to [lo, hi].
double clipped_lognormal_mean(double mu, double sigma, double lo, double hi) {
    const double a = (std::log(lo) - mu) / sigma;
    const double b = (std::log(hi) - mu) / sigma;
    return lo * normal_cdf(a) + hi * (1.0 - normal_cdf(b)) +
           std::exp(mu + sigma * sigma / 2.0) * (normal_cdf(b - sigma) - normal_cdf(a - sigma));
}

constexpr double kTargetMedianP = 5.0;
constexpr double kTargetMeanP = 8.4;

std::uint64_t mix(std::uint64_t seed, std::uint64_t k) {
    // splitmix64 finalizer over the combined value
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::optional<std::int64_t> core_bucket_upper(std::string_view label) {
    return bucket_upper(label, {{"0-2", 2}, {"2-4", 4}, {"4-8", 8}, {"8-12", 12}, {"12-24", 24}}, ">24", "core");
}

std::optional<std::int64_t> mem_bucket_upper(std::string_view label) {
    return bucket_upper(label, {{"0-2", 2}, {"2-4", 4}, {"4-8", 8}, {"8-32", 32}, {"32-64", 64}}, ">64", "memory");
}

std::vector<VmRecord> read_vm_csv(std::string_view text) {
    std::vector<VmRecord> records;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        const std::string_view line = trim(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (line.empty()) continue;
        auto cols = split(line, ',');
        if (!header_seen) {
            if (cols.size() != 4 || cols[0] != "deployment_id" || cols[1] != "core_bucket" ||
                cols[2] != "mem_bucket_gb" || cols[3] != "avg_cpu_fraction") {
                throw std::invalid_argument(
                    "VM trace header must be deployment_id,core_bucket,mem_bucket_gb,avg_cpu_fraction");
            }
            header_seen = true;
            continue;
        }
        if (cols.size() != 4) {
            throw std::invalid_argument("VM trace line " + std::to_string(line_no) + ": expected 4 columns");
        }
        VmRecord r{std::string(cols[0]), std::string(cols[1]), std::string(cols[2]), Load()};
        try {
            r.avg_cpu_fraction = Load::parse(cols[3]);
        } catch (const std::exception& e) {
            throw std::invalid_argument("VM trace line " + std::to_string(line_no) + ": " + e.what());
        }
        if (r.avg_cpu_fraction > Load(1)) {
            throw std::invalid_argument("VM trace line " + std::to_string(line_no) + ": avg_cpu_fraction above 1");
        }
        records.push_back(std::move(r));
    }
    if (!header_seen) throw std::invalid_argument("VM trace is empty");
    return records;
}

IngestResult ingest(const std::vector<VmRecord>& records) {
    struct Deployment {
        Load p;
        std::int64_t q = 0;
        bool open_bucket = false;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, Deployment> by_id;
    for (const auto& r : records) {
        if (r.avg_cpu_fraction > Load(1)) throw std::invalid_argument("avg_cpu_fraction above 1 in '" + r.deployment_id + "'");
        auto [it, inserted] = by_id.try_emplace(r.deployment_id);
        if (inserted) order.push_back(r.deployment_id);
        Deployment& d = it->second;
        const auto cores = core_bucket_upper(r.core_bucket);
        const auto mem = mem_bucket_upper(r.mem_bucket_gb);
        if (!cores || !mem) {
            d.open_bucket = true;
            continue;
        }
        d.p += r.avg_cpu_fraction * Load(*cores);
        d.q = std::max(d.q, *mem);
    }

    IngestResult out;
    for (const auto& id : order) {
        const Deployment& d = by_id.at(id);
        if (d.open_bucket) {
            ++out.dropped_open_bucket;
            continue;
        }
        const Load p = round_to_milli(d.p);
        if (p < Load(1) || p > Load(32)) {
            ++out.dropped_out_of_range;
            continue;
        }
        out.apps.push_back({id, p, d.q});
    }
    return out;
}

SynthParams default_synth_params() {
    SynthParams params;
    params.log_median = std::log(kTargetMedianP);
    // The clipped mean grows monotonically with sigma, from 5 towards 16.5.
    double lo = 1e-3;
    double hi = 5.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (clipped_lognormal_mean(params.log_median, mid, params.p_min, params.p_max) < kTargetMeanP) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    params.log_sigma = 0.5 * (lo + hi);
    // Cumulative 0.10 / 0.35 / 0.75 puts the median at 8; the mean is exactly 14.
    params.q_values = {2, 4, 8, 32, 64};
    params.q_weights = {0.10, 0.25, 0.40, 0.20, 0.05};
    return params;
}

SynthPool synth_pool(std::size_t size, std::uint64_t seed) {
    if (size < 1) throw ContractError("synth_pool needs size >= 1");
    SynthPool pool{{}, default_synth_params()};
    const SynthParams& prm = pool.params;
    std::mt19937_64 rng(seed);
    std::lognormal_distribution<double> load(prm.log_median, prm.log_sigma);
    std::discrete_distribution<std::size_t> memory(prm.q_weights.begin(), prm.q_weights.end());
    pool.apps.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double raw = std::clamp(load(rng), prm.p_min, prm.p_max);
        const auto milli = static_cast<std::int64_t>(std::llround(raw * 1000.0));
        const std::int64_t q = prm.q_values[memory(rng)];
        pool.apps.push_back({"synth-" + std::to_string(i), Load(milli, 1000), q});
    }
    return pool;
}

io::json to_json(const SynthParams& params) {
    return {{"load_family", "lognormal clipped to [p_min, p_max], rounded to milli-vCPU"},
            {"log_median", params.log_median},
            {"log_sigma", params.log_sigma},
            {"p_min", params.p_min},
            {"p_max", params.p_max},
            {"target_median_p", kTargetMedianP},
            {"target_mean_p", kTargetMeanP},
            {"q_values", params.q_values},
            {"q_weights", params.q_weights}};
}

std::string AlgorithmId::name() const {
    if (multi) return "multi/" + heuristics::to_string(strategy) + "/" + heuristics::to_string(rule);
    return "single/" + heuristics::to_string(rule) + "/" + heuristics::to_string(order);
}

AlgorithmId AlgorithmId::parse(const std::string& name) {
    std::vector<std::string> parts;
    std::stringstream ss(name);
    for (std::string part; std::getline(ss, part, '/');) parts.push_back(part);
    if (parts.size() != 3) throw std::invalid_argument("algorithm '" + name + "' is not model/x/y");
    AlgorithmId id;
    if (parts[0] == "single") {
        id.rule = heuristics::parse_fit_rule(parts[1]);
        id.order = heuristics::parse_order(parts[2]);
    } else if (parts[0] == "multi") {
        id.multi = true;
        id.strategy = heuristics::parse_strategy(parts[1]);
        id.rule = heuristics::parse_fit_rule(parts[2]);
    } else {
        throw std::invalid_argument("algorithm '" + name + "' has unknown model");
    }
    return id;
}

std::vector<AlgorithmId> all_algorithms() {
    using heuristics::FitRule;
    using heuristics::MultiStrategy;
    using heuristics::OrderKind;
    std::vector<AlgorithmId> out;
    for (auto order : {OrderKind::MemInc, OrderKind::MemDec, OrderKind::CpuInc, OrderKind::CpuDec,
                       OrderKind::RatioInc, OrderKind::RatioDec, OrderKind::Random}) {
        for (auto rule : {FitRule::FirstFit, FitRule::NextFit, FitRule::WorstFit}) {
            out.push_back({false, rule, order, MultiStrategy::MemOriented});
        }
    }
    for (auto strategy : {MultiStrategy::CpuOriented, MultiStrategy::MemOriented}) {
        for (auto rule : {FitRule::FirstFit, FitRule::NextFit, FitRule::WorstFit}) {
            out.push_back({true, rule, OrderKind::MemDec, strategy});
        }
    }
    return out;
}

ExperimentSpec standard_grid_spec(std::uint64_t seed) {
    ExperimentSpec spec;
    for (std::int64_t Q : {64, 96, 128, 256, 512, 1024}) spec.machine_configs.push_back({Q, Load(32)});
    spec.algorithms = all_algorithms();
    spec.seed = seed;
    return spec;
}

ExperimentSpec experiment_spec_from_json(const io::json& j) {
    if (!j.is_object()) throw io::FormatError("experiment spec: expected a JSON object");
    ExperimentSpec spec;
    spec.instance_count = j.value("instance_count", spec.instance_count);
    spec.apps_per_instance = j.value("apps_per_instance", spec.apps_per_instance);
    spec.seed = j.value("seed", spec.seed);
    spec.threads = j.value("threads", spec.threads);
    if (!j.contains("machine_configs") || !j.at("machine_configs").is_array()) {
        throw io::FormatError("experiment spec: missing \"machine_configs\" array");
    }
    for (const auto& c : j.at("machine_configs")) {
        if (!c.contains("Q") || !c.at("Q").is_number_integer()) throw io::FormatError("machine config: missing integer Q");
        if (!c.contains("P") || c.at("P").is_null()) throw io::FormatError("machine config: packing needs P");
        spec.machine_configs.push_back({c.at("Q").get<std::int64_t>(), io::load_from_json(c.at("P"), "machine config P")});
    }
    const auto algos = j.value("algorithms", io::json("all"));
    if (algos.is_string() && algos.get<std::string>() == "all") {
        spec.algorithms = all_algorithms();
    } else if (algos.is_array()) {
        for (const auto& a : algos) spec.algorithms.push_back(AlgorithmId::parse(a.get<std::string>()));
    } else {
        throw io::FormatError("experiment spec: \"algorithms\" must be \"all\" or a list of names");
    }
    return spec;
}

std::vector<ProblemInstance> sample_instances(const std::vector<Application>& pool, const ExperimentSpec& spec) {
    if (spec.apps_per_instance == 0) throw ContractError("apps_per_instance must be >= 1");
    if (spec.apps_per_instance > pool.size()) {
        throw ContractError("pool of " + std::to_string(pool.size()) + " applications cannot supply " +
                            std::to_string(spec.apps_per_instance) + " per instance");
    }
    std::vector<ProblemInstance> out;
    out.reserve(spec.instance_count);
    for (std::size_t k = 0; k < spec.instance_count; ++k) {
        std::mt19937_64 rng(mix(spec.seed, k));
        std::vector<Application> apps;
        apps.reserve(spec.apps_per_instance);
        std::sample(pool.begin(), pool.end(), std::back_inserter(apps), spec.apps_per_instance, rng);
        std::int64_t q_max = 1;
        for (const auto& a : apps) q_max = std::max(q_max, a.q);
        out.emplace_back(std::move(apps), MachineConfig{q_max, std::nullopt});
    }
    return out;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const std::vector<Application>& pool) {
    if (spec.algorithms.empty() || spec.machine_configs.empty() || spec.instance_count == 0) return {};
    const auto samples = sample_instances(pool, spec);
    const std::size_t per_instance = spec.machine_configs.size() * spec.algorithms.size();
    const std::size_t total = samples.size() * per_instance;
    std::vector<ResultRow> rows(total);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        while (true) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            {
                std::lock_guard lock(failure_mutex);
                if (failure) return;
            }
            try {
                const std::size_t inst = task / per_instance;
                const std::size_t cfg = (task % per_instance) / spec.algorithms.size();
                const AlgorithmId& algo = spec.algorithms[task % spec.algorithms.size()];
                const ProblemInstance instance = samples[inst].with_config(spec.machine_configs[cfg]);

                const auto start = std::chrono::steady_clock::now();
                heuristics::PackingResult result =
                    algo.multi ? heuristics::pack_multi(instance, algo.strategy, algo.rule)
                               : heuristics::pack_single(instance, algo.rule,
                                                         {algo.order, mix(spec.seed ^ 0x5eedULL, inst)});
                const auto stop = std::chrono::steady_clock::now();

                if (!result.report.feasible()) {
                    throw std::logic_error("algorithm " + algo.name() + " produced an infeasible assignment on instance " +
                                           std::to_string(inst) + " (" +
                                           to_string(result.report.violations.front().kind) + ")");
                }
                ResultRow& row = rows[task];
                row.instance_id = inst;
                row.P = *instance.config().P;
                row.Q = instance.config().Q;
                row.algorithm = algo.name();
                row.machines = result.machines;
                row.lower_bound = result.lower_bound;
                row.normalized = static_cast<double>(result.machines) / static_cast<double>(result.lower_bound);
                row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    std::size_t threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, total);
    std::vector<std::thread> pool_threads;
    for (std::size_t t = 1; t < threads; ++t) pool_threads.emplace_back(worker);
    worker();
    for (auto& t : pool_threads) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << "instance_id,P,Q,algorithm,machines,lower_bound,normalized,runtime_ms\n";
    char buf[64];
    for (const auto& r : rows) {
        os << r.instance_id << ',' << r.P.to_string() << ',' << r.Q << ',' << r.algorithm << ',' << r.machines << ','
           << r.lower_bound << ',';
        std::snprintf(buf, sizeof buf, "%.6f", r.normalized);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.3f", r.runtime_ms);
        os << buf << '\n';
    }
}

}  // namespace semiflex::bench
