#pragma once

#include "semiflex/core.hpp"
#include "semiflex/heuristics.hpp"
#include "semiflex/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semiflex::bench {

// ---------------------------------------------------------------------------
// Trace ingestion
// ---------------------------------------------------------------------------

/// One VM row of the bucketed trace. Bucket labels are kept verbatim and
/// resolved during ingestion.
struct VmRecord {
    std::string deployment_id;
    std::string core_bucket;    // 0-2, 2-4, 4-8, 8-12, 12-24, >24
    std::string mem_bucket_gb;  // 0-2, 2-4, 4-8, 8-32, 32-64, >64
    Load avg_cpu_fraction;      // in [0, 1]
};

/// Upper end of a bucket; nullopt for the open-ended top bucket. Throws
/// std::invalid_argument on an unknown label.
std::optional<std::int64_t> core_bucket_upper(std::string_view label);
std::optional<std::int64_t> mem_bucket_upper(std::string_view label);

/// Parses CSV with header `deployment_id,core_bucket,mem_bucket_gb,avg_cpu_fraction`.
std::vector<VmRecord> read_vm_csv(std::string_view text);

struct IngestResult {
    std::vector<Application> apps;
    std::size_t dropped_open_bucket = 0;
    std::size_t dropped_out_of_range = 0;
};

/// One application per deployment, in first-appearance order:
///   q = largest memory-bucket upper end, p = sum of fraction * core-bucket
///   upper end, rounded to milli-vCPU. Deployments touching an open-ended
///   bucket, or with p outside [1, 32], are dropped.
IngestResult ingest(const std::vector<VmRecord>& records);

// ---------------------------------------------------------------------------
// Synthetic pool
// ---------------------------------------------------------------------------

struct SynthParams {
    double log_median = 0;  // mu of the log-normal load before clipping
    double log_sigma = 0;
    double p_min = 1;
    double p_max = 32;
    std::vector<std::int64_t> q_values;
    std::vector<double> q_weights;
};

/// Log-normal loads clipped to [1, 32] with mu and sigma solved so the clipped
/// law has median 5.0 and mean 8.4; memory drawn from bucket upper ends
/// {2, 4, 8, 32, 64} with weights giving median 8 and mean 14.
SynthParams default_synth_params();

struct SynthPool {
    std::vector<Application> apps;
    SynthParams params;
};

SynthPool synth_pool(std::size_t size, std::uint64_t seed);

io::json to_json(const SynthParams& params);

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

struct AlgorithmId {
    bool multi = false;
    heuristics::FitRule rule = heuristics::FitRule::FirstFit;
    heuristics::OrderKind order = heuristics::OrderKind::MemDec;       // single only
    heuristics::MultiStrategy strategy = heuristics::MultiStrategy::MemOriented;  // multi only

    /// "single/ff/mem-dec" or "multi/mem/wf".
    std::string name() const;
    static AlgorithmId parse(const std::string& name);
};

/// 7 orders x 3 rules single-instanced, then 2 strategies x 3 rules multi-instanced.
std::vector<AlgorithmId> all_algorithms();

struct ExperimentSpec {
    std::size_t instance_count = 50;
    std::size_t apps_per_instance = 100;
    std::vector<MachineConfig> machine_configs;
    std::vector<AlgorithmId> algorithms;
    std::uint64_t seed = 1;
    std::size_t threads = 0;  // 0: hardware concurrency
};

/// P = 32 and Q in {64, 96, 128, 256, 512, 1024}; 50 x 100; all algorithms.
ExperimentSpec standard_grid_spec(std::uint64_t seed);

ExperimentSpec experiment_spec_from_json(const io::json& j);

/// Seed-deterministic samples without replacement. The returned instances
/// carry a placeholder configuration (Q = largest q in the sample, no P);
/// rebind with ProblemInstance::with_config.
std::vector<ProblemInstance> sample_instances(const std::vector<Application>& pool, const ExperimentSpec& spec);

struct ResultRow {
    std::size_t instance_id = 0;
    Load P;
    std::int64_t Q = 0;
    std::string algorithm;
    std::int64_t machines = 0;
    std::int64_t lower_bound = 0;
    double normalized = 0;
    double runtime_ms = 0;
};

/// Runs every (instance, config, algorithm) and validates each result;
/// rows come back ordered by instance, then config, then algorithm.
/// Throws std::logic_error if any solver output fails validation.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const std::vector<Application>& pool);

/// instance_id,P,Q,algorithm,machines,lower_bound,normalized,runtime_ms
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);

}  // namespace semiflex::bench
