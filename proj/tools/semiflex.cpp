// semiflex: command-line front end for the packing and balancing solvers.
//
// Exit codes: 0 success, 1 infeasible (or failed validation), 2 usage error.

#include "semiflex/bench.hpp"
#include "semiflex/core.hpp"
#include "semiflex/exact.hpp"
#include "semiflex/heuristics.hpp"
#include "semiflex/io.hpp"
#include "semiflex/oracle.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace semiflex;
using io::json;

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kUsage = 2;

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw io::FormatError("cannot write '" + out_path + "'");
    out << j.dump(2) << '\n';
}

struct ExactArgs {
    std::int64_t n = 0;
    std::optional<std::int64_t> m;
    std::string p;
    std::int64_t q = 1;
    std::int64_t Q = 0;
    std::optional<std::string> P;
};

int run_exact(const ExactArgs& a) {
    exact::CommonCaseParams params;
    params.n = a.n;
    params.p = Load::parse(a.p);
    params.q = a.q;
    params.Q = a.Q;
    if (a.P) params.P = Load::parse(*a.P);

    json out;
    if (a.m) {
        params.m = *a.m;
        const Load value = exact::optimal_max_load_common(params);
        const Assignment assignment = exact::balance_common(params);
        out = {{"objective", "balance"}, {"n", params.n}, {"m", params.m}, {"optimal_max_load", value.to_string()}};
        if (params.P) out["within_cpu_cap"] = value <= *params.P;
        out["assignment"] = io::assignment_to_json(assignment);
    } else if (params.P) {
        params.m = exact::min_machines_common(params.n, params.p, params.q, *params.P, params.Q);
        const Assignment assignment = exact::balance_common(params);
        out = {{"objective", "pack"},
               {"n", params.n},
               {"min_machines", params.m},
               {"optimal_max_load", exact::optimal_max_load_common(params).to_string()},
               {"assignment", io::assignment_to_json(assignment)}};
    } else {
        throw CLI::ValidationError("exact", "give --machines for balancing or --cpu-cap for packing");
    }
    emit(out, "");
    return kOk;
}

struct PackArgs {
    std::string instance;
    std::string model = "multi";
    std::string rule = "ff";
    std::string order = "mem-dec";
    std::string strategy = "mem";
    std::uint64_t seed = 0;
    bool scan = false;
    std::string out;
};

int run_pack(const PackArgs& a) {
    const ProblemInstance instance = io::instance_from_json(io::read_json_file(a.instance));
    const auto rule = heuristics::parse_fit_rule(a.rule);
    heuristics::PackingResult result;
    if (a.model == "single") {
        result = heuristics::pack_single(instance, rule, {heuristics::parse_order(a.order), a.seed});
    } else {
        result = heuristics::pack_multi(instance, heuristics::parse_strategy(a.strategy), rule,
                                        a.scan ? heuristics::SearchMode::Linear : heuristics::SearchMode::Binary);
    }
    json out = io::packing_result_to_json(result);
    out["model"] = a.model;
    emit(out, a.out);
    return result.report.feasible() ? kOk : kInfeasible;
}

struct ValidateArgs {
    std::string instance;
    std::string assignment;
    bool ignore_cpu_cap = false;
};

int run_validate(const ValidateArgs& a) {
    const ProblemInstance instance = io::instance_from_json(io::read_json_file(a.instance));
    const Assignment assignment = io::assignment_from_json(io::read_json_file(a.assignment));
    const bool enforce = !a.ignore_cpu_cap && instance.config().P.has_value();
    const ValidationReport report = validate(instance, assignment, enforce);
    json out = io::report_to_json(report);
    out["cpu_cap_enforced"] = enforce;
    out["max_load"] = max_load(assignment).to_string();
    out["machines_used"] = machines_used(assignment);
    emit(out, "");
    return report.feasible() ? kOk : kInfeasible;
}

struct OracleArgs {
    std::string instance;
    std::string objective = "pack";
    std::optional<std::int64_t> m;
    std::size_t max_apps = 6;
    std::int64_t max_machines = 4;
    bool single = false;
};

int run_oracle(const OracleArgs& a) {
    const ProblemInstance instance = io::instance_from_json(io::read_json_file(a.instance));
    const oracle::Limits limits{a.max_apps, a.max_machines, a.single};
    json out = {{"objective", a.objective}, {"single_instanced", a.single}};
    if (a.objective == "balance") {
        const auto m = a.m ? a.m : instance.fixed_m();
        if (!m) throw CLI::ValidationError("oracle", "balancing needs --m or fixed_m in the instance");
        const auto best = oracle::oracle_min_max_load(instance, *m, limits);
        out["m"] = *m;
        out["max_load"] = best.max_load.to_string();
        out["assignment"] = io::assignment_to_json(oracle::assignment_for_support(instance, best.support, *m));
    } else {
        const std::int64_t m = oracle::oracle_min_machines(instance, limits);
        out["m"] = m;
        if (m > 0) {
            const auto best = oracle::oracle_min_max_load(instance, m, limits);
            out["max_load"] = best.max_load.to_string();
            out["assignment"] = io::assignment_to_json(oracle::assignment_for_support(instance, best.support, m));
        }
    }
    emit(out, "");
    return kOk;
}

int run_ingest(const std::string& csv, const std::string& out_path) {
    const auto records = bench::read_vm_csv(io::read_text_file(csv));
    const auto result = bench::ingest(records);
    json meta = {{"source", csv},
                 {"vm_records", records.size()},
                 {"dropped_open_bucket", result.dropped_open_bucket},
                 {"dropped_out_of_range", result.dropped_out_of_range}};
    emit(io::pool_to_json(result.apps, meta), out_path);
    return kOk;
}

int run_synth(std::size_t size, std::uint64_t seed, const std::string& out_path) {
    const auto pool = bench::synth_pool(size, seed);
    json meta = {{"generator", bench::to_json(pool.params)}, {"size", size}, {"seed", seed}};
    emit(io::pool_to_json(pool.apps, meta), out_path);
    return kOk;
}

int run_bench(const std::string& spec_path, const std::string& pool_path, std::optional<std::size_t> threads,
              const std::string& out_path) {
    bench::ExperimentSpec spec = bench::experiment_spec_from_json(io::read_json_file(spec_path));
    if (threads) spec.threads = *threads;
    const auto pool = io::pool_from_json(io::read_json_file(pool_path));
    const auto rows = bench::run_experiment(spec, pool);
    if (out_path.empty()) {
        bench::write_csv(std::cout, rows);
    } else {
        std::ofstream out(out_path);
        if (!out) throw io::FormatError("cannot write '" + out_path + "'");
        bench::write_csv(out, rows);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-flexible cloud packing: multi-instanced bin packing and load balancing solvers"};
    app.require_subcommand(1);

    ExactArgs exact_args;
    auto* exact_cmd = app.add_subcommand("exact", "Closed-form solution for n identical applications");
    exact_cmd->add_option("-n,--apps", exact_args.n, "Number of applications")->required();
    exact_cmd->add_option("-m,--machines", exact_args.m, "Machine count (balancing objective)");
    exact_cmd->add_option("-p,--cpu", exact_args.p, "CPU load per application (decimal)")->required();
    exact_cmd->add_option("-q,--mem", exact_args.q, "Memory per instance")->required();
    exact_cmd->add_option("-Q,--mem-cap", exact_args.Q, "Machine memory capacity")->required();
    exact_cmd->add_option("-P,--cpu-cap", exact_args.P, "Machine CPU capacity (packing objective)");

    PackArgs pack_args;
    auto* pack_cmd = app.add_subcommand("pack", "Minimize machines with list heuristics");
    pack_cmd->add_option("instance", pack_args.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
    pack_cmd->add_option("--model", pack_args.model, "single | multi")->check(CLI::IsMember({"single", "multi"}));
    pack_cmd->add_option("--rule", pack_args.rule, "ff | nf | wf")->check(CLI::IsMember({"ff", "nf", "wf"}));
    pack_cmd->add_option("--order", pack_args.order, "Application order for --model single")
        ->check(CLI::IsMember({"mem-inc", "mem-dec", "cpu-inc", "cpu-dec", "ratio-inc", "ratio-dec", "random"}));
    pack_cmd->add_option("--strategy", pack_args.strategy, "cpu | mem (multi model)")
        ->check(CLI::IsMember({"cpu", "mem"}));
    pack_cmd->add_option("--seed", pack_args.seed, "Seed for --order random");
    pack_cmd->add_flag("--scan", pack_args.scan, "Linear scan over machine counts instead of binary search");
    pack_cmd->add_option("-o,--out", pack_args.out, "Write the result here instead of stdout");

    ValidateArgs validate_args;
    auto* validate_cmd = app.add_subcommand("validate", "Check an assignment against an instance");
    validate_cmd->add_option("instance", validate_args.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
    validate_cmd->add_option("assignment", validate_args.assignment, "Assignment JSON (list or pack output)")
        ->required()
        ->check(CLI::ExistingFile);
    validate_cmd->add_flag("--ignore-cpu-cap", validate_args.ignore_cpu_cap, "Do not check P per machine");

    OracleArgs oracle_args;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact brute force for small instances");
    oracle_cmd->add_option("instance", oracle_args.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
    oracle_cmd->add_option("--objective", oracle_args.objective, "balance | pack")
        ->check(CLI::IsMember({"balance", "pack"}));
    oracle_cmd->add_option("--m", oracle_args.m, "Machine count for --objective balance");
    oracle_cmd->add_option("--max-apps", oracle_args.max_apps, "Application cap");
    oracle_cmd->add_option("--max-machines", oracle_args.max_machines, "Machine cap");
    oracle_cmd->add_flag("--single", oracle_args.single, "Restrict to one instance per application");

    std::string ingest_csv;
    std::string ingest_out;
    auto* ingest_cmd = app.add_subcommand("ingest", "Bucketed VM trace CSV to application pool JSON");
    ingest_cmd->add_option("csv", ingest_csv, "CSV: deployment_id,core_bucket,mem_bucket_gb,avg_cpu_fraction")
        ->required()
        ->check(CLI::ExistingFile);
    ingest_cmd->add_option("-o,--out", ingest_out, "Output path (default stdout)");

    std::size_t synth_size = 16464;
    std::uint64_t synth_seed = 1;
    std::string synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a statistics-matched synthetic application pool");
    synth_cmd->add_option("--size", synth_size, "Number of applications")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth_seed, "Generator seed");
    synth_cmd->add_option("-o,--out", synth_out, "Output path (default stdout)");

    std::string bench_spec;
    std::string bench_pool;
    std::optional<std::size_t> bench_threads;
    std::string bench_out;
    auto* bench_cmd = app.add_subcommand("bench", "Run the heuristic comparison and write CSV");
    bench_cmd->add_option("--spec", bench_spec, "Experiment spec JSON")->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--pool", bench_pool, "Application pool JSON")->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--threads", bench_threads, "Worker threads (default: hardware concurrency)");
    bench_cmd->add_option("-o,--out", bench_out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (*exact_cmd) return run_exact(exact_args);
        if (*pack_cmd) return run_pack(pack_args);
        if (*validate_cmd) return run_validate(validate_args);
        if (*oracle_cmd) return run_oracle(oracle_args);
        if (*ingest_cmd) return run_ingest(ingest_csv, ingest_out);
        if (*synth_cmd) return run_synth(synth_size, synth_seed, synth_out);
        if (*bench_cmd) return run_bench(bench_spec, bench_pool, bench_threads, bench_out);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const io::FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        // ContractError and malformed values land here.
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << '\n';
        return kInfeasible;
    }
    return kUsage;
}
