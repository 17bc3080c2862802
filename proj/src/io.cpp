#include "semiflex/io.hpp"

#include <fstream>
#include <sstream>

namespace semiflex::io {

namespace {

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(where + ": missing \"" + key + "\"");
    return j.at(key);
}

std::int64_t int_from_json(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw FormatError(what + ": expected an integer");
    return j.get<std::int64_t>();
}

Application app_from_json(const json& j, std::size_t index) {
    const std::string where = "apps[" + std::to_string(index) + "]";
    const json& id = require(j, "id", where);
    Application a;
    if (id.is_string()) {
        a.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
        a.id = std::to_string(id.get<std::int64_t>());
    } else {
        throw FormatError(where + ".id: expected a string");
    }
    a.p = load_from_json(require(j, "p", where), where + ".p");
    a.q = int_from_json(require(j, "q", where), where + ".q");
    return a;
}

json app_to_json(const Application& a) { return {{"id", a.id}, {"p", a.p.to_string()}, {"q", a.q}}; }

}  // namespace

Load load_from_json(const json& j, const std::string& what) {
    try {
        if (j.is_string()) return Load::parse(j.get<std::string>());
        if (j.is_number_integer()) return Load(j.get<std::int64_t>());
    } catch (const std::exception& e) {
        throw FormatError(what + ": " + e.what());
    }
    throw FormatError(what + ": expected a decimal string");
}

ProblemInstance instance_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("instance: expected a JSON object");
    const json& machine = require(j, "machine", "instance");
    MachineConfig cfg;
    cfg.Q = int_from_json(require(machine, "Q", "machine"), "machine.Q");
    if (machine.contains("P") && !machine.at("P").is_null()) cfg.P = load_from_json(machine.at("P"), "machine.P");

    std::vector<Application> apps;
    const json& list = require(j, "apps", "instance");
    if (!list.is_array()) throw FormatError("instance.apps: expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) apps.push_back(app_from_json(list[i], i));

    std::optional<std::int64_t> fixed_m;
    if (j.contains("fixed_m") && !j.at("fixed_m").is_null()) fixed_m = int_from_json(j.at("fixed_m"), "fixed_m");
    return ProblemInstance(std::move(apps), cfg, fixed_m);
}

json instance_to_json(const ProblemInstance& instance) {
    json apps = json::array();
    for (const auto& a : instance.apps()) apps.push_back(app_to_json(a));
    const auto& cfg = instance.config();
    json machine = {{"P", cfg.P ? json(cfg.P->to_string()) : json(nullptr)}, {"Q", cfg.Q}};
    return {{"machine", machine},
            {"apps", apps},
            {"fixed_m", instance.fixed_m() ? json(*instance.fixed_m()) : json(nullptr)}};
}

json assignment_to_json(const Assignment& a) {
    json out = json::array();
    for (const auto& e : a.entries()) {
        out.push_back({{"app", e.app}, {"machine", e.machine}, {"reserved", e.reserved.to_string()}});
    }
    return out;
}

Assignment assignment_from_json(const json& j) {
    const json* list = &j;
    std::optional<std::int64_t> count;
    if (j.is_object()) {
        list = &require(j, "assignment", "assignment document");
        if (j.contains("machine_count")) count = int_from_json(j.at("machine_count"), "machine_count");
    }
    if (!list->is_array()) throw FormatError("assignment: expected an array of entries");

    std::vector<AssignmentEntry> entries;
    std::int64_t highest = -1;
    for (std::size_t k = 0; k < list->size(); ++k) {
        const json& e = (*list)[k];
        const std::string where = "assignment[" + std::to_string(k) + "]";
        AssignmentEntry entry;
        const json& app = require(e, "app", where);
        if (app.is_string()) {
            entry.app = app.get<std::string>();
        } else if (app.is_number_integer()) {
            entry.app = std::to_string(app.get<std::int64_t>());
        } else {
            throw FormatError(where + ".app: expected a string");
        }
        entry.machine = int_from_json(require(e, "machine", where), where + ".machine");
        if (entry.machine < 0) throw FormatError(where + ".machine: negative index");
        entry.reserved = load_from_json(require(e, "reserved", where), where + ".reserved");
        highest = std::max(highest, entry.machine);
        entries.push_back(std::move(entry));
    }
    return Assignment::from_raw(std::move(entries), count.value_or(highest + 1));
}

json report_to_json(const ValidationReport& report) {
    json violations = json::array();
    for (const auto& v : report.violations) {
        json item = {{"kind", to_string(v.kind)}, {"amount", v.amount.to_string()}};
        if (v.machine) item["machine"] = *v.machine;
        if (v.app) item["app"] = *v.app;
        violations.push_back(item);
    }
    return {{"feasible", report.feasible()}, {"violations", violations}};
}

json packing_result_to_json(const heuristics::PackingResult& r) {
    json probes = json::array();
    for (const auto& p : r.probes) probes.push_back({{"m", p.m}, {"feasible", p.feasible}});
    return {{"machines", r.machines},
            {"lower_bound", r.lower_bound},
            {"max_load", r.max_load.to_string()},
            {"machine_count", r.assignment.machine_count()},
            {"validation", report_to_json(r.report)},
            {"probes", probes},
            {"assignment", assignment_to_json(r.assignment)}};
}

json pool_to_json(const std::vector<Application>& apps, const json& metadata) {
    json list = json::array();
    for (const auto& a : apps) list.push_back(app_to_json(a));
    return {{"apps", list}, {"metadata", metadata}};
}

std::vector<Application> pool_from_json(const json& j) {
    const json& list = j.is_array() ? j : require(j, "apps", "pool");
    if (!list.is_array()) throw FormatError("pool.apps: expected an array");
    std::vector<Application> apps;
    for (std::size_t i = 0; i < list.size(); ++i) apps.push_back(app_from_json(list[i], i));
    return apps;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

}  // namespace semiflex::io
