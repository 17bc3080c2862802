#pragma once

#include "semiflex/core.hpp"
#include "semiflex/heuristics.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace semiflex::io {

using json = nlohmann::ordered_json;

/// Raised for unreadable or malformed input documents.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Loads are written as strings ("7.2", "2/3"); integral JSON numbers are
/// accepted on input, floating-point numbers are rejected as inexact.
Load load_from_json(const json& j, const std::string& what);

/// {"machine": {"P": "32" | null, "Q": 64}, "apps": [{"id", "p", "q"}], "fixed_m": 3 | null}
ProblemInstance instance_from_json(const json& j);
json instance_to_json(const ProblemInstance& instance);

/// [{"app": id, "machine": j, "reserved": "0.5"}, ...]
json assignment_to_json(const Assignment& a);

/// Accepts the bare entry list or any object carrying it under "assignment".
/// The machine count is taken from "machine_count" when present, otherwise
/// from the largest index. Entries are kept exactly as written.
Assignment assignment_from_json(const json& j);

json report_to_json(const ValidationReport& report);
json packing_result_to_json(const heuristics::PackingResult& r);

/// {"apps": [...], "metadata": {...}}
json pool_to_json(const std::vector<Application>& apps, const json& metadata = json::object());
std::vector<Application> pool_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace semiflex::io
