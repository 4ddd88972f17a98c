#pragma once

// Named verification checks, the calibrate-then-assert runner and JSON
// reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsl/config.hpp"

namespace hsl {

using Json = nlohmann::ordered_json;

enum class Status { Pass, Fail, DivergenceAsExpected, FlaggedPrecondition, Timeout };

std::string to_string(Status s);
/// Fail and Timeout count as failures; the other statuses are expected outcomes.
bool is_failure(Status s);

struct CheckSpec {
  std::string id;
  ParamMap params;
  std::optional<double> tolerance;
  std::optional<double> budget;
};

struct Report {
  std::string id;
  std::string anchor;
  Status status = Status::Fail;
  std::uint64_t seed = 0;
  Json values = Json::object();
  Json constants = Json::object();
  Json tolerances = Json::object();
  Json config = Json::object();
  std::string note;
  double runtime_s = 0.0;
  double budget_s = 0.0;

  /// Fixed field order. Without timing the runtime field is omitted so two
  /// runs compare byte for byte.
  Json to_json(bool with_timing = true) const;
};

struct CheckInfo {
  std::string id;
  std::string group;  // "halfspace" or "ball"
  std::string anchor;
  double tolerance;
  double budget_s;
  std::string summary;
};

const std::vector<CheckInfo>& check_registry();
/// nullptr for unknown ids.
const CheckInfo* find_check(const std::string& id);

/// Per-check seed derived from the base seed and the id (FNV-1a mix).
std::uint64_t check_seed(std::uint64_t base, const std::string& id);

/// Runs one check. UsageError on an unknown id; numerical errors inside a
/// check become a fail report carrying the message.
Report run_check(const CheckSpec& spec, std::uint64_t base_seed);

struct SuiteOptions {
  std::uint64_t seed = 20240601;
  int workers = 1;
  /// Empty means every registered check.
  std::vector<std::string> ids;
  std::vector<std::string> skip_groups;
  std::map<std::string, ParamMap> params;

  /// [suite] seed, workers, checks, skip; [<check id>] parameters.
  static SuiteOptions from_config(const Config& cfg);
  std::vector<std::string> selected() const;
};

/// Reports ordered by check id. Checks may run concurrently (up to `workers`).
std::vector<Report> run_suite(const SuiteOptions& opt);

Json suite_json(const std::vector<Report>& reports, const SuiteOptions& opt, bool with_timing = true);

}  // namespace hsl
