#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace fmtk::suites {

enum class Scale { Small, Medium };

struct CaseResult {
  std::string name;
  std::uint64_t instances = 0, failures = 0;
  std::string first_failure;
  nlohmann::json metrics = nlohmann::json::object();  // counters and per-case budget checks
  double wall_ms = 0;
  bool pass() const { return failures == 0; }
};

struct SuiteResult {
  std::string suite;
  std::vector<CaseResult> cases;
  bool pass() const;
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
bool parse_scale(const std::string& s, Scale& out);
const char* scale_name(Scale s);

SuiteResult run_suite(const std::string& name, std::uint64_t seed, Scale scale);
// Runs a single case of a suite, with an instance count override (0 keeps the default).
CaseResult run_case(const std::string& suite, const std::string& name, std::uint64_t seed, Scale scale,
                    std::uint64_t instances = 0);
std::vector<std::string> case_names(const std::string& suite);

// Stable-key report. Everything that varies between identical runs sits under "timestamp".
nlohmann::json report_json(const std::vector<SuiteResult>& results, std::uint64_t seed, Scale scale);

}  // namespace fmtk::suites
