#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rankinlab {

inline constexpr const char* tool_version = "0.1.0";

struct ParamSpec {
  std::string name;
  std::string default_value;
  std::string help;
};

struct VerbSchema {
  std::string verb;
  std::string summary;
  std::vector<ParamSpec> params;
};

const std::vector<VerbSchema>& verb_schemas();
const VerbSchema* find_verb(const std::string& verb);
std::string schema_text(const VerbSchema& v);
std::string schema_listing();

enum class ReportFormat { csv, jsonl };

// global keys a config file may set besides the verb parameters
inline const std::vector<std::string> global_keys = {"seed", "format", "output", "threads", "coeff-dir"};

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> parameters;  // from flags; these win over the config file
  std::optional<std::uint64_t> seed;
  std::optional<ReportFormat> format;
  std::optional<std::string> output;  // empty or "-" writes to the given stream
  std::optional<unsigned> threads;
  std::optional<std::string> coeff_dir;
  std::string config_file;  // optional key = value file
};

// "key = value" lines, '#' comments, blank lines ignored; throws InvalidArgument
std::map<std::string, std::string> parse_kv_config(const std::string& text);

// exit status: 0 PASS or complete, 1 usage error, 2 FAIL or run error
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace rankinlab
