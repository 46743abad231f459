#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "tp/tropical_engine.hpp"

namespace tp {

using Json = nlohmann::json;

struct PipelineOptions {
  bool strict = false;          // unknown fields are errors instead of warnings
  int threads = 1;              // requests evaluated concurrently; output order is fixed
  std::set<std::string> kinds;  // request kinds to run; empty runs all
  bool run_requests = true;     // false: triangulation and dual complex only
};

struct PipelineResult {
  Json report;
  std::vector<std::string> warnings;
  int exit_code = 0;  // 0 ok, 2 validation failure, 3 verification failure
};

// "p/q" or "n"; anything else throws ParseError naming `field`.
Q parse_rational(const Json& j, const std::string& field);

ProblemInstance parse_instance(const Json& doc, bool strict, std::vector<std::string>* warnings = nullptr);
Json instance_to_json(const ProblemInstance& inst);

// FNV-1a, 64 bit, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

// Parse errors propagate as tp::Error("ParseError", ...); validation and
// request errors are recorded in the report with exit code 2.
PipelineResult run_pipeline(const std::string& input_text, const PipelineOptions& opts);

// One file per sweep table, named sweep_<request index>.csv. Returns the
// paths written; a report without sweeps writes nothing and adds a warning.
std::vector<std::string> emit_sweep_csv(const Json& report, const std::string& dir,
                                        std::vector<std::string>* warnings = nullptr);

}  // namespace tp
