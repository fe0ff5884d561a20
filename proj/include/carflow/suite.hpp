#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "carflow/flow.hpp"

// Configuration ingestion, named experiment suites, and machine-readable
// reporting.  JSON reports are canonical artifacts: key-sorted, and byte
// identical for identical config + seed (wall times therefore appear only in
// the text rendering).
namespace carflow::suite {

struct ExperimentConfig {
  int dimension = 1;
  std::vector<Point> cone_generators;

  std::string module_form;  // "halfspaces" | "translates"
  std::vector<lattice::ModuleSpec::Halfspace> module_halfspaces;
  std::vector<Point> module_origins;

  lattice::Window window;
  lattice::Window search_box;

  double tolerance = 1e-10;
  long long fock_cap = 4096;  // Fock dimension cap, <= 2^14
  std::uint64_t seed = 1;
  std::vector<std::string> checks;  // empty selection = vacuous run

  lattice::ConeSpec cone() const;
  lattice::ModuleSpec module() const;
  int fock_cap_modes() const;  // floor(log2(fock_cap))
};

// All known checks in fixed execution order.
const std::vector<std::string>& default_checks();

// Parses and validates; throws ConfigError with a precise location/constraint.
ExperimentConfig parse_config(const std::string& text);

nlohmann::json config_json(const ExperimentConfig& cfg);

struct CheckRecord {
  std::string name;
  std::string digest;                 // fnv-1a of the check inputs, hex
  std::optional<double> residual;
  std::optional<Point> witness;
  nlohmann::json sign_table;          // object or null
  std::string verdict;                // "pass" | "fail" | "skip: ..." | "abort: ..."
  std::optional<double> elapsed_ms;   // text rendering only

  bool failed() const { return verdict == "fail"; }
  bool aborted() const { return verdict.rfind("abort", 0) == 0; }
};

struct Report {
  ExperimentConfig config;
  std::vector<CheckRecord> records;
  std::string verdict;  // "pass" | "fail" | "abort" | "vacuous pass"
};

Report run_suite(const ExperimentConfig& cfg);

std::string emit_report_json(const Report& report);
std::string emit_report_text(const Report& report);

// Re-hydrates a report from its canonical JSON emission.
Report parse_report(const std::string& text);

// 0 pass, 1 check failure, 3 resource cap (config errors exit 2 upstream).
int exit_code(const Report& report);

// Deterministic sub-window with at most max_modes carrier points, used for
// every Fock-space check; shrinks the longest axis first, alternating the
// upper and lower corner.
lattice::Window fock_window(const lattice::ModuleSpec& a, const lattice::Window& w,
                            int max_modes);

}  // namespace carflow::suite
