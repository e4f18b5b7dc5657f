#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "locaudit/audit.hpp"
#include "locaudit/hardy.hpp"
#include "locaudit/support.hpp"

namespace locaudit {

inline constexpr int kSchemaVersion = 1;

// -- JSON bodies -------------------------------------------------------------
// Complex numbers serialize as [re, im]; all numbers print in the shortest
// form that round-trips a double losslessly. JSON objects keep their keys
// sorted, so serialization is byte-deterministic.

nlohmann::json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StateVector& psi);
StateVector state_from_json(const nlohmann::json& j);

/// {schema_version, state, observables: [{label, region, matrix} x4],
///  provenance}. Parsing re-validates everything: observables go through
///  validate_observable, the state through the normalization check.
nlohmann::json config_to_json(const HardyConfiguration& config, const std::string& provenance);
HardyConfiguration config_from_json(const nlohmann::json& j, double tol = kCorrelationTol);

nlohmann::json to_json(const ConditionReport& report);
ConditionReport condition_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AxiomReport& report);
AxiomReport axiom_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AuditReport& report);
AuditReport audit_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Specimen& specimen);
Specimen specimen_from_json(const nlohmann::json& j);

/// {schema_version, seed, specimens}; the configuration is supplied
/// separately on load (support files do not duplicate it).
nlohmann::json support_to_json(const Support& support);
Support support_from_json(const nlohmann::json& j, const HardyConfiguration& config);

// -- sample statistics --------------------------------------------------------

struct OutcomeRow {
  long long count = 0;
  double frequency = 0.0;    // count / specimens in this context
  double probability = 0.0;  // the exact value the kernel assigns

  bool operator==(const OutcomeRow&) const = default;
};

/// Empirical counts next to exact probabilities: one row per possible
/// outcome combination of every context realized in the support.
struct SampleStats {
  long long n = 0;
  std::map<std::string, long long> context_counts;
  std::map<std::string, OutcomeRow> outcomes;  // "(D1,B2) D1=+1 B2=-1" -> row

  bool operator==(const SampleStats&) const = default;
};

SampleStats compute_sample_stats(const Support& support);

nlohmann::json to_json(const SampleStats& stats);
SampleStats sample_stats_from_json(const nlohmann::json& j);

// -- report envelope ----------------------------------------------------------

/// Envelope for every emitted report: what kind of payload, and which seeds
/// and settings produced it.
struct ReportFile {
  int schema_version = kSchemaVersion;
  std::string kind;  // condition | axiom | audit | sample-stats
  nlohmann::json settings = nlohmann::json::object();
  nlohmann::json payload;

  bool operator==(const ReportFile&) const = default;
};

std::string serialize_report(const ReportFile& report);
ReportFile parse_report(const std::string& text);

// -- files ---------------------------------------------------------------------
// All file helpers throw Error with a diagnostic message on I/O or parse
// problems (the CLI maps that to exit code 1).

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

void save_config(const std::string& path, const HardyConfiguration& config,
                 const std::string& provenance);
HardyConfiguration load_config(const std::string& path, double tol = kCorrelationTol);

void save_support(const std::string& path, const Support& support);
Support load_support(const std::string& path, const HardyConfiguration& config);

void save_report(const std::string& path, const ReportFile& report);
ReportFile load_report(const std::string& path);

}  // namespace locaudit
