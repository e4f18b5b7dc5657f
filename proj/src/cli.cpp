#include "locaudit/cli.hpp"

#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "locaudit/audit.hpp"
#include "locaudit/errors.hpp"
#include "locaudit/hardy.hpp"
#include "locaudit/serialize.hpp"

namespace locaudit {

namespace {

/// Shortest decimal form that round-trips the double — same formatting the
/// JSON files use, so printed numbers can be grepped against them.
std::string num(double v) { return nlohmann::json(v).dump(); }

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void print_condition_report(std::ostream& out, const ConditionReport& report) {
  for (const ConditionEntry& e : report.entries)
    out << "  " << pad(e.id, 9) << (e.pass ? "PASS" : "FAIL") << "  measured " << num(e.measured)
        << "  threshold " << num(e.threshold) << "  " << e.detail << "\n";
  out << (report.all_pass() ? "all six conditions hold\n" : "some conditions FAIL\n");
}

std::string axiom_status_name(AxiomStatus status) {
  switch (status) {
    case AxiomStatus::Pass: return "Pass";
    case AxiomStatus::Fail: return "FAIL";
    case AxiomStatus::Witnessed: return "Witnessed";
    case AxiomStatus::NotWitnessed: return "NotWitnessed";
  }
  return "?";
}

void print_axiom_report(std::ostream& out, const AxiomReport& report) {
  out << "kinematic axioms:\n";
  for (const AxiomEntry& e : report.entries) {
    out << "  " << pad(e.id, 12) << pad(axiom_status_name(e.status), 14) << e.detail;
    if (e.specimen) out << " [specimen " << *e.specimen << "]";
    out << "\n";
  }
}

std::string join_atoms(const std::vector<Atom>& atoms) {
  std::string joined;
  for (const Atom& a : atoms) {
    if (!joined.empty()) joined += ", ";
    joined += to_string(a);
  }
  return joined;
}

void print_audit_text(std::ostream& out, const AuditReport& report) {
  out << "== " << to_string(report.proposition) << " ==\n";
  if (report.witness)
    out << "  witness " << report.witness->first << ": probability "
        << num(report.witness->second) << "\n";
  for (const DerivationStep& step : report.steps) {
    out << "  [" << step.step_id << "] " << pad(to_string(step.status), 12) << "rule "
        << pad(step.cited_rule ? to_string(*step.cited_rule) : "-", 7) << "claims "
        << join_atoms(step.claimed_atoms) << "\n";
    if (!step.missing_premises.empty())
      out << "        missing premises: " << join_atoms(step.missing_premises) << "\n";
    for (const std::string& fact : step.missing_facts)
      out << "        missing fact: " << fact << "\n";
    if (!step.note.empty()) out << "        note: " << step.note << "\n";
  }
  out << "  verdict: " << to_string(report.verdict) << "\n";
}

std::string stats_path_for(const std::string& out_path) {
  const std::string suffix = ".json";
  if (out_path.size() > suffix.size() &&
      out_path.compare(out_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return out_path.substr(0, out_path.size() - suffix.size()) + ".stats.json";
  return out_path + ".stats.json";
}

struct DeriveArgs {
  std::uint64_t seed = 42;
  int restarts = 32;
  double penalty = 100.0;
  double tol = kCorrelationTol;
  std::string out = "config.json";
  std::string report;
};

int cmd_derive(const DeriveArgs& args) {
  OptimizeSettings settings;
  settings.restarts = args.restarts;
  settings.penalty_weight = args.penalty;
  settings.tol = args.tol;
  const auto [config, report] = optimize_hardy(args.seed, settings);

  const std::string provenance = "optimize_hardy(seed=" + std::to_string(args.seed) +
                                 ", restarts=" + std::to_string(args.restarts) +
                                 ", penalty_weight=" + num(args.penalty) +
                                 ", tol=" + num(args.tol) + ")";
  save_config(args.out, config, provenance);
  if (!args.report.empty())
    save_report(args.report, ReportFile{kSchemaVersion,
                                        "condition",
                                        {{"seed", args.seed},
                                         {"restarts", args.restarts},
                                         {"penalty_weight", args.penalty},
                                         {"tol", args.tol}},
                                        to_json(report)});

  std::cout << "wrote configuration to " << args.out << "\n";
  std::cout << "score P(D1=+1, B2=-1) = " << num(report.by_id("q.iv").measured) << "\n";
  print_condition_report(std::cout, report);
  return report.all_pass() ? 0 : 3;
}

struct VerifyArgs {
  std::string config;
  double tol = kCorrelationTol;
  std::string report;
};

int cmd_verify(const VerifyArgs& args) {
  const HardyConfiguration config = load_config(args.config, args.tol);
  const ConditionReport report = verify_config(config, args.tol);
  if (!args.report.empty())
    save_report(args.report, ReportFile{kSchemaVersion,
                                        "condition",
                                        {{"config", args.config}, {"tol", args.tol}},
                                        to_json(report)});
  print_condition_report(std::cout, report);
  return report.all_pass() ? 0 : 3;
}

struct SampleArgs {
  std::string config;
  std::string policy = "uniform";
  int n = 1000;
  std::uint64_t seed = 0;
  std::string out = "support.json";
  std::string stats;
};

int cmd_sample(const SampleArgs& args) {
  const HardyConfiguration config =
      args.config.empty() ? canonical_config() : load_config(args.config);
  const ContextPolicy policy = parse_policy(args.policy);
  const Support support = sample_support(config, policy, args.n, args.seed);
  save_support(args.out, support);

  const SampleStats stats = compute_sample_stats(support);
  const std::string stats_path = args.stats.empty() ? stats_path_for(args.out) : args.stats;
  save_report(stats_path, ReportFile{kSchemaVersion,
                                     "sample-stats",
                                     {{"config", args.config.empty() ? "canonical" : args.config},
                                      {"n", args.n},
                                      {"policy", args.policy},
                                      {"seed", args.seed}},
                                     to_json(stats)});

  std::cout << "wrote support (n=" << args.n << ", seed=" << args.seed << ") to " << args.out
            << "\n";
  std::cout << "wrote sample statistics to " << stats_path << "\n";
  for (const auto& [context, count] : stats.context_counts)
    std::cout << "context " << context << ": " << count << " specimens\n";
  for (const auto& [key, row] : stats.outcomes)
    std::cout << "  " << pad(key, 24) << "count " << row.count << "  frequency "
              << num(row.frequency) << "  exact " << num(row.probability) << "\n";

  const AxiomReport axioms = check_kinematic_axioms(support);
  print_axiom_report(std::cout, axioms);
  return axioms.all_hold() ? 0 : 3;
}

struct AuditArgs {
  std::string config;
  std::string which = "all";
  std::string format = "text";
  std::string report;
};

int cmd_audit(const AuditArgs& args) {
  const HardyConfiguration config =
      args.config.empty() ? canonical_config() : load_config(args.config);

  std::vector<std::pair<std::string, AuditReport>> reports;
  if (args.which == "prop1" || args.which == "all")
    reports.emplace_back("prop1", audit_proposition1(config));
  if (args.which == "prop2" || args.which == "all")
    reports.emplace_back("prop2", audit_proposition2(config));
  if (args.which == "remark32" || args.which == "all")
    reports.emplace_back("remark32", audit_remark_3_2(config));

  // The tool certifies the analysis: Proposition 1 derivable, Proposition 2
  // broken exactly at S.2, the strengthened Remark 3.2 chain contradictory.
  std::string diff;
  for (const auto& [name, report] : reports) {
    const Verdict expected = name == "prop1"    ? Verdict::ProofValid
                             : name == "prop2" ? Verdict::ProofInvalid
                                               : Verdict::ContradictionDerived;
    if (report.verdict != expected)
      diff += "  " + name + ": expected " + to_string(expected) + ", observed " +
              to_string(report.verdict) + "\n";
    if (name == "prop2")
      for (const DerivationStep& step : report.steps)
        if (step.step_id == "S.2" && step.status != StepStatus::Invalid)
          diff += "  prop2: expected step S.2 Invalid, observed " + to_string(step.status) + "\n";
  }

  if (args.format == "machine") {
    nlohmann::json payload = nlohmann::json::object();
    for (const auto& [name, report] : reports) payload[name] = to_json(report);
    const ReportFile file{kSchemaVersion,
                          "audit",
                          {{"config", args.config.empty() ? "canonical" : args.config},
                           {"which", args.which}},
                          std::move(payload)};
    std::cout << serialize_report(file);
    if (!args.report.empty()) save_report(args.report, file);
  } else {
    for (const auto& [name, report] : reports) print_audit_text(std::cout, report);
    if (!args.report.empty()) {
      nlohmann::json payload = nlohmann::json::object();
      for (const auto& [name, report] : reports) payload[name] = to_json(report);
      save_report(args.report, ReportFile{kSchemaVersion,
                                          "audit",
                                          {{"config", args.config.empty() ? "canonical" : args.config},
                                           {"which", args.which}},
                                          std::move(payload)});
    }
  }

  if (!diff.empty()) {
    std::cerr << "verdict mismatch:\n" << diff;
    return 3;
  }
  return 0;
}

}  // namespace

ContextPolicy parse_policy(const std::string& spec) {
  if (spec == "uniform") return uniform_policy();
  if (spec == "none") return single_context_policy({AlphaChoice::NoneAlpha, BetaChoice::NoneBeta});
  if (spec == "d1b1") return single_context_policy({AlphaChoice::D1, BetaChoice::B1});
  if (spec == "d1b2") return single_context_policy({AlphaChoice::D1, BetaChoice::B2});
  if (spec == "d2b1") return single_context_policy({AlphaChoice::D2, BetaChoice::B1});
  if (spec == "d2b2") return single_context_policy({AlphaChoice::D2, BetaChoice::B2});

  std::array<double, 9> weights{};
  std::size_t pos = 0;
  double sum = 0.0;
  for (int k = 0; k < 9; ++k) {
    if (k > 0) {
      if (pos >= spec.size() || spec[pos] != ',')
        throw InvalidPolicy("policy \"" + spec +
                            "\" is neither a preset nor nine comma-separated weights");
      ++pos;
    }
    std::size_t used = 0;
    try {
      weights[k] = std::stod(spec.substr(pos), &used);
    } catch (const std::exception&) {
      throw InvalidPolicy("policy \"" + spec + "\": weight " + std::to_string(k + 1) +
                          " is not a number");
    }
    if (weights[k] < 0.0)
      throw InvalidPolicy("policy \"" + spec + "\": weights must be nonnegative");
    pos += used;
    sum += weights[k];
  }
  if (pos != spec.size())
    throw InvalidPolicy("policy \"" + spec + "\" has trailing characters after nine weights");
  if (sum <= 0.0) throw InvalidPolicy("policy \"" + spec + "\" has zero total weight");
  for (double& w : weights) w /= sum;

  ContextPolicy policy{weights};
  policy.validate();
  return policy;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"locaudit: derive and verify two-value observable configurations, sample finite "
               "supports from them, and audit the associated derivations"};
  app.require_subcommand(1);
  int rc = 0;

  DeriveArgs derive_args;
  CLI::App* derive = app.add_subcommand(
      "derive", "Search for a configuration maximizing P(D1=+1, B2=-1) and write it to a file");
  derive->add_option("--seed", derive_args.seed, "search RNG seed")->capture_default_str();
  derive->add_option("--restarts", derive_args.restarts, "independent restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  derive->add_option("--penalty", derive_args.penalty, "chain-violation penalty weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  derive->add_option("--tol", derive_args.tol, "correlation tolerance")->capture_default_str();
  derive->add_option("--out", derive_args.out, "configuration file to write")
      ->capture_default_str();
  derive->add_option("--report", derive_args.report, "also write the condition report here");
  derive->callback([&] { rc = cmd_derive(derive_args); });

  VerifyArgs verify_args;
  CLI::App* verify =
      app.add_subcommand("verify", "Check the six conditions on a configuration file");
  verify->add_option("--config", verify_args.config, "configuration file")->required();
  verify->add_option("--tol", verify_args.tol, "correlation tolerance")->capture_default_str();
  verify->add_option("--report", verify_args.report, "also write the condition report here");
  verify->callback([&] { rc = cmd_verify(verify_args); });

  SampleArgs sample_args;
  CLI::App* sample = app.add_subcommand(
      "sample", "Draw a finite support from a configuration and check the kinematic axioms");
  sample->add_option("--config", sample_args.config,
                     "configuration file (defaults to the built-in canonical configuration)");
  sample->add_option("--policy", sample_args.policy,
                     "context policy: preset or nine comma-separated weights")
      ->capture_default_str();
  sample->add_option("--n", sample_args.n, "number of specimens")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sample->add_option("--seed", sample_args.seed, "sampling RNG seed")->capture_default_str();
  sample->add_option("--out", sample_args.out, "support file to write")->capture_default_str();
  sample->add_option("--stats", sample_args.stats,
                     "sample-stats report path (defaults to <out>.stats.json)");
  sample->callback([&] { rc = cmd_sample(sample_args); });

  AuditArgs audit_args;
  CLI::App* audit =
      app.add_subcommand("audit", "Audit the derivations against a configuration");
  audit->add_option("--config", audit_args.config,
                    "configuration file (defaults to the built-in canonical configuration)");
  audit->add_option("--which", audit_args.which, "prop1 | prop2 | remark32 | all")
      ->check(CLI::IsMember({"prop1", "prop2", "remark32", "all"}))
      ->capture_default_str();
  audit->add_option("--format", audit_args.format, "text | machine")
      ->check(CLI::IsMember({"text", "machine"}))
      ->capture_default_str();
  audit->add_option("--report", audit_args.report, "also write the audit report file here");
  audit->callback([&] { rc = cmd_audit(audit_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  } catch (const NoFeasibleConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidPolicy& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  } catch (const ConfigRejected& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace locaudit
