#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "locaudit/audit.hpp"
#include "locaudit/cli.hpp"
#include "locaudit/errors.hpp"
#include "locaudit/rng.hpp"
#include "locaudit/serialize.hpp"

using namespace locaudit;

namespace {

const std::filesystem::path kTmp = std::filesystem::temp_directory_path() / "locaudit_serialize";

std::string tmp_file(const std::string& name) {
  std::filesystem::create_directories(kTmp);
  return (kTmp / name).string();
}

bool configs_equal(const HardyConfiguration& a, const HardyConfiguration& b) {
  if (!(a.psi == b.psi)) return false;
  for (int k = 0; k < 4; ++k) {
    const TwoValueObservable* oa = a.observables()[k];
    const TwoValueObservable* ob = b.observables()[k];
    if (oa->label() != ob->label() || oa->region() != ob->region()) return false;
    if (max_abs_diff(oa->matrix(), ob->matrix()) != 0.0) return false;
  }
  return true;
}

std::string random_word(SplitMix64& rng) {
  static const char* words[] = {"alpha", "beta", "chain", "residual", "margin", "clash"};
  return words[rng.next_u64() % 6];
}

Atom random_atom(SplitMix64& rng) {
  static const char* specimens[] = {"x", "x0", "y"};
  static const char* labels[] = {"D1", "D2", "B1", "B2"};
  return Atom{specimens[rng.next_u64() % 3], labels[rng.next_u64() % 4],
              static_cast<AtomKind>(rng.next_u64() % 10)};
}

AuditReport random_audit_report(SplitMix64& rng) {
  AuditReport report;
  report.proposition = static_cast<WhichProof>(rng.next_u64() % 3);
  report.verdict = static_cast<Verdict>(rng.next_u64() % 3);
  if (rng.next_u64() % 2) report.witness = {{random_word(rng), rng.next_double()}};
  const int steps = 1 + static_cast<int>(rng.next_u64() % 5);
  for (int s = 0; s < steps; ++s) {
    DerivationStep step;
    step.step_id = "S." + std::to_string(s + 1);
    step.status = static_cast<StepStatus>(rng.next_u64() % 3);
    if (rng.next_u64() % 2) step.cited_rule = static_cast<RuleId>(rng.next_u64() % 16);
    const int atoms = static_cast<int>(rng.next_u64() % 3);
    for (int a = 0; a <= atoms; ++a) step.claimed_atoms.push_back(random_atom(rng));
    if (rng.next_u64() % 2) step.missing_premises.push_back(random_atom(rng));
    if (rng.next_u64() % 2) step.missing_facts.push_back(random_word(rng));
    step.note = random_word(rng) + " " + random_word(rng);
    report.steps.push_back(std::move(step));
  }
  return report;
}

}  // namespace

TEST_CASE("matrix and state round-trip") {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexMatrix m(4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m.at(r, c) = Complex{rng.next_in(-2, 2), rng.next_in(-2, 2)};
    const ComplexMatrix back = matrix_from_json(to_json(m));
    CHECK(max_abs_diff(m, back) == 0.0);  // lossless, not merely close

    std::vector<Complex> amps(4);
    for (Complex& a : amps) a = Complex{rng.next_in(-1, 1), rng.next_in(-1, 1)};
    const StateVector psi = StateVector::normalized(std::move(amps));
    CHECK(state_from_json(to_json(psi)) == psi);
  }

  CHECK_THROWS_AS((void)matrix_from_json(nlohmann::json::array()), Error);
  CHECK_THROWS_AS((void)matrix_from_json(nlohmann::json::parse("[[1.0]]")), Error);
  CHECK_THROWS_AS((void)state_from_json(nlohmann::json::parse("[[0.6,0.0],[0.8]]")), Error);
}

TEST_CASE("configuration file round-trip preserves everything") {
  const HardyConfiguration config = canonical_config();
  const nlohmann::json j = config_to_json(config, "frozen canonical parameters");

  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("provenance") == "frozen canonical parameters");
  CHECK(j.at("observables").size() == 4);

  const HardyConfiguration back = config_from_json(j);
  CHECK(configs_equal(config, back));

  // Serialization is byte-deterministic.
  CHECK(config_to_json(config, "p").dump(2) == config_to_json(config, "p").dump(2));
}

TEST_CASE("configuration parsing re-validates the content") {
  const nlohmann::json good = config_to_json(canonical_config(), "p");

  nlohmann::json wrong_version = good;
  wrong_version["schema_version"] = 2;
  CHECK_THROWS_AS((void)config_from_json(wrong_version), Error);

  nlohmann::json missing = good;
  missing["observables"].erase(3);
  CHECK_THROWS_AS((void)config_from_json(missing), Error);

  nlohmann::json renamed = good;
  renamed["observables"][0]["label"] = "D9";
  CHECK_THROWS_AS((void)config_from_json(renamed), Error);

  nlohmann::json duplicated = good;
  duplicated["observables"][1]["label"] = duplicated["observables"][0]["label"];
  CHECK_THROWS_AS((void)config_from_json(duplicated), Error);

  nlohmann::json skewed = good;
  skewed["observables"][0]["matrix"][0][1] = nlohmann::json::array({9.0, 0.0});
  CHECK_THROWS_AS((void)config_from_json(skewed), NotHermitian);

  nlohmann::json denormalized = good;
  denormalized["state"][0] = nlohmann::json::array({0.9, 0.0});
  CHECK_THROWS_AS((void)config_from_json(denormalized), Error);

  nlohmann::json bad_region = good;
  bad_region["observables"][0]["region"] = "Gamma";
  CHECK_THROWS_AS((void)config_from_json(bad_region), Error);
}

TEST_CASE("report payloads round-trip") {
  const HardyConfiguration config = canonical_config();

  const ConditionReport condition = verify_config(config, 1e-9);
  CHECK(condition_report_from_json(to_json(condition)) == condition);

  const Support support = sample_support(config, uniform_policy(), 200, 17);
  const AxiomReport axioms = check_kinematic_axioms(support);
  CHECK(axiom_report_from_json(to_json(axioms)) == axioms);

  CHECK(audit_report_from_json(to_json(audit_proposition1(config))) ==
        audit_proposition1(config));
  CHECK(audit_report_from_json(to_json(audit_proposition2(config))) ==
        audit_proposition2(config));
  CHECK(audit_report_from_json(to_json(audit_remark_3_2(config))) == audit_remark_3_2(config));
}

TEST_CASE("randomized audit reports round-trip") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    const AuditReport report = random_audit_report(rng);
    CHECK(audit_report_from_json(to_json(report)) == report);
  }
}

TEST_CASE("supports round-trip against their configuration") {
  const HardyConfiguration config = canonical_config();
  const Support support = sample_support(config, uniform_policy(), 300, 23);
  const Support closed = apply_prediction_closure(support, false);

  const Support back = support_from_json(support_to_json(closed), config);
  CHECK(back.seed == closed.seed);
  CHECK(back.specimens == closed.specimens);

  nlohmann::json bad_outcome = support_to_json(closed);
  bad_outcome["specimens"][0]["outcomes"]["D1"] = 2;
  CHECK_THROWS_AS((void)support_from_json(bad_outcome, config), Error);
}

TEST_CASE("sample statistics match counts and kernel probabilities") {
  const HardyConfiguration config = canonical_config();
  const Support support = sample_support(
      config, single_context_policy(Context{AlphaChoice::D1, BetaChoice::B2}), 5000, 7);
  const SampleStats stats = compute_sample_stats(support);

  CHECK(stats.n == 5000);
  CHECK(stats.context_counts.at("(D1,B2)") == 5000);
  REQUIRE(stats.outcomes.size() == 4);  // zero-count rows included

  long long total = 0;
  for (const auto& [key, row] : stats.outcomes) {
    total += row.count;
    CHECK(row.frequency == doctest::Approx(row.count / 5000.0).epsilon(1e-15));
  }
  CHECK(total == 5000);

  const double p = joint_probability(config.psi, config.d1, Sign::Plus, config.b2, Sign::Minus);
  CHECK(stats.outcomes.at("(D1,B2) D1=+1 B2=-1").probability == doctest::Approx(p).epsilon(1e-15));

  CHECK(sample_stats_from_json(to_json(stats)) == stats);

  // A marginal-only context yields two rows keyed by the single label.
  const Support single = sample_support(
      config, single_context_policy(Context{AlphaChoice::D2, BetaChoice::NoneBeta}), 100, 7);
  const SampleStats single_stats = compute_sample_stats(single);
  CHECK(single_stats.outcomes.size() == 2);
  CHECK(single_stats.outcomes.count("(D2,none) D2=+1") == 1);
  const double p_plus = (1.0 + expectation(config.psi, config.d2)) / 2.0;
  CHECK(single_stats.outcomes.at("(D2,none) D2=+1").probability ==
        doctest::Approx(p_plus).epsilon(1e-15));
}

TEST_CASE("report envelope round-trips and validates") {
  const ReportFile report{1,
                          "condition",
                          {{"seed", 42}, {"tol", 1e-9}},
                          to_json(verify_config(canonical_config(), 1e-9))};
  const std::string text = serialize_report(report);
  CHECK(parse_report(text) == report);
  CHECK(serialize_report(report) == text);
  CHECK(text.back() == '\n');

  CHECK_THROWS_AS((void)parse_report("{not json"), Error);
  CHECK_THROWS_AS((void)parse_report("{}"), Error);

  nlohmann::json unknown_kind = nlohmann::json::parse(text);
  unknown_kind["kind"] = "novel";
  CHECK_THROWS_AS((void)parse_report(unknown_kind.dump()), Error);

  nlohmann::json wrong_version = nlohmann::json::parse(text);
  wrong_version["schema_version"] = 7;
  CHECK_THROWS_AS((void)parse_report(wrong_version.dump()), Error);
}

TEST_CASE("file helpers save and load losslessly") {
  const HardyConfiguration config = canonical_config();
  const std::string config_path = tmp_file("config.json");
  save_config(config_path, config, "test provenance");
  CHECK(configs_equal(load_config(config_path), config));

  const Support support = sample_support(config, uniform_policy(), 100, 9);
  const std::string support_path = tmp_file("support.json");
  save_support(support_path, support);
  const Support back = load_support(support_path, config);
  CHECK(back.specimens == support.specimens);
  CHECK(back.seed == support.seed);

  const ReportFile report{1, "sample-stats", {{"seed", 9}}, to_json(compute_sample_stats(support))};
  const std::string report_path = tmp_file("report.json");
  save_report(report_path, report);
  CHECK(load_report(report_path) == report);

  CHECK_THROWS_AS((void)load_config(tmp_file("missing.json")), Error);
  CHECK_THROWS_AS((void)read_text_file(tmp_file("missing.json")), Error);

  // Truncation is a parse failure, not a crash.
  const std::string full = read_text_file(config_path);
  const std::string truncated_path = tmp_file("truncated.json");
  write_text_file(truncated_path, full.substr(0, full.size() / 2));
  CHECK_THROWS_AS((void)load_config(truncated_path), Error);
}

TEST_CASE("policy specs parse to policies") {
  CHECK(parse_policy("uniform").weights == uniform_policy().weights);
  CHECK(parse_policy("d1b2").weights ==
        single_context_policy(Context{AlphaChoice::D1, BetaChoice::B2}).weights);
  CHECK(parse_policy("none").weights ==
        single_context_policy(Context{AlphaChoice::NoneAlpha, BetaChoice::NoneBeta}).weights);

  const ContextPolicy custom = parse_policy("1,1,0,0,0,0,0,0,2");
  CHECK(custom.weights[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(custom.weights[8] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_NOTHROW(custom.validate());

  CHECK_THROWS_AS((void)parse_policy("bogus"), InvalidPolicy);
  CHECK_THROWS_AS((void)parse_policy("1,2,3"), InvalidPolicy);
  CHECK_THROWS_AS((void)parse_policy("0,0,0,0,0,0,0,0,0"), InvalidPolicy);
  CHECK_THROWS_AS((void)parse_policy("1,1,1,1,1,1,1,1,-1"), InvalidPolicy);
  CHECK_THROWS_AS((void)parse_policy("1,1,1,1,1,1,1,1,1,1"), InvalidPolicy);
}
