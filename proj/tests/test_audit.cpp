#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "doctest.h"
#include "locaudit/audit.hpp"
#include "locaudit/errors.hpp"
#include "locaudit/hardy.hpp"

using namespace locaudit;

namespace {

Atom atom(const std::string& specimen, const std::string& label, AtomKind kind) {
  return Atom{specimen, label, kind};
}

std::vector<Rule> without(std::vector<Rule> catalog, RuleId id) {
  catalog.erase(std::remove_if(catalog.begin(), catalog.end(),
                               [&](const Rule& r) { return r.id == id; }),
                catalog.end());
  return catalog;
}

/// B2 := B1, so q.ii fails structurally.
HardyConfiguration broken_config() {
  const HardyConfiguration canonical = canonical_config();
  return HardyConfiguration{
      canonical.psi,
      validate_observable(canonical.d1.matrix(), Region::Alpha, "D1"),
      validate_observable(canonical.d2.matrix(), Region::Alpha, "D2"),
      validate_observable(canonical.b1.matrix(), Region::Beta, "B1"),
      validate_observable(canonical.b1.matrix(), Region::Beta, "B2"),
      canonical.tol};
}

const DerivationStep& step_by_id(const AuditReport& report, const std::string& id) {
  for (const DerivationStep& step : report.steps)
    if (step.step_id == id) return step;
  REQUIRE(false);
  return report.steps.front();
}

}  // namespace

TEST_CASE("atom formatting") {
  CHECK(to_string(atom("x", "D2", AtomKind::MeasuredIn)) == "x in D2");
  CHECK(to_string(atom("x", "B1", AtomKind::NotMeasuredIn)) == "x notin B1");
  CHECK(to_string(atom("x0", "B1", AtomKind::OutcomePlus)) == "x0 in B1+");
  CHECK(to_string(atom("x0", "B2", AtomKind::OutcomeMinus)) == "x0 in B2-");
  CHECK(to_string(atom("x", "B2", AtomKind::NotOutcomeMinus)) == "x notin B2-");
  CHECK(to_string(atom("x", "B2", AtomKind::PredPlus)) == "x in Pred+(B2)");
  CHECK(to_string(atom("x0", "B2", AtomKind::NotPredPlus)) == "x0 notin Pred+(B2)");
}

TEST_CASE("fact table freezes the configuration's numbers") {
  const FactTable facts = FactTable::from_config(canonical_config());

  CHECK(facts.in_alpha("D1"));
  CHECK(facts.in_alpha("D2"));
  CHECK_FALSE(facts.in_alpha("B1"));
  CHECK_FALSE(facts.in_alpha("B2"));

  CHECK(facts.non_commuting("D1", "D2"));
  CHECK(facts.non_commuting("B2", "B1"));  // symmetric lookup
  CHECK(facts.commuting("D1", "B1"));
  CHECK(facts.commuting("B2", "D2"));

  CHECK(facts.correlation_holds("D1", "B1"));
  CHECK(facts.correlation_holds("B1", "D2"));
  CHECK(facts.correlation_holds("D2", "B2"));
  CHECK_FALSE(facts.correlation_holds("B1", "D1"));  // not a chain link
  CHECK_FALSE(facts.correlation_holds("D1", "B2"));

  CHECK(facts.eq4 == doctest::Approx(0.09016994374947).epsilon(1e-10));
  CHECK(facts.expectations.size() == 4);

  CHECK_THROWS_AS((void)FactTable::from_config(broken_config()), ConfigRejected);
}

TEST_CASE("catalog composition") {
  const std::vector<Rule> legit = legitimate_catalog();
  CHECK(legit.size() == 26);
  for (const Rule& rule : legit) CHECK(rule.id != RuleId::A5iv);

  const std::vector<Rule> strengthened = strengthened_catalog();
  REQUIRE(strengthened.size() == 4);
  CHECK(strengthened[0].id == RuleId::A5iii);
  CHECK(strengthened[1].id == RuleId::A5iv);
  CHECK(strengthened[2].id == RuleId::A5iv);
  CHECK(strengthened[3].id == RuleId::A5ii);

  CHECK(to_string(RuleId::A2iv) == "2.iv");
  CHECK(to_string(RuleId::A5iii) == "5.iii");
  CHECK(to_string(RuleId::QiiiB) == "q.iii.b");
  CHECK(to_string(RuleId::Qiv) == "q.iv");
}

TEST_CASE("forward chaining basics") {
  const HardyConfiguration config = canonical_config();
  const FactTable facts = FactTable::from_config(config);

  // No rules: the input comes back untouched.
  const std::vector<Atom> start{atom("x", "D1", AtomKind::OutcomePlus)};
  const ChainResult idle = forward_chain(start, {}, facts);
  CHECK(idle.atoms == start);
  CHECK(idle.trace.empty());

  // A single weakening fires once.
  Rule weaken;
  weaken.id = RuleId::A2ii;
  weaken.premises = {atom("", "D1", AtomKind::OutcomePlus)};
  weaken.conclusion = atom("", "D1", AtomKind::MeasuredIn);
  weaken.note = "2.ii[D1+]";
  const ChainResult once = forward_chain(start, {weaken}, facts);
  REQUIRE(once.trace.size() == 1);
  CHECK(once.trace[0].rule == RuleId::A2ii);
  CHECK(once.trace[0].specimen == "x");
  CHECK(once.trace[0].produced == atom("x", "D1", AtomKind::MeasuredIn));
  CHECK(once.contains(atom("x", "D1", AtomKind::MeasuredIn)));
  CHECK_FALSE(once.contains(atom("x", "D2", AtomKind::MeasuredIn)));

  CHECK_THROWS_AS((void)forward_chain(start, {}, facts, 0), Error);
}

TEST_CASE("forward chaining depth accounting") {
  const FactTable facts = FactTable::from_config(canonical_config());

  // second fires on pass 1, first only on pass 2, so the fixpoint needs two
  // productive passes.
  Rule first;
  first.id = RuleId::A5iv;
  first.premises = {atom("", "D2", AtomKind::PredPlus)};
  first.conclusion = atom("", "B2", AtomKind::PredPlus);
  Rule second;
  second.id = RuleId::A5iv;
  second.premises = {atom("", "B1", AtomKind::PredPlus)};
  second.conclusion = atom("", "D2", AtomKind::PredPlus);

  const std::vector<Atom> start{atom("x", "B1", AtomKind::PredPlus)};
  CHECK_THROWS_AS((void)forward_chain(start, {first, second}, facts, 1), DepthExceeded);

  const ChainResult done = forward_chain(start, {first, second}, facts, 2);
  CHECK(done.contains(atom("x", "B2", AtomKind::PredPlus)));
  CHECK(done.trace.size() == 2);
}

TEST_CASE("closure of the S.4 specimen derives the B1 exclusion") {
  const HardyConfiguration config = canonical_config();
  const std::vector<Atom> seed{atom("x0", "D1", AtomKind::OutcomePlus),
                               atom("x0", "B2", AtomKind::OutcomeMinus)};
  const ChainResult closed = forward_chain(seed, legitimate_catalog(), config);

  CHECK(closed.contains(atom("x0", "D1", AtomKind::MeasuredIn)));
  CHECK(closed.contains(atom("x0", "B2", AtomKind::MeasuredIn)));
  CHECK(closed.contains(atom("x0", "D2", AtomKind::NotMeasuredIn)));
  CHECK(closed.contains(atom("x0", "B1", AtomKind::NotMeasuredIn)));
  CHECK(closed.contains(atom("x0", "B1", AtomKind::PredPlus)));
  CHECK(closed.contains(atom("x0", "B2", AtomKind::NotPredPlus)));

  // What the catalog must NOT produce: outcome or measurement of B1.
  CHECK_FALSE(closed.contains(atom("x0", "B1", AtomKind::MeasuredIn)));
  CHECK_FALSE(closed.contains(atom("x0", "B1", AtomKind::OutcomePlus)));
}

TEST_CASE("trace replay: every recorded step is sound") {
  const HardyConfiguration config = canonical_config();
  const FactTable facts = FactTable::from_config(config);
  const std::vector<Atom> seed{atom("x0", "D1", AtomKind::OutcomePlus),
                               atom("x0", "B2", AtomKind::OutcomeMinus)};

  for (const auto& catalog : {legitimate_catalog(), strengthened_catalog()}) {
    const ChainResult result = forward_chain(seed, catalog, facts);
    std::set<Atom> have(seed.begin(), seed.end());
    for (const TraceEntry& entry : result.trace) {
      for (const Atom& premise : entry.premises) CHECK(have.count(premise) == 1);
      CHECK(have.count(entry.produced) == 0);
      // The catalog rule the entry names must exist and match its guards.
      const auto rule = std::find_if(catalog.begin(), catalog.end(), [&](const Rule& r) {
        return r.note == entry.note && r.id == entry.rule;
      });
      REQUIRE(rule != catalog.end());
      for (const SideCondition& guard : rule->side_conditions) CHECK(guard.holds(facts));
      have.insert(entry.produced);
    }
    // The atom list is exactly input plus produced, in insertion order.
    CHECK(result.atoms.size() == seed.size() + result.trace.size());
  }
}

TEST_CASE("proposition 1 audit: valid on certified configurations") {
  const AuditReport report = audit_proposition1(canonical_config());

  CHECK(report.proposition == WhichProof::Prop1);
  CHECK(report.verdict == Verdict::ProofValid);
  REQUIRE(report.steps.size() == 5);
  for (const DerivationStep& step : report.steps) CHECK(step.status == StepStatus::Valid);

  CHECK(step_by_id(report, "E.1").cited_rule == std::nullopt);
  CHECK(step_by_id(report, "E.2").cited_rule == std::nullopt);
  CHECK(step_by_id(report, "E.3").cited_rule == std::optional<RuleId>(RuleId::A2ii));
  CHECK(step_by_id(report, "E.4").cited_rule == std::optional<RuleId>(RuleId::A3i));
  CHECK(step_by_id(report, "E.5").cited_rule == std::optional<RuleId>(RuleId::A5iii));
  CHECK(step_by_id(report, "E.5").claimed_atoms ==
        std::vector<Atom>{atom("x", "B2", AtomKind::PredPlus)});

  REQUIRE(report.witness.has_value());
  CHECK(report.witness->first == "x");
  CHECK(report.witness->second > 1e-9);
  const HardyConfiguration config = canonical_config();
  CHECK(report.witness->second ==
        doctest::Approx(joint_probability(config.psi, config.b1, Sign::Plus, config.d2,
                                          Sign::Plus))
            .epsilon(1e-12));
}

TEST_CASE("proposition 1 audit: breaking q.iii.b invalidates exactly the chain step") {
  HardyParams bent = canonical_params();
  bent.meas_angles[2] += 0.3;  // rotate B1 away: q.iii.a and q.iii.b fail
  const AuditReport report = audit_proposition1(build_config(bent));

  CHECK(report.verdict == Verdict::ProofInvalid);
  const DerivationStep& e4 = step_by_id(report, "E.4");
  CHECK(e4.status == StepStatus::Invalid);
  REQUIRE_FALSE(e4.missing_facts.empty());
  CHECK(e4.missing_facts[0].find("q.iii.b") != std::string::npos);
  // The hypotheses themselves are still jointly satisfiable.
  CHECK(step_by_id(report, "E.1").status == StepStatus::Valid);
  CHECK(step_by_id(report, "E.2").status == StepStatus::Valid);
  CHECK(step_by_id(report, "E.3").status == StepStatus::Valid);
}

TEST_CASE("proposition 2 audit: S.2 is the unique directly invalid step") {
  const AuditReport report = audit_proposition2(canonical_config());

  CHECK(report.proposition == WhichProof::Prop2);
  CHECK(report.verdict == Verdict::ProofInvalid);
  REQUIRE(report.steps.size() == 5);

  CHECK(step_by_id(report, "S.1").status == StepStatus::Existential);
  CHECK(step_by_id(report, "S.4").status == StepStatus::Existential);
  CHECK(step_by_id(report, "S.5").status == StepStatus::Valid);

  const DerivationStep& s2 = step_by_id(report, "S.2");
  CHECK(s2.status == StepStatus::Invalid);
  CHECK(s2.cited_rule == std::optional<RuleId>(RuleId::A3i));
  CHECK(s2.missing_premises == std::vector<Atom>{atom("x0", "B1", AtomKind::MeasuredIn)});
  CHECK(s2.note.find("conflict") != std::string::npos);
  CHECK(s2.note.find("2.iv") != std::string::npos);

  const DerivationStep& s3 = step_by_id(report, "S.3");
  CHECK(s3.status == StepStatus::Invalid);
  CHECK(s3.cited_rule == std::nullopt);
  CHECK(s3.note.find("S.2") != std::string::npos);

  REQUIRE(report.witness.has_value());
  CHECK(report.witness->first == "x0");
  CHECK(report.witness->second == doctest::Approx(0.09016994374947).epsilon(1e-10));
}

TEST_CASE("proposition 2 audit: without 2.iv the gap stays but the conflict note goes") {
  const AuditReport report =
      audit_proposition2(canonical_config(), without(legitimate_catalog(), RuleId::A2iv));

  CHECK(report.verdict == Verdict::ProofInvalid);
  const DerivationStep& s2 = step_by_id(report, "S.2");
  CHECK(s2.status == StepStatus::Invalid);
  CHECK(s2.missing_premises == std::vector<Atom>{atom("x0", "B1", AtomKind::MeasuredIn)});
  CHECK(s2.note.find("conflict") == std::string::npos);
}

TEST_CASE("remark 3.2 audit: the strengthened chain derives a contradiction") {
  const AuditReport report = audit_remark_3_2(canonical_config());

  CHECK(report.proposition == WhichProof::Remark32);
  CHECK(report.verdict == Verdict::ContradictionDerived);
  REQUIRE(report.steps.size() == 5);

  const struct {
    const char* id;
    RuleId rule;
    Atom claimed;
  } expected[] = {
      {"R.1", RuleId::A5iii, atom("x", "B1", AtomKind::PredPlus)},
      {"R.2", RuleId::A5iv, atom("x", "D2", AtomKind::PredPlus)},
      {"R.3", RuleId::A5iv, atom("x", "B2", AtomKind::PredPlus)},
      {"R.4", RuleId::A5ii, atom("x", "B2", AtomKind::NotOutcomeMinus)},
  };
  for (const auto& e : expected) {
    const DerivationStep& step = step_by_id(report, e.id);
    CHECK(step.status == StepStatus::Valid);
    CHECK(step.cited_rule == std::optional<RuleId>(e.rule));
    CHECK(step.claimed_atoms == std::vector<Atom>{e.claimed});
  }

  const DerivationStep& clash = step_by_id(report, "R.5");
  CHECK(clash.status == StepStatus::Existential);
  CHECK(clash.cited_rule == std::optional<RuleId>(RuleId::Qiv));
  CHECK(clash.claimed_atoms == std::vector<Atom>{atom("x0", "D1", AtomKind::OutcomePlus),
                                                 atom("x0", "B2", AtomKind::OutcomeMinus)});
  CHECK(clash.note.find("clash") != std::string::npos);

  REQUIRE(report.witness.has_value());
  CHECK(report.witness->second > 1e-9);
}

TEST_CASE("remark 3.2 audit: removing 5.iv removes the contradiction") {
  const std::vector<Atom> start{atom("x", "D1", AtomKind::OutcomePlus)};
  const AuditReport report = audit_remark_3_2(
      canonical_config(), without(strengthened_catalog(), RuleId::A5iv), start);

  CHECK(report.verdict == Verdict::ProofValid);
  // The chain stops right after the legitimate first mark.
  REQUIRE(report.steps.size() == 1);
  CHECK(report.steps[0].cited_rule == std::optional<RuleId>(RuleId::A5iii));
  CHECK(report.steps[0].claimed_atoms == std::vector<Atom>{atom("x", "B1", AtomKind::PredPlus)});

  // An empty start derives nothing and clashes with nothing.
  const AuditReport vacuous = audit_remark_3_2(canonical_config(), strengthened_catalog(), {});
  CHECK(vacuous.verdict == Verdict::ProofValid);
  CHECK(vacuous.steps.empty());
}

TEST_CASE("audits reject structurally broken configurations") {
  const HardyConfiguration config = broken_config();
  CHECK_THROWS_AS((void)audit_proposition1(config), ConfigRejected);
  CHECK_THROWS_AS((void)audit_proposition2(config), ConfigRejected);
  CHECK_THROWS_AS((void)audit_remark_3_2(config), ConfigRejected);
}

TEST_CASE("sr_nu_holds classifies specimens") {
  Specimen unmeasured;
  unmeasured.context = Context{AlphaChoice::D1, BetaChoice::NoneBeta};
  unmeasured.outcomes = {{"D1", +1}};
  CHECK(sr_nu_holds(unmeasured) == SRStatus::VacuouslySatisfied);

  Specimen b1_minus;
  b1_minus.context = Context{AlphaChoice::NoneAlpha, BetaChoice::B1};
  b1_minus.outcomes = {{"B1", -1}};
  CHECK(sr_nu_holds(b1_minus) == SRStatus::VacuouslySatisfied);

  Specimen violated;
  violated.context = Context{AlphaChoice::NoneAlpha, BetaChoice::B1};
  violated.outcomes = {{"B1", +1}};
  CHECK(sr_nu_holds(violated) == SRStatus::Violated);

  Specimen satisfied = violated;
  satisfied.predictions["B2"] = PredMarks{true, false};
  CHECK(sr_nu_holds(satisfied) == SRStatus::Satisfied);

  // After legitimate closure, a (D2, B1) specimen with D2 = +1 carries the
  // Pred+(B2) mark, so (SR)_nu holds non-vacuously.
  Support support{canonical_config(), {}, 0};
  support.specimens.push_back(
      Specimen{0, Context{AlphaChoice::D2, BetaChoice::B1}, {{"D2", +1}, {"B1", +1}}, {}});
  const Support closed = apply_prediction_closure(support, false);
  CHECK(sr_nu_holds(closed.specimens[0]) == SRStatus::Satisfied);

  CHECK(to_string(SRStatus::Satisfied) == "Satisfied");
  CHECK(to_string(SRStatus::VacuouslySatisfied) == "VacuouslySatisfied");
  CHECK(to_string(SRStatus::Violated) == "Violated");
}
