#include "locaudit/audit.hpp"

#include <algorithm>
#include <sstream>

#include "locaudit/errors.hpp"

namespace locaudit {

namespace {

const std::array<std::string, 4> kLabels = {"D1", "D2", "B1", "B2"};

struct Link {
  const char* from;
  const char* to;
  RuleId condition;
};
constexpr Link kChainLinks[] = {{"D1", "B1", RuleId::QiiiA},
                                {"B1", "D2", RuleId::QiiiB},
                                {"D2", "B2", RuleId::QiiiC}};

Atom pat(const std::string& label, AtomKind kind) { return {"", label, kind}; }

std::pair<std::string, std::string> pair_key(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

AtomKind negated(AtomKind kind) { return static_cast<AtomKind>(static_cast<int>(kind) ^ 1); }

bool contains_atom(const std::vector<Atom>& atoms, const Atom& atom) {
  return std::find(atoms.begin(), atoms.end(), atom) != atoms.end();
}

std::string format_probability(double p) {
  std::ostringstream out;
  out.precision(12);
  out << p;
  return out.str();
}

}  // namespace

std::string to_string(const Atom& atom) {
  const bool positive = static_cast<int>(atom.kind) % 2 == 0;
  const std::string rel = atom.specimen + (positive ? " in " : " notin ");
  switch (atom.kind) {
    case AtomKind::MeasuredIn:
    case AtomKind::NotMeasuredIn:
      return rel + atom.label;
    case AtomKind::OutcomePlus:
    case AtomKind::NotOutcomePlus:
      return rel + atom.label + "+";
    case AtomKind::OutcomeMinus:
    case AtomKind::NotOutcomeMinus:
      return rel + atom.label + "-";
    case AtomKind::PredPlus:
    case AtomKind::NotPredPlus:
      return rel + "Pred+(" + atom.label + ")";
    case AtomKind::PredMinus:
    case AtomKind::NotPredMinus:
      return rel + "Pred-(" + atom.label + ")";
  }
  return rel + atom.label;
}

std::string to_string(RuleId id) {
  switch (id) {
    case RuleId::A2i: return "2.i";
    case RuleId::A2ii: return "2.ii";
    case RuleId::A2iii: return "2.iii";
    case RuleId::A2iv: return "2.iv";
    case RuleId::A2v: return "2.v";
    case RuleId::A3i: return "3.i";
    case RuleId::A5i: return "5.i";
    case RuleId::A5ii: return "5.ii";
    case RuleId::A5iii: return "5.iii";
    case RuleId::A5iv: return "5.iv";
    case RuleId::Qi: return "q.i";
    case RuleId::Qii: return "q.ii";
    case RuleId::QiiiA: return "q.iii.a";
    case RuleId::QiiiB: return "q.iii.b";
    case RuleId::QiiiC: return "q.iii.c";
    case RuleId::Qiv: return "q.iv";
  }
  return "?";
}

std::string to_string(StepStatus status) {
  switch (status) {
    case StepStatus::Valid: return "Valid";
    case StepStatus::Invalid: return "Invalid";
    case StepStatus::Existential: return "Existential";
  }
  return "?";
}

std::string to_string(WhichProof which) {
  switch (which) {
    case WhichProof::Prop1: return "Prop1";
    case WhichProof::Prop2: return "Prop2";
    case WhichProof::Remark32: return "Remark32";
  }
  return "?";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::ProofValid: return "ProofValid";
    case Verdict::ProofInvalid: return "ProofInvalid";
    case Verdict::ContradictionDerived: return "ContradictionDerived";
  }
  return "?";
}

std::string to_string(SRStatus status) {
  switch (status) {
    case SRStatus::Satisfied: return "Satisfied";
    case SRStatus::VacuouslySatisfied: return "VacuouslySatisfied";
    case SRStatus::Violated: return "Violated";
  }
  return "?";
}

FactTable FactTable::from_config(const HardyConfiguration& config) {
  const ConditionReport report = verify_config(config, config.tol);
  for (const char* id : {"q.i", "q.ii"}) {
    const ConditionEntry& entry = report.by_id(id);
    if (!entry.pass)
      throw ConfigRejected(std::string("configuration rejected: ") + id + " fails (" +
                           entry.detail + ")");
  }

  FactTable facts;
  facts.tol = config.tol;
  for (const std::string& label : kLabels) {
    const TwoValueObservable& obs = config.by_label(label);
    facts.regions[label] = obs.region();
    facts.expectations[label] = expectation(config.psi, obs);
  }
  for (std::size_t i = 0; i < kLabels.size(); ++i)
    for (std::size_t j = i + 1; j < kLabels.size(); ++j)
      facts.commutator_norms[pair_key(kLabels[i], kLabels[j])] =
          commutator(config.by_label(kLabels[i]).matrix(), config.by_label(kLabels[j]).matrix())
              .max_abs();
  for (const Link& link : kChainLinks)
    facts.chain_residuals[{link.from, link.to}] =
        correlation_residual(config.by_label(link.from), config.by_label(link.to), config.psi);
  facts.eq4 = report.by_id("q.iv").measured;
  return facts;
}

bool FactTable::in_alpha(const std::string& label) const {
  return regions.at(label) == Region::Alpha;
}

double FactTable::commutator_norm(const std::string& a, const std::string& b) const {
  return commutator_norms.at(pair_key(a, b));
}

bool FactTable::non_commuting(const std::string& a, const std::string& b) const {
  return commutator_norm(a, b) > kDegeneracyMargin;
}

bool FactTable::commuting(const std::string& a, const std::string& b) const {
  return commutator_norm(a, b) < tol;
}

bool FactTable::correlation_holds(const std::string& a, const std::string& b) const {
  const auto it = chain_residuals.find({a, b});
  return it != chain_residuals.end() && it->second < tol;
}

bool SideCondition::holds(const FactTable& facts) const {
  switch (kind) {
    case GuardKind::CorrelationHolds: return facts.correlation_holds(a, b);
    case GuardKind::NonCommuting: return facts.non_commuting(a, b);
    case GuardKind::Commuting: return facts.commuting(a, b);
    case GuardKind::AntecedentInAlpha: return facts.in_alpha(a);
    case GuardKind::Eq4Positive: return facts.eq4 > facts.tol;
    case GuardKind::ExpectationNotMinusOne:
      return facts.expectations.at(a) > -1.0 + kDegeneracyMargin;
    case GuardKind::ExpectationNotPlusOne:
      return facts.expectations.at(a) < 1.0 - kDegeneracyMargin;
  }
  return false;
}

std::string to_string(const SideCondition& guard) {
  const std::string cite = " (" + to_string(guard.fact) + ")";
  switch (guard.kind) {
    case GuardKind::CorrelationHolds:
      return "correlation " + guard.a + " -> " + guard.b + " holds" + cite;
    case GuardKind::NonCommuting: return "[" + guard.a + "," + guard.b + "] != 0" + cite;
    case GuardKind::Commuting: return "[" + guard.a + "," + guard.b + "] == 0" + cite;
    case GuardKind::AntecedentInAlpha:
      return guard.a + " confined in the earlier region" + cite;
    case GuardKind::Eq4Positive: return "P(D1=+1, B2=-1) > 0" + cite;
    case GuardKind::ExpectationNotMinusOne: return "<" + guard.a + "> != -1" + cite;
    case GuardKind::ExpectationNotPlusOne: return "<" + guard.a + "> != +1" + cite;
  }
  return "?";
}

std::vector<Rule> legitimate_catalog() {
  std::vector<Rule> catalog;

  // 2.ii: an actual outcome presupposes the measurement (D = D+ u D-).
  for (const std::string& label : kLabels) {
    catalog.push_back({RuleId::A2ii,
                       {pat(label, AtomKind::OutcomePlus)},
                       pat(label, AtomKind::MeasuredIn),
                       {},
                       "2.ii[" + label + "+]"});
    catalog.push_back({RuleId::A2ii,
                       {pat(label, AtomKind::OutcomeMinus)},
                       pat(label, AtomKind::MeasuredIn),
                       {},
                       "2.ii[" + label + "-]"});
  }

  // 2.iv: non-commuting observables are never measured on the same specimen.
  for (const auto& [x, y] : {std::pair{"D1", "D2"}, std::pair{"D2", "D1"},
                             std::pair{"B1", "B2"}, std::pair{"B2", "B1"}})
    catalog.push_back({RuleId::A2iv,
                       {pat(x, AtomKind::MeasuredIn)},
                       pat(y, AtomKind::NotMeasuredIn),
                       {{GuardKind::NonCommuting, x, y, RuleId::Qii}},
                       std::string("2.iv[") + x + "," + y + "]"});

  // 3.i: a correlation transfers the actual +1 outcome when both are measured.
  for (const Link& link : kChainLinks)
    catalog.push_back({RuleId::A3i,
                       {pat(link.from, AtomKind::OutcomePlus), pat(link.from, AtomKind::MeasuredIn),
                        pat(link.to, AtomKind::MeasuredIn)},
                       pat(link.to, AtomKind::OutcomePlus),
                       {{GuardKind::CorrelationHolds, link.from, link.to, link.condition}},
                       std::string("3.i[") + link.from + "->" + link.to + "]"});

  // 5.ii: predictions never contradict actual outcomes, both faces.
  for (const std::string& label : kLabels) {
    catalog.push_back({RuleId::A5ii,
                       {pat(label, AtomKind::PredPlus)},
                       pat(label, AtomKind::NotOutcomeMinus),
                       {},
                       "5.ii[" + label + "]"});
    catalog.push_back({RuleId::A5ii,
                       {pat(label, AtomKind::OutcomeMinus)},
                       pat(label, AtomKind::NotPredPlus),
                       {},
                       "5.ii[" + label + " contrapositive]"});
  }

  // 5.iii: an actual +1 outcome in the earlier region licenses the
  // prediction mark downstream of a correlation.
  for (const Link& link : kChainLinks)
    catalog.push_back({RuleId::A5iii,
                       {pat(link.from, AtomKind::OutcomePlus)},
                       pat(link.to, AtomKind::PredPlus),
                       {{GuardKind::CorrelationHolds, link.from, link.to, link.condition},
                        {GuardKind::AntecedentInAlpha, link.from, "", RuleId::Qi}},
                       std::string("5.iii[") + link.from + "->" + link.to + "]"});

  return catalog;
}

std::vector<Rule> strengthened_catalog() {
  return {{RuleId::A5iii,
           {pat("D1", AtomKind::OutcomePlus)},
           pat("B1", AtomKind::PredPlus),
           {{GuardKind::CorrelationHolds, "D1", "B1", RuleId::QiiiA},
            {GuardKind::AntecedentInAlpha, "D1", "", RuleId::Qi}},
           "5.iii[D1->B1]"},
          {RuleId::A5iv,
           {pat("B1", AtomKind::PredPlus)},
           pat("D2", AtomKind::PredPlus),
           {{GuardKind::CorrelationHolds, "B1", "D2", RuleId::QiiiB}},
           "5.iv[B1->D2]"},
          {RuleId::A5iv,
           {pat("D2", AtomKind::PredPlus)},
           pat("B2", AtomKind::PredPlus),
           {{GuardKind::CorrelationHolds, "D2", "B2", RuleId::QiiiC}},
           "5.iv[D2->B2]"},
          {RuleId::A5ii,
           {pat("B2", AtomKind::PredPlus)},
           pat("B2", AtomKind::NotOutcomeMinus),
           {},
           "5.ii[B2]"}};
}

bool ChainResult::contains(const Atom& atom) const { return contains_atom(atoms, atom); }

ChainResult forward_chain(const std::vector<Atom>& atoms, const std::vector<Rule>& rules,
                          const FactTable& facts, int max_depth) {
  if (max_depth < 1) throw Error("forward_chain requires max_depth >= 1");

  ChainResult result{atoms, {}};
  std::vector<std::string> specimens;
  for (const Atom& atom : atoms)
    if (std::find(specimens.begin(), specimens.end(), atom.specimen) == specimens.end())
      specimens.push_back(atom.specimen);

  const auto run_pass = [&]() {
    bool changed = false;
    for (const Rule& rule : rules) {
      const bool guards_ok =
          std::all_of(rule.side_conditions.begin(), rule.side_conditions.end(),
                      [&](const SideCondition& g) { return g.holds(facts); });
      if (!guards_ok) continue;
      for (const std::string& specimen : specimens) {
        std::vector<Atom> bound;
        bound.reserve(rule.premises.size());
        for (const Atom& p : rule.premises) bound.push_back({specimen, p.label, p.kind});
        if (!std::all_of(bound.begin(), bound.end(),
                         [&](const Atom& a) { return result.contains(a); }))
          continue;
        const Atom produced{specimen, rule.conclusion.label, rule.conclusion.kind};
        if (result.contains(produced)) continue;
        result.atoms.push_back(produced);
        TraceEntry entry{rule.id, rule.note, specimen, bound, produced, {}};
        for (const SideCondition& g : rule.side_conditions) entry.guards.push_back(to_string(g));
        result.trace.push_back(std::move(entry));
        changed = true;
      }
    }
    return changed;
  };

  for (int pass = 0; pass < max_depth; ++pass)
    if (!run_pass()) return result;
  if (run_pass()) throw DepthExceeded("forward_chain found no fixpoint within max_depth passes");
  return result;
}

ChainResult forward_chain(const std::vector<Atom>& atoms, const std::vector<Rule>& rules,
                          const HardyConfiguration& config, int max_depth) {
  return forward_chain(atoms, rules, FactTable::from_config(config), max_depth);
}

namespace {

/// Tries to justify each claimed atom against `have`: already present, or
/// concluded by an instance of the cited rule whose premises are in `have`
/// and whose guards hold. Successfully justified atoms join `have`.
struct Justification {
  bool ok = true;
  std::vector<Atom> missing_premises;
  std::vector<std::string> missing_facts;
};

Justification justify(std::vector<Atom>& have, const std::vector<Atom>& claimed, RuleId cited,
                      const std::vector<Rule>& catalog, const FactTable& facts) {
  Justification result;
  for (const Atom& atom : claimed) {
    if (contains_atom(have, atom)) continue;

    // Candidate instances of the cited rule concluding this atom; prefer one
    // that fully applies, otherwise report the first candidate's gaps.
    const Rule* fallback = nullptr;
    const Rule* applied = nullptr;
    for (const Rule& rule : catalog) {
      if (rule.id != cited || rule.conclusion.label != atom.label ||
          rule.conclusion.kind != atom.kind)
        continue;
      if (!fallback) fallback = &rule;
      const bool premises_ok =
          std::all_of(rule.premises.begin(), rule.premises.end(), [&](const Atom& p) {
            return contains_atom(have, {atom.specimen, p.label, p.kind});
          });
      const bool guards_ok =
          std::all_of(rule.side_conditions.begin(), rule.side_conditions.end(),
                      [&](const SideCondition& g) { return g.holds(facts); });
      if (premises_ok && guards_ok) {
        applied = &rule;
        break;
      }
    }
    if (applied) {
      have.push_back(atom);
      continue;
    }
    result.ok = false;
    if (!fallback) {
      result.missing_premises.push_back(atom);
      continue;
    }
    for (const Atom& p : fallback->premises) {
      const Atom bound{atom.specimen, p.label, p.kind};
      if (!contains_atom(have, bound)) result.missing_premises.push_back(bound);
    }
    for (const SideCondition& g : fallback->side_conditions)
      if (!g.holds(facts)) result.missing_facts.push_back(to_string(g));
  }
  return result;
}

DerivationStep checked_step(std::string step_id, std::vector<Atom> claimed, RuleId cited,
                            std::vector<Atom>& have, const std::vector<Rule>& catalog,
                            const FactTable& facts, std::string note) {
  DerivationStep step{std::move(step_id), std::move(claimed), cited, StepStatus::Valid,
                      {},                 {},                  std::move(note)};
  Justification result = justify(have, step.claimed_atoms, cited, catalog, facts);
  if (!result.ok) {
    step.status = StepStatus::Invalid;
    step.missing_premises = std::move(result.missing_premises);
    step.missing_facts = std::move(result.missing_facts);
  }
  return step;
}

}  // namespace

AuditReport audit_proposition1(const HardyConfiguration& config) {
  const FactTable facts = FactTable::from_config(config);
  const std::vector<Rule> catalog = legitimate_catalog();
  AuditReport report;
  report.proposition = WhichProof::Prop1;

  // Joint satisfiability of the two hypotheses: P(B1=+1, D2=+1), nonzero
  // whenever the chain correlation q.iii.b holds on a q.ii-margin state.
  const double witness =
      joint_probability(config.psi, config.b1, Sign::Plus, config.d2, Sign::Plus);
  report.witness = {{"x", witness}};

  std::vector<Atom> have;
  const Atom e1{"x", "D2", AtomKind::MeasuredIn};
  const Atom e2{"x", "B1", AtomKind::OutcomePlus};

  DerivationStep s1{"E.1", {e1}, std::nullopt, StepStatus::Valid, {}, {},
                    "hypothesis: the antecedent of the proposition"};
  have.push_back(e1);
  report.steps.push_back(std::move(s1));

  DerivationStep s2{"E.2", {e2}, std::nullopt, StepStatus::Valid, {}, {},
                    "hypothesis: the antecedent of (SR); jointly satisfiable with E.1, "
                    "P(B1=+1, D2=+1) = " +
                        format_probability(witness)};
  if (witness <= facts.tol) {
    s2.status = StepStatus::Invalid;
    s2.missing_facts.push_back("P(B1=+1, D2=+1) > tol (joint satisfiability of E.1 and E.2)");
  } else {
    have.push_back(e2);
  }
  report.steps.push_back(std::move(s2));

  report.steps.push_back(checked_step(
      "E.3", {{"x", "B1", AtomKind::MeasuredIn}, {"x", "D2", AtomKind::MeasuredIn}}, RuleId::A2ii,
      have, catalog, facts, "x in B1 and x in D2 from the hypotheses"));
  report.steps.push_back(checked_step("E.4", {{"x", "D2", AtomKind::OutcomePlus}}, RuleId::A3i,
                                      have, catalog, facts,
                                      "the actual outcome transfers along q.iii.b"));
  report.steps.push_back(checked_step("E.5", {{"x", "B2", AtomKind::PredPlus}}, RuleId::A5iii,
                                      have, catalog, facts,
                                      "the prediction mark is licensed along q.iii.c"));

  const bool any_invalid =
      std::any_of(report.steps.begin(), report.steps.end(),
                  [](const DerivationStep& s) { return s.status == StepStatus::Invalid; });
  report.verdict = any_invalid ? Verdict::ProofInvalid : Verdict::ProofValid;
  return report;
}

AuditReport audit_proposition2(const HardyConfiguration& config) {
  return audit_proposition2(config, legitimate_catalog());
}

AuditReport audit_proposition2(const HardyConfiguration& config, const std::vector<Rule>& catalog) {
  const FactTable facts = FactTable::from_config(config);
  AuditReport report;
  report.proposition = WhichProof::Prop2;
  report.witness = {{"x0", facts.eq4}};

  // S.1: some support has a D1 = +1 outcome, by 2.iii under the q.ii margin.
  const double p_d1_plus = (1.0 + facts.expectations.at("D1")) / 2.0;
  DerivationStep s1{"S.1",
                    {{"x0", "D1", AtomKind::OutcomePlus}},
                    RuleId::A2iii,
                    StepStatus::Existential,
                    {},
                    {},
                    "existential: P(D1=+1) = " + format_probability(p_d1_plus) +
                        " > 0, so a support with D1+ nonempty exists"};
  const SideCondition s1_guard{GuardKind::ExpectationNotMinusOne, "D1", "", RuleId::Qii};
  if (!s1_guard.holds(facts)) {
    s1.status = StepStatus::Invalid;
    s1.missing_facts.push_back(to_string(s1_guard));
  }

  // S.4: the q.iv probability certifies the specimen x0 in D1+ with B2 = -1.
  DerivationStep s4{"S.4",
                    {{"x0", "D1", AtomKind::OutcomePlus}, {"x0", "B2", AtomKind::OutcomeMinus}},
                    RuleId::Qiv,
                    StepStatus::Existential,
                    {},
                    {},
                    "existential: P(D1=+1, B2=-1) = " + format_probability(facts.eq4) +
                        " > 0 certifies x0"};
  const SideCondition s4_guard{GuardKind::Eq4Positive, "", "", RuleId::Qiv};
  if (!s4_guard.holds(facts)) {
    s4.status = StepStatus::Invalid;
    s4.missing_facts.push_back(to_string(s4_guard));
  }

  // Everything derivable about the specimen x0 of S.4 under the catalog.
  std::vector<Atom> seed;
  if (s1.status != StepStatus::Invalid)
    for (const Atom& a : s1.claimed_atoms) seed.push_back(a);
  if (s4.status != StepStatus::Invalid)
    for (const Atom& a : s4.claimed_atoms)
      if (!contains_atom(seed, a)) seed.push_back(a);
  ChainResult closed = forward_chain(seed, catalog, facts);

  // S.2: x0 in D1+ => x0 in B1+ cited from 3.i on q.iii.a. The rule needs
  // x0 in B1, which is not derivable; with 2.iv in the catalog its negation
  // is, and the conflict is recorded.
  DerivationStep s2 = checked_step("S.2", {{"x0", "B1", AtomKind::OutcomePlus}}, RuleId::A3i,
                                   closed.atoms, catalog, facts,
                                   "the chain step q.iii.a applied to the specimen x0 of S.4");
  if (s2.status == StepStatus::Invalid &&
      closed.contains({"x0", "B1", AtomKind::NotMeasuredIn})) {
    s2.note += "; conflict: x0 in B2 and [B1,B2] != 0 imply x0 notin B1 (2.iv with q.ii)";
  }

  // S.3: universal form of S.2; stands or falls with it.
  DerivationStep s3{"S.3",
                    {{"x", "B1", AtomKind::OutcomePlus}},
                    std::nullopt,
                    StepStatus::Valid,
                    {},
                    {},
                    "the antecedent of (SR) for all x in D1+, implied by S.1 and S.2"};
  if (s2.status == StepStatus::Invalid) {
    s3.status = StepStatus::Invalid;
    s3.missing_premises = s2.claimed_atoms;
    s3.note += "; invalid by dependency: S.2 is invalid";
  }

  // S.5: from the actual B2 = -1 outcome of x0, 5.ii forbids the +1 mark.
  DerivationStep s5 = checked_step("S.5", {{"x0", "B2", AtomKind::NotPredPlus}}, RuleId::A5ii,
                                   closed.atoms, catalog, facts, "from S.4 by 5.ii");

  report.steps.push_back(std::move(s1));
  report.steps.push_back(std::move(s2));
  report.steps.push_back(std::move(s3));
  report.steps.push_back(std::move(s4));
  report.steps.push_back(std::move(s5));

  const bool any_invalid =
      std::any_of(report.steps.begin(), report.steps.end(),
                  [](const DerivationStep& s) { return s.status == StepStatus::Invalid; });
  report.verdict = any_invalid ? Verdict::ProofInvalid : Verdict::ProofValid;
  return report;
}

AuditReport audit_remark_3_2(const HardyConfiguration& config) {
  return audit_remark_3_2(config, strengthened_catalog(), {{"x", "D1", AtomKind::OutcomePlus}});
}

AuditReport audit_remark_3_2(const HardyConfiguration& config, const std::vector<Rule>& catalog,
                             const std::vector<Atom>& start) {
  const FactTable facts = FactTable::from_config(config);
  AuditReport report;
  report.proposition = WhichProof::Remark32;

  const ChainResult closed = forward_chain(start, catalog, facts);
  int k = 0;
  for (const TraceEntry& entry : closed.trace) {
    std::string note = entry.note;
    if (!entry.guards.empty()) {
      note += " [";
      for (std::size_t i = 0; i < entry.guards.size(); ++i)
        note += (i ? "; " : "") + entry.guards[i];
      note += "]";
    }
    report.steps.push_back({"R." + std::to_string(++k),
                            {entry.produced},
                            entry.rule,
                            StepStatus::Valid,
                            {},
                            {},
                            std::move(note)});
  }

  // A clash inside the derived set itself (an atom and its negation).
  for (const Atom& atom : closed.atoms) {
    const Atom negation{atom.specimen, atom.label, negated(atom.kind)};
    if (static_cast<int>(atom.kind) % 2 == 0 && closed.contains(negation)) {
      report.steps.push_back({"R." + std::to_string(++k),
                              {atom, negation},
                              std::nullopt,
                              StepStatus::Valid,
                              {},
                              {},
                              "clash: both " + to_string(atom) + " and " + to_string(negation) +
                                  " were derived"});
      report.verdict = Verdict::ContradictionDerived;
      return report;
    }
  }

  // The canonical clash: x notin B2- holds for every x in D1+, while q.iv
  // certifies a specimen x0 in D1+ with an actual B2 = -1 outcome.
  for (const Atom& atom : closed.atoms) {
    if (atom.label != "B2" || atom.kind != AtomKind::NotOutcomeMinus) continue;
    const SideCondition qiv{GuardKind::Eq4Positive, "", "", RuleId::Qiv};
    if (!qiv.holds(facts)) continue;
    report.steps.push_back(
        {"R." + std::to_string(++k),
         {{"x0", "D1", AtomKind::OutcomePlus}, {"x0", "B2", AtomKind::OutcomeMinus}},
         RuleId::Qiv,
         StepStatus::Existential,
         {},
         {},
         "clash: " + to_string(atom) + " was derived for every " + atom.specimen +
             " in D1+, but P(D1=+1, B2=-1) = " + format_probability(facts.eq4) +
             " > 0 certifies a specimen x0 in D1+ with x0 in B2-"});
    report.witness = {{"x0", facts.eq4}};
    report.verdict = Verdict::ContradictionDerived;
    return report;
  }

  report.verdict = Verdict::ProofValid;
  return report;
}

SRStatus sr_nu_holds(const Specimen& specimen) {
  const auto b1 = specimen.outcomes.find("B1");
  if (b1 == specimen.outcomes.end() || b1->second != +1) return SRStatus::VacuouslySatisfied;
  const auto b2 = specimen.predictions.find("B2");
  if (b2 != specimen.predictions.end() && b2->second.plus) return SRStatus::Satisfied;
  return SRStatus::Violated;
}

}  // namespace locaudit
