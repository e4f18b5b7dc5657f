#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locaudit/hardy.hpp"
#include "locaudit/support.hpp"

namespace locaudit {

/// Membership relations a derivation reasons about, for one specimen and one
/// observable: actually measured (x in D), actual outcomes (x in D+, x in D-),
/// prediction marks (x in Pred+(D), x in Pred-(D)), and their negations.
enum class AtomKind {
  MeasuredIn,
  NotMeasuredIn,
  OutcomePlus,
  NotOutcomePlus,
  OutcomeMinus,
  NotOutcomeMinus,
  PredPlus,
  NotPredPlus,
  PredMinus,
  NotPredMinus
};

struct Atom {
  std::string specimen;  // symbolic name: the proofs are schematic (x, x0)
  std::string label;
  AtomKind kind = AtomKind::MeasuredIn;

  auto operator<=>(const Atom&) const = default;
};

std::string to_string(const Atom& atom);

/// The axiom catalog: statements 2.i-2.v (supports and extensions), 3.i
/// (correlation), 5.i-5.iv (prediction marks; 5.iv is the forbidden
/// strengthening), and the configuration facts q.i-q.iv.
enum class RuleId {
  A2i,
  A2ii,
  A2iii,
  A2iv,
  A2v,
  A3i,
  A5i,
  A5ii,
  A5iii,
  A5iv,
  Qi,
  Qii,
  QiiiA,
  QiiiB,
  QiiiC,
  Qiv
};

/// Statement numeral, e.g. "2.iv", "5.iii", "q.iii.b".
std::string to_string(RuleId id);

/// Numeric facts of one configuration, frozen once so the inference engine
/// stays purely symbolic afterwards.
struct FactTable {
  double tol = kCorrelationTol;
  std::map<std::string, Region> regions;
  std::map<std::pair<std::string, std::string>, double> commutator_norms;  // all six pairs
  std::map<std::pair<std::string, std::string>, double> chain_residuals;   // the three q.iii links
  std::map<std::string, double> expectations;
  double eq4 = 0.0;  // P(D1=+1, B2=-1), the q.iv value

  /// Throws ConfigRejected when the structural conditions q.i or q.ii fail;
  /// the chain conditions q.iii/q.iv are recorded as facts either way, since
  /// probing them is what the audits are for.
  static FactTable from_config(const HardyConfiguration& config);

  bool in_alpha(const std::string& label) const;
  double commutator_norm(const std::string& a, const std::string& b) const;
  bool non_commuting(const std::string& a, const std::string& b) const;
  bool commuting(const std::string& a, const std::string& b) const;
  /// True iff a -> b is one of the three chain links and its residual is
  /// below tol.
  bool correlation_holds(const std::string& a, const std::string& b) const;
};

enum class GuardKind {
  CorrelationHolds,      // a -> b
  NonCommuting,          // [a, b] != 0
  Commuting,             // [a, b] == 0
  AntecedentInAlpha,     // a confined in the earlier region
  Eq4Positive,           // P(D1=+1, B2=-1) > tol
  ExpectationNotMinusOne,  // <a> != -1 (outcome +1 possible)
  ExpectationNotPlusOne    // <a> != +1 (outcome -1 possible)
};

/// A declarative side condition of a rule, decidable against a FactTable,
/// with the configuration statement it rests on.
struct SideCondition {
  GuardKind kind = GuardKind::CorrelationHolds;
  std::string a, b;
  RuleId fact = RuleId::Qii;

  bool holds(const FactTable& facts) const;
  bool operator==(const SideCondition&) const = default;
};

std::string to_string(const SideCondition& guard);

/// Atom patterns over one implicit specimen variable: a ground rule instance
/// of one catalog statement (e.g. 3.i applied to the D1 -> B1 link).
struct Rule {
  RuleId id = RuleId::A3i;
  std::vector<Atom> premises;  // specimen field ignored during matching
  Atom conclusion;
  std::vector<SideCondition> side_conditions;
  std::string note;  // instance name, e.g. "3.i[D1->B1]"
};

/// All rule instances licensed by the argument's axioms: the weakenings of
/// 2.ii, the incompatibilities of 2.iv, 3.i on the chain links, both faces
/// of 5.ii, and 5.iii on the chain links. 5.iv is NOT here.
std::vector<Rule> legitimate_catalog();

/// The four-rule hypothetical catalog of the strengthened argument: 5.iii on
/// q.iii.a, the forbidden 5.iv on q.iii.b and q.iii.c, and the 5.ii face for
/// B2. Feeding it to forward_chain is what derives the contradiction.
std::vector<Rule> strengthened_catalog();

struct TraceEntry {
  RuleId rule = RuleId::A3i;
  std::string note;  // the rule instance's name
  std::string specimen;
  std::vector<Atom> premises;
  Atom produced;
  std::vector<std::string> guards;  // descriptions of the passing side conditions

  bool operator==(const TraceEntry&) const = default;
};

struct ChainResult {
  std::vector<Atom> atoms;  // insertion order: inputs first, then derived
  std::vector<TraceEntry> trace;

  bool contains(const Atom& atom) const;
};

/// Applies every rule whose premises are all present (for one specimen) and
/// whose side conditions hold, until fixpoint; one depth unit is a full pass
/// over the catalog with newly derived atoms live immediately. Deterministic:
/// rules in catalog order, specimens in first-appearance order. Throws
/// DepthExceeded if a fixpoint is not reached within max_depth passes.
ChainResult forward_chain(const std::vector<Atom>& atoms, const std::vector<Rule>& rules,
                          const FactTable& facts, int max_depth = 16);
ChainResult forward_chain(const std::vector<Atom>& atoms, const std::vector<Rule>& rules,
                          const HardyConfiguration& config, int max_depth = 16);

enum class StepStatus { Valid, Invalid, Existential };

std::string to_string(StepStatus status);

/// One audited step of a derivation. Invalid iff something is missing:
/// premise atoms that were not derivable, or side conditions that failed.
struct DerivationStep {
  std::string step_id;  // E.1..E.5, S.1..S.5, R.1..R.5
  std::vector<Atom> claimed_atoms;
  std::optional<RuleId> cited_rule;  // nullopt: hypothesis or step dependency
  StepStatus status = StepStatus::Valid;
  std::vector<Atom> missing_premises;
  std::vector<std::string> missing_facts;  // failed side conditions
  std::string note;

  bool operator==(const DerivationStep&) const = default;
};

enum class WhichProof { Prop1, Prop2, Remark32 };
enum class Verdict { ProofValid, ProofInvalid, ContradictionDerived };

std::string to_string(WhichProof which);
std::string to_string(Verdict verdict);

struct AuditReport {
  WhichProof proposition = WhichProof::Prop1;
  std::vector<DerivationStep> steps;
  Verdict verdict = Verdict::ProofValid;
  /// (symbolic specimen, probability) certifying an existential step.
  std::optional<std::pair<std::string, double>> witness;

  bool operator==(const AuditReport&) const = default;
};

/// Replays the expansion E.1-E.5 of the first proposition: hypotheses x in D2
/// and x in B1+, the intersection step via 2.ii, the chain step via 3.i on
/// q.iii.b, and the prediction step via 5.iii on q.iii.c. The joint
/// satisfiability of the hypotheses is certified numerically by
/// P(B1=+1, D2=+1) > tol, stored as the witness. Expected verdict: ProofValid.
AuditReport audit_proposition1(const HardyConfiguration& config);

/// Replays the sequence S.1-S.5 of the second proposition against the
/// catalog. S.1 and S.4 are existential (certified by the q.ii expectation
/// margin and the q.iv probability); S.5 follows by 5.ii. S.2 cites 3.i on
/// q.iii.a, whose premise x0 in B1 is not derivable for the specimen x0 of
/// S.4 -- instead x0 notin B1 follows from x0 in B2 by 2.iv -- so S.2 is
/// Invalid with missing premise exactly "x0 in B1", and S.3 is invalid by
/// dependency on it. Expected verdict: ProofInvalid.
AuditReport audit_proposition2(const HardyConfiguration& config);
AuditReport audit_proposition2(const HardyConfiguration& config, const std::vector<Rule>& catalog);

/// Runs forward chaining from {x in D1+} under the strengthened catalog and
/// reports the resulting derivation; when x notin B2- is reached while q.iv
/// certifies a specimen x0 in D1+ with x0 in B2-, the verdict is
/// ContradictionDerived with the clash recorded as a final existential step.
/// With 5.iv removed from the catalog the chain stops after x in Pred+(B1)
/// and no contradiction arises.
AuditReport audit_remark_3_2(const HardyConfiguration& config);
AuditReport audit_remark_3_2(const HardyConfiguration& config, const std::vector<Rule>& catalog,
                             const std::vector<Atom>& start);

enum class SRStatus { Satisfied, VacuouslySatisfied, Violated };

std::string to_string(SRStatus status);

/// The per-specimen reading of (SR): if B1 was measured +1 then a +1 outcome
/// of B2 is validly predicted. Violated iff B1 = +1 was measured and no
/// PredPlus mark on B2 is present; VacuouslySatisfied iff B1 = +1 is absent.
SRStatus sr_nu_holds(const Specimen& specimen);

}  // namespace locaudit
