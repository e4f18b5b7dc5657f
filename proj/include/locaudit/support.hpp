#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "locaudit/hardy.hpp"

namespace locaudit {

/// Joint probabilities below this are treated as exact zeros by the sampler,
/// so chain-violating outcome pairs have literal sampling weight 0 instead of
/// a rounding-noise chance of resurrection.
inline constexpr double kZeroWeight = 1e-12;

enum class AlphaChoice { D1, D2, NoneAlpha };
enum class BetaChoice { B1, B2, NoneBeta };

/// Which experiment is performed in each region for one specimen: at most
/// one observable per region.
struct Context {
  AlphaChoice alpha = AlphaChoice::NoneAlpha;
  BetaChoice beta = BetaChoice::NoneBeta;

  auto operator<=>(const Context&) const = default;
};

/// Row-major enumeration of the nine contexts:
/// (D1,B1), (D1,B2), (D1,None), (D2,B1), ..., (None,None).
int context_index(const Context& context);
Context context_from_index(int index);
std::string to_string(const Context& context);

/// Label measured in the region, or nullopt when the region measures nothing.
std::optional<std::string> alpha_label(const Context& context);
std::optional<std::string> beta_label(const Context& context);

/// Distribution over the nine contexts a specimen's context is drawn from.
struct ContextPolicy {
  std::array<double, 9> weights{};

  /// Throws InvalidPolicy unless weights are nonnegative and sum to 1
  /// within 1e-12.
  void validate() const;
};

ContextPolicy uniform_policy();
ContextPolicy single_context_policy(const Context& context);

/// Prediction marks on one observable of one specimen: a validly predicted
/// outcome even if the observable is never measured.
struct PredMarks {
  bool plus = false;
  bool minus = false;

  bool operator==(const PredMarks&) const = default;
};

/// One individual system instance: measured outcomes exactly for the
/// observables of its context, plus any prediction marks.
struct Specimen {
  int id = 0;
  Context context;
  std::map<std::string, int> outcomes;           // label -> -1 or +1
  std::map<std::string, PredMarks> predictions;  // label -> marks

  bool operator==(const Specimen&) const = default;
};

/// A concrete finite set of specimens prepared in the configuration's state.
struct Support {
  HardyConfiguration config;
  std::vector<Specimen> specimens;
  std::uint64_t seed = 0;
};

/// Draws n specimens: context from policy, then outcomes from the exact Born
/// probabilities (joint distribution when both regions measure, marginal when
/// one does). Each specimen consumes its own counter-based random stream
/// (seed, id), so results are deterministic and order-independent.
Support sample_support(const HardyConfiguration& config, const ContextPolicy& policy, int n,
                       std::uint64_t seed);

enum class ExtensionFilter { All, Plus, Minus };

/// Specimen ids with a measured outcome for label (the set D), optionally
/// restricted to one outcome sign (D+, D-). Ascending order.
std::vector<int> extension(const Support& support, const std::string& label,
                           ExtensionFilter filter = ExtensionFilter::All);

/// Pass/Fail for checkable statements; Witnessed/NotWitnessed for statements
/// that are existential over supports and can only be observed, not refuted,
/// on a single concrete one.
enum class AxiomStatus { Pass, Fail, Witnessed, NotWitnessed };

struct AxiomEntry {
  std::string id;
  AxiomStatus status = AxiomStatus::Pass;
  std::string detail;
  std::optional<int> specimen;  // offender on Fail, witness on Witnessed

  bool operator==(const AxiomEntry&) const = default;
};

struct AxiomReport {
  std::vector<AxiomEntry> entries;

  /// True iff no entry has status Fail (NotWitnessed does not count
  /// against a support).
  bool all_hold() const;
  const AxiomEntry& by_id(const std::string& id) const;

  bool operator==(const AxiomReport&) const = default;
};

/// Checks per-support kinematics: the outcome-sign partition of every
/// extension (2.ii) and disjointness of the non-commuting same-side pairs
/// (2.iv) as Pass/Fail; the existential statements (2.i), (2.iii), (2.v) as
/// Witnessed/NotWitnessed observations.
AxiomReport check_kinematic_axioms(const Support& support);

/// Adds prediction marks to a copy of the support, to a per-specimen
/// fixpoint. The legitimate rule (strengthened = false) marks PredPlus on Y
/// for every chain correlation X -> Y whose antecedent X was actually
/// measured +1 in the earlier region Alpha. With strengthened = true the
/// forbidden rule is added: PredPlus marks propagate along the chain from
/// mere marks, no actual outcome required. Throws ConsistencyViolation when
/// a mark would contradict an actual outcome (5.ii), carrying the specimen
/// and the rule applications that led there. Throws ConfigRejected when the
/// support's configuration fails the structural conditions q.i or q.ii (the
/// chain conditions are what closure is allowed to probe, so their failure
/// surfaces per specimen, not as rejection).
Support apply_prediction_closure(const Support& support, bool strengthened);

/// Checks 5.i (no label with both marks) and 5.ii (no mark contradicting an
/// actual outcome) on every specimen.
AxiomReport check_prediction_consistency(const Support& support);

}  // namespace locaudit
