#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>

#include "locaudit/observable.hpp"
#include "locaudit/state_vector.hpp"

namespace locaudit {

/// Same-side observables must fail to commute and the state must stay away
/// from eigenstates by at least this much (commutator max-abs entry,
/// expectation distance from +-1).
inline constexpr double kDegeneracyMargin = 1e-6;

/// Search-space coordinates for a configuration: three hyperspherical angles
/// for a real normalized two-qubit state and one Bloch-circle angle per
/// observable. Seven real parameters in total.
struct HardyParams {
  std::array<double, 3> state_angles{};                   // (a, b, c)
  std::array<double, 4> meas_angles{};                    // theta for D1, D2, B1, B2
};

/// The real two-qubit state (cos a, sin a cos b, sin a sin b cos c,
/// sin a sin b sin c) determined by three hyperspherical angles.
StateVector state_from_angles(const std::array<double, 3>& angles);

/// Inverse of state_from_angles for real amplitude vectors.
std::array<double, 3> angles_from_state(const std::array<double, 4>& amplitudes);

/// cos(theta) sz + sin(theta) sx on one qubit: the planar Bloch circle every
/// observable of a configuration lives on.
ComplexMatrix planar_observable(double theta);

/// A state and four two-value observables: d1, d2 confined in the earlier
/// region Alpha (acting on tensor factor 1), b1, b2 in the later space-like
/// separated region Beta (factor 2). Same-side pairs must not commute;
/// cross pairs commute by tensor structure; all four expectations must stay
/// strictly inside (-1, 1). build_config enforces these, verify_config
/// reports on them for configurations assembled by other means.
struct HardyConfiguration {
  StateVector psi;
  TwoValueObservable d1, d2, b1, b2;
  double tol = kCorrelationTol;

  /// Observables in canonical order D1, D2, B1, B2.
  std::array<const TwoValueObservable*, 4> observables() const { return {&d1, &d2, &b1, &b2}; }
  /// Lookup by label; UnknownLabel if the label is not one of the four.
  const TwoValueObservable& by_label(const std::string& label) const;
};

struct ConditionEntry {
  std::string id;          // one of q.i, q.ii, q.iii.a, q.iii.b, q.iii.c, q.iv
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;

  bool operator==(const ConditionEntry&) const = default;
};

/// Six-entry verdict on the hypotheses a configuration must satisfy.
struct ConditionReport {
  std::array<ConditionEntry, 6> entries;

  bool all_pass() const;
  const ConditionEntry& by_id(const std::string& id) const;

  bool operator==(const ConditionReport&) const = default;
};

/// Realizes params as a configuration: observables cos(t) sz + sin(t) sx on
/// their own tensor factor, state from the hyperspherical angles. Throws
/// DegenerateParams when same-side angles coincide mod pi (the observables
/// would commute) or when psi is an eigenstate of one of the observables.
HardyConfiguration build_config(const HardyParams& params, double tol = kCorrelationTol);

/// P(d1=+1, b2=-1) minus penalty_weight times the total probability mass on
/// the three chain-violating outcome pairs. A perfect configuration has zero
/// penalty term, so higher is better and the maximum is the largest
/// attainable P(d1=+1, b2=-1) compatible with the correlation chain.
double hardy_score(const HardyConfiguration& config, double penalty_weight);

struct OptimizeSettings {
  int restarts = 32;
  int max_iters = 200;            // coordinate-descent sweeps per phase
  double penalty_weight = 100.0;
  double tol = kCorrelationTol;
};

/// Multi-start derivative-free search for the configuration maximizing
/// hardy_score. Each restart runs penalized coordinate descent over the
/// seven parameters and then polishes on the constraint manifold (the state
/// re-solved as the unit vector orthogonal to the three chain-violating
/// product vectors, which drives the penalty term to rounding level).
/// Deterministic for fixed seed and settings; ties between restarts go to
/// the lowest restart index. Throws NoFeasibleConfig when the best score
/// stays below settings.tol.
std::pair<HardyConfiguration, ConditionReport> optimize_hardy(std::uint64_t seed,
                                                              const OptimizeSettings& settings = {});

/// Checks the six conditions: q.i region confinement (tags and tensor
/// structure), q.ii same-side non-commutation and expectation margins,
/// q.iii.a/b/c the correlation chain, q.iv strict positivity of
/// P(d1=+1, b2=-1). Failures are reported, never thrown.
ConditionReport verify_config(const HardyConfiguration& config, double tol);

/// Frozen golden configuration for reproducible tests.
HardyConfiguration canonical_config();

/// The parameters behind canonical_config.
const HardyParams& canonical_params();

}  // namespace locaudit
