#pragma once

#include <string>

#include "locaudit/complex_matrix.hpp"
#include "locaudit/state_vector.hpp"

namespace locaudit {

/// Default tolerance for algebraic identities (hermiticity, involution,
/// projector laws). Double precision leaves several orders of headroom at
/// dimension 4.
inline constexpr double kAlgebraTol = 1e-10;

/// Default tolerance for the correlation residual test.
inline constexpr double kCorrelationTol = 1e-9;

/// Space-time region a measurement is confined in. Alpha lies earlier in
/// time than Beta; the two are space-like separated.
enum class Region { Alpha, Beta };

enum class Sign { Plus, Minus };

/// A physical quantity with outcomes in {-1,+1}: a Hermitian involutory
/// matrix with both eigenvalues present, plus the region its measurement is
/// confined in. Instances can only be obtained through validate_observable,
/// so holding one certifies the three invariants.
class TwoValueObservable {
 public:
  const ComplexMatrix& matrix() const { return matrix_; }
  Region region() const { return region_; }
  const std::string& label() const { return label_; }

  friend TwoValueObservable validate_observable(ComplexMatrix matrix, Region region,
                                                std::string label, double tol);

 private:
  TwoValueObservable(ComplexMatrix matrix, Region region, std::string label)
      : matrix_(std::move(matrix)), region_(region), label_(std::move(label)) {}

  ComplexMatrix matrix_;
  Region region_;
  std::string label_;
};

/// Eigenprojector (1 +- M)/2 of a two-value observable.
struct Projector {
  ComplexMatrix matrix;
  const TwoValueObservable* parent;
  Sign sign;
};

/// Checks the three observable invariants at tolerance tol and returns the
/// validated value. Throws NotHermitian, NotInvolutory (M^2 != 1) or
/// DegenerateSpectrum (M = +-1, only one eigenvalue present).
TwoValueObservable validate_observable(ComplexMatrix matrix, Region region, std::string label,
                                       double tol = kAlgebraTol);

/// (1 +- M)/2. Satisfies idempotence, hermiticity and P(+) + P(-) = 1.
Projector projector(const TwoValueObservable& obs, Sign sign);

/// True iff max |(AB - BA)_ij| < tol. Commuting observables are exactly the
/// pairs that can be measured together.
bool commutes(const TwoValueObservable& a, const TwoValueObservable& b, double tol = kAlgebraTol);

/// <psi|M psi>, a real number in [-1, 1].
double expectation(const StateVector& psi, const TwoValueObservable& obs);

/// <psi| P_sa(A) P_sb(B) psi>: the probability that a simultaneous
/// measurement of A and B yields the outcome pair (sa, sb). Throws
/// NonCommuting when the pair cannot be measured together.
double joint_probability(const StateVector& psi, const TwoValueObservable& a, Sign sa,
                         const TwoValueObservable& b, Sign sb, double tol = kAlgebraTol);

/// || P+(D) P+(B) psi - P+(D) psi ||. Zero exactly when an outcome +1 for D
/// forces outcome +1 for B in this state. No commutation check; prefer
/// correlation_holds unless the caller guards commutation itself.
double correlation_residual(const TwoValueObservable& d, const TwoValueObservable& b,
                            const StateVector& psi);

/// The correlation D -> B: true iff the residual above is below tol.
/// Requires a commuting pair (NonCommuting otherwise).
bool correlation_holds(const TwoValueObservable& d, const TwoValueObservable& b,
                       const StateVector& psi, double tol = kCorrelationTol);

}  // namespace locaudit
