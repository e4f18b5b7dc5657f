#include "locaudit/observable.hpp"

#include <cmath>
#include <utility>

#include "locaudit/errors.hpp"

namespace locaudit {

TwoValueObservable validate_observable(ComplexMatrix matrix, Region region, std::string label,
                                       double tol) {
  if (matrix.dim() <= 0) throw DimensionMismatch("observable matrix must be square and nonempty");
  if (tol <= 0.0) throw Error("tolerance must be positive");

  if (max_abs_diff(matrix, matrix.adjoint()) >= tol)
    throw NotHermitian("observable '" + label + "' is not Hermitian");

  const ComplexMatrix id = ComplexMatrix::identity(matrix.dim());
  if (max_abs_diff(matrix * matrix, id) >= tol)
    throw NotInvolutory("observable '" + label + "': M^2 != identity, spectrum is not {-1,+1}");

  // Both eigenvalues present: for an involution trace = (+1 multiplicity) -
  // (-1 multiplicity), so |trace| = dim exactly when M = +-identity.
  if (std::abs(matrix.trace()) >= matrix.dim() - tol)
    throw DegenerateSpectrum("observable '" + label + "' equals +-identity, only one eigenvalue");

  return TwoValueObservable(std::move(matrix), region, std::move(label));
}

Projector projector(const TwoValueObservable& obs, Sign sign) {
  const double s = sign == Sign::Plus ? 1.0 : -1.0;
  const ComplexMatrix id = ComplexMatrix::identity(obs.matrix().dim());
  return Projector{Complex(0.5) * (id + Complex(s) * obs.matrix()), &obs, sign};
}

bool commutes(const TwoValueObservable& a, const TwoValueObservable& b, double tol) {
  if (a.matrix().dim() != b.matrix().dim())
    throw DimensionMismatch("cannot compare observables of different dimensions");
  return commutator(a.matrix(), b.matrix()).max_abs() < tol;
}

static double real_part_checked(Complex value, const char* what) {
  if (std::abs(value.imag()) >= 1e-10)
    throw Error(std::string(what) + ": imaginary part exceeds 1e-10");
  return value.real();
}

double expectation(const StateVector& psi, const TwoValueObservable& obs) {
  if (psi.dim() != obs.matrix().dim())
    throw DimensionMismatch("state and observable dimensions differ");
  const Complex v = inner(psi.amplitudes(), obs.matrix().apply(psi.amplitudes()));
  return real_part_checked(v, "expectation");
}

double joint_probability(const StateVector& psi, const TwoValueObservable& a, Sign sa,
                         const TwoValueObservable& b, Sign sb, double tol) {
  if (!commutes(a, b, tol))
    throw NonCommuting("joint probability undefined for incompatible observables '" + a.label() +
                       "', '" + b.label() + "'");
  if (psi.dim() != a.matrix().dim())
    throw DimensionMismatch("state and observable dimensions differ");
  const ComplexMatrix pp = projector(a, sa).matrix * projector(b, sb).matrix;
  const double p = real_part_checked(inner(psi.amplitudes(), pp.apply(psi.amplitudes())),
                                     "joint probability");
  if (p < -1e-10 || p > 1.0 + 1e-10) throw Error("joint probability outside [0,1]");
  return std::min(std::max(p, 0.0), 1.0);
}

double correlation_residual(const TwoValueObservable& d, const TwoValueObservable& b,
                            const StateVector& psi) {
  if (psi.dim() != d.matrix().dim() || psi.dim() != b.matrix().dim())
    throw DimensionMismatch("state and observable dimensions differ");
  const ComplexMatrix pd = projector(d, Sign::Plus).matrix;
  const ComplexMatrix pb = projector(b, Sign::Plus).matrix;
  const std::vector<Complex> lhs = (pd * pb).apply(psi.amplitudes());
  const std::vector<Complex> rhs = pd.apply(psi.amplitudes());
  double n2 = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) n2 += std::norm(lhs[i] - rhs[i]);
  return std::sqrt(n2);
}

bool correlation_holds(const TwoValueObservable& d, const TwoValueObservable& b,
                       const StateVector& psi, double tol) {
  if (!commutes(d, b, tol))
    throw NonCommuting("correlation undefined for incompatible observables '" + d.label() +
                       "', '" + b.label() + "'");
  return correlation_residual(d, b, psi) < tol;
}

}  // namespace locaudit
