#pragma once

#include <cmath>
#include <vector>

#include "locaudit/complex_matrix.hpp"
#include "locaudit/errors.hpp"

namespace locaudit {

/// Normalized complex vector on a finite-dimensional Hilbert space.
/// ||psi||^2 must equal 1 within 1e-12 at construction.
class StateVector {
 public:
  static constexpr double kNormTol = 1e-12;

  explicit StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) throw DimensionMismatch("state vector must have positive dimension");
    if (std::abs(norm_squared() - 1.0) > kNormTol)
      throw Error("state vector is not normalized: ||psi||^2 deviates from 1 by more than 1e-12");
  }

  /// Rescale an arbitrary nonzero vector to unit norm.
  static StateVector normalized(std::vector<Complex> amplitudes) {
    double n2 = 0.0;
    for (const Complex& a : amplitudes) n2 += std::norm(a);
    if (n2 <= 0.0) throw Error("cannot normalize the zero vector");
    const double inv = 1.0 / std::sqrt(n2);
    for (Complex& a : amplitudes) a *= inv;
    return StateVector(std::move(amplitudes));
  }

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }

  double norm_squared() const {
    double n2 = 0.0;
    for (const Complex& a : amplitudes_) n2 += std::norm(a);
    return n2;
  }

  bool operator==(const StateVector& other) const = default;

 private:
  std::vector<Complex> amplitudes_;
};

/// <a|b> with the left argument conjugated.
inline Complex inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("inner product of unequal dimensions");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

}  // namespace locaudit
