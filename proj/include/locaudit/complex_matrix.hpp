#pragma once

#include <complex>
#include <vector>

namespace locaudit {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major. Small dimensions only (the
/// configurations in this project live on dim 2 and dim 4), so everything is
/// plain O(n^3) arithmetic with no external solver.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim) : dim_(dim), entries_(static_cast<std::size_t>(dim) * dim) {}
  ComplexMatrix(int dim, std::vector<Complex> entries);

  static ComplexMatrix identity(int dim);

  int dim() const { return dim_; }
  Complex& at(int r, int c) { return entries_[static_cast<std::size_t>(r) * dim_ + c]; }
  const Complex& at(int r, int c) const { return entries_[static_cast<std::size_t>(r) * dim_ + c]; }
  const std::vector<Complex>& entries() const { return entries_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  /// Largest |entry|.
  double max_abs() const;

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

  /// Matrix-vector product.
  std::vector<Complex> apply(const std::vector<Complex>& v) const;

 private:
  int dim_ = 0;
  std::vector<Complex> entries_;
};

/// max |a_ij - b_ij|; DimensionMismatch if shapes differ.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// AB - BA.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product, dimension dim(a) * dim(b).
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace locaudit
