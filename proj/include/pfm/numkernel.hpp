#pragma once

// Small dense complex linear algebra (2x2 Jones matrices up to 3x3 density
// operators). Everything here is a pure function on values.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pfm {

using complex = std::complex<double>;

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kHermitianTol = 1e-12;

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t dim) : data_(dim) {}
  ComplexVector(std::initializer_list<complex> values) : data_(values) {}
  explicit ComplexVector(std::vector<complex> values) : data_(std::move(values)) {}

  std::size_t dim() const { return data_.size(); }
  complex& operator[](std::size_t i) { return data_[i]; }
  const complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<const complex> entries() const { return data_; }

  double norm() const;

  friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

 private:
  std::vector<complex> data_;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex> row_major);
  // Nested-list construction, one inner list per row.
  ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::initializer_list<double> values);
  // Builds a matrix and checks it is Hermitian to kHermitianTol.
  static ComplexMatrix hermitian(std::initializer_list<std::initializer_list<complex>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const complex> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  // max |A_ij - conj(A_ji)|.
  double hermiticity_defect() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(complex scale);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<complex> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(complex scale, ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v);
ComplexVector operator*(complex scale, ComplexVector v);
ComplexVector operator+(const ComplexVector& lhs, const ComplexVector& rhs);
ComplexVector operator-(const ComplexVector& lhs, const ComplexVector& rhs);

ComplexMatrix matmul(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix adjoint(const ComplexMatrix& m);
complex trace(const ComplexMatrix& m);
// Real trace of an operator expected to have a real trace (Hermitian, or a
// product of Hermitian PSD operators); throws if the imaginary residue exceeds
// kHermitianTol relative to the magnitude.
double real_trace(const ComplexMatrix& m);
// u v^dagger
ComplexMatrix outer(const ComplexVector& u, const ComplexVector& v);
// <u|v>, conjugate-linear in u.
complex inner(const ComplexVector& u, const ComplexVector& v);
double frobenius_norm(const ComplexMatrix& m);
// (A + A^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);
void require_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  std::vector<ComplexVector> eigenvectors;

  double max_eigenvalue() const { return eigenvalues.back(); }
  double min_eigenvalue() const { return eigenvalues.front(); }
  ComplexMatrix reconstruct() const;
};

// Cyclic complex Jacobi. Eigenvalues ascending; each eigenvector's first
// component with modulus above 1e-12 is made real and positive.
// Throws NonHermitian if max |A_ij - conj(A_ji)| > kHermitianTol * max(1, max|A|),
// NoConvergence if the sweep budget runs out.
EigenDecomposition hermitian_eig(const ComplexMatrix& a);

// Pseudo-inverse square root: B = sum over eigenpairs with lambda > rank_tol *
// lambda_max of lambda^{-1/2} v v^dagger. B A B is the projector onto the
// support of A.
ComplexMatrix pinv_sqrt(const ComplexMatrix& a, double rank_tol = kDefaultRankTol);

// Projector onto the eigenspaces with lambda > rank_tol * lambda_max.
ComplexMatrix support_projector(const ComplexMatrix& a, double rank_tol = kDefaultRankTol);

std::size_t numerical_rank(const ComplexMatrix& a, double rank_tol = kDefaultRankTol);

bool is_psd(const ComplexMatrix& a, double tol);
double min_eigenvalue(const ComplexMatrix& a);
double max_eigenvalue(const ComplexMatrix& a);

}  // namespace pfm
