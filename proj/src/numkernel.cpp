#include "pfm/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pfm/errors.hpp"

namespace pfm {

namespace {

constexpr std::size_t kMaxJacobiDim = 8;
constexpr int kMaxSweeps = 64;
constexpr double kPhaseTol = 1e-12;

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << what << ": " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    throw DimensionMismatch(msg.str());
  }
}

void require_square(const ComplexMatrix& a, const char* what) {
  if (!a.is_square()) {
    std::ostringstream msg;
    msg << what << ": matrix is " << a.rows() << "x" << a.cols();
    throw DimensionMismatch(msg.str());
  }
}

// Rotates v so its first significant component is real and positive.
void normalize_phase(ComplexVector& v) {
  for (std::size_t j = 0; j < v.dim(); ++j) {
    const double mag = std::abs(v[j]);
    if (mag > kPhaseTol) {
      const complex rot = std::conj(v[j]) / mag;
      for (std::size_t i = 0; i < v.dim(); ++i) v[i] *= rot;
      v[j] = mag;
      return;
    }
  }
}

bool lexicographically_greater(const ComplexVector& a, const ComplexVector& b) {
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (a[j].real() != b[j].real()) return a[j].real() > b[j].real();
    if (a[j].imag() != b[j].imag()) return a[j].imag() > b[j].imag();
  }
  return false;
}

}  // namespace

double ComplexVector::norm() const {
  double sum = 0.0;
  for (const auto& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionMismatch("ComplexMatrix: entry count does not match rows*cols");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionMismatch("ComplexMatrix: ragged row list");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::hermitian(std::initializer_list<std::initializer_list<complex>> rows) {
  ComplexMatrix m(rows);
  require_square(m, "ComplexMatrix::hermitian");
  if (m.hermiticity_defect() > kHermitianTol) {
    throw NonHermitian("ComplexMatrix::hermitian: entries are not conjugate-symmetric");
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

double ComplexMatrix::hermiticity_defect() const {
  require_square(*this, "hermiticity_defect");
  double worst = 0.0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return worst;
}

double ComplexMatrix::max_abs() const {
  double worst = 0.0;
  for (const auto& z : data_) worst = std::max(worst, std::abs(z));
  return worst;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(complex scale, ComplexMatrix m) { return m *= scale; }
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) { return matmul(lhs, rhs); }

ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v) {
  if (m.cols() != v.dim()) throw DimensionMismatch("matrix-vector product");
  ComplexVector out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    complex sum = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) sum += m(r, c) * v[c];
    out[r] = sum;
  }
  return out;
}

ComplexVector operator*(complex scale, ComplexVector v) {
  for (std::size_t i = 0; i < v.dim(); ++i) v[i] *= scale;
  return v;
}

ComplexVector operator+(const ComplexVector& lhs, const ComplexVector& rhs) {
  if (lhs.dim() != rhs.dim()) throw DimensionMismatch("vector sum");
  ComplexVector out(lhs.dim());
  for (std::size_t i = 0; i < lhs.dim(); ++i) out[i] = lhs[i] + rhs[i];
  return out;
}

ComplexVector operator-(const ComplexVector& lhs, const ComplexVector& rhs) {
  if (lhs.dim() != rhs.dim()) throw DimensionMismatch("vector difference");
  ComplexVector out(lhs.dim());
  for (std::size_t i = 0; i < lhs.dim(); ++i) out[i] = lhs[i] - rhs[i];
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    std::ostringstream msg;
    msg << "matmul: " << lhs.rows() << "x" << lhs.cols() << " * " << rhs.rows() << "x" << rhs.cols();
    throw DimensionMismatch(msg.str());
  }
  ComplexMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t r = 0; r < lhs.rows(); ++r)
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const complex a = lhs(r, k);
      for (std::size_t c = 0; c < rhs.cols(); ++c) out(r, c) += a * rhs(k, c);
    }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

complex trace(const ComplexMatrix& m) {
  require_square(m, "trace");
  complex sum = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) sum += m(i, i);
  return sum;
}

double real_trace(const ComplexMatrix& m) {
  const complex t = trace(m);
  double scale = 1.0;
  for (std::size_t i = 0; i < m.rows(); ++i) scale = std::max(scale, std::abs(m(i, i)));
  if (std::abs(t.imag()) > kHermitianTol * scale) {
    std::ostringstream msg;
    msg << "real_trace: imaginary residue " << t.imag();
    throw NonHermitian(msg.str());
  }
  return t.real();
}

ComplexMatrix outer(const ComplexVector& u, const ComplexVector& v) {
  ComplexMatrix out(u.dim(), v.dim());
  for (std::size_t r = 0; r < u.dim(); ++r)
    for (std::size_t c = 0; c < v.dim(); ++c) out(r, c) = u[r] * std::conj(v[c]);
  return out;
}

complex inner(const ComplexVector& u, const ComplexVector& v) {
  if (u.dim() != v.dim()) throw DimensionMismatch("inner product");
  complex sum = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) sum += std::conj(u[i]) * v[i];
  return sum;
}

double frobenius_norm(const ComplexMatrix& m) {
  double sum = 0.0;
  for (const auto& z : m.entries()) sum += std::norm(z);
  return std::sqrt(sum);
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  require_square(m, "hermitian_part");
  ComplexMatrix out = m + m.adjoint();
  out *= 0.5;
  return out;
}

void require_hermitian(const ComplexMatrix& m, double tol) {
  require_square(m, "require_hermitian");
  const double defect = m.hermiticity_defect();
  if (defect > tol * std::max(1.0, m.max_abs())) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian (defect " << defect << ")";
    throw NonHermitian(msg.str());
  }
}

ComplexMatrix EigenDecomposition::reconstruct() const {
  const std::size_t n = eigenvalues.size();
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out += eigenvalues[i] * outer(eigenvectors[i], eigenvectors[i]);
  return out;
}

EigenDecomposition hermitian_eig(const ComplexMatrix& input) {
  require_square(input, "hermitian_eig");
  const std::size_t n = input.rows();
  if (n > kMaxJacobiDim) throw DimensionMismatch("hermitian_eig: dimension above 8");
  require_hermitian(input);

  ComplexMatrix a = hermitian_part(input);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = frobenius_norm(a);

  auto off_diagonal = [&] {
    double sum = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) sum += std::norm(a(p, q));
    return std::sqrt(sum);
  };

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal() <= 1e-15 * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        const complex phase = a(p, q) / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on rows/cols (p, q).
        const complex upp = c;
        const complex upq = s;
        const complex uqp = -s * std::conj(phase);
        const complex uqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const complex akp = a(k, p);
          const complex akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
          const complex vkp = v(k, p);
          const complex vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const complex apk = a(p, k);
          const complex aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged && off_diagonal() > 1e-15 * scale) {
    throw NoConvergence("hermitian_eig: Jacobi sweep budget exhausted");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<ComplexVector> vecs(n, ComplexVector(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) vecs[j][i] = v(i, j);
    normalize_phase(vecs[j]);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  // Within clusters of (numerically) tied eigenvalues order by the phase-fixed vectors.
  const double tie_tol = 1e-12 * std::max(1.0, scale);
  for (std::size_t begin = 0; begin < n;) {
    std::size_t end = begin + 1;
    while (end < n && a(order[end], order[end]).real() - a(order[begin], order[begin]).real() <= tie_tol) ++end;
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(end),
              [&](std::size_t x, std::size_t y) { return lexicographically_greater(vecs[x], vecs[y]); });
    begin = end;
  }

  EigenDecomposition out;
  out.eigenvalues.reserve(n);
  out.eigenvectors.reserve(n);
  for (std::size_t idx : order) {
    out.eigenvalues.push_back(a(idx, idx).real());
    out.eigenvectors.push_back(vecs[idx]);
  }
  return out;
}

namespace {

ComplexMatrix spectral_function(const ComplexMatrix& a, double rank_tol, bool inverse_sqrt) {
  if (!(rank_tol > 0.0)) throw DomainError("rank_tol must be positive");
  const EigenDecomposition eig = hermitian_eig(a);
  const double lmax = eig.max_eigenvalue();
  const double lmin = eig.min_eigenvalue();
  const bool negative = lmax > 0.0 ? lmin < -1e-10 * lmax : lmin < 0.0;
  if (negative) {
    std::ostringstream msg;
    msg << "matrix is not positive semidefinite (min eigenvalue " << lmin << ", max " << lmax << ")";
    throw NegativeEigenvalue(msg.str());
  }
  const std::size_t n = a.rows();
  ComplexMatrix out(n, n);
  if (lmax <= 0.0) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const double lambda = eig.eigenvalues[i];
    if (lambda > rank_tol * lmax) {
      const double weight = inverse_sqrt ? 1.0 / std::sqrt(lambda) : 1.0;
      out += weight * outer(eig.eigenvectors[i], eig.eigenvectors[i]);
    }
  }
  return hermitian_part(out);
}

}  // namespace

ComplexMatrix pinv_sqrt(const ComplexMatrix& a, double rank_tol) { return spectral_function(a, rank_tol, true); }

ComplexMatrix support_projector(const ComplexMatrix& a, double rank_tol) {
  return spectral_function(a, rank_tol, false);
}

std::size_t numerical_rank(const ComplexMatrix& a, double rank_tol) {
  const EigenDecomposition eig = hermitian_eig(a);
  const double lmax = eig.max_eigenvalue();
  if (lmax <= 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(eig.eigenvalues.begin(), eig.eigenvalues.end(),
                                                [&](double l) { return l > rank_tol * lmax; }));
}

bool is_psd(const ComplexMatrix& a, double tol) { return min_eigenvalue(a) >= -tol; }

double min_eigenvalue(const ComplexMatrix& a) { return hermitian_eig(a).min_eigenvalue(); }

double max_eigenvalue(const ComplexMatrix& a) { return hermitian_eig(a).max_eigenvalue(); }

}  // namespace pfm
