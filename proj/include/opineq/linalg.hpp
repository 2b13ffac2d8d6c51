#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace opineq {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Dense square complex matrix, row-major. Sizes in this project are small
// (n <= 64), so everything is stored contiguously and copied freely.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n) {}

  static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n); }
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> d);
  static ComplexMatrix diagonal(std::span<const double> d);
  // Rows must all have the same length as the number of rows.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t dim() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * n_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

  std::span<Complex> data() noexcept { return a_; }
  std::span<const Complex> data() const noexcept { return a_; }

  ComplexVector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const Complex> v);

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex c);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Complex> a_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex c, ComplexMatrix m);
ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v);

// Named forms of the basic arithmetic. All throw DimensionMismatch on shape errors.
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(Complex c, const ComplexMatrix& a);
ComplexVector apply(const ComplexMatrix& a, std::span<const Complex> x);

// <x, y> = sum_i x_i conj(y_i): linear in x, conjugate-linear in y.
Complex inner(std::span<const Complex> x, std::span<const Complex> y);
double vector_norm(std::span<const Complex> x);

double frobenius_norm(const ComplexMatrix& a);
double hermitian_defect(const ComplexMatrix& a);  // ||A - A*||_F
ComplexMatrix hermitian_part(const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);
bool all_finite(const ComplexMatrix& a);
ComplexMatrix inverse(const ComplexMatrix& a);  // partial-pivot LU; NotInvertible
ComplexMatrix power(const ComplexMatrix& a, unsigned k);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // unitary, eigenvectors in columns
};

// Cyclic Jacobi. Requires ||H - H*||_F <= 1e-8 max(1, ||H||_F).
HermitianEigen hermitian_eigen(const ComplexMatrix& h);

// Eigenvalues only, ascending, via Householder tridiagonalisation and implicit
// QL. Same precondition as hermitian_eigen; used in hot loops.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

// Eigenvalues of a general matrix (with multiplicity), Hessenberg + shifted QR.
std::vector<Complex> general_eigenvalues(const ComplexMatrix& a);

// V diag(fn(values)) V*.
ComplexMatrix spectral_function(const HermitianEigen& eig, const std::function<double(double)>& fn);

// Eigenpairs of |A| (singular values ascending, right singular vectors).
HermitianEigen modulus_eigen(const ComplexMatrix& a);

// Positive semidefinite square root of A*A.
ComplexMatrix absolute_value(const ComplexMatrix& a);

struct PolarParts {
  ComplexMatrix unitary;
  ComplexMatrix modulus;
};

// A = U |A| with U unitary; for singular A the partial isometry is completed
// from the left singular vectors of the null directions.
PolarParts polar(const ComplexMatrix& a);

struct CartesianParts {
  ComplexMatrix real_part;  // (A + A*)/2
  ComplexMatrix imag_part;  // (A - A*)/(2i)
};

CartesianParts cartesian(const ComplexMatrix& a);

// A pair (f, g) of nonnegative functions on [0, inf) with f(t) g(t) = t.
struct FunctionPair {
  std::string name;
  std::map<std::string, double> parameters;
  std::function<double(double)> f;
  std::function<double(double)> g;

  // f(t) = t^alpha, g(t) = t^(1-alpha), alpha in [0, 1].
  static FunctionPair power(double alpha);
  // f(t) = log(1 + t), g(t) = t / log(1 + t) with g(0) = 1.
  static FunctionPair log_split();
  // Lookup by name, reading parameters (e.g. "alpha") from the map.
  static FunctionPair named(const std::string& name, const std::map<std::string, double>& parameters);
};

enum class PairSide { F, G };

// side(M) for Hermitian PSD M. Eigenvalues in [-1e-8 ||M||, 0) are clamped to
// zero; anything lower throws NotPSD.
ComplexMatrix apply_function(const FunctionPair& pair, PairSide side, const ComplexMatrix& m);

// Eigenvalues of an (approximately) PSD matrix, clamped at the same threshold
// apply_function uses. Throws NotPSD below it.
std::vector<double> clamp_psd_spectrum(std::span<const double> values, double scale);

}  // namespace opineq
