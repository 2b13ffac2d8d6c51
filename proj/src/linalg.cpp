#include "opineq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "opineq/error.hpp"

namespace opineq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::BadRange: return "BadRange";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::UnknownSpec: return "UnknownSpec";
    case ErrorKind::UnknownRecipe: return "UnknownRecipe";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  ComplexMatrix m(rows.size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    require_same_dim(row.size(), rows.size(), "from_rows");
    std::size_t j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

ComplexVector ComplexMatrix::column(std::size_t j) const {
  ComplexVector v(n_);
  for (std::size_t i = 0; i < n_; ++i) v[i] = (*this)(i, j);
  return v;
}

void ComplexMatrix::set_column(std::size_t j, std::span<const Complex> v) {
  require_same_dim(v.size(), n_, "set_column");
  for (std::size_t i = 0; i < n_; ++i) (*this)(i, j) = v[i];
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(n_, rhs.n_, "add");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(n_, rhs.n_, "subtract");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= rhs.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex c) {
  for (auto& v : a_) v *= c;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(Complex c, ComplexMatrix m) { return m *= c; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs.dim(), rhs.dim(), "matmul");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v) {
  require_same_dim(m.dim(), v.size(), "matvec");
  const std::size_t n = m.dim();
  ComplexVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s{};
    for (std::size_t j = 0; j < n; ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b; }
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) { return a + b; }
ComplexMatrix scale(Complex c, const ComplexMatrix& a) { return c * a; }
ComplexVector apply(const ComplexMatrix& a, std::span<const Complex> x) { return a * x; }

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  require_same_dim(x.size(), y.size(), "inner");
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

double vector_norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

double hermitian_defect(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += std::norm(a(i, j) - std::conj(a(j, i)));
  return std::sqrt(s);
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  return out;
}

Complex trace(const ComplexMatrix& a) {
  Complex s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += a(i, i);
  return s;
}

bool all_finite(const ComplexMatrix& a) {
  return std::all_of(a.data().begin(), a.data().end(),
                     [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix lu = a;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  const double scale_ref = std::max(frobenius_norm(a), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        piv = i;
      }
    }
    if (best <= 1e-14 * scale_ref) throw Error(ErrorKind::NotInvertible, "singular pivot in inverse");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(lu(k, j), lu(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    }
    const Complex d = lu(k, k);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Complex f = lu(i, k) / d;
      if (f == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) {
        lu(i, j) -= f * lu(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Complex d = lu(i, i);
    for (std::size_t j = 0; j < n; ++j) inv(i, j) /= d;
  }
  return inv;
}

ComplexMatrix power(const ComplexMatrix& a, unsigned k) {
  ComplexMatrix result = ComplexMatrix::identity(a.dim());
  ComplexMatrix base = a;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

}  // namespace opineq
