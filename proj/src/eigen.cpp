#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "opineq/error.hpp"
#include "opineq/linalg.hpp"

namespace opineq {

namespace {

constexpr int kJacobiSweepCap = 100;
constexpr double kJacobiOffTol = 1e-13;

void require_hermitian(const ComplexMatrix& h) {
  const double defect = hermitian_defect(h);
  if (!(defect <= 1e-8 * std::max(1.0, frobenius_norm(h)))) {
    throw Error(ErrorKind::NotHermitian, "||H - H*||_F = " + std::to_string(defect));
  }
}

double off_diagonal_mass(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Reduces a Hermitian matrix in place to real symmetric tridiagonal form by
// unitary Householder similarities. Returns diagonal d and off-diagonal |e|.
void tridiagonalize(ComplexMatrix& a, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = a.dim();
  ComplexVector v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
    if (tail == 0.0) continue;
    const Complex x0 = a(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0} : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    const std::size_t m = n - k - 1;
    double vnorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(k + 1 + i, k);
      if (i == 0) v[i] -= alpha;
      vnorm2 += std::norm(v[i]);
    }
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;
    // p = beta * A_sub v, K = (beta/2) v* p, w = p - K v, A_sub -= v w* + w v*.
    for (std::size_t i = 0; i < m; ++i) {
      Complex s{};
      for (std::size_t j = 0; j < m; ++j) s += a(k + 1 + i, k + 1 + j) * v[j];
      p[i] = beta * s;
    }
    Complex vp{};
    for (std::size_t i = 0; i < m; ++i) vp += std::conj(v[i]) * p[i];
    const double kk = 0.5 * beta * vp.real();
    for (std::size_t i = 0; i < m; ++i) p[i] -= kk * v[i];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        a(k + 1 + i, k + 1 + j) -= v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]);
    a(k + 1, k) = alpha;
    a(k, k + 1) = std::conj(alpha);
    for (std::size_t i = k + 2; i < n; ++i) {
      a(i, k) = 0.0;
      a(k, i) = 0.0;
    }
  }
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = std::abs(a(i + 1, i));
}

// sqrt(a^2 + b^2) without std::hypot's cost where squaring cannot over- or underflow.
double fast_hypot(double a, double b) {
  const double m = std::max(std::abs(a), std::abs(b));
  if (m < 1e150 && m > 1e-150) return std::sqrt(a * a + b * b);
  return std::hypot(a, b);
}

// Implicit QL on a symmetric tridiagonal matrix, eigenvalues only.
// e[i] couples d[i] and d[i+1]; e[n-1] is scratch.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw Error(ErrorKind::NoConvergence, "tridiagonal QL");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = fast_hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        bool underflow = false;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = fast_hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Givens rotation zeroing y against x: [c, s; -conj(s), c] [x; y] = [r; 0], c real.
struct Givens {
  double c;
  Complex s;
};

Givens make_givens(Complex x, Complex y) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ay == 0.0) return {1.0, 0.0};
  if (ax == 0.0) return {0.0, std::conj(y) / ay};
  const double norm = std::hypot(ax, ay);
  return {ax / norm, (x / ax) * std::conj(y) / norm};
}

void hessenberg_reduce(ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexVector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
    if (tail == 0.0) continue;
    const Complex x0 = a(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0} : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    const std::size_t m = n - k - 1;
    double vnorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(k + 1 + i, k);
      if (i == 0) v[i] -= alpha;
      vnorm2 += std::norm(v[i]);
    }
    const double beta = 2.0 / vnorm2;
    // Left: rows k+1.. of A -= beta v (v* A).
    for (std::size_t j = k; j < n; ++j) {
      Complex s{};
      for (std::size_t i = 0; i < m; ++i) s += std::conj(v[i]) * a(k + 1 + i, j);
      s *= beta;
      for (std::size_t i = 0; i < m; ++i) a(k + 1 + i, j) -= v[i] * s;
    }
    // Right: columns k+1.. of A -= beta (A v) v*.
    for (std::size_t i = 0; i < n; ++i) {
      Complex s{};
      for (std::size_t j = 0; j < m; ++j) s += a(i, k + 1 + j) * v[j];
      s *= beta;
      for (std::size_t j = 0; j < m; ++j) a(i, k + 1 + j) -= s * std::conj(v[j]);
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

std::pair<Complex, Complex> eig2(Complex a, Complex b, Complex c, Complex d) {
  const Complex half_tr = 0.5 * (a + d);
  const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  return {half_tr + disc, half_tr - disc};
}

}  // namespace

HermitianEigen hermitian_eigen(const ComplexMatrix& h) {
  require_hermitian(h);
  const std::size_t n = h.dim();
  ComplexMatrix a = hermitian_part(h);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = frobenius_norm(a);

  bool converged = false;
  for (int sweep = 0; sweep <= kJacobiSweepCap; ++sweep) {
    if (off_diagonal_mass(a) <= kJacobiOffTol * scale) {
      converged = true;
      break;
    }
    if (sweep == kJacobiSweepCap) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex u = apq / mag;
        const Complex su = s * std::conj(u);
        const Complex cu = c * std::conj(u);
        // G = [[c, s], [-s conj(u), c conj(u)]] on (p, q); A <- G* A G, V <- V G.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - su * akq;
          a(k, q) = s * akp + cu * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * u * aqk;
          a(q, k) = s * apk + c * u * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - su * vkq;
          v(k, q) = s * vkp + cu * vkq;
        }
      }
    }
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "Jacobi sweep cap reached");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  require_hermitian(h);
  const std::size_t n = h.dim();
  if (n == 0) return {};
  if (n == 1) return {h(0, 0).real()};
  if (n == 2) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double off = std::abs(0.5 * (h(0, 1) + std::conj(h(1, 0))));
    const double mid = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), off);
    return {mid - rad, mid + rad};
  }
  ComplexMatrix a = hermitian_part(h);
  std::vector<double> d, e;
  tridiagonalize(a, d, e);
  tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<Complex> general_eigenvalues(const ComplexMatrix& input) {
  const std::size_t n = input.dim();
  if (n == 0) return {};
  if (n == 1) return {input(0, 0)};
  ComplexMatrix h = input;
  hessenberg_reduce(h);
  const double anorm = frobenius_norm(input);
  const double deflate_abs = 1e-12 * anorm;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<Complex> out;
  out.reserve(n);
  if (anorm == 0.0) return std::vector<Complex>(n, Complex{});

  const std::size_t cap = 100 * n * n;
  std::size_t iterations = 0;
  int since_deflation = 0;
  std::size_t hi = n - 1;
  while (true) {
    if (hi == 0) {
      out.push_back(h(0, 0));
      break;
    }
    // Find start l of the active unreduced block ending at hi.
    std::size_t l = hi;
    while (l > 0) {
      const double sub = std::abs(h(l, l - 1));
      if (sub <= deflate_abs || sub <= eps * (std::abs(h(l, l)) + std::abs(h(l - 1, l - 1)))) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == hi) {
      out.push_back(h(hi, hi));
      --hi;
      since_deflation = 0;
      continue;
    }
    if (l + 1 == hi) {
      auto [e1, e2] = eig2(h(l, l), h(l, hi), h(hi, l), h(hi, hi));
      out.push_back(e1);
      out.push_back(e2);
      if (l == 0) break;
      hi = l - 1;
      since_deflation = 0;
      continue;
    }
    if (++iterations > cap) throw Error(ErrorKind::NoConvergence, "shifted QR iteration cap");
    ++since_deflation;

    Complex mu;
    if (since_deflation % 10 == 0) {
      mu = h(hi, hi) + Complex(std::abs(h(hi, hi - 1)), 0.75 * std::abs(h(hi, hi - 1)));
    } else {
      auto [e1, e2] = eig2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
      mu = std::abs(e1 - h(hi, hi)) < std::abs(e2 - h(hi, hi)) ? e1 : e2;
    }

    // One QR step on the window [l, hi]: H - mu I = QR, H <- RQ + mu I.
    for (std::size_t k = l; k <= hi; ++k) h(k, k) -= mu;
    std::vector<Givens> rots;
    rots.reserve(hi - l);
    for (std::size_t k = l; k < hi; ++k) {
      const Givens g = make_givens(h(k, k), h(k + 1, k));
      rots.push_back(g);
      for (std::size_t j = k; j <= hi; ++j) {
        const Complex x = h(k, j);
        const Complex y = h(k + 1, j);
        h(k, j) = g.c * x + g.s * y;
        h(k + 1, j) = -std::conj(g.s) * x + g.c * y;
      }
    }
    for (std::size_t k = l; k < hi; ++k) {
      const Givens& g = rots[k - l];
      const std::size_t top = std::min(k + 2, hi);
      for (std::size_t i = l; i <= top; ++i) {
        const Complex x = h(i, k);
        const Complex y = h(i, k + 1);
        h(i, k) = g.c * x + std::conj(g.s) * y;
        h(i, k + 1) = -g.s * x + g.c * y;
      }
    }
    for (std::size_t k = l; k <= hi; ++k) h(k, k) += mu;
  }
  return out;
}

}  // namespace opineq
