#include <algorithm>
#include <cmath>
#include <numeric>

#include "opineq/error.hpp"
#include "opineq/linalg.hpp"

namespace opineq {

namespace {

constexpr double kClampRelative = 1e-8;

// Removes from v its components along the first `count` columns of basis
// (twice, for stability) and returns the remaining norm.
double orthogonalize_against(ComplexVector& v, const ComplexMatrix& basis, std::size_t count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < count; ++j) {
      Complex proj{};
      for (std::size_t i = 0; i < v.size(); ++i) proj += std::conj(basis(i, j)) * v[i];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * basis(i, j);
    }
  }
  return vector_norm(v);
}

}  // namespace

ComplexMatrix spectral_function(const HermitianEigen& eig, const std::function<double(double)>& fn) {
  const std::size_t n = eig.values.size();
  std::vector<double> fv(n);
  for (std::size_t k = 0; k < n; ++k) fv[k] = fn(eig.values[k]);
  ComplexMatrix out(n);
  const ComplexMatrix& v = eig.vectors;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += v(i, k) * fv[k] * std::conj(v(j, k));
      out(i, j) = s;
      out(j, i) = std::conj(s);
    }
    out(i, i) = out(i, i).real();
  }
  return out;
}

std::vector<double> clamp_psd_spectrum(std::span<const double> values, double scale) {
  const double floor = -kClampRelative * scale;
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) {
    if (v < floor) throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(v) + " below clamp");
    if (v < 0.0) v = 0.0;
  }
  return out;
}

HermitianEigen modulus_eigen(const ComplexMatrix& a) {
  HermitianEigen eig = hermitian_eigen(adjoint(a) * a);
  // ||A v|| is accurate to eps ||A|| even where sqrt of the Gram eigenvalue is
  // only accurate to sqrt(eps) ||A||.
  for (std::size_t k = 0; k < eig.values.size(); ++k) eig.values[k] = vector_norm(a * eig.vectors.column(k));
  std::vector<std::size_t> order(eig.values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return eig.values[i] < eig.values[j]; });
  HermitianEigen out{std::vector<double>(order.size()), ComplexMatrix(order.size())};
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.values[k] = eig.values[order[k]];
    for (std::size_t i = 0; i < order.size(); ++i) out.vectors(i, k) = eig.vectors(i, order[k]);
  }
  return out;
}

ComplexMatrix absolute_value(const ComplexMatrix& a) {
  return spectral_function(modulus_eigen(a), [](double s) { return s; });
}

PolarParts polar(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  const HermitianEigen right = modulus_eigen(a);
  const std::vector<double>& sigma = right.values;

  // Singular directions in descending order of sigma.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::reverse(order.begin(), order.end());
  const double smax = n == 0 ? 0.0 : sigma[order[0]];
  const double rank_floor = 1e-10 * smax;

  // Column k of w pairs with right singular vector order[k]; basis holds the
  // accepted columns compacted, so it stays orthonormal throughout.
  ComplexMatrix w(n);
  ComplexMatrix basis(n);
  std::size_t placed = 0;
  std::vector<std::size_t> pending;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t idx = order[k];
    if (sigma[idx] <= rank_floor || sigma[idx] == 0.0) {
      pending.push_back(k);
      continue;
    }
    ComplexVector col = a * right.vectors.column(idx);
    for (auto& c : col) c /= sigma[idx];
    const double norm = orthogonalize_against(col, basis, placed);
    if (norm < 0.5) {
      pending.push_back(k);
      continue;
    }
    for (auto& c : col) c /= norm;
    w.set_column(k, col);
    basis.set_column(placed++, col);
  }

  if (!pending.empty()) {
    // Complete with left singular vectors of the null directions: eigenvectors
    // of AA* from the smallest eigenvalue up, then the standard basis.
    const HermitianEigen left = hermitian_eigen(a * adjoint(a));
    std::vector<ComplexVector> candidates;
    for (std::size_t k = 0; k < n; ++k) candidates.push_back(left.vectors.column(k));
    for (std::size_t k = 0; k < n; ++k) {
      ComplexVector e(n);
      e[k] = 1.0;
      candidates.push_back(std::move(e));
    }
    std::size_t next = 0;
    for (std::size_t k : pending) {
      while (next < candidates.size()) {
        ComplexVector col = candidates[next++];
        const double norm = orthogonalize_against(col, basis, placed);
        if (norm < 0.5) continue;
        for (auto& c : col) c /= norm;
        basis.set_column(placed++, col);
        w.set_column(k, col);
        break;
      }
    }
  }

  // U = W V* with V columns permuted to match W.
  ComplexMatrix u(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += w(i, k) * std::conj(right.vectors(j, order[k]));
      u(i, j) = s;
    }
  }
  HermitianEigen modulus_eig{sigma, right.vectors};
  return {u, spectral_function(modulus_eig, [](double s) { return s; })};
}

CartesianParts cartesian(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  CartesianParts out{ComplexMatrix(n), ComplexMatrix(n)};
  const Complex half_i_inv{0.0, -0.5};  // 1 / (2i)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex x = a(i, j);
      const Complex y = std::conj(a(j, i));
      out.real_part(i, j) = 0.5 * (x + y);
      out.imag_part(i, j) = half_i_inv * (x - y);
    }
  }
  return out;
}

FunctionPair FunctionPair::power(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::ParamOutOfRange, "power pair alpha must lie in [0, 1]");
  }
  FunctionPair p;
  p.name = "power";
  p.parameters = {{"alpha", alpha}};
  p.f = [alpha](double t) { return std::pow(std::max(t, 0.0), alpha); };
  p.g = [alpha](double t) { return std::pow(std::max(t, 0.0), 1.0 - alpha); };
  return p;
}

FunctionPair FunctionPair::log_split() {
  FunctionPair p;
  p.name = "log";
  p.f = [](double t) { return std::log1p(std::max(t, 0.0)); };
  p.g = [](double t) {
    t = std::max(t, 0.0);
    if (t < 1e-8) return 1.0 + 0.5 * t;
    return t / std::log1p(t);
  };
  return p;
}

FunctionPair FunctionPair::named(const std::string& name, const std::map<std::string, double>& parameters) {
  if (name == "power") {
    const auto it = parameters.find("alpha");
    if (it == parameters.end()) throw Error(ErrorKind::ParamOutOfRange, "power pair needs alpha");
    return power(it->second);
  }
  if (name == "log") return log_split();
  throw Error(ErrorKind::ParamOutOfRange, "unknown function pair '" + name + "'");
}

ComplexMatrix apply_function(const FunctionPair& pair, PairSide side, const ComplexMatrix& m) {
  HermitianEigen eig = hermitian_eigen(m);
  double scale = 0.0;
  for (double v : eig.values) scale = std::max(scale, std::abs(v));
  eig.values = clamp_psd_spectrum(eig.values, scale);
  return spectral_function(eig, side == PairSide::F ? pair.f : pair.g);
}

}  // namespace opineq
