#include "opineq/generators.hpp"

#include <cmath>
#include <numbers>

#include "opineq/error.hpp"

namespace opineq {

namespace {

constexpr double kSigmaLo = 0.1;
constexpr double kSigmaHi = 2.0;
constexpr double kMinEigenvalue = 1e-6;

void require_dim(std::size_t n) {
  if (n < 1 || n > 64) throw Error(ErrorKind::BadDimension, "n = " + std::to_string(n) + " outside [1, 64]");
}

Complex complex_gaussian(Rng& rng) {
  const double re = rng.normal();
  const double im = rng.normal();
  return Complex(re, im) * std::sqrt(0.5);
}

// Hermitian square roots M^{1/2} and M^{-1/2}.
std::pair<ComplexMatrix, ComplexMatrix> root_pair(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  if (eig.values.front() < kMinEigenvalue) {
    throw Error(ErrorKind::NotInvertible, "lambda_min = " + std::to_string(eig.values.front()) + " < 1e-6");
  }
  return {spectral_function(eig, [](double t) { return std::sqrt(t); }),
          spectral_function(eig, [](double t) { return 1.0 / std::sqrt(t); })};
}

// V diag(d) V* with d real Gaussian; commutes with every function of V S V*.
ComplexMatrix commuting_hermitian(const ComplexMatrix& modulus, Rng& rng) {
  const HermitianEigen eig = hermitian_eigen(modulus);
  return spectral_function(eig, [&rng](double) { return rng.normal(); });
}

ComplexMatrix definite_matrix(std::size_t n, Rng& rng) { return random_psd(n, kSigmaLo, kSigmaHi, rng); }

std::size_t parse_count(const std::string& recipe, std::size_t prefix) {
  const std::string digits = recipe.substr(prefix);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorKind::UnknownRecipe, recipe);
  }
  const std::size_t count = std::stoul(digits);
  if (count < 1 || count > 16) throw Error(ErrorKind::UnknownRecipe, recipe + ": count outside [1, 16]");
  return count;
}

InstanceBundle start(const std::string& recipe, std::size_t n, const Rng& rng) {
  InstanceBundle b;
  b.recipe = recipe;
  b.seed = rng.seed();
  b.n = n;
  return b;
}

InstanceBundle finish(InstanceBundle b) {
  b.certificates = recompute_certificates(b);
  return b;
}

InstanceBundle theorem1_like(std::size_t n, Rng& rng, bool commuting, const std::string& label) {
  require_dim(n);
  InstanceBundle b = start(label, n, rng);
  ModuliTriple t = make_A_with_moduli(n, rng);
  if (commuting) {
    b.operators["B"] = commuting_hermitian(t.mod_a, rng);
    b.operators["C"] = commuting_hermitian(t.mod_a_star, rng);
  } else {
    b.operators["B"] = intertwined_operator(t.mod_a, rng);
    b.operators["C"] = intertwined_operator(t.mod_a_star, rng);
  }
  b.operators["A"] = std::move(t.a);
  return finish(std::move(b));
}

InstanceBundle multi_like(std::size_t n, std::size_t count, Rng& rng, bool commuting, const std::string& label) {
  require_dim(n);
  if (count < 1) throw Error(ErrorKind::BadRange, "multi-operator count must be >= 1");
  InstanceBundle b = start(label, n, rng);
  for (std::size_t i = 1; i <= count; ++i) {
    ModuliTriple t = make_A_with_moduli(n, rng);
    if (commuting) {
      b.operators[multi_role("B", i)] = commuting_hermitian(t.mod_a, rng);
      b.operators[multi_role("C", i)] = commuting_hermitian(t.mod_a_star, rng);
    } else {
      b.operators[multi_role("B", i)] = intertwined_operator(t.mod_a, rng);
      b.operators[multi_role("C", i)] = intertwined_operator(t.mod_a_star, rng);
    }
    b.operators[multi_role("A", i)] = std::move(t.a);
  }
  return finish(std::move(b));
}

InstanceBundle cor9_like(std::size_t n, Rng& rng, bool commuting, const std::string& label) {
  require_dim(n);
  InstanceBundle b = start(label, n, rng);
  // Normal A = W diag(s e^{i phi}) W*, so |A| = |A*| = W diag(s) W*.
  const ComplexMatrix w = random_unitary(n, rng);
  std::vector<Complex> d(n);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = rng.uniform(kSigmaLo, kSigmaHi);
    d[i] = std::polar(s[i], rng.uniform(0.0, 2.0 * std::numbers::pi));
  }
  const ComplexMatrix modulus = hermitian_part(w * ComplexMatrix::diagonal(std::span<const double>(s)) * adjoint(w));
  b.operators["A"] = w * ComplexMatrix::diagonal(std::span<const Complex>(d)) * adjoint(w);
  b.operators["C"] = commuting ? commuting_hermitian(modulus, rng) : intertwined_operator(modulus, rng);
  return finish(std::move(b));
}

void add_intertwining(std::map<std::string, Certificate>& out, const InstanceBundle& b, const std::string& a_role,
                      const std::string& b_role, const std::string& c_role) {
  const ComplexMatrix& a = b.at(a_role);
  if (!b_role.empty()) out["intertwine_" + a_role + "_" + b_role] = intertwining_certificate(absolute_value(a), b.at(b_role));
  if (!c_role.empty()) {
    out["intertwine_" + a_role + "star_" + c_role] = intertwining_certificate(absolute_value(adjoint(a)), b.at(c_role));
  }
}

}  // namespace

const ComplexMatrix& InstanceBundle::at(const std::string& role) const {
  const auto it = operators.find(role);
  if (it == operators.end()) {
    throw Error(ErrorKind::HypothesisViolated, "bundle (recipe '" + recipe + "') has no role '" + role + "'");
  }
  return it->second;
}

bool InstanceBundle::certified(double relative) const {
  for (const auto& [label, cert] : certificates)
    if (!cert.passes(relative)) return false;
  return true;
}

Certificate intertwining_certificate(const ComplexMatrix& m, const ComplexMatrix& b) {
  return {frobenius_norm(m * b - adjoint(b) * m), frobenius_norm(m) * frobenius_norm(b)};
}

Certificate selfadjoint_certificate(const ComplexMatrix& x) {
  return {hermitian_defect(x), std::max(1.0, frobenius_norm(x))};
}

Certificate psd_certificate(const ComplexMatrix& x) {
  Certificate c = selfadjoint_certificate(x);
  if (c.passes()) {
    const double lmin = hermitian_eigenvalues(hermitian_part(x)).front();
    c.residual += std::max(0.0, -lmin);
  }
  return c;
}

Certificate definite_certificate(const ComplexMatrix& x) {
  Certificate c = psd_certificate(x);
  if (c.passes() && !(hermitian_eigenvalues(hermitian_part(x)).front() > 0.0)) c.residual += c.scale;
  return c;
}

std::string multi_role(const char* base, std::size_t i) { return std::string(base) + std::to_string(i); }

ComplexMatrix ginibre(std::size_t n, Rng& rng) {
  require_dim(n);
  ComplexMatrix m(n);
  for (auto& v : m.data()) v = complex_gaussian(rng);
  return m;
}

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  require_dim(n);
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = rng.normal();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z = complex_gaussian(rng);
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  ComplexMatrix g = ginibre(n, rng);
  ComplexMatrix q(n);
  for (std::size_t j = 0; j < n; ++j) {
    ComplexVector v = g.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj{};
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, k)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= proj * q(i, k);
      }
    }
    const double nv = vector_norm(v);
    if (nv < 1e-12) throw Error(ErrorKind::NotInvertible, "degenerate Ginibre draw");
    for (auto& x : v) x /= nv;
    q.set_column(j, v);
  }
  return q;
}

ComplexMatrix random_psd(std::size_t n, double lo, double hi, Rng& rng) {
  require_dim(n);
  if (!(lo > 0.0 && lo <= hi && std::isfinite(hi))) {
    throw Error(ErrorKind::BadRange, "spectrum [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const ComplexMatrix u = random_unitary(n, rng);
  std::vector<double> d(n);
  for (auto& v : d) v = rng.uniform(lo, hi);
  return hermitian_part(u * ComplexMatrix::diagonal(std::span<const double>(d)) * adjoint(u));
}

ComplexVector random_unit_vector(std::size_t n, Rng& rng) {
  require_dim(n);
  ComplexVector v(n);
  double nv = 0.0;
  while (nv < 1e-300) {
    for (auto& x : v) x = complex_gaussian(rng);
    nv = vector_norm(v);
  }
  for (auto& x : v) x /= nv;
  return v;
}

ModuliTriple make_A_with_moduli(std::size_t n, Rng& rng) {
  require_dim(n);
  const ComplexMatrix w = random_unitary(n, rng);
  const ComplexMatrix v = random_unitary(n, rng);
  std::vector<double> s(n);
  for (auto& x : s) x = rng.uniform(kSigmaLo, kSigmaHi);
  const ComplexMatrix sigma = ComplexMatrix::diagonal(std::span<const double>(s));
  return {w * sigma * adjoint(v), hermitian_part(v * sigma * adjoint(v)), hermitian_part(w * sigma * adjoint(w))};
}

ComplexMatrix intertwined_operator(const ComplexMatrix& m, const ComplexMatrix& h) {
  const auto [root, inv_root] = root_pair(m);
  return inv_root * h * root;
}

ComplexMatrix intertwined_operator(const ComplexMatrix& m, Rng& rng) {
  return intertwined_operator(m, random_hermitian(m.dim(), rng));
}

InstanceBundle theorem1_instance(std::size_t n, Rng& rng) { return theorem1_like(n, rng, false, "thm1"); }

void perturb_operator(InstanceBundle& b, const std::string& role, double relative, Rng& rng) {
  if (!(relative >= 0.0) || !std::isfinite(relative)) throw Error(ErrorKind::BadRange, "relative noise must be >= 0");
  ComplexMatrix& m = b.operators.at(role);
  const ComplexMatrix noise = ginibre(m.dim(), rng);
  const double scale = relative * frobenius_norm(m) / frobenius_norm(noise);
  m = m + Complex(scale) * noise;
  b.certificates = recompute_certificates(b);
}

InstanceBundle lin_dragomir_instance(std::size_t n, Rng& rng) {
  require_dim(n);
  InstanceBundle b = start("ld", n, rng);
  const ComplexMatrix t = definite_matrix(n, rng);
  const ComplexMatrix t_inv = inverse(t);
  b.operators["S"] = t_inv * random_hermitian(n, rng);
  b.operators["C"] = t_inv * random_hermitian(n, rng);
  b.operators["A"] = random_hermitian(n, rng);
  b.operators["B"] = random_hermitian(n, rng);
  b.operators["T"] = t;
  return finish(std::move(b));
}

InstanceBundle reid_instance(std::size_t n, Rng& rng) {
  require_dim(n);
  InstanceBundle b = start("reid", n, rng);
  const ComplexMatrix a = definite_matrix(n, rng);
  b.operators["B"] = inverse(a) * random_hermitian(n, rng);
  b.operators["A"] = a;
  return finish(std::move(b));
}

InstanceBundle multi_operator_instance(std::size_t n, std::size_t count, Rng& rng) {
  return multi_like(n, count, rng, false, "multi:" + std::to_string(count));
}

InstanceBundle make_instance(const std::string& recipe, std::size_t n, Rng& rng) {
  require_dim(n);
  if (recipe == "thm1") return theorem1_instance(n, rng);
  if (recipe == "thm1c") return theorem1_like(n, rng, true, recipe);
  if (recipe == "thm1_mutated") {
    InstanceBundle b = theorem1_like(n, rng, false, recipe);
    perturb_operator(b, "B", 0.5, rng);
    return b;
  }
  if (recipe == "ld") return lin_dragomir_instance(n, rng);
  if (recipe == "reid") return reid_instance(n, rng);
  if (recipe == "cor9") return cor9_like(n, rng, false, recipe);
  if (recipe == "cor9c") return cor9_like(n, rng, true, recipe);
  if (recipe.rfind("multi:", 0) == 0) return multi_like(n, parse_count(recipe, 6), rng, false, recipe);
  if (recipe.rfind("multic:", 0) == 0) return multi_like(n, parse_count(recipe, 7), rng, true, recipe);

  InstanceBundle b = start(recipe, n, rng);
  if (recipe == "general") {
    b.operators["A"] = ginibre(n, rng);
  } else if (recipe == "hermitian") {
    b.operators["A"] = random_hermitian(n, rng);
  } else if (recipe == "psd") {
    b.operators["A"] = definite_matrix(n, rng);
  } else if (recipe == "psd_pair") {
    b.operators["A"] = definite_matrix(n, rng);
    b.operators["B"] = definite_matrix(n, rng);
  } else if (recipe == "pair") {
    b.operators["A"] = ginibre(n, rng);
    b.operators["B"] = ginibre(n, rng);
  } else if (recipe == "triple") {
    b.operators["A"] = ginibre(n, rng);
    b.operators["C"] = ginibre(n, rng);
    b.operators["D"] = ginibre(n, rng);
  } else if (recipe == "selfadjoint_c") {
    b.operators["C"] = random_hermitian(n, rng);
  } else if (recipe == "thm1_identity") {
    b.operators["A"] = ComplexMatrix::identity(n);
    b.operators["B"] = random_hermitian(n, rng);
    b.operators["C"] = random_hermitian(n, rng);
  } else if (recipe == "scalar") {
    b.scalars["a"] = rng.uniform(0.0, 3.0);
    b.scalars["b"] = rng.uniform(0.0, 3.0);
  } else {
    throw Error(ErrorKind::UnknownRecipe, "'" + recipe + "'");
  }
  return finish(std::move(b));
}

std::vector<std::string> recipe_labels() {
  return {"general", "hermitian", "psd",  "psd_pair", "pair",  "triple",  "scalar",  "selfadjoint_c", "thm1",
          "thm1c",   "thm1_identity", "thm1_mutated", "ld", "reid", "cor9", "cor9c", "multi:k", "multic:k"};
}

std::vector<InstanceBundle> singular_fixtures(std::size_t n) {
  require_dim(n);
  std::vector<InstanceBundle> out;
  auto push = [&](ComplexMatrix a, const std::string& name) {
    InstanceBundle b;
    b.recipe = "singular";
    b.n = n;
    b.operators["A"] = std::move(a);
    b.operators["B"] = ComplexMatrix::identity(n);
    b.operators["C"] = ComplexMatrix::identity(n);
    b.scalars["fixture_" + name] = 1.0;
    out.push_back(finish(std::move(b)));
  };
  ComplexMatrix shift(n);  // nilpotent forward shift
  for (std::size_t i = 0; i + 1 < n; ++i) shift(i, i + 1) = 1.0;
  push(shift, "shift");
  ComplexMatrix half(n);  // diagonal with a zero block
  for (std::size_t i = 0; i < n; ++i) half(i, i) = i < n / 2 ? 0.0 : 1.0 + static_cast<double>(i);
  push(half, "diagonal_kernel");
  ComplexMatrix rank_one(n);  // u v* with complex entries
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rank_one(i, j) = Complex(1.0 + i, 0.5 * i) * std::conj(Complex(0.25, -1.0 / (1.0 + j)));
  push(rank_one, "rank_one");
  push(ComplexMatrix(n), "zero");
  return out;
}

std::map<std::string, Certificate> recompute_certificates(const InstanceBundle& b) {
  std::map<std::string, Certificate> out;
  const std::string& r = b.recipe;
  if (r == "thm1" || r == "thm1c" || r == "thm1_identity" || r == "thm1_mutated" || r == "singular") {
    add_intertwining(out, b, "A", "B", "C");
  } else if (r == "cor9" || r == "cor9c") {
    add_intertwining(out, b, "A", "C", "C");
  } else if (r.rfind("multi:", 0) == 0 || r.rfind("multic:", 0) == 0) {
    const std::size_t count = parse_count(r, r[5] == ':' ? 6 : 7);
    for (std::size_t i = 1; i <= count; ++i) {
      add_intertwining(out, b, multi_role("A", i), multi_role("B", i), multi_role("C", i));
    }
  } else if (r == "ld") {
    const ComplexMatrix& t = b.at("T");
    out["definite_T"] = definite_certificate(t);
    out["selfadjoint_TS"] = selfadjoint_certificate(t * b.at("S"));
    out["selfadjoint_TC"] = selfadjoint_certificate(t * b.at("C"));
    out["selfadjoint_A"] = selfadjoint_certificate(b.at("A"));
    out["selfadjoint_B"] = selfadjoint_certificate(b.at("B"));
  } else if (r == "reid") {
    out["psd_A"] = psd_certificate(b.at("A"));
    out["selfadjoint_AB"] = selfadjoint_certificate(b.at("A") * b.at("B"));
  } else if (r == "psd") {
    out["psd_A"] = psd_certificate(b.at("A"));
  } else if (r == "psd_pair") {
    out["psd_A"] = psd_certificate(b.at("A"));
    out["psd_B"] = psd_certificate(b.at("B"));
  } else if (r == "hermitian") {
    out["selfadjoint_A"] = selfadjoint_certificate(b.at("A"));
  } else if (r == "selfadjoint_c") {
    out["selfadjoint_C"] = selfadjoint_certificate(b.at("C"));
  } else if (r == "general" || r == "pair" || r == "triple" || r == "scalar" || r == "user") {
    // No hypotheses.
  } else {
    throw Error(ErrorKind::UnknownRecipe, "'" + r + "'");
  }
  return out;
}

}  // namespace opineq
