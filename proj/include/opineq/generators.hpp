#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opineq/linalg.hpp"
#include "opineq/rng.hpp"

namespace opineq {

// A constraint residual and the scale it is measured against.
struct Certificate {
  double residual = 0.0;
  double scale = 0.0;

  static constexpr double kRelative = 1e-8;
  bool passes(double relative = kRelative) const { return residual <= relative * std::max(scale, 1e-300); }
};

struct InstanceBundle {
  std::string recipe;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::map<std::string, ComplexMatrix> operators;
  std::map<std::string, double> scalars;
  std::map<std::string, Certificate> certificates;

  bool has(const std::string& role) const { return operators.count(role) != 0; }
  // Throws HypothesisViolated naming the missing role.
  const ComplexMatrix& at(const std::string& role) const;
  bool certified(double relative = Certificate::kRelative) const;
};

// ||M B - B* M||_F against ||M||_F ||B||_F.
Certificate intertwining_certificate(const ComplexMatrix& m, const ComplexMatrix& b);
// ||X - X*||_F against max(1, ||X||_F).
Certificate selfadjoint_certificate(const ComplexMatrix& x);
// Hermitian defect plus max(0, -lambda_min) against max(1, ||X||_F).
Certificate psd_certificate(const ComplexMatrix& x);
// psd_certificate that also fails unless lambda_min > 0.
Certificate definite_certificate(const ComplexMatrix& x);

// Standard complex Gaussian entries, E|a_ij|^2 = 1. 1 <= n <= 64.
ComplexMatrix ginibre(std::size_t n, Rng& rng);
// Real N(0,1) diagonal, standard complex Gaussian off-diagonal.
ComplexMatrix random_hermitian(std::size_t n, Rng& rng);
// Haar unitary from Gram-Schmidt on a Ginibre matrix with phase correction.
ComplexMatrix random_unitary(std::size_t n, Rng& rng);
// U diag(d) U* with d uniform in [lo, hi], 0 < lo <= hi.
ComplexMatrix random_psd(std::size_t n, double lo, double hi, Rng& rng);
// Unit vector from normalised complex Gaussian entries.
ComplexVector random_unit_vector(std::size_t n, Rng& rng);

struct ModuliTriple {
  ComplexMatrix a;
  ComplexMatrix mod_a;       // V S V*
  ComplexMatrix mod_a_star;  // W S W*
};

// A = W S V* with Haar W, V and singular values uniform in [0.1, 2].
ModuliTriple make_A_with_moduli(std::size_t n, Rng& rng);

// M^{-1/2} H M^{1/2}: satisfies M B = B* M exactly in exact arithmetic and is
// similar to H. Requires lambda_min(M) >= 1e-6 (NotInvertible otherwise).
ComplexMatrix intertwined_operator(const ComplexMatrix& m, const ComplexMatrix& h);
ComplexMatrix intertwined_operator(const ComplexMatrix& m, Rng& rng);

InstanceBundle theorem1_instance(std::size_t n, Rng& rng);
InstanceBundle lin_dragomir_instance(std::size_t n, Rng& rng);
InstanceBundle reid_instance(std::size_t n, Rng& rng);
InstanceBundle multi_operator_instance(std::size_t n, std::size_t count, Rng& rng);

// Dispatch on a stable recipe label:
//   general, hermitian, psd, psd_pair, pair, triple, scalar, selfadjoint_c,
//   thm1, thm1c, thm1_identity, thm1_mutated, ld, reid, cor9, cor9c,
//   multi:k, multic:k.
// The "c" variants draw B and C Hermitian and commuting with the relevant
// modulus, which makes them selfadjoint for every function of it.
// thm1_mutated is thm1 with B perturbed by relative 0.5 noise; its
// intertwining certificate fails by construction.
InstanceBundle make_instance(const std::string& recipe, std::size_t n, Rng& rng);
std::vector<std::string> recipe_labels();

// M += relative * ||M||_F * N / ||N||_F for a Ginibre N, then recomputes the
// bundle's certificates. Throws BadRange for negative or non-finite noise.
void perturb_operator(InstanceBundle& bundle, const std::string& role, double relative, Rng& rng);

// Role names of the i-th (1-based) triple in a multi-operator bundle.
std::string multi_role(const char* base, std::size_t i);

// Rank-deficient A with B = C = I, for the degenerate-modulus coverage the
// similarity recipe cannot reach. Deterministic.
std::vector<InstanceBundle> singular_fixtures(std::size_t n);

// Recomputes every certificate the recipe declares from the bundle's matrices.
std::map<std::string, Certificate> recompute_certificates(const InstanceBundle& bundle);

}  // namespace opineq
