#pragma once

#include <string>

#include "opineq/linalg.hpp"

namespace opineq {

struct RadiusEstimate {
  double value = 0.0;
  std::string method;
  double lo = 0.0;  // lo <= value <= hi
  double hi = 0.0;
};

// Largest singular value.
double operator_norm(const ComplexMatrix& a);

// max |lambda| over general_eigenvalues(a).
double spectral_radius(const ComplexMatrix& a);

// ||A^(2^k)||^(1/2^k) with Frobenius renormalisation after every squaring.
// doublings in [1, 60]; throws Overflow if the running norm stops being finite.
double spectral_radius_gelfand(const ComplexMatrix& a, int doublings);

// w(A) = max_theta lambda_max(cos(theta) P - sin(theta) Q) with A = P + iQ.
// A 360-point theta grid locates candidate peaks; the five highest whose
// Lipschitz bound can still beat the running best are refined by
// golden-section search until the bracket is below min(1e-10, tol/||A||).
// The certified interval is [value, value + ||A|| * bracket]. tol >= 1e-12.
RadiusEstimate numerical_radius(const ComplexMatrix& a, double tol = 1e-10);

// Brute-force lower bound on w(A) over a uniform theta grid; grid_points >= 4.
double numerical_radius_grid_oracle(const ComplexMatrix& a, int grid_points);

// |A|^(1/2) U |A|^(1/2) with (U, |A|) from polar(a).
ComplexMatrix aluthge(const ComplexMatrix& a);

}  // namespace opineq
