#include "opineq/radii.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "opineq/error.hpp"

namespace opineq {

namespace {

constexpr int kCoarseGrid = 360;
constexpr int kRefinedPeaks = 5;

// Evaluates lambda_max(H_theta) for H_theta = cos(theta) P - sin(theta) Q.
class ThetaProfile {
 public:
  explicit ThetaProfile(const ComplexMatrix& a) : parts_(cartesian(a)), h_(a.dim()) {}

  std::vector<double> spectrum(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto out = h_.data();
    auto p = parts_.real_part.data();
    auto q = parts_.imag_part.data();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = c * p[k] - s * q[k];
    return hermitian_eigenvalues(h_);
  }

  double top(double theta) { return spectrum(theta).back(); }

 private:
  CartesianParts parts_;
  ComplexMatrix h_;
};

// Uniform grid values lambda_max(theta_k), theta_k = 2 pi k / points, using
// lambda_max(theta + pi) = -lambda_min(theta) when points is even.
std::vector<double> grid_profile(ThetaProfile& profile, int points) {
  std::vector<double> values(points);
  const double step = 2.0 * std::numbers::pi / points;
  if (points % 2 == 0) {
    const int half = points / 2;
    for (int k = 0; k < half; ++k) {
      const auto spec = profile.spectrum(step * k);
      values[k] = spec.back();
      values[k + half] = -spec.front();
    }
  } else {
    for (int k = 0; k < points; ++k) values[k] = profile.top(step * k);
  }
  return values;
}

}  // namespace

double operator_norm(const ComplexMatrix& a) {
  if (a.empty()) return 0.0;
  const auto gram = hermitian_eigenvalues(adjoint(a) * a);
  return std::sqrt(std::max(gram.back(), 0.0));
}

double spectral_radius(const ComplexMatrix& a) {
  double r = 0.0;
  for (const auto& l : general_eigenvalues(a)) r = std::max(r, std::abs(l));
  return r;
}

double spectral_radius_gelfand(const ComplexMatrix& a, int doublings) {
  if (doublings < 1 || doublings > 60) throw Error(ErrorKind::BadRange, "doublings must lie in [1, 60]");
  const double n0 = frobenius_norm(a);
  if (n0 == 0.0) return 0.0;
  if (!std::isfinite(n0)) throw Error(ErrorKind::Overflow, "non-finite input norm");
  // Invariant: A^(2^k) = exp(log_norm) * b with ||b||_F = 1.
  ComplexMatrix b = Complex(1.0 / n0) * a;
  double log_norm = std::log(n0);
  for (int k = 0; k < doublings; ++k) {
    b = b * b;
    const double nf = frobenius_norm(b);
    if (nf == 0.0) return 0.0;
    if (!std::isfinite(nf)) throw Error(ErrorKind::Overflow, "renormalisation failed at doubling " + std::to_string(k));
    b *= Complex(1.0 / nf);
    log_norm = 2.0 * log_norm + std::log(nf);
  }
  return std::exp(std::ldexp(log_norm, -doublings));
}

RadiusEstimate numerical_radius(const ComplexMatrix& a, double tol) {
  if (!(tol >= 1e-12)) throw Error(ErrorKind::BadRange, "numerical_radius tol must be >= 1e-12");
  const std::size_t n = a.dim();
  if (n == 0) return {0.0, "empty", 0.0, 0.0};
  if (n == 1) {
    const double v = std::abs(a(0, 0));
    return {v, "scalar", v, v};
  }
  const double lip = operator_norm(a);
  if (lip == 0.0) return {0.0, "zero", 0.0, 0.0};

  ThetaProfile profile(a);
  const std::vector<double> grid = grid_profile(profile, kCoarseGrid);
  const double step = 2.0 * std::numbers::pi / kCoarseGrid;

  std::vector<int> peaks;
  for (int k = 0; k < kCoarseGrid; ++k) {
    const double prev = grid[(k + kCoarseGrid - 1) % kCoarseGrid];
    const double next = grid[(k + 1) % kCoarseGrid];
    if (grid[k] >= prev && grid[k] >= next) peaks.push_back(k);
  }
  // Plateaus can mark every point as a peak; keep the highest few.
  std::stable_sort(peaks.begin(), peaks.end(), [&](int i, int j) { return grid[i] > grid[j]; });
  if (peaks.size() > kRefinedPeaks) peaks.resize(kRefinedPeaks);

  double best = *std::max_element(grid.begin(), grid.end());
  const double target = std::min(1e-10, tol / lip);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double bracket = 0.0;
  for (int k : peaks) {
    // Every theta in the bracket lies within step/2 of a grid point no higher
    // than grid[k], and lambda_max(H_theta) is ||A||-Lipschitz in theta.
    if (grid[k] + 0.5 * lip * step < best) continue;
    double lo = step * (k - 1);
    double hi = step * (k + 1);
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = profile.top(x1);
    double f2 = profile.top(x2);
    while (hi - lo > target) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = profile.top(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = profile.top(x1);
      }
    }
    best = std::max({best, f1, f2});
    bracket = std::max(bracket, hi - lo);
  }
  best = std::max(best, 0.0);
  return {best, "grid360+golden", best, best + lip * bracket};
}

double numerical_radius_grid_oracle(const ComplexMatrix& a, int grid_points) {
  if (grid_points < 4) throw Error(ErrorKind::BadRange, "grid oracle needs at least 4 points");
  if (a.dim() == 0) return 0.0;
  ThetaProfile profile(a);
  const auto values = grid_profile(profile, grid_points);
  return std::max(0.0, *std::max_element(values.begin(), values.end()));
}

ComplexMatrix aluthge(const ComplexMatrix& a) {
  const PolarParts p = polar(a);
  HermitianEigen eig = modulus_eigen(a);
  const ComplexMatrix root = spectral_function(eig, [](double s) { return std::sqrt(std::max(s, 0.0)); });
  return root * p.unitary * root;
}

}  // namespace opineq
