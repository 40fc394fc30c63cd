#pragma once

#include <functional>

#include "zk/partition.hpp"
#include "zk/specfun.hpp"
#include "zk/zmeasure.hpp"

namespace zk {

/// Trapezoidal rule on the circle |w| = radius. Nodes double until two successive
/// estimates agree to 1e-12 relative to the mean modulus of the integrand.
struct QuadratureConfig {
  double radius = 1.0;
  int nodes = 256;
  int max_doublings = 8;

  /// Requires sqrt(xi) < radius < 1/sqrt(xi).
  void validate(double xi) const;
};

struct PsiValue {
  double value = 0.0;
  /// True when some factor of the product lay outside the double range on its own.
  bool log_scale_used = false;
};

/// psi_a(x; z, z', xi) from the regularized Gauss function. Principal and complementary
/// series everywhere; degenerate series (N > 0) for x + N - 1/2 >= 0.
PsiValue psi_value(HalfInt a, HalfInt x, const ZParams& prm);
double psi(HalfInt a, HalfInt x, const ZParams& prm);

/// The same function through its single contour integral.
double psi_contour(HalfInt a, HalfInt x, const ZParams& prm, const QuadratureConfig& q = {});

/// F(A, B; M + 1; xi / (xi - 1)) / Gamma(M + 1) as a contour integral, for xi in (0, 1).
/// Throws PoleError when A is a positive integer.
Complex hyp2f1_reg_contour(Complex A, Complex B, int M, double xi, const QuadratureConfig& q = {});

/// Mean of f over `nodes` equispaced points of |w| = r, with node doubling to 1e-12.
/// Returns the mean; `scale` receives the mean modulus of f.
Complex circle_mean(const std::function<Complex(Complex)>& f, const QuadratureConfig& q, double* scale = nullptr);

/// The second-order difference operator whose eigenfunctions are the psi_a. Terms with a
/// vanishing coefficient are skipped, so f is never evaluated there.
double apply_D(const std::function<double(HalfInt)>& f, HalfInt x, const ZParams& prm);

/// Absolute residual of the three-term relation in the index a at the point x.
double three_term_residual(HalfInt a, HalfInt x, const ZParams& prm);

}  // namespace zk
