#include "zk/psi.hpp"

#include <cmath>
#include <numbers>

#include "zk/error.hpp"

namespace zk {

namespace {

constexpr double kLogRange = 700.0;

// (z, z') with the integer parameter first for the degenerate series.
struct Pair {
  Complex z;
  Complex zp;
};

Pair oriented(const ZParams& prm) {
  switch (prm.series) {
    case Series::Principal:
    case Series::Complementary:
      return {prm.z, prm.zprime};
    case Series::Degenerate: {
      const int n = prm.degenerate_N();
      if (n <= 0) throw DomainError("psi for the degenerate series requires a positive integer parameter");
      if (prm.z.real() == n) return {prm.z, prm.zprime};
      return {prm.zprime, prm.z};
    }
    case Series::SecondDegenerate:
      break;
  }
  throw DomainError("psi is defined only for 0 < xi < 1");
}

void check_domain(const ZParams& prm, const Pair& p, HalfInt x) {
  if (prm.series == Series::Degenerate && x.value() + p.z.real() - 0.5 < 0.0) {
    throw DomainError("degenerate psi requires x + N - 1/2 >= 0; got x = " + x.str());
  }
}

bool is_pole(Complex w) { return w.imag() == 0.0 && w.real() <= 0.0 && w.real() == std::floor(w.real()); }

// Real coefficient sqrt(xi * Re(u v)), zero when the product vanishes.
double root_coefficient(double xi, Complex u, Complex v) {
  const double q = xi * (u * v).real();
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

}  // namespace

void QuadratureConfig::validate(double xi) const {
  const double s = std::sqrt(xi);
  if (!(radius > s && radius * s < 1.0)) {
    throw ConfigurationError("contour radius must lie strictly between sqrt(xi) and 1/sqrt(xi)");
  }
  if (nodes < 1 || max_doublings < 1) throw ConfigurationError("quadrature needs positive nodes and doublings");
}

Complex circle_mean(const std::function<Complex(Complex)>& f, const QuadratureConfig& q, double* scale) {
  const double two_pi = 2.0 * std::numbers::pi;
  auto node = [&](int k, int n) { return std::polar(q.radius, two_pi * k / n); };

  int n = q.nodes;
  Complex sum = 0.0;
  double abs_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const Complex v = f(node(k, n));
    sum += v;
    abs_sum += std::abs(v);
  }
  Complex mean = sum / double(n);
  double diff = HUGE_VAL;
  for (int d = 0; d < q.max_doublings; ++d) {
    // The refined rule reuses every old node; only the midpoints are new.
    const int m = 2 * n;
    for (int k = 1; k < m; k += 2) {
      const Complex v = f(node(k, m));
      sum += v;
      abs_sum += std::abs(v);
    }
    n = m;
    const Complex refined = sum / double(n);
    diff = std::abs(refined - mean);
    mean = refined;
    const double s = abs_sum / n;
    if (diff <= 1e-12 * std::max(std::abs(mean), s)) {
      if (scale != nullptr) *scale = s;
      return mean;
    }
  }
  throw AccuracyError("trapezoidal rule did not settle after node doubling", diff);
}

PsiValue psi_value(HalfInt a, HalfInt x, const ZParams& prm) {
  const Pair p = oriented(prm);
  check_domain(prm, p, x);
  const double av = a.value();
  const double xv = x.value();
  const Complex den1 = p.z - av + 0.5;
  const Complex den2 = p.zp - av + 0.5;
  // 1/Gamma at a pole makes the whole value vanish (degenerate truncation in a).
  if (is_pole(den1) || is_pole(den2)) return {0.0, false};

  const double xi = prm.xi;
  const double log_gamma_part =
      0.5 * (log_gamma(xv + p.z + 0.5) + log_gamma(xv + p.zp + 0.5) - log_gamma(den1) - log_gamma(den2)).real();
  const double log_powers =
      0.5 * integer_sum(x, a) * std::log(xi) + (0.5 * (p.z + p.zp).real() - av) * std::log1p(-xi);
  const ScaledComplex f =
      hyp2f1_reg_scaled(-p.z + av + 0.5, -p.zp + av + 0.5, Complex(integer_sum(x, a) + 1.0), xi / (xi - 1.0));
  if (f.value == Complex(0.0)) return {0.0, false};

  const Complex log_total = log_gamma_part + log_powers + f.log_scale;
  PsiValue out;
  out.log_scale_used = std::abs(log_gamma_part) > kLogRange || std::abs(f.log_scale.real()) > kLogRange;
  out.value = (std::exp(log_total) * f.value).real();
  return out;
}

double psi(HalfInt a, HalfInt x, const ZParams& prm) { return psi_value(a, x, prm).value; }

double psi_contour(HalfInt a, HalfInt x, const ZParams& prm, const QuadratureConfig& q) {
  q.validate(prm.xi);
  const Pair p = oriented(prm);
  check_domain(prm, p, x);
  const double av = a.value();
  const double xv = x.value();
  const Complex den1 = p.z - av + 0.5;
  const Complex den2 = p.zp - av + 0.5;
  if (is_pole(den1)) return 0.0;
  if (is_pole(den2)) throw PoleError("contour form of psi is singular at this index; use psi()");

  const double xi = prm.xi;
  const double s = std::sqrt(xi);
  const Complex e1 = -p.zp + av - 0.5;
  const Complex e2 = p.z - av - 0.5;
  const long power = -integer_sum(x, a);
  const Complex mean = circle_mean(
      [&](Complex w) {
        return std::exp(e1 * std::log(1.0 - s * w) + e2 * std::log(1.0 - s / w)) * std::pow(w, int(power));
      },
      q);

  const Complex log_pre =
      0.5 * (log_gamma(xv + p.z + 0.5) + log_gamma(xv + p.zp + 0.5) - log_gamma(den1) - log_gamma(den2)).real() +
      log_gamma(den2) - log_gamma(p.zp + xv + 0.5) + 0.5 * (p.zp - p.z + 1.0) * std::log1p(-xi);
  return (std::exp(log_pre) * mean).real();
}

Complex hyp2f1_reg_contour(Complex A, Complex B, int M, double xi, const QuadratureConfig& q) {
  if (!(xi > 0.0 && xi < 1.0)) throw DomainError("contour form requires xi in (0, 1)");
  q.validate(xi);
  if (is_pole(1.0 - A)) throw PoleError("contour form is singular for positive integer A");
  const Complex inv_tail = recip_gamma(-A + double(M) + 1.0);
  if (inv_tail == Complex(0.0)) return 0.0;
  const double s = std::sqrt(xi);
  const Complex mean = circle_mean(
      [&](Complex w) {
        return std::exp((A - 1.0) * std::log(1.0 - s * w) - B * std::log(1.0 - s / w)) * std::pow(w, -M);
      },
      q);
  const Complex log_pre = log_gamma(1.0 - A) - 0.5 * M * std::log(xi) + B * std::log1p(-xi);
  return std::exp(log_pre) * inv_tail * mean;
}

double apply_D(const std::function<double(HalfInt)>& f, HalfInt x, const ZParams& prm) {
  const double xi = prm.xi;
  const double xv = x.value();
  const double up = root_coefficient(xi, prm.z + xv + 0.5, prm.zprime + xv + 0.5);
  const double down = root_coefficient(xi, prm.z + xv - 0.5, prm.zprime + xv - 0.5);
  const double diag = xv + xi * ((prm.z + prm.zprime).real() + xv);
  double out = -diag * f(x);
  if (up != 0.0) out += up * f(x.shifted(1));
  if (down != 0.0) out += down * f(x.shifted(-1));
  return out;
}

double three_term_residual(HalfInt a, HalfInt x, const ZParams& prm) {
  const double xi = prm.xi;
  const double av = a.value();
  const double lower = root_coefficient(xi, prm.z - av + 0.5, prm.zprime - av + 0.5);
  const double upper = root_coefficient(xi, prm.z - av - 0.5, prm.zprime - av - 0.5);
  const double center = psi(a, x, prm);
  double rhs = (-av + xi * ((prm.z + prm.zprime).real() - av)) * center;
  if (lower != 0.0) rhs += lower * psi(a.shifted(-1), x, prm);
  if (upper != 0.0) rhs += upper * psi(a.shifted(1), x, prm);
  return std::abs((1.0 - xi) * x.value() * center - rhs);
}

}  // namespace zk
