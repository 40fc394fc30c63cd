#include "zk/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "zk/error.hpp"

namespace zk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSeriesCap = 10000;
constexpr double kTermFloor = 1e-17;
// Largest tolerated cancellation times unit roundoff.
constexpr double kLossLimit = 1e-3;

bool is_nonpositive_integer(Complex w, long* m = nullptr) {
  if (w.imag() != 0.0 || w.real() > 0.0 || w.real() != std::floor(w.real())) return false;
  if (m != nullptr) *m = static_cast<long>(-w.real());
  return true;
}

// log(sin(pi w)) without overflow for large |Im w|.
Complex log_sin_pi(Complex w) {
  const double shift = 2.0 * std::round(0.5 * w.real());
  w -= shift;
  const Complex i(0.0, 1.0);
  if (w.imag() > 1.0) {
    return -i * kPi * w + std::log((std::exp(2.0 * i * kPi * w) - 1.0) / (2.0 * i));
  }
  if (w.imag() < -1.0) {
    return i * kPi * w + std::log((1.0 - std::exp(-2.0 * i * kPi * w)) / (2.0 * i));
  }
  return std::log(std::sin(kPi * w));
}

// B_{2k} / (2k (2k - 1)), k = 1..10.
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,          -1.0 / 360.0,          1.0 / 1260.0,        -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,     1.0 / 156.0,         -3617.0 / 122400.0,
    43867.0 / 244188.0,  -174611.0 / 125400.0};

Complex log_gamma_right(Complex w) {
  Complex shift_log = 0.0;
  while (std::abs(w) < 15.0) {
    shift_log += std::log(w);
    w += 1.0;
  }
  const Complex inv = 1.0 / w;
  const Complex inv2 = inv * inv;
  Complex correction = 0.0;
  Complex power = inv;
  for (double c : kStirling) {
    correction += c * power;
    power *= inv2;
  }
  return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi) + correction - shift_log;
}

// Minimal complex arithmetic over a real type; used to rerun a badly cancelling series
// in quad precision.
template <class T>
struct Cx {
  T re{};
  T im{};

  Cx() = default;
  Cx(T r, T i) : re(r), im(i) {}
  explicit Cx(Complex c) : re(c.real()), im(c.imag()) {}

  Cx operator+(const Cx& o) const { return {re + o.re, im + o.im}; }
  Cx operator+(T o) const { return {re + o, im}; }
  Cx operator*(const Cx& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Cx operator*(T o) const { return {re * o, im * o}; }
  Cx operator/(const Cx& o) const {
    const T d = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
  }
  double norm() const { return static_cast<double>(re * re + im * im); }
  Complex to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

struct GaussSeries {
  Complex sum{1.0, 0.0};
  int terms = 0;
  double cancellation = 1.0;
  bool converged = false;
  double attained = 0.0;
};

// sum_j (P)_j (Q)_j x^j / ((R)_j j!), with R away from the nonpositive integers.
template <class T>
GaussSeries gauss_series_in(Complex P0, Complex Q0, Complex R0, double x0, double floor) {
  const Cx<T> P(P0), Q(Q0), R(R0);
  const T x = x0;
  GaussSeries out;
  Cx<T> sum(T(1), T(0));
  Cx<T> term(T(1), T(0));
  double largest = 1.0;
  int quiet = 0;
  const double floor2 = floor * floor;
  for (int j = 0; j < kSeriesCap; ++j) {
    const T jj = j;
    term = term * (P + jj) * (Q + jj) * x / ((R + jj) * Cx<T>(jj + 1, T(0)));
    sum = sum + term;
    out.terms = j + 1;
    const double sum_norm = sum.norm();
    largest = std::max(largest, sum_norm);
    const double term_norm = term.norm();
    if (term_norm == 0.0) {
      out.converged = true;
      break;
    }
    if (term_norm < floor2 * sum_norm) {
      if (++quiet >= 3) {
        out.converged = true;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  out.sum = sum.to_complex();
  const double magnitude = std::abs(out.sum);
  out.cancellation = magnitude > 0.0 ? std::sqrt(largest) / magnitude : HUGE_VAL;
  out.attained = magnitude > 0.0 ? std::abs(term.to_complex()) / magnitude : HUGE_VAL;
  return out;
}

// Double precision first; when more than three digits cancel, the series is summed again
// in quad precision. `roundoff` receives the unit roundoff of the precision used.
GaussSeries gauss_series(Complex P, Complex Q, Complex R, double x, double* roundoff) {
  GaussSeries s = gauss_series_in<double>(P, Q, R, x, kTermFloor);
  *roundoff = 1.1e-16;
  if (s.cancellation > 1e3 || !s.converged) {
    s = gauss_series_in<__float128>(P, Q, R, x, 1e-33);
    *roundoff = 1e-34;
  }
  return s;
}

struct Candidate {
  ScaledComplex result;
  int terms = 0;
  double cancellation = 1.0;
  double roundoff = 1.1e-16;
  bool converged = true;
  double attained = 0.0;

  double expected_error() const { return cancellation * roundoff; }
};

Candidate from_series(const GaussSeries& s, Complex log_pre, double roundoff) {
  Candidate out;
  out.result = {log_pre, s.sum};
  out.terms = s.terms;
  out.cancellation = s.cancellation;
  out.roundoff = roundoff;
  out.converged = s.converged;
  out.attained = s.attained;
  return out;
}

// Regularized sum_k (P)_k (Q)_k x^k / (Gamma(C + k) k!) times exp(log_prefactor).
Candidate regularized_series(Complex P, Complex Q, Complex C, double x, Complex log_prefactor) {
  long m = 0;
  double roundoff = 0.0;
  if (is_nonpositive_integer(C, &m)) {
    // Terms with k <= m vanish; reindex from k0 = m + 1 where Gamma(C + k0) = 1.
    const long k0 = m + 1;
    Candidate zero;
    if (x == 0.0) return zero;
    Complex log_pre = log_prefactor;
    for (long j = 0; j < k0; ++j) {
      const Complex f1 = P + double(j);
      const Complex f2 = Q + double(j);
      if (f1 == Complex(0.0) || f2 == Complex(0.0)) return zero;
      log_pre += std::log(f1) + std::log(f2);
    }
    log_pre += double(k0) * std::log(Complex(x)) - std::lgamma(double(k0) + 1.0);
    const GaussSeries s = gauss_series(P + double(k0), Q + double(k0), Complex(double(k0) + 1.0), x, &roundoff);
    return from_series(s, log_pre, roundoff);
  }
  const GaussSeries s = gauss_series(P, Q, C, x, &roundoff);
  return from_series(s, log_prefactor - log_gamma(C), roundoff);
}

// The terms alternate for the Meixner argument and grow far beyond the result when
// n and x are both large, so the sum is carried in quad precision.
double terminating_sum(int n, int x, double beta, __float128 u) {
  using Q = __float128;
  Q term = 1;
  Q sum = 1;
  const int top = std::min(n, x);
  for (int k = 0; k < top; ++k) {
    term *= Q(k - n) * Q(k - x) * u / ((Q(beta) + k) * Q(k + 1));
    sum += term;
  }
  return static_cast<double>(sum);
}

}  // namespace

void validate(const MeixnerParams& prm) {
  if (!(prm.beta > 0.0)) throw DomainError("Meixner beta must be positive");
  if (!(prm.xi > 0.0 && prm.xi < 1.0)) throw DomainError("Meixner xi must lie in (0, 1)");
}

void validate(const KrawtchoukParams& prm) {
  if (!(prm.p > 0.0 && prm.p < 1.0)) throw DomainError("Krawtchouk p must lie in (0, 1)");
  if (prm.L < 1) throw DomainError("Krawtchouk L must be at least 1");
}

Complex log_gamma(Complex w) {
  if (is_nonpositive_integer(w)) throw PoleError("log_gamma evaluated at a pole");
  if (w.real() < 0.5) {
    return std::log(kPi) - log_sin_pi(w) - log_gamma_right(1.0 - w);
  }
  return log_gamma_right(w);
}

Complex recip_gamma(Complex w) {
  if (is_nonpositive_integer(w)) return 0.0;
  return std::exp(-log_gamma(w));
}

ScaledComplex hyp2f1_reg_scaled(Complex A, Complex B, Complex C, double w, SeriesInfo* info) {
  if (!(w <= 0.0)) throw DomainError("hyp2f1_reg requires w <= 0");
  const double xi = w / (w - 1.0);
  // (1 - w)^(-P) = (1 - xi)^P
  const double log1mxi = std::log1p(-xi);

  Candidate best = regularized_series(A, C - B, C, xi, A * log1mxi);
  if (!best.converged || best.cancellation > 1e3) {
    Candidate other = regularized_series(B, C - A, C, xi, B * log1mxi);
    const bool prefer_other = (other.converged && !best.converged) ||
                              (other.converged == best.converged && other.expected_error() < best.expected_error());
    if (prefer_other) best = other;
  }
  if (!best.converged) throw AccuracyError("hyp2f1_reg series did not converge", best.attained);
  if (best.result.value != Complex(0.0) && best.expected_error() > kLossLimit) {
    throw AccuracyError("hyp2f1_reg lost all digits to cancellation", best.expected_error());
  }
  if (info != nullptr) {
    info->terms = best.terms;
    info->cancellation = best.cancellation;
  }
  return best.result;
}

Complex hyp2f1_reg(Complex A, Complex B, Complex C, double w) {
  return hyp2f1_reg_scaled(A, B, C, w).eval();
}

Complex hyp2f1_reg_direct(Complex A, Complex B, Complex C, double w) {
  if (!(std::abs(w) < 1.0)) throw DomainError("direct hypergeometric series requires |w| < 1");
  const Candidate c = regularized_series(A, B, C, w, 0.0);
  if (!c.converged) throw AccuracyError("direct hypergeometric series did not converge", c.attained);
  return c.result.eval();
}

double meixner(int n, int x, const MeixnerParams& prm) {
  validate(prm);
  if (n < 0 || x < 0) throw DomainError("Meixner degree and argument must be nonnegative");
  return terminating_sum(n, x, prm.beta, 1 - 1 / __float128(prm.xi));
}

double meixner_weight(int x, const MeixnerParams& prm) {
  validate(prm);
  if (x < 0) throw DomainError("Meixner weight argument must be nonnegative");
  return std::exp(std::lgamma(prm.beta + x) - std::lgamma(prm.beta) - std::lgamma(x + 1.0) +
                  x * std::log(prm.xi));
}

double meixner_log_inv_norm2(int n, const MeixnerParams& prm) {
  validate(prm);
  return n * std::log(prm.xi) + prm.beta * std::log1p(-prm.xi) + std::lgamma(prm.beta + n) -
         std::lgamma(prm.beta) - std::lgamma(n + 1.0);
}

double meixner_tilde(int n, int x, const MeixnerParams& prm) {
  const double poly = meixner(n, x, prm);
  const double log_w = std::lgamma(prm.beta + x) - std::lgamma(prm.beta) - std::lgamma(x + 1.0) +
                       x * std::log(prm.xi);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * poly * std::exp(0.5 * (log_w + meixner_log_inv_norm2(n, prm)));
}

double krawtchouk(int n, int x, const KrawtchoukParams& prm) {
  validate(prm);
  if (n < 0 || n > prm.L || x < 0 || x > prm.L) throw DomainError("Krawtchouk degree and argument must lie in [0, L]");
  // beta = -L, xi = p / (p - 1), so 1 - 1/xi = 1/p.
  return terminating_sum(n, x, -static_cast<double>(prm.L), 1 / __float128(prm.p));
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw DomainError("binomial index out of range");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double krawtchouk_weight(int x, const KrawtchoukParams& prm) {
  validate(prm);
  if (x < 0 || x > prm.L) throw DomainError("Krawtchouk weight argument must lie in [0, L]");
  return std::exp(log_binomial(prm.L, x) + x * std::log(prm.p) + (prm.L - x) * std::log1p(-prm.p));
}

double krawtchouk_norm2(int n, const KrawtchoukParams& prm) {
  validate(prm);
  if (n < 0 || n > prm.L) throw DomainError("Krawtchouk degree must lie in [0, L]");
  return std::exp(n * (std::log1p(-prm.p) - std::log(prm.p)) - log_binomial(prm.L, n));
}

}  // namespace zk
