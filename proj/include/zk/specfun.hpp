#pragma once

#include <complex>

namespace zk {

using Complex = std::complex<double>;

struct MeixnerParams {
  double beta;
  double xi;
};

struct KrawtchoukParams {
  double p;
  int L;
};

/// Throws DomainError unless beta > 0 and 0 < xi < 1.
void validate(const MeixnerParams& prm);
/// Throws DomainError unless 0 < p < 1 and L >= 1.
void validate(const KrawtchoukParams& prm);

/// Principal log-gamma (continuous branch, imaginary part accumulated through the
/// recurrence). Throws PoleError at 0, -1, -2, ...
Complex log_gamma(Complex w);

/// 1/Gamma(w), entire; exactly zero at the poles of Gamma.
Complex recip_gamma(Complex w);

/// Value represented as exp(log_scale) * value, for assembling products whose factors
/// individually overflow.
struct ScaledComplex {
  Complex log_scale{0.0, 0.0};
  Complex value{0.0, 0.0};

  Complex eval() const { return value == Complex(0.0) ? Complex(0.0) : std::exp(log_scale) * value; }
};

/// Diagnostics of one hypergeometric series evaluation.
struct SeriesInfo {
  int terms = 0;
  double cancellation = 1.0;  ///< largest partial-sum modulus over final modulus
};

/// F(A, B; C; w) / Gamma(C) for w <= 0, summed after the Pfaff transformation so the
/// working argument is w / (w - 1) in [0, 1). Of the two Pfaff forms the one with less
/// cancellation is used; a series losing more than three digits is summed again in quad
/// precision. Throws AccuracyError when the series does not settle within 10000 terms or
/// when cancellation leaves fewer than three significant digits.
ScaledComplex hyp2f1_reg_scaled(Complex A, Complex B, Complex C, double w, SeriesInfo* info = nullptr);
Complex hyp2f1_reg(Complex A, Complex B, Complex C, double w);

/// Plain power series sum_k (A)_k (B)_k w^k / (Gamma(C + k) k!) for |w| < 1. Used as an
/// independent route in tests; no transformation is applied.
Complex hyp2f1_reg_direct(Complex A, Complex B, Complex C, double w);

/// Meixner polynomial M_n(x; beta, xi) by its terminating hypergeometric sum.
double meixner(int n, int x, const MeixnerParams& prm);
/// Meixner weight Gamma(beta + x) xi^x / (Gamma(beta) x!).
double meixner_weight(int x, const MeixnerParams& prm);
/// log of the inverse squared norm of M_n.
double meixner_log_inv_norm2(int n, const MeixnerParams& prm);
/// (-1)^n M_n(x) sqrt(W(x)) / ||M_n||, orthonormal on the nonnegative integers.
double meixner_tilde(int n, int x, const MeixnerParams& prm);

/// Krawtchouk polynomial K_n(x; p, L) as the Meixner sum with beta = -L, xi = p / (p - 1).
double krawtchouk(int n, int x, const KrawtchoukParams& prm);
/// Binomial weight C(L, x) p^x (1 - p)^(L - x).
double krawtchouk_weight(int x, const KrawtchoukParams& prm);
/// Squared norm of K_n under the binomial weight.
double krawtchouk_norm2(int n, const KrawtchoukParams& prm);

/// log C(n, k) for 0 <= k <= n.
double log_binomial(int n, int k);

}  // namespace zk
