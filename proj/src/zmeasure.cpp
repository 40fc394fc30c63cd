#include "zk/zmeasure.hpp"

#include <cmath>
#include <cstdio>

#include "zk/error.hpp"
#include "zk/parallel.hpp"

namespace zk {

namespace {

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// log |(c)_n| with sign; returns false when the product vanishes.
bool log_rising(double c, int n, double& log_mag, int& sign) {
  log_mag = 0.0;
  sign = 1;
  if (c > 0.0) {
    log_mag = std::lgamma(c + n) - std::lgamma(c);
    return true;
  }
  for (int k = 0; k < n; ++k) {
    const double f = c + k;
    if (f == 0.0) return false;
    if (f < 0.0) sign = -sign;
    log_mag += std::log(std::abs(f));
  }
  return true;
}

// Sum over boxes of log |(z + c)(z' + c)| with the sign of the product; false if a box
// factor vanishes.
bool log_box_product(const ZParams& prm, const Partition& lambda, double& log_mag, int& sign) {
  log_mag = 0.0;
  sign = 1;
  for (int i = 1; i <= lambda.length(); ++i) {
    for (int j = 1; j <= lambda.part_at(i); ++j) {
      const double content = j - i;
      const double q = ((prm.z + content) * (prm.zprime + content)).real();
      if (q == 0.0) return false;
      if (q < 0.0) sign = -sign;
      log_mag += std::log(std::abs(q));
    }
  }
  return true;
}

}  // namespace

std::string to_string(Series s) {
  switch (s) {
    case Series::Principal: return "principal";
    case Series::Complementary: return "complementary";
    case Series::Degenerate: return "degenerate";
    case Series::SecondDegenerate: return "second-degenerate";
  }
  return "unknown";
}

int ZParams::degenerate_N() const {
  if (series == Series::Degenerate) {
    return static_cast<int>(is_integer(z.real()) ? z.real() : zprime.real());
  }
  if (series == Series::SecondDegenerate) {
    return static_cast<int>(std::max(z.real(), zprime.real()));
  }
  throw DomainError("parameters are not in a degenerate series");
}

int ZParams::degenerate_Nprime() const {
  if (series != Series::SecondDegenerate) throw DomainError("parameters are not in the second degenerate series");
  return static_cast<int>(-std::min(z.real(), zprime.real()));
}

double ZParams::meixner_beta() const {
  const int n = degenerate_N();
  if (series != Series::Degenerate || n <= 0) {
    throw DomainError("Meixner parameters exist only for the degenerate series with positive N");
  }
  const double other = is_integer(z.real()) ? zprime.real() : z.real();
  return other - n + 1.0;
}

ZParams classify(Complex z, Complex zprime, double xi) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !std::isfinite(zprime.real()) ||
      !std::isfinite(zprime.imag()) || !std::isfinite(xi)) {
    throw InvalidParameters("parameters must be finite");
  }
  ZParams prm{z, zprime, xi, Series::Principal, 0.0};
  const bool real_pair = z.imag() == 0.0 && zprime.imag() == 0.0;

  if (xi < 0.0) {
    if (!real_pair || !is_integer(z.real()) || !is_integer(zprime.real())) {
      throw InvalidParameters("xi < 0 requires integer z and z' (second degenerate series)");
    }
    if (z.real() * zprime.real() >= 0.0) {
      throw InvalidParameters("second degenerate series requires nonzero z and z' of opposite sign");
    }
    prm.series = Series::SecondDegenerate;
    prm.zzprime = z.real() * zprime.real();
    return prm;
  }
  if (!(xi > 0.0 && xi < 1.0)) {
    throw InvalidParameters("xi must lie in (0, 1), or be negative for the second degenerate series; got " + fmt(xi));
  }
  if (!real_pair) {
    const double gap = std::abs(zprime - std::conj(z));
    if (z.imag() == 0.0 || gap > 1e-14 * std::abs(z)) {
      throw InvalidParameters("principal series requires non-real z with z' = conj(z)");
    }
    prm.zprime = std::conj(z);
    prm.series = Series::Principal;
    prm.zzprime = std::norm(z);
    return prm;
  }
  const double a = z.real();
  const double b = zprime.real();
  prm.zzprime = a * b;
  if (a == 0.0 || b == 0.0) throw InvalidParameters("z and z' must be nonzero");
  if (is_integer(a) || is_integer(b)) {
    const double n = is_integer(a) ? a : b;
    const double other = is_integer(a) ? b : a;
    if (n * other <= 0.0) throw InvalidParameters("degenerate series requires z and z' of the same sign");
    if (!(std::abs(other) > std::abs(n) - 1.0)) {
      throw InvalidParameters("degenerate series requires |z'| > |N| - 1 (strict)");
    }
    prm.series = Series::Degenerate;
    return prm;
  }
  if (std::floor(a) != std::floor(b)) {
    throw InvalidParameters("complementary series requires z and z' in the same open interval (m, m + 1)");
  }
  prm.series = Series::Complementary;
  return prm;
}

double weight(const ZParams& prm, const Partition& lambda) {
  double log_mag = 0.0;
  int sign = 1;
  if (!log_box_product(prm, lambda, log_mag, sign)) return 0.0;
  const int n = lambda.size();
  log_mag += prm.zzprime * std::log1p(-prm.xi);
  if (n > 0) {
    log_mag += n * std::log(std::abs(prm.xi));
    if (prm.xi < 0.0 && n % 2 == 1) sign = -sign;
  }
  log_mag += 2.0 * log_dim_over_factorial(lambda);
  return sign * std::exp(log_mag);
}

double negative_binomial(const ZParams& prm, int n) {
  if (prm.series == Series::SecondDegenerate) {
    throw DomainError("the second degenerate series mixes by the binomial law");
  }
  if (n < 0) throw DomainError("n must be nonnegative");
  const double c = prm.zzprime;
  return std::exp(c * std::log1p(-prm.xi) + n * std::log(prm.xi) + std::lgamma(c + n) - std::lgamma(c) -
                  std::lgamma(n + 1.0));
}

double weight_fixed_n(const ZParams& prm, const Partition& lambda) {
  const int n = lambda.size();
  double log_rise = 0.0;
  int rise_sign = 1;
  if (!log_rising(prm.zzprime, n, log_rise, rise_sign)) {
    throw DomainError("(zz')_n vanishes; the conditional measure is undefined");
  }
  double log_mag = 0.0;
  int sign = 1;
  if (!log_box_product(prm, lambda, log_mag, sign)) return 0.0;
  log_mag += -log_rise + 2.0 * log_dim_over_factorial(lambda) + std::lgamma(n + 1.0);
  return sign * rise_sign * std::exp(log_mag);
}

Rational weight_fixed_n_exact(int N, int Nprime, const Partition& lambda) {
  const int n = lambda.size();
  BigInt boxes = 1;
  for (int i = 1; i <= lambda.length(); ++i) {
    for (int j = 1; j <= lambda.part_at(i); ++j) {
      boxes *= BigInt(N + j - i) * BigInt(-Nprime + j - i);
    }
  }
  const BigInt c = BigInt(-N) * Nprime;
  BigInt rising = 1;
  BigInt factorial = 1;
  for (int k = 0; k < n; ++k) {
    rising *= c + k;
    factorial *= k + 1;
  }
  if (rising == 0) throw DomainError("(zz')_n vanishes; the conditional measure is undefined");
  const BigInt d = dim(lambda);
  const BigInt num = boxes * d * d;
  const BigInt den = rising * factorial;
  return Rational(num) / Rational(den);
}

double binomial_mixing(int N, int Nprime, double xi, int n) {
  if (!(xi < 0.0)) throw DomainError("binomial mixing requires xi < 0");
  if (N < 1 || Nprime < 1) throw DomainError("N and N' must be positive");
  const int total = N * Nprime;
  if (n < 0 || n > total) throw DomainError("n must lie in [0, N N']");
  const double p = xi / (xi - 1.0);
  return std::exp(log_binomial(total, n) + n * std::log(p) + (total - n) * std::log1p(-p));
}

double mixing_probability(const ZParams& prm, int n) {
  if (prm.series == Series::SecondDegenerate) {
    const int total = prm.degenerate_N() * prm.degenerate_Nprime();
    if (n < 0 || n > total) return 0.0;
    return binomial_mixing(prm.degenerate_N(), prm.degenerate_Nprime(), prm.xi, n);
  }
  return negative_binomial(prm, n);
}

double mixing_tail(const ZParams& prm, int n_max) {
  if (prm.series == Series::SecondDegenerate) {
    const int total = prm.degenerate_N() * prm.degenerate_Nprime();
    double tail = 0.0;
    for (int n = std::max(n_max + 1, 0); n <= total; ++n) tail += mixing_probability(prm, n);
    return tail;
  }
  const double c = prm.zzprime;
  double tail = 0.0;
  for (int n = n_max + 1;; ++n) {
    const double term = negative_binomial(prm, n);
    tail += term;
    const double ratio = std::max(prm.xi, (c + n) * prm.xi / (n + 1.0));
    // Successive ratios are bounded by `ratio` from here on, so the remainder is geometric.
    if (ratio < 1.0 && term * ratio / (1.0 - ratio) < 1e-3 * tail) {
      return tail + term * ratio / (1.0 - ratio);
    }
    if (n > n_max + 100000) return tail;
  }
}

MassResult total_mass(const ZParams& prm, int n_max) {
  if (n_max < 0) throw DomainError("n_max must be nonnegative");
  if (n_max > 45) throw SizeLimitError("total_mass is limited to n_max <= 45");
  const auto shard = parallel::map_indexed(static_cast<std::size_t>(n_max) + 1, [&](std::size_t n) {
    double sum = 0.0;
    for (const auto& lambda : enumerate_partitions(static_cast<int>(n))) sum += weight(prm, lambda);
    return sum;
  });
  MassResult out;
  for (double s : shard) out.partial_sum += s;
  out.tail_bound = mixing_tail(prm, n_max);
  return out;
}

}  // namespace zk
