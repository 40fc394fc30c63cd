#pragma once

#include <map>
#include <string>

#include "zk/partition.hpp"
#include "zk/specfun.hpp"

namespace zk {

enum class Series { Principal, Complementary, Degenerate, SecondDegenerate };

std::string to_string(Series s);

/// Validated z-measure parameters. Construct through classify().
struct ZParams {
  Complex z;
  Complex zprime;
  double xi = 0.0;
  Series series = Series::Principal;
  /// z * z', real for every admissible series.
  double zzprime = 0.0;

  /// For the degenerate series: the integer among (z, z'). For the second degenerate
  /// series: the positive integer N.
  int degenerate_N() const;
  /// Second degenerate series only: N' with the negative parameter equal to -N'.
  int degenerate_Nprime() const;
  /// Degenerate series with positive N: the other parameter minus N plus 1.
  double meixner_beta() const;
};

/// Matches (z, z', xi) against the four series. Throws InvalidParameters naming the
/// first violated condition.
ZParams classify(Complex z, Complex zprime, double xi);

/// The z-measure weight of a diagram, assembled box by box in log space.
double weight(const ZParams& prm, const Partition& lambda);

/// Mixing law of |lambda|: negative binomial (1 - xi)^{zz'} xi^n (zz')_n / n!.
/// Throws DomainError for the second degenerate series.
double negative_binomial(const ZParams& prm, int n);

/// Conditional measure on diagrams with |lambda| boxes.
double weight_fixed_n(const ZParams& prm, const Partition& lambda);

/// Conditional measure for integer (z, z') = (N, -N') as an exact rational.
Rational weight_fixed_n_exact(int N, int Nprime, const Partition& lambda);

/// Binomial mixing law of the second degenerate series, p = xi / (xi - 1).
double binomial_mixing(int N, int Nprime, double xi, int n);

/// Probability of |lambda| = n under whichever mixing law applies to the series.
double mixing_probability(const ZParams& prm, int n);

/// Sum of |P(|lambda| = n)| over n > n_max.
double mixing_tail(const ZParams& prm, int n_max);

struct MassResult {
  double partial_sum = 0.0;
  double tail_bound = 0.0;
};

/// Total weight of all diagrams with at most n_max boxes and a bound on the rest.
/// Throws SizeLimitError for n_max > 45.
MassResult total_mass(const ZParams& prm, int n_max);

}  // namespace zk
