#pragma once

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "zk/partition.hpp"
#include "zk/specfun.hpp"
#include "zk/zmeasure.hpp"

namespace zk {

struct CorrResult {
  double value = 0.0;
  double tail_bound = 0.0;
  int n_max_used = 0;
};

/// Correlation function by direct enumeration: total weight of the diagrams with at most
/// n_max boxes whose Maya diagram contains every point. Throws DomainError on repeated
/// points and SizeLimitError for n_max > 40.
CorrResult brute_corr(const std::vector<HalfInt>& points, const ZParams& prm, int n_max);

/// Several point sets against one enumeration; results in input order.
std::vector<CorrResult> brute_corr_many(const std::vector<std::vector<HalfInt>>& point_sets, const ZParams& prm,
                                        int n_max);

/// E|lambda| restricted to |lambda| <= n_max, by enumeration.
double brute_mean_size(const ZParams& prm, int n_max);

using EnsembleFamily = std::variant<MeixnerParams, KrawtchoukParams>;

/// Correlation function of the N-point orthogonal polynomial ensemble by enumerating
/// configurations. Krawtchouk is exact. Meixner sums configurations inside [0, T] (T = 0
/// picks a cutoff automatically) and bounds the rest by the expected number of particles
/// beyond T. N <= 6.
CorrResult ensemble_brute_corr(const std::vector<int>& points, int N, const EnsembleFamily& family, int T = 0);

/// Exact law of the shape after n steps of a uniformly random standard tableau of the
/// N x N' rectangle, by path counting on the Young lattice. Requires N N' <= 16.
std::map<Partition, Rational> tableaux_pushforward(int N, int Nprime, int n);

struct SampleRecord {
  Partition partition;
  int n = 0;
  std::uint64_t seed = 0;
  int index = 0;
};

/// Exact two-stage sampler: |lambda| from the mixing law truncated at n_max, then lambda
/// by inverse CDF over the partitions of n in enumeration order. Record i depends only on
/// (seed, i). Throws ConfigurationError when the mixing tail beyond n_max exceeds 1e-9.
std::vector<SampleRecord> sample(const ZParams& prm, int count, int n_max, std::uint64_t seed);

}  // namespace zk
