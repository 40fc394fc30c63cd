#include "zk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "zk/error.hpp"
#include "zk/kernel.hpp"
#include "zk/parallel.hpp"

namespace zk {

namespace {

constexpr int kBruteLimit = 40;
constexpr double kSampleTail = 1e-9;

void require_distinct(const std::vector<HalfInt>& points) {
  std::set<HalfInt> seen(points.begin(), points.end());
  if (seen.size() != points.size()) throw DomainError("points must be pairwise distinct");
}

// Calls visit(config) for every strictly increasing N-tuple in [0, top].
template <class F>
void for_each_configuration(int N, int top, F&& visit) {
  std::vector<int> c(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) c[i] = i;
  if (N > top + 1) return;
  while (true) {
    visit(c);
    int i = N - 1;
    while (i >= 0 && c[i] == top - (N - 1 - i)) --i;
    if (i < 0) return;
    ++c[i];
    for (int j = i + 1; j < N; ++j) c[j] = c[j - 1] + 1;
  }
}

double vandermonde_squared(const std::vector<int>& c) {
  double v = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      const double d = c[j] - c[i];
      v *= d * d;
    }
  }
  return v;
}

double log_binomial_count(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform53(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

// Index of the first cumulative weight exceeding u * total.
std::size_t inverse_cdf(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

std::vector<CorrResult> brute_corr_many(const std::vector<std::vector<HalfInt>>& point_sets, const ZParams& prm,
                                        int n_max) {
  if (n_max < 0) throw DomainError("n_max must be nonnegative");
  if (n_max > kBruteLimit) throw SizeLimitError("brute_corr is limited to n_max <= 40");
  for (const auto& pts : point_sets) require_distinct(pts);
  const auto shards = parallel::map_indexed(static_cast<std::size_t>(n_max) + 1, [&](std::size_t n) {
    std::vector<double> sums(point_sets.size(), 0.0);
    for (const auto& lambda : enumerate_partitions(static_cast<int>(n))) {
      const double w = weight(prm, lambda);
      if (w == 0.0) continue;
      for (std::size_t s = 0; s < point_sets.size(); ++s) {
        const auto& pts = point_sets[s];
        if (std::all_of(pts.begin(), pts.end(), [&](HalfInt x) { return contains_point(lambda, x); })) sums[s] += w;
      }
    }
    return sums;
  });
  const double tail = mixing_tail(prm, n_max);
  std::vector<CorrResult> out(point_sets.size());
  for (std::size_t s = 0; s < point_sets.size(); ++s) {
    for (const auto& shard : shards) out[s].value += shard[s];
    out[s].tail_bound = tail;
    out[s].n_max_used = n_max;
  }
  return out;
}

CorrResult brute_corr(const std::vector<HalfInt>& points, const ZParams& prm, int n_max) {
  return brute_corr_many({points}, prm, n_max).front();
}

double brute_mean_size(const ZParams& prm, int n_max) {
  if (n_max > kBruteLimit) throw SizeLimitError("brute enumeration is limited to n_max <= 40");
  const auto shards = parallel::map_indexed(static_cast<std::size_t>(n_max) + 1, [&](std::size_t n) {
    double s = 0.0;
    for (const auto& lambda : enumerate_partitions(static_cast<int>(n))) s += weight(prm, lambda);
    return s * static_cast<double>(n);
  });
  double total = 0.0;
  for (double s : shards) total += s;
  return total;
}

CorrResult ensemble_brute_corr(const std::vector<int>& points, int N, const EnsembleFamily& family, int T) {
  if (N < 1) throw DomainError("ensemble size must be positive");
  if (N > 6) throw SizeLimitError("ensemble enumeration is limited to N <= 6");
  std::set<int> wanted(points.begin(), points.end());
  if (wanted.size() != points.size()) throw DomainError("points must be pairwise distinct");
  for (int p : points) {
    if (p < 0) throw DomainError("ensemble points must be nonnegative");
  }

  CorrResult out;
  int top = 0;
  std::function<double(int)> w;
  if (const auto* kr = std::get_if<KrawtchoukParams>(&family)) {
    validate(*kr);
    if (N > kr->L + 1) throw DomainError("Krawtchouk ensemble needs N <= L + 1");
    top = kr->L;
    const KrawtchoukParams prm = *kr;
    w = [prm](int x) { return krawtchouk_weight(x, prm); };
  } else {
    const MeixnerParams prm = std::get<MeixnerParams>(family);
    validate(prm);
    w = [prm](int x) { return meixner_weight(x, prm); };
    // Expected number of particles beyond the cutoff bounds the neglected probability.
    auto beyond = [&](int cut) {
      double s = 0.0;
      for (int x = cut + 1;; ++x) {
        const double k = meixner_cd_kernel(x, x, N, prm);
        s += k;
        if (x > cut + 20 && k < 1e-18 * std::max(s, 1e-300)) break;
        if (x > cut + 5000) break;
      }
      return s;
    };
    top = T > 0 ? T : N;
    if (T <= 0) {
      while (beyond(top) > 1e-14) top += 4;
    }
    out.tail_bound = beyond(top);
  }
  if (log_binomial_count(top + 1, N) > std::log(2e7)) {
    throw SizeLimitError("ensemble enumeration would exceed 2e7 configurations");
  }
  out.n_max_used = top;
  if (static_cast<int>(points.size()) > N) return out;

  std::vector<double> wt(static_cast<std::size_t>(top) + 1);
  for (int x = 0; x <= top; ++x) wt[x] = w(x);
  double total = 0.0;
  double hit = 0.0;
  for_each_configuration(N, top, [&](const std::vector<int>& c) {
    double p = vandermonde_squared(c);
    for (int x : c) p *= wt[x];
    total += p;
    std::size_t found = 0;
    for (int x : c) found += wanted.count(x);
    if (found == wanted.size()) hit += p;
  });
  out.value = hit / total;
  return out;
}

std::map<Partition, Rational> tableaux_pushforward(int N, int Nprime, int n) {
  if (N < 1 || Nprime < 1) throw DomainError("rectangle sides must be positive");
  if (N * Nprime > 16) throw SizeLimitError("tableaux enumeration is limited to N N' <= 16");
  if (n < 0 || n > N * Nprime) throw DomainError("n must lie in [0, N N']");
  const int total = N * Nprime;

  // up[k]: diagrams with k boxes inside the rectangle, with the number of saturated
  // chains from the empty diagram.
  std::vector<std::map<std::vector<int>, BigInt>> up(static_cast<std::size_t>(total) + 1);
  up[0][std::vector<int>(static_cast<std::size_t>(N), 0)] = 1;
  for (int k = 0; k < total; ++k) {
    for (const auto& [rows, count] : up[k]) {
      for (int i = 0; i < N; ++i) {
        if (rows[i] < Nprime && (i == 0 || rows[i - 1] > rows[i])) {
          auto next = rows;
          ++next[i];
          up[k + 1][next] += count;
        }
      }
    }
  }
  // Chains from each diagram up to the full rectangle, by the same recursion downward.
  std::vector<std::map<std::vector<int>, BigInt>> down(static_cast<std::size_t>(total) + 1);
  down[total][std::vector<int>(static_cast<std::size_t>(N), Nprime)] = 1;
  for (int k = total; k > 0; --k) {
    for (const auto& [rows, count] : down[k]) {
      for (int i = 0; i < N; ++i) {
        if (rows[i] > 0 && (i == N - 1 || rows[i + 1] < rows[i])) {
          auto prev = rows;
          --prev[i];
          down[k - 1][prev] += count;
        }
      }
    }
  }
  const BigInt all = up[total].begin()->second;
  std::map<Partition, Rational> out;
  for (const auto& [rows, count] : up[n]) {
    const auto it = down[n].find(rows);
    if (it == down[n].end()) continue;
    out[Partition(rows)] = Rational(BigInt(count * it->second)) / Rational(all);
  }
  return out;
}

std::vector<SampleRecord> sample(const ZParams& prm, int count, int n_max, std::uint64_t seed) {
  if (count < 0) throw DomainError("sample count must be nonnegative");
  if (n_max < 0) throw DomainError("n_max must be nonnegative");
  if (n_max > kBruteLimit) throw SizeLimitError("sampler is limited to n_max <= 40");
  const double tail = mixing_tail(prm, n_max);
  if (tail > kSampleTail) {
    throw ConfigurationError("mixing tail beyond n_max is " + std::to_string(tail) + ", above 1e-9; raise n_max");
  }
  std::vector<double> size_cdf;
  double acc = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    acc += mixing_probability(prm, n);
    size_cdf.push_back(acc);
  }

  struct Table {
    std::vector<Partition> shapes;
    std::vector<double> cdf;
  };
  std::map<int, Table> tables;
  auto table_for = [&](int n) -> const Table& {
    auto it = tables.find(n);
    if (it != tables.end()) return it->second;
    Table t;
    t.shapes = enumerate_partitions(n);
    double c = 0.0;
    for (const auto& lambda : t.shapes) {
      c += std::max(0.0, weight_fixed_n(prm, lambda));
      t.cdf.push_back(c);
    }
    return tables.emplace(n, std::move(t)).first->second;
  };

  std::vector<SampleRecord> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::mt19937_64 gen(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i))));
    const int n = static_cast<int>(inverse_cdf(size_cdf, uniform53(gen)));
    const Table& t = table_for(n);
    SampleRecord rec;
    rec.partition = t.shapes[inverse_cdf(t.cdf, uniform53(gen))];
    rec.n = n;
    rec.seed = seed;
    rec.index = i;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace zk
