// Acceptance runner. Each criterion prints one PASS/FAIL line; `--criterion k` runs one of them.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "zk/error.hpp"
#include "zk/kernel.hpp"
#include "zk/oracle.hpp"
#include "zk/psi.hpp"
#include "zk/zmeasure.hpp"

using namespace zk;

namespace {

HalfInt h(double v) { return HalfInt::from_twice(std::lround(2 * v)); }

std::vector<HalfInt> lattice(double lo, double hi) {
  std::vector<HalfInt> out;
  for (long t = std::lround(2 * lo); t <= std::lround(2 * hi); t += 2) out.push_back(HalfInt::from_twice(t));
  return out;
}

struct Named {
  const char* name;
  ZParams prm;
};

const ZParams kPrincipal = classify({1, 1}, {1, -1}, 0.3);
const ZParams kComplementary = classify(0.4, 0.7, 0.55);
const ZParams kNearCritical = classify({0.5, 1.5}, {0.5, -1.5}, 0.85);

std::vector<Named> psi_points() {
  return {{"principal", kPrincipal}, {"complementary", kComplementary}, {"near-critical", kNearCritical}};
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    note(what + (ok ? "" : " [failed]"));
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

// 1. Total mass of the z-measure at n_max = 30.
Outcome normalization() {
  Outcome o;
  const std::vector<Named> pts = {
      {"principal", kPrincipal}, {"complementary", kComplementary}, {"degenerate", classify(3.0, 3.7, 0.3)}};
  for (const auto& [name, prm] : pts) {
    const auto m = total_mass(prm, 30);
    const double err = std::abs(1.0 - m.partial_sum);
    const bool ok = m.tail_bound < 1e-10 && err <= m.tail_bound;
    std::string line = std::string(name) + ": |1 - mass| " + sci(err) + ", tail " + sci(m.tail_bound);
    if (!ok) {
      // Smallest cutoff at which the same statement would hold.
      for (int n = 31; n <= 45; ++n) {
        const auto r = total_mass(prm, n);
        if (r.tail_bound < 1e-10 && std::abs(1.0 - r.partial_sum) <= r.tail_bound) {
          line += ", holds from n_max " + std::to_string(n);
          break;
        }
      }
    }
    o.require(ok, line);
  }
  return o;
}

// 2. Brute-force correlations against kernel determinants.
Outcome determinantal() {
  Outcome o;
  const std::vector<HalfInt> base = {h(-2.5), h(-0.5), h(0.5), h(1.5), h(3.5)};
  std::vector<std::vector<HalfInt>> sets;
  for (unsigned mask = 1; mask < 32; ++mask) {
    std::vector<HalfInt> s;
    for (int i = 0; i < 5; ++i) {
      if (mask & (1u << i)) s.push_back(base[i]);
    }
    if (s.size() <= 3) sets.push_back(s);
  }
  for (const auto& [name, prm] : std::vector<Named>{{"principal", kPrincipal}, {"complementary", kComplementary}}) {
    const auto brute = brute_corr_many(sets, prm, 30);
    double worst = 0.0, tail = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const double d = std::abs(corr_det(sets[i], prm, KernelMethod::Series) - brute[i].value);
      ok = ok && d <= brute[i].tail_bound + 1e-7;
      worst = std::max(worst, d);
      tail = brute[i].tail_bound;
    }
    o.require(ok, std::string(name) + ": " + std::to_string(sets.size()) + " sets, max |det - brute| " + sci(worst) +
                      ", tail " + sci(tail));
  }
  return o;
}

// 3. Series, integrable and double-contour kernels on a 10 x 10 grid.
Outcome triple_agreement() {
  Outcome o;
  const auto pts = lattice(-4.5, 4.5);
  for (const auto& [name, prm] : psi_points()) {
    const auto s = kernel_matrix(pts, prm, KernelMethod::Series);
    const auto c = kernel_matrix(pts, prm, KernelMethod::CD);
    const auto q = kernel_matrix(pts, prm, KernelMethod::Contour);
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        worst = std::max({worst, std::abs(s.at(i, j) - c.at(i, j)), std::abs(s.at(i, j) - q.at(i, j)),
                          std::abs(c.at(i, j) - q.at(i, j))});
      }
    }
    o.require(worst <= 1e-7, std::string(name) + " (xi " + fmt("%g", prm.xi) + "): " + sci(worst));
  }
  return o;
}

// D psi_a at x against a (1 - xi) psi_a(x), relative to the size of the three terms of D.
double eigen_residual(HalfInt a, HalfInt x, const ZParams& prm) {
  auto f = [&](HalfInt t) { return psi(a, t, prm); };
  const double lhs = apply_D(f, x, prm);
  const double rhs = a.value() * (1 - prm.xi) * f(x);
  const Complex z = prm.z, zp = prm.zprime;
  const double xi = prm.xi, xv = x.value();
  const double up = std::sqrt(std::max(0.0, xi * ((z + xv + 0.5) * (zp + xv + 0.5)).real()));
  const double down = std::sqrt(std::max(0.0, xi * ((z + xv - 0.5) * (zp + xv - 0.5)).real()));
  const double diag = xv + xi * ((z + zp).real() + xv);
  const double scale = std::abs(up * f(x.shifted(1))) + std::abs(down * f(x.shifted(-1))) + std::abs(diag * f(x));
  return std::abs(lhs - rhs) / std::max(scale, 1e-300);
}

// 4. Eigenfunction suite.
Outcome eigenbasis() {
  Outcome o;
  const auto grid = lattice(-9.5, 9.5);
  double eig = 0.0, three = 0.0, gram = 0.0, sym = 0.0;
  for (const auto& [name, prm] : psi_points()) {
    const ZParams neg = classify(-prm.z, -prm.zprime, prm.xi);
    for (const HalfInt a : grid) {
      for (const HalfInt x : grid) {
        eig = std::max(eig, eigen_residual(a, x, prm));
        three = std::max(three, three_term_residual(a, x, prm));
        const double v = psi(a, x, prm);
        const double sign = (integer_sum(x, a) % 2 == 0) ? 1.0 : -1.0;
        sym = std::max({sym, std::abs(v - psi(x, a, neg)) / std::abs(v),
                        std::abs(v - sign * psi(-a, -x, neg)) / std::abs(v)});
      }
    }

    // Gram matrix of psi_a, |a| <= 11/2, with the x window grown until every function is
    // below 1e-9 on three consecutive points at both ends.
    const auto index = lattice(-5.5, 5.5);
    auto edge = [&](long r) {
      double m = 0.0;
      for (const HalfInt a : index) {
        m = std::max({m, std::abs(psi(a, HalfInt::above(r), prm)), std::abs(psi(a, HalfInt::above(-r - 1), prm))});
      }
      return m;
    };
    long reach = 10;
    while (edge(reach) > 1e-9 || edge(reach - 1) > 1e-9 || edge(reach - 2) > 1e-9) reach += 5;
    const auto xs = lattice(-reach - 0.5, reach + 0.5);
    std::vector<std::vector<double>> rows;
    for (const HalfInt a : index) {
      std::vector<double> r;
      for (const HalfInt x : xs) r.push_back(psi(a, x, prm));
      rows.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows.size(); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) s += rows[i][k] * rows[j][k];
        gram = std::max(gram, std::abs(s - (i == j)));
      }
    }
  }
  o.require(eig <= 1e-9, "eigenvalue residual " + sci(eig));
  o.require(three <= 1e-9, "three-term residual " + sci(three));
  o.require(gram <= 1e-8, "Gram deviation " + sci(gram));
  o.require(sym <= 1e-10, "symmetries (relative) " + sci(sym));

  // Contour form of the regularized Gauss function on 30 random parameter draws.
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-5.0, 5.0), uxi(0.1, 0.8);
  std::uniform_int_distribution<int> m(-6, 6);
  double gauss_contour = 0.0;
  for (int i = 0; i < 30; ++i) {
    Complex A(u(gen), u(gen)), B(u(gen), u(gen));
    if (std::abs(A) > 5) A *= 5 / std::abs(A);
    if (std::abs(B) > 5) B *= 5 / std::abs(B);
    const int M = m(gen);
    const double xi = uxi(gen);
    const Complex series = hyp2f1_reg(A, B, double(M + 1), xi / (xi - 1));
    const Complex contour = hyp2f1_reg_contour(A, B, M, xi);
    gauss_contour = std::max(gauss_contour, std::abs(series - contour) / std::max(std::abs(series), 1e-300));
  }
  o.require(gauss_contour <= 1e-9, "contour vs series over 30 draws " + sci(gauss_contour));
  return o;
}

// 5. Degenerate series against Meixner functions.
Outcome degenerate_bridge() {
  Outcome o;
  const int N = 3;
  const double beta = 1.7, xi = 0.3;
  const ZParams d = classify(double(N), N + beta - 1.0, xi);
  const MeixnerParams m{beta, xi};
  double pv = 0.0, kv = 0.0;
  for (int k = 0; k < N; ++k) {
    for (int xt = 0; xt <= 12; ++xt) {
      pv = std::max(pv, std::abs(psi(h(N - k - 0.5), h(xt - N + 0.5), d) - meixner_tilde(k, xt, m)));
    }
  }
  for (int xt = 0; xt <= 12; ++xt) {
    for (int yt = 0; yt <= 12; ++yt) {
      kv = std::max(kv, std::abs(kernel_series(h(xt - N + 0.5), h(yt - N + 0.5), d) - meixner_cd_kernel(xt, yt, N, m)));
    }
  }
  int nonzero = 0;
  for (const HalfInt a : lattice(N + 0.5, 40.5)) {
    for (int xt = 0; xt <= 12; ++xt) nonzero += psi(a, h(xt - N + 0.5), d) != 0.0;
  }
  o.require(pv <= 1e-10, "psi vs Meixner functions " + sci(pv));
  o.require(kv <= 1e-10, "kernel vs Meixner kernel " + sci(kv));
  o.require(nonzero == 0, "nonzero terms beyond N: " + std::to_string(nonzero));
  return o;
}

// 6. Second degenerate series.
Outcome krawtchouk_series() {
  Outcome o;
  const ZParams p = classify(2.0, -3.0, -0.7);
  const KrawtchoukParams k{0.7 / 1.7, 4};
  double Z = 0.0;
  for (int a = 0; a <= 4; ++a) {
    for (int b = a + 1; b <= 4; ++b) Z += (b - a) * (b - a) * krawtchouk_weight(a, k) * krawtchouk_weight(b, k);
  }
  double worst = 0.0;
  int shapes = 0;
  for (int n = 0; n <= 6; ++n) {
    for (const auto& l : enumerate_partitions(n)) {
      if (l.length() > 2 || l.part_at(1) > 3) continue;
      const int x1 = l.part_at(1) + 1, x2 = l.part_at(2);
      const double q = (x1 - x2) * (x1 - x2) * krawtchouk_weight(x1, k) * krawtchouk_weight(x2, k) / Z;
      worst = std::max(worst, std::abs(weight(p, l) - q));
      ++shapes;
    }
  }
  o.require(shapes == 10 && worst <= 1e-12, "weights vs Krawtchouk ensemble over " + std::to_string(shapes) +
                                                " shapes " + sci(worst));

  int checked = 0, mismatched = 0;
  for (int N = 1; N <= 12; ++N) {
    for (int M = 1; N * M <= 12; ++M) {
      for (int n = 0; n <= N * M; ++n) {
        for (const auto& [l, q] : tableaux_pushforward(N, M, n)) {
          ++checked;
          mismatched += q != weight_fixed_n_exact(N, M, l);
        }
      }
    }
  }
  const auto two = tableaux_pushforward(2, 2, 2);
  const bool half = two.size() == 2 && two.at(Partition({2})) == Rational(1, 2) &&
                    two.at(Partition({1, 1})) == Rational(1, 2);
  o.require(mismatched == 0 && half, "tableaux push-forward: " + std::to_string(checked) + " exact comparisons, " +
                                         std::to_string(mismatched) + " mismatches");
  return o;
}

// 7. Projection structure and the mean size.
Outcome projection() {
  Outcome o;
  const ZParams& prm = kPrincipal;
  // Window [-L, L] wide enough that K between the inner points and the window edge is
  // below 1e-12.
  const auto inner = lattice(-4.5, 4.5);
  auto K = [&](HalfInt x, HalfInt y) { return x == y ? kernel_series(x, y, prm) : kernel_cd(x, y, prm); };
  long L = 10;
  auto edge = [&](long r) {
    double m = 0.0;
    for (const HalfInt x : inner) m = std::max({m, std::abs(K(x, h(r + 0.5))), std::abs(K(x, h(-r - 0.5)))});
    return m;
  };
  while (edge(L) > 1e-12) L += 5;
  const auto window = lattice(-L - 0.5, L + 0.5);
  std::vector<std::vector<double>> row(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) {
    for (const HalfInt t : window) row[i].push_back(K(inner[i], t));
  }
  // Remainder outside the window: the entries decay geometrically, so the last shell
  // of five points on each side, scaled up by ten, dominates what was dropped.
  double worst = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    for (std::size_t j = 0; j < inner.size(); ++j) {
      double s = 0.0, shell = 0.0;
      for (std::size_t k = 0; k < window.size(); ++k) {
        const double term = row[i][k] * row[j][k];
        s += term;
        if (k < 5 || k + 5 >= window.size()) shell += std::abs(term);
      }
      worst = std::max(worst, std::abs(s - K(inner[i], inner[j])));
      tail = std::max(tail, 10 * shell);
    }
  }
  o.require(worst <= 1e-7 + tail, "max |K^2 - K| " + sci(worst) + " on window L " + std::to_string(L) + ", tail " +
                                      sci(tail));

  // Particles above zero against holes below zero, and the mean size from the density.
  double particles = 0.0, holes = 0.0, mean = 0.0;
  for (long t = 0; t <= 40; ++t) {
    const HalfInt up = h(t + 0.5), down = h(-t - 0.5);
    const double kp = kernel_series(up, up, prm), kd = 1.0 - kernel_series(down, down, prm);
    particles += kp;
    holes += kd;
    mean += up.value() * kp + std::abs(down.value()) * kd;
  }
  const double exact = prm.xi * prm.zzprime / (1 - prm.xi);
  const double brute = brute_mean_size(prm, 40);
  o.require(std::abs(particles - holes) <= 1e-6, "particles - holes " + sci(particles - holes));
  o.require(std::abs(mean - exact) <= 1e-6, "E|lambda| from the density " + sci(std::abs(mean - exact)));
  o.require(std::abs(brute - exact) <= 1e-6, "E|lambda| by enumeration " + sci(std::abs(brute - exact)));
  return o;
}

// 8. Sampler against the kernel and the mixing law.
Outcome monte_carlo() {
  Outcome o;
  const ZParams& prm = kPrincipal;
  const int count = 100000, n_max = 30;
  const auto draws = sample(prm, count, n_max, 20240607);
  std::vector<long> hist(n_max + 1, 0);
  double occupied = 0.0, s1 = 0.0, s2 = 0.0;
  for (const auto& r : draws) {
    occupied += contains_point(r.partition, h(0.5));
    s1 += r.n;
    s2 += double(r.n) * r.n;
    ++hist[r.n];
  }
  const double k = kernel_series(h(0.5), h(0.5), prm);
  const double freq = occupied / count;
  const double se_k = std::sqrt(k * (1 - k) / count);
  o.require(std::abs(freq - k) <= 3 * se_k, "frequency of 1/2 " + fmt("%.5f", freq) + " vs K " + fmt("%.5f", k) +
                                                 " (" + fmt("%.2f", std::abs(freq - k) / se_k) + " SE)");

  const double mean = s1 / count;
  const double sd = std::sqrt((s2 - count * mean * mean) / (count - 1));
  const double exact = prm.xi * prm.zzprime / (1 - prm.xi);
  const double se_m = sd / std::sqrt(double(count));
  o.require(std::abs(mean - exact) <= 3 * se_m, "mean size " + fmt("%.5f", mean) + " vs " + fmt("%.5f", exact) +
                                                    " (" + fmt("%.2f", std::abs(mean - exact) / se_m) + " SE)");

  // Chi-square on |lambda|, pooling the upper cells until each expects at least five draws.
  double chi2 = 0.0, mass = 0.0;
  int cells = 0;
  double pooled_expected = 0.0;
  long pooled_observed = 0;
  for (int n = 0; n <= n_max; ++n) mass += mixing_probability(prm, n);
  for (int n = 0; n <= n_max; ++n) {
    pooled_expected += count * mixing_probability(prm, n) / mass;
    pooled_observed += hist[n];
    const double rest = count - [&] {
      double e = 0.0;
      for (int m = 0; m <= n; ++m) e += count * mixing_probability(prm, m) / mass;
      return e;
    }();
    if (pooled_expected >= 5 && (rest >= 5 || n == n_max)) {
      if (rest < 5) {
        // Fold the remaining cells into this one.
        pooled_expected += rest;
        for (int m = n + 1; m <= n_max; ++m) pooled_observed += hist[m];
        n = n_max;
      }
      chi2 += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
      ++cells;
      pooled_expected = 0.0;
      pooled_observed = 0;
    }
  }
  const double pvalue = boost::math::gamma_q((cells - 1) / 2.0, chi2 / 2.0);
  o.require(pvalue >= 1e-3, "chi-square " + fmt("%.2f", chi2) + " on " + std::to_string(cells - 1) + " dof, p " +
                                fmt("%.4f", pvalue));
  return o;
}

// 9. Small xi: the kernel approaches the indicator of the negative half-line.
Outcome small_xi() {
  Outcome o;
  const ZParams prm = classify({1, 1}, {1, -1}, 1e-6);
  double worst = 0.0;
  for (const HalfInt x : lattice(-3.5, 3.5)) {
    worst = std::max(worst, std::abs(kernel_series(x, x, prm) - (x.value() < 0 ? 1.0 : 0.0)));
  }
  o.require(worst <= 1e-4, "max |K(x,x) - 1{x<0}| " + sci(worst));
  return o;
}

const std::vector<std::pair<const char*, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<const char*, std::function<Outcome()>>> c = {
      {"normalization", normalization},
      {"determinantal identity", determinantal},
      {"triple kernel agreement", triple_agreement},
      {"eigenbasis", eigenbasis},
      {"degenerate bridge", degenerate_bridge},
      {"Krawtchouk series", krawtchouk_series},
      {"projection structure", projection},
      {"Monte Carlo", monte_carlo},
      {"small xi limit", small_xi}};
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion k]\n");
      return 2;
    }
  }
  if (only < 0 || only > int(criteria().size())) {
    std::fprintf(stderr, "criterion must be between 1 and %zu\n", criteria().size());
    return 2;
  }
  bool all = true;
  for (std::size_t k = 1; k <= criteria().size(); ++k) {
    if (only != 0 && int(k) != only) continue;
    const auto& [name, fn] = criteria()[k - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu (%s): %s: %s [%.1fs]\n", k, name, r.pass ? "PASS" : "FAIL", r.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
