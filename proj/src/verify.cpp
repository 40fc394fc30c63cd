#include "zk/verify.hpp"

#include <cmath>
#include <functional>

#include "zk/error.hpp"
#include "zk/kernel.hpp"
#include "zk/oracle.hpp"
#include "zk/psi.hpp"

namespace zk {

namespace {

class Table {
 public:
  Table(std::string suite, const std::map<std::string, double>& overrides, std::vector<CheckResult>& out)
      : suite_(std::move(suite)), overrides_(overrides), out_(out) {}

  void add(const std::string& name, const std::string& reference, double tolerance, double attained) {
    if (auto it = overrides_.find(name); it != overrides_.end()) tolerance = it->second;
    out_.push_back({suite_, name, reference, tolerance, attained, std::isfinite(attained) && attained <= tolerance});
  }

  // Evaluates `attained`, recording an exception as an infinite error.
  void run(const std::string& name, const std::string& reference, double tolerance,
           const std::function<double()>& attained) {
    double value = HUGE_VAL;
    try {
      value = attained();
    } catch (const std::exception&) {
      value = HUGE_VAL;
    }
    add(name, reference, tolerance, value);
  }

 private:
  std::string suite_;
  const std::map<std::string, double>& overrides_;
  std::vector<CheckResult>& out_;
};

ZParams principal() { return classify({1.0, 1.0}, {1.0, -1.0}, 0.3); }
ZParams complementary() { return classify(0.4, 0.7, 0.55); }
ZParams near_critical() { return classify({1.0, 1.0}, {1.0, -1.0}, 0.85); }
ZParams negated(const ZParams& p) { return classify(-p.z, -p.zprime, p.xi); }

std::vector<HalfInt> lattice(long lo_twice, long hi_twice) {
  std::vector<HalfInt> out;
  for (long t = lo_twice; t <= hi_twice; t += 2) out.push_back(HalfInt::from_twice(t));
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// |D psi_a - a(1 - xi) psi_a| over the sum of magnitudes of the three terms of D psi_a.
double eigen_residual(HalfInt a, HalfInt x, const ZParams& prm) {
  auto f = [&](HalfInt t) { return psi(a, t, prm); };
  auto coef = [&](double s) {
    const double q = prm.xi * ((prm.z + x.value() + s) * (prm.zprime + x.value() + s)).real();
    return q > 0 ? std::sqrt(q) : 0.0;
  };
  const double center = f(x);
  double scale = std::abs((x.value() + prm.xi * ((prm.z + prm.zprime).real() + x.value())) * center);
  if (coef(0.5) != 0) scale += std::abs(coef(0.5) * f(x.shifted(1)));
  if (coef(-0.5) != 0) scale += std::abs(coef(-0.5) * f(x.shifted(-1)));
  return std::abs(apply_D(f, x, prm) - a.value() * (1.0 - prm.xi) * center) / std::max(scale, 1e-300);
}

void partitions_suite(Table& t) {
  t.run("dim-vs-corner-recursion", "standard tableaux count: product formula vs recursion", 0.0, [] {
    double bad = 0;
    for (int n = 0; n <= 12; ++n) {
      for (const auto& l : enumerate_partitions(n)) bad += dim(l) != dim_oracle(l);
    }
    return bad;
  });
  t.run("dim-square-sum", "sum of dim^2 over partitions of n equals n!", 0.0, [] {
    double bad = 0;
    BigInt fact = 1;
    for (int n = 0; n <= 16; ++n) {
      if (n > 0) fact *= n;
      BigInt s = 0;
      for (const auto& l : enumerate_partitions(n)) s += dim(l) * dim(l);
      bad += s != fact;
    }
    return bad;
  });
  t.run("maya-roundtrip", "Maya diagram encoding is a bijection", 0.0, [] {
    double bad = 0;
    for (int n = 0; n <= 12; ++n) {
      for (const auto& l : enumerate_partitions(n)) {
        const auto m = maya(l);
        bad += maya_inverse(m) != l || m.added.size() != m.removed.size();
      }
    }
    return bad;
  });
}

void specfun_suite(Table& t) {
  const std::vector<Complex> pts = {{0.3, 0.7}, {-2.6, 1.1}, {5.5, 0.0}, {-7.25, 0.0}, {12.0, 30.0}, {0.5, -40.0}};
  t.run("log-gamma-recurrence", "Gamma(w + 1) = w Gamma(w)", 1e-13, [&] {
    double worst = 0;
    for (Complex w : pts) worst = std::max(worst, std::abs(std::exp(log_gamma(w + 1.0) - log_gamma(w)) - w) / std::abs(w));
    return worst;
  });
  t.run("log-gamma-reflection", "Gamma(w) Gamma(1 - w) = pi / sin(pi w)", 1e-12, [&] {
    double worst = 0;
    for (Complex w : pts) {
      if (std::abs(w.imag()) > 10) continue;
      const Complex lhs = std::exp(log_gamma(w) + log_gamma(1.0 - w));
      const Complex rhs = M_PI / std::sin(M_PI * w);
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    return worst;
  });
  t.run("pfaff-vs-direct-series", "Pfaff transformation of the Gauss function", 1e-12, [] {
    double worst = 0;
    const Complex As[] = {{0.7, 0.3}, {-2.5, 0.0}, {1.5, -1.0}};
    const Complex Bs[] = {{-0.4, 0.0}, {2.2, 1.0}, {0.5, 0.5}};
    const Complex Cs[] = {{1.3, 0.0}, {-2.0, 0.0}, {4.0, 0.0}};
    for (double w : {-0.2, -0.6}) {
      for (auto A : As) {
        for (auto B : Bs) {
          for (auto C : Cs) {
            const Complex a = hyp2f1_reg(A, B, C, w);
            const Complex b = hyp2f1_reg_direct(A, B, C, w);
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-3));
          }
        }
      }
    }
    return worst;
  });
  t.run("meixner-orthonormality", "orthonormal Meixner functions", 1e-10, [] {
    const MeixnerParams m{1.7, 0.3};
    double worst = 0;
    for (int i = 0; i <= 4; ++i) {
      for (int j = 0; j <= 4; ++j) {
        double s = 0;
        for (int x = 0; x <= 400; ++x) s += meixner_tilde(i, x, m) * meixner_tilde(j, x, m);
        worst = std::max(worst, std::abs(s - (i == j)));
      }
    }
    return worst;
  });
  t.run("krawtchouk-orthogonality", "Krawtchouk polynomials under the binomial weight", 1e-12, [] {
    const KrawtchoukParams k{0.4, 6};
    double worst = 0;
    for (int i = 0; i <= 6; ++i) {
      for (int j = 0; j <= 6; ++j) {
        double s = 0;
        for (int x = 0; x <= 6; ++x) s += krawtchouk(i, x, k) * krawtchouk(j, x, k) * krawtchouk_weight(x, k);
        worst = std::max(worst, std::abs(s - (i == j ? krawtchouk_norm2(i, k) : 0.0)) / krawtchouk_norm2(i, k));
      }
    }
    return worst;
  });
}

void zmeasure_suite(Table& t) {
  t.run("normalization", "total mass one (principal series, 30 boxes)", 1e-13, [] {
    const auto m = total_mass(principal(), 30);
    return std::max(0.0, std::abs(1.0 - m.partial_sum) - m.tail_bound);
  });
  t.run("negative-binomial-mean", "mean of the mixing law is xi zz' / (1 - xi)", 1e-10, [] {
    const ZParams p = principal();
    double s = 0;
    for (int n = 0; n <= 400; ++n) s += n * negative_binomial(p, n);
    return rel(s, p.xi * p.zzprime / (1 - p.xi));
  });
  t.run("mixing-identity", "weight = conditional weight times mixing law", 1e-12, [] {
    double worst = 0;
    for (const ZParams& p : {principal(), complementary(), classify(3.0, 3.7, 0.3)}) {
      for (int n = 0; n <= 10; ++n) {
        for (const auto& l : enumerate_partitions(n)) {
          const double w = weight(p, l);
          if (w == 0) continue;
          worst = std::max(worst, rel(weight_fixed_n(p, l) * negative_binomial(p, n), w));
        }
      }
    }
    return worst;
  });
  t.run("transposition-symmetry", "weight(z, z', lambda) = weight(-z, -z', lambda')", 1e-12, [] {
    double worst = 0;
    for (const ZParams& p : {principal(), complementary()}) {
      const ZParams q = negated(p);
      for (int n = 0; n <= 10; ++n) {
        for (const auto& l : enumerate_partitions(n)) worst = std::max(worst, rel(weight(q, l.transpose()), weight(p, l)));
      }
    }
    return worst;
  });
  t.run("nonnegativity", "weights are nonnegative on every admissible series", 0.0, [] {
    double bad = 0;
    for (const ZParams& p : {principal(), complementary(), classify(3.0, 3.7, 0.3), classify(2.0, -3.0, -0.7)}) {
      for (int n = 0; n <= 12; ++n) {
        for (const auto& l : enumerate_partitions(n)) bad += weight(p, l) < 0;
      }
    }
    return bad;
  });
  t.run("degenerate-support", "support of the degenerate series", 0.0, [] {
    double bad = 0;
    const ZParams d = classify(3.0, 3.7, 0.3);
    const ZParams s = classify(2.0, -3.0, -0.7);
    for (int n = 0; n <= 10; ++n) {
      for (const auto& l : enumerate_partitions(n)) {
        bad += (weight(d, l) == 0.0) != (l.length() > 3);
        const bool fits = l.length() <= 2 && l.part_at(1) <= 3;
        bad += (weight(s, l) > 0.0) != fits;
      }
    }
    return bad;
  });
}

void psi_suite(Table& t) {
  const auto grid = lattice(-11, 11);
  t.run("eigenvalue-equation", "D psi_a = a (1 - xi) psi_a", 1e-9, [&] {
    double worst = 0;
    for (const ZParams& p : {principal(), complementary(), near_critical()}) {
      for (HalfInt a : grid) {
        for (HalfInt x : grid) worst = std::max(worst, eigen_residual(a, x, p));
      }
    }
    return worst;
  });
  t.run("three-term-relation", "three-term relation in the index a", 1e-9, [&] {
    double worst = 0;
    for (const ZParams& p : {principal(), complementary(), near_critical()}) {
      for (HalfInt a : grid) {
        for (HalfInt x : grid) {
          const double scale = std::max(1.0, std::abs(x.value() * psi(a, x, p)));
          worst = std::max(worst, three_term_residual(a, x, p) / scale);
        }
      }
    }
    return worst;
  });
  t.run("index-argument-symmetry", "psi_a(x; z, z') = psi_x(a; -z, -z')", 1e-10, [&] {
    double worst = 0;
    for (const ZParams& p : {principal(), complementary()}) {
      const ZParams q = negated(p);
      for (HalfInt a : grid) {
        for (HalfInt x : grid) worst = std::max(worst, rel(psi(x, a, q), psi(a, x, p)));
      }
    }
    return worst;
  });
  t.run("reflection-symmetry", "psi_a(x; z, z') = (-1)^(x+a) psi_-a(-x; -z, -z')", 1e-10, [&] {
    double worst = 0;
    for (const ZParams& p : {principal(), complementary()}) {
      const ZParams q = negated(p);
      for (HalfInt a : grid) {
        for (HalfInt x : grid) {
          const double sign = integer_sum(x, a) % 2 == 0 ? 1.0 : -1.0;
          worst = std::max(worst, rel(sign * psi(-a, -x, q), psi(a, x, p)));
        }
      }
    }
    return worst;
  });
  t.run("contour-representation", "psi as a single contour integral", 1e-9, [] {
    double worst = 0;
    for (const ZParams& p : {principal(), complementary()}) {
      for (HalfInt a : lattice(-9, 9)) {
        for (HalfInt x : lattice(-9, 9)) worst = std::max(worst, std::abs(psi(a, x, p) - psi_contour(a, x, p)));
      }
    }
    return worst;
  });
  t.run("orthonormality", "psi_a form an orthonormal system", 1e-8, [] {
    const ZParams p = principal();
    const auto idx = lattice(-11, 11);
    std::vector<std::vector<double>> cols;
    for (HalfInt a : idx) {
      std::vector<double> c;
      for (HalfInt x : lattice(-161, 161)) c.push_back(psi(a, x, p));
      cols.push_back(std::move(c));
    }
    double worst = 0;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        double s = 0;
        for (std::size_t k = 0; k < cols[i].size(); ++k) s += cols[i][k] * cols[j][k];
        worst = std::max(worst, std::abs(s - (i == j)));
      }
    }
    return worst;
  });
}

void kernel_suite(Table& t) {
  t.run("series-vs-integrable", "projection series vs integrable form", 1e-8, [] {
    double worst = 0;
    for (const ZParams& p : {principal(), complementary()}) {
      const auto pts = lattice(-9, 9);
      const auto s = kernel_matrix(pts, p, KernelMethod::Series);
      const auto c = kernel_matrix(pts, p, KernelMethod::CD);
      for (std::size_t k = 0; k < s.entries.size(); ++k) worst = std::max(worst, std::abs(s.entries[k] - c.entries[k]));
    }
    return worst;
  });
  t.run("series-vs-double-contour", "projection series vs gauged double contour", 1e-7, [] {
    double worst = 0;
    const auto pts = lattice(-7, 7);
    const auto s = kernel_matrix(pts, principal(), KernelMethod::Series);
    const auto c = kernel_matrix(pts, principal(), KernelMethod::Contour, Gauge::Underlined);
    for (std::size_t k = 0; k < s.entries.size(); ++k) worst = std::max(worst, std::abs(s.entries[k] - c.entries[k]));
    return worst;
  });
  t.run("gauge-determinant", "gauge transformation preserves determinants", 1e-9, [] {
    const std::vector<HalfInt> pts = {HalfInt::from_twice(-1), HalfInt::from_twice(3)};
    const auto u = kernel_matrix(pts, principal(), KernelMethod::Series);
    const auto h = kernel_matrix(pts, principal(), KernelMethod::Contour, Gauge::Hatted);
    return std::abs(u.determinant() - h.determinant());
  });
  t.run("underlined-symmetry", "underlined kernel is symmetric", 1e-10, [] {
    return kernel_matrix(lattice(-9, 9), complementary(), KernelMethod::Series).asymmetry();
  });
  t.run("degenerate-bridge", "psi series reduces to the Meixner kernel", 1e-10, [] {
    const ZParams p = classify(3.0, 3.7, 0.3);
    std::vector<HalfInt> pts;
    for (int xt = 0; xt <= 12; ++xt) pts.push_back(HalfInt::above(xt - 3));
    const auto s = kernel_matrix(pts, p, KernelMethod::Series);
    const auto m = kernel_matrix(pts, p, KernelMethod::MeixnerCD);
    double worst = 0;
    for (std::size_t k = 0; k < s.entries.size(); ++k) worst = std::max(worst, std::abs(s.entries[k] - m.entries[k]));
    return worst;
  });
  t.run("krawtchouk-full-projection", "complete Krawtchouk system gives the identity", 1e-12, [] {
    const KrawtchoukParams k{0.35, 5};
    double worst = 0;
    for (int x = 0; x <= 5; ++x) {
      for (int y = 0; y <= 5; ++y) worst = std::max(worst, std::abs(krawtchouk_cd_kernel(x, y, 6, k) - (x == y)));
    }
    return worst;
  });
}

void oracle_suite(Table& t) {
  t.run("brute-vs-determinant", "correlation functions are kernel determinants", 1e-7, [] {
    const ZParams p = principal();
    const std::vector<std::vector<HalfInt>> sets = {{HalfInt::from_twice(1)},
                                                    {HalfInt::from_twice(-1), HalfInt::from_twice(3)},
                                                    {HalfInt::from_twice(-5), HalfInt::from_twice(1)}};
    const auto brute = brute_corr_many(sets, p, 30);
    double worst = 0;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const double det = corr_det(sets[s], p, KernelMethod::Series);
      worst = std::max(worst, std::abs(det - brute[s].value) - brute[s].tail_bound);
    }
    return std::max(worst, 0.0);
  });
  t.run("krawtchouk-ensemble", "second degenerate series is a Krawtchouk ensemble", 1e-12, [] {
    const ZParams p = classify(2.0, -3.0, -0.7);
    const KrawtchoukParams k{0.7 / 1.7, 4};
    double total = 0;
    std::vector<std::pair<Partition, double>> probs;
    for (int a = 0; a <= 4; ++a) {
      for (int b = a + 1; b <= 4; ++b) {
        double q = (b - a) * (b - a) * krawtchouk_weight(a, k) * krawtchouk_weight(b, k);
        total += q;
        probs.emplace_back(Partition({b - 1, a}), q);
      }
    }
    double worst = 0;
    for (const auto& [l, q] : probs) worst = std::max(worst, rel(weight(p, l), q / total));
    return worst;
  });
  t.run("tableaux-pushforward", "shape law of a random rectangular tableau", 0.0, [] {
    double bad = 0;
    for (int N = 1; N <= 3; ++N) {
      for (int M = 1; M <= 3; ++M) {
        for (int n = 0; n <= N * M; ++n) {
          for (const auto& [l, q] : tableaux_pushforward(N, M, n)) bad += q != weight_fixed_n_exact(N, M, l);
        }
      }
    }
    return bad;
  });
  t.run("krawtchouk-det-vs-enumeration", "Krawtchouk ensemble is determinantal", 1e-12, [] {
    const KrawtchoukParams k{0.4, 3};
    const double det = krawtchouk_cd_kernel(0, 0, 2, k) * krawtchouk_cd_kernel(1, 1, 2, k) -
                       krawtchouk_cd_kernel(0, 1, 2, k) * krawtchouk_cd_kernel(1, 0, 2, k);
    return std::abs(det - ensemble_brute_corr({0, 1}, 2, k).value);
  });
}

using SuiteFn = void (*)(Table&);

const std::map<std::string, SuiteFn>& suites() {
  static const std::map<std::string, SuiteFn> m = {{"partitions", partitions_suite}, {"specfun", specfun_suite},
                                                   {"zmeasure", zmeasure_suite},     {"psi", psi_suite},
                                                   {"kernel", kernel_suite},         {"oracle", oracle_suite}};
  return m;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"partitions", "specfun", "zmeasure", "psi", "kernel", "oracle"};
  return names;
}

std::vector<CheckResult> run_checks(const std::string& suite, const std::map<std::string, double>& overrides) {
  std::vector<CheckResult> out;
  if (suite == "all") {
    for (const auto& name : suite_names()) {
      Table t(name, overrides, out);
      suites().at(name)(t);
    }
    return out;
  }
  const auto it = suites().find(suite);
  if (it == suites().end()) throw DomainError("unknown suite '" + suite + "'");
  Table t(suite, overrides, out);
  it->second(t);
  return out;
}

}  // namespace zk
