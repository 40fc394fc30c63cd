#include <cmath>
#include <algorithm>
#include <string>

#include "json.hpp"

#include "doctest.h"
#include "zk/error.hpp"
#include "zk/kernel.hpp"

using namespace zk;

namespace {

HalfInt h(double v) { return HalfInt::from_twice(std::lround(2 * v)); }

std::vector<HalfInt> lattice(double lo, double hi) {
  std::vector<HalfInt> out;
  for (long t = std::lround(2 * lo); t <= std::lround(2 * hi); t += 2) out.push_back(HalfInt::from_twice(t));
  return out;
}

const ZParams& principal() {
  static const ZParams p = classify({1, 1}, {1, -1}, 0.3);
  return p;
}

const ZParams& complementary() {
  static const ZParams p = classify(0.4, 0.7, 0.55);
  return p;
}

// Determinant by cofactor expansion, independent of the library's LU.
Complex cofactor_det(const std::vector<std::vector<Complex>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Complex s = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Complex>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Complex> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(row);
    }
    s += (c % 2 ? -1.0 : 1.0) * m[0][c] * cofactor_det(minor);
  }
  return s;
}

std::vector<std::vector<Complex>> sub(const KernelMatrix& k, const std::vector<std::size_t>& idx) {
  std::vector<std::vector<Complex>> out;
  for (std::size_t i : idx) {
    std::vector<Complex> row;
    for (std::size_t j : idx) row.push_back(k.at(i, j));
    out.push_back(row);
  }
  return out;
}

}  // namespace

TEST_CASE("method and gauge names") {
  for (auto m : {KernelMethod::Series, KernelMethod::CD, KernelMethod::Contour, KernelMethod::MeixnerCD,
                 KernelMethod::KrawtchoukCD}) {
    CHECK(parse_kernel_method(to_string(m)) == m);
  }
  CHECK(parse_gauge("hatted") == Gauge::Hatted);
  CHECK(parse_gauge(to_string(Gauge::Underlined)) == Gauge::Underlined);
  CHECK_THROWS_AS(parse_kernel_method("fft"), DomainError);
  CHECK_THROWS_AS(parse_gauge("other"), DomainError);
}

TEST_CASE("phi and the gauge function") {
  for (const ZParams& p : {principal(), complementary()}) {
    for (const HalfInt x : lattice(-4.5, 4.5)) {
      CHECK(std::abs(phi(x, x, p) - 1.0) < 1e-15);
      for (const HalfInt y : lattice(-4.5, 4.5)) {
        REQUIRE(std::abs(phi(x, y, p) * phi(y, x, p) - 1.0) < 1e-13);
        const Complex want = gauge_f(y, p) / gauge_f(x, p);
        REQUIRE(std::abs(phi(x, y, p) - want) <= 1e-12 * std::abs(want));
      }
    }
  }
  for (const HalfInt x : lattice(-6.5, 6.5)) CHECK(std::abs(std::abs(gauge_f(x, principal())) - 1.0) < 1e-14);
  // Real parameters: f is real, with the sign of Gamma(x + z' + 1/2).
  for (const HalfInt x : lattice(-6.5, 6.5)) {
    const Complex f = gauge_f(x, complementary());
    CHECK(f.imag() == 0.0);
    const double g = std::tgamma(x.value() + 0.7 + 0.5);
    CHECK((f.real() > 0) == (g > 0));
    if (x.value() >= -0.5) CHECK(f.real() > 0.0);
  }
}

TEST_CASE("series kernel: small xi limit and symmetry") {
  const ZParams p = classify({1, 1}, {1, -1}, 1e-6);
  for (const HalfInt x : lattice(-3.5, 3.5)) {
    CHECK(std::abs(kernel_series(x, x, p) - (x.value() < 0 ? 1.0 : 0.0)) <= 1e-4);
  }
  for (const HalfInt x : lattice(-4.5, 4.5)) {
    for (const HalfInt y : lattice(-4.5, 4.5)) REQUIRE(kernel_series(x, y, principal()) == kernel_series(y, x, principal()));
  }
  const auto v = kernel_series_value(h(0.5), h(-1.5), principal());
  CHECK(v.tail < 1e-12);
  CHECK(v.terms >= 11);
  const auto fixed = kernel_series_fixed(h(0.5), h(-1.5), principal(), h(60.5));
  CHECK(std::abs(fixed.value - v.value) < 1e-13);
  CHECK(fixed.terms == 61);
  CHECK_THROWS_AS(kernel_series_fixed(h(0.5), h(0.5), principal(), h(-0.5)), DomainError);
}

TEST_CASE("series kernel reports an unreachable tail") {
  KernelOptions tight;
  tight.series_cap = 11;
  const ZParams p = classify({0.5, 1.5}, {0.5, -1.5}, 0.85);
  CHECK_THROWS_AS(kernel_series_value(h(0.5), h(0.5), p, tight), AccuracyError);
}

TEST_CASE("integrable form") {
  for (const ZParams& p : {principal(), complementary()}) {
    for (const HalfInt x : lattice(-4.5, 4.5)) {
      for (const HalfInt y : lattice(-4.5, 4.5)) {
        if (x == y) continue;
        const double cd = kernel_cd(x, y, p);
        REQUIRE(std::abs(cd - kernel_series(x, y, p)) <= 1e-8);
        REQUIRE(std::abs(cd - kernel_cd(y, x, p)) <= 1e-15);
      }
    }
  }
  CHECK_THROWS_AS(kernel_cd(h(0.5), h(0.5), principal()), DomainError);
}

TEST_CASE("double contour form") {
  for (const HalfInt x : lattice(-3.5, 3.5)) {
    for (const HalfInt y : lattice(-3.5, 3.5)) {
      const Complex k = phi(x, y, principal()) * kernel_contour(x, y, principal());
      REQUIRE(std::abs(k - kernel_series(x, y, principal())) <= 1e-7);
    }
  }
  // Radius outside (1, 1/sqrt(xi)).
  KernelOptions bad;
  bad.contour_radius = 0.9;
  CHECK_THROWS_AS(kernel_contour(h(0.5), h(0.5), principal(), bad), ConfigurationError);
  KernelOptions starved;
  starved.contour_nodes = 8;
  starved.contour_doublings = 1;
  CHECK_THROWS_AS(kernel_contour(h(0.5), h(1.5), principal(), starved), AccuracyError);
}

TEST_CASE("double contour form on the degenerate series") {
  const int N = 3;
  const double beta = 1.7;
  const ZParams d = classify(double(N), N + beta - 1.0, 0.3);
  const MeixnerParams m{beta, 0.3};
  for (int xt = 0; xt <= 8; ++xt) {
    for (int yt = 0; yt <= 8; ++yt) {
      const HalfInt x = h(xt - N + 0.5), y = h(yt - N + 0.5);
      const Complex k = phi(x, y, d) * kernel_contour(x, y, d);
      REQUIRE(std::abs(k - meixner_cd_kernel(xt, yt, N, m)) <= 1e-8);
    }
  }
}

TEST_CASE("degenerate bridge") {
  const int N = 3;
  const double beta = 1.7;
  const ZParams d = classify(double(N), N + beta - 1.0, 0.3);
  const MeixnerParams m{beta, 0.3};
  for (int xt = 0; xt <= 12; ++xt) {
    for (int yt = 0; yt <= 12; ++yt) {
      const HalfInt x = h(xt - N + 0.5), y = h(yt - N + 0.5);
      REQUIRE(std::abs(kernel_series(x, y, d) - meixner_cd_kernel(xt, yt, N, m)) <= 1e-10);
    }
  }
  // Only N indices contribute.
  const auto v = kernel_series_fixed(h(0.5), h(1.5), d, h(40.5));
  CHECK(v.tail == 0.0);
  CHECK(kernel_series_fixed(h(0.5), h(1.5), d, h(2.5)).value == v.value);
}

TEST_CASE("meixner kernel") {
  const MeixnerParams m{1.7, 0.3};
  for (int x = 0; x <= 10; ++x) {
    CHECK(meixner_cd_kernel(x, x, 1, m) == doctest::Approx(std::pow(0.7, 1.7) * meixner_weight(x, m)).epsilon(1e-13));
  }
  double trace = 0.0;
  for (int x = 0; x <= 300; ++x) trace += meixner_cd_kernel(x, x, 3, m);
  CHECK(std::abs(trace - 3.0) < 1e-9);
  for (int x = 0; x <= 5; ++x) {
    for (int y = 0; y <= 5; ++y) {
      double s = 0.0;
      for (int t = 0; t <= 300; ++t) s += meixner_cd_kernel(x, t, 3, m) * meixner_cd_kernel(t, y, 3, m);
      REQUIRE(std::abs(s - meixner_cd_kernel(x, y, 3, m)) < 1e-9);
    }
  }
  CHECK_THROWS_AS(meixner_cd_kernel(-1, 0, 2, m), DomainError);
}

TEST_CASE("krawtchouk kernel") {
  const KrawtchoukParams k{0.35, 5};
  double trace = 0.0;
  for (int x = 0; x <= 5; ++x) {
    trace += krawtchouk_cd_kernel(x, x, 3, k);
    for (int y = 0; y <= 5; ++y) CHECK(std::abs(krawtchouk_cd_kernel(x, y, 6, k) - (x == y)) < 1e-13);
  }
  CHECK(std::abs(trace - 3.0) < 1e-13);

  // N = 2, L = 3, p = 0.4 on {0, 1}: enumerate all C(4, 2) configurations here.
  const KrawtchoukParams q{0.4, 3};
  double total = 0.0, hit = 0.0;
  for (int a = 0; a <= 3; ++a) {
    for (int b = a + 1; b <= 3; ++b) {
      const double w = krawtchouk_weight(a, q) * krawtchouk_weight(b, q) * (b - a) * (b - a);
      total += w;
      if (a == 0 && b == 1) hit += w;
    }
  }
  const double det = krawtchouk_cd_kernel(0, 0, 2, q) * krawtchouk_cd_kernel(1, 1, 2, q) -
                     krawtchouk_cd_kernel(0, 1, 2, q) * krawtchouk_cd_kernel(1, 0, 2, q);
  CHECK(std::abs(det - hit / total) < 1e-12);
  CHECK_THROWS_AS(krawtchouk_cd_kernel(0, 0, 7, k), DomainError);
  CHECK_THROWS_AS(krawtchouk_cd_kernel(6, 0, 2, k), DomainError);
}

TEST_CASE("kernel matrices and gauge invariance") {
  const std::vector<HalfInt> pts = {h(-2.5), h(-0.5), h(0.5), h(1.5), h(3.5)};
  for (const ZParams& p : {principal(), complementary()}) {
    const KernelMatrix under = kernel_matrix(pts, p, KernelMethod::Series);
    CHECK(under.dim() == 5);
    CHECK(under.asymmetry() <= 1e-10);
    for (auto method : {KernelMethod::Series, KernelMethod::CD, KernelMethod::Contour}) {
      const KernelMatrix hat = kernel_matrix(pts, p, method, Gauge::Hatted);
      for (unsigned mask = 1; mask < 32; ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < 5; ++i) {
          if (mask & (1u << i)) idx.push_back(i);
        }
        REQUIRE(std::abs(cofactor_det(sub(hat, idx)) - cofactor_det(sub(under, idx))) <= 1e-9);
      }
    }
    CHECK(std::abs(under.determinant() - cofactor_det(sub(under, {0, 1, 2, 3, 4}))) < 1e-14);
  }
  // 2 x 2 on {-1/2, 3/2}.
  const KernelMatrix hat = kernel_matrix({h(-0.5), h(1.5)}, principal(), KernelMethod::Contour, Gauge::Hatted);
  const KernelMatrix und = kernel_matrix({h(-0.5), h(1.5)}, principal(), KernelMethod::Series);
  CHECK(std::abs(hat.determinant() - und.determinant()) < 1e-9);
  CHECK_THROWS_AS(kernel_matrix({h(0.5), h(0.5)}, principal(), KernelMethod::Series), DomainError);
}

TEST_CASE("polynomial ensemble matrices") {
  const ZParams d = classify(3.0, 3.7, 0.3);
  const std::vector<HalfInt> pts = {h(-4.5), h(-3.5), h(-2.5), h(0.5), h(2.5)};
  const KernelMatrix m = kernel_matrix(pts, d, KernelMethod::MeixnerCD);
  // Below the shifted range the points are always occupied and decoupled.
  CHECK(m.at(0, 0) == Complex(1.0));
  CHECK(m.at(1, 1) == Complex(1.0));
  CHECK(m.at(0, 1) == Complex(0.0));
  CHECK(m.at(0, 3) == Complex(0.0));
  CHECK(m.at(2, 3).real() == doctest::Approx(meixner_cd_kernel(0, 3, 3, {1.7, 0.3})).epsilon(1e-15));
  const KernelMatrix s = kernel_matrix({h(-2.5), h(0.5), h(2.5)}, d, KernelMethod::Series);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(s.at(i, j) - m.at(i + 2, j + 2)) < 1e-10);
  }
  // The series form itself stops at the edge of the shifted range.
  CHECK_THROWS_AS(kernel_matrix(pts, d, KernelMethod::Series), DomainError);

  const ZParams k = classify(2.0, -3.0, -0.7);
  const KernelMatrix km = kernel_matrix({h(-2.5), h(-1.5), h(1.5), h(2.5), h(3.5)}, k, KernelMethod::KrawtchoukCD);
  CHECK(km.at(0, 0) == Complex(1.0));
  // x~ = x + N - 1/2 = 4 is the top of the range; 5 is beyond it.
  CHECK(km.at(3, 3).real() == doctest::Approx(krawtchouk_cd_kernel(4, 4, 2, {0.7 / 1.7, 4})).epsilon(1e-14));
  CHECK(km.at(4, 4) == Complex(0.0));

  CHECK_THROWS_AS(kernel_matrix(pts, d, KernelMethod::MeixnerCD, Gauge::Hatted), DomainError);
  CHECK_THROWS_AS(kernel_matrix(pts, principal(), KernelMethod::MeixnerCD), DomainError);
  CHECK_THROWS_AS(kernel_matrix(pts, d, KernelMethod::KrawtchoukCD), DomainError);
}

TEST_CASE("correlation determinants") {
  CHECK(corr_det({h(0.5)}, principal(), KernelMethod::Series) == kernel_series(h(0.5), h(0.5), principal()));
  const ZParams tiny = classify({1, 1}, {1, -1}, 1e-6);
  CHECK(std::abs(corr_det({h(-0.5), h(0.5)}, tiny, KernelMethod::Series)) < 1e-5);
  CHECK(corr_det({h(-0.5), h(1.5)}, principal(), KernelMethod::Contour, {}, Gauge::Hatted) ==
        doctest::Approx(corr_det({h(-0.5), h(1.5)}, principal(), KernelMethod::Series)).epsilon(1e-9));
  CHECK_THROWS_AS(corr_det({}, principal(), KernelMethod::Series), DomainError);
  CHECK_THROWS_AS(corr_det({h(0.5), h(0.5)}, principal(), KernelMethod::Series), DomainError);
}

TEST_CASE("serialization") {
  const KernelMatrix m = kernel_matrix({h(1.5), h(-0.5)}, principal(), KernelMethod::Series);
  const std::string js = m.to_json();
  const auto parsed = nlohmann::json::parse(js);
  CHECK(parsed["method"] == "series");
  CHECK(parsed["gauge"] == "underlined");
  CHECK(parsed["points"][0] == 1.5);
  CHECK(parsed["entries"].size() == 2);
  CHECK(KernelMatrix::from_json(js).to_json() == js);
  const KernelMatrix back = KernelMatrix::from_json(js);
  CHECK(back.entries == m.entries);
  CHECK(back.points == m.points);

  // Complex entries survive the round trip as [re, im].
  const KernelMatrix c = kernel_matrix({h(1.5), h(-0.5)}, principal(), KernelMethod::Contour, Gauge::Hatted);
  CHECK(KernelMatrix::from_json(c.to_json()).to_json() == c.to_json());
  CHECK(KernelMatrix::from_json(c.to_json()).entries == c.entries);

  const std::string csv = m.to_csv();
  CHECK(csv.rfind("x,y,K\n", 0) == 0);
  // Rows sorted by (x, y): -0.5 first.
  CHECK(csv.find("\n-0.5,-0.5,") < csv.find("\n-0.5,1.5,"));
  CHECK(csv.find("\n-0.5,1.5,") < csv.find("\n1.5,-0.5,"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK_THROWS(KernelMatrix::from_json("{\"points\": [\"0.5\"]}"));
}
