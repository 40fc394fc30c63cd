#include "zk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>

#include <Eigen/Dense>
#include <json.hpp>

#include "zk/error.hpp"
#include "zk/parallel.hpp"

namespace zk {

namespace {

constexpr double kBlockTarget = 1e-12;
constexpr double kTailLimit = 1e-10;
constexpr int kFirstBlock = 11;

// log Gamma(w) for the gauge factors; poles are a domain error there.
Complex lg(Complex w) {
  if (w.imag() == 0.0 && w.real() <= 0.0 && w.real() == std::floor(w.real())) {
    throw DomainError("gauge factor meets a pole of the gamma function");
  }
  return log_gamma(w);
}

// psi_a(x) for a = 1/2, 3/2, ... per point, extended by doubling the index range until
// the last block is negligible for every pair of points.
struct SeriesTable {
  std::vector<std::vector<double>> columns;
  int terms = 0;
  double tail = 0.0;
};

SeriesTable series_table(const std::vector<HalfInt>& xs, const ZParams& prm, const KernelOptions& opt) {
  SeriesTable t;
  t.columns.resize(xs.size());
  int target = kFirstBlock;
  while (true) {
    const int from = t.terms;
    auto blocks = parallel::map_indexed(xs.size(), [&](std::size_t i) {
      std::vector<double> block;
      block.reserve(static_cast<std::size_t>(target - from));
      for (int k = from; k < target; ++k) block.push_back(psi(HalfInt::above(k), xs[i], prm));
      return block;
    });
    double worst = 0.0;
    bool all_zero = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double norm2 = 0.0;
      for (double v : blocks[i]) {
        norm2 += v * v;
        if (v != 0.0) all_zero = false;
      }
      worst = std::max(worst, norm2);
      t.columns[i].insert(t.columns[i].end(), blocks[i].begin(), blocks[i].end());
    }
    t.terms = target;
    // Cauchy-Schwarz: every pairwise block sum is at most the largest block norm squared.
    t.tail = worst;
    if (all_zero || worst < kBlockTarget) return t;
    if (2 * target > opt.series_cap) {
      if (worst <= kTailLimit) return t;
      throw AccuracyError("kernel series did not settle within the index cap", worst);
    }
    target *= 2;
  }
}

double dot(const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
  return s;
}

double cd_prefactor(const ZParams& prm) {
  if (!(prm.zzprime > 0.0)) throw DomainError("integrable form needs zz' > 0");
  return std::sqrt(prm.zzprime * prm.xi) / (1.0 - prm.xi);
}

double contour_radius(const ZParams& prm, const KernelOptions& opt) {
  const double s = std::sqrt(prm.xi);
  const double rho = opt.contour_radius.value_or(std::min(1.25, 0.5 * (1.0 + 1.0 / s)));
  if (!(rho > 1.0 && rho * s < 1.0)) {
    throw ConfigurationError("double contour radius must satisfy 1 < rho < 1/sqrt(xi)");
  }
  return rho;
}

// Hatted kernel on a point set by the equal-radius double trapezoidal rule with n nodes
// per circle. Since w1 w2 = rho^2 e^{2 pi i (j + k) / n}, the Cauchy factor depends only on
// (j + k) mod n and the inner sum is a cyclic correlation.
std::vector<Complex> contour_grid(const std::vector<HalfInt>& xs, const ZParams& prm, double rho, int n) {
  const double s = std::sqrt(prm.xi);
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Complex> w(static_cast<std::size_t>(n));
  std::vector<Complex> log_in(w.size());
  std::vector<Complex> log_out(w.size());
  std::vector<Complex> cauchy(w.size());
  for (int k = 0; k < n; ++k) {
    const double theta = two_pi * k / n;
    w[k] = std::polar(rho, theta);
    log_in[k] = std::log(1.0 - s * w[k]);
    log_out[k] = std::log(1.0 - s / w[k]);
    cauchy[k] = 1.0 / (std::polar(rho * rho, theta) - 1.0);
  }
  auto power = [&](int k, long p) { return std::polar(std::pow(rho, double(p)), two_pi * double(k) * p / n); };

  const std::size_t m = xs.size();
  // First-circle factor times the correlation with the Cauchy kernel, one vector per x.
  auto corr = parallel::map_indexed(m, [&](std::size_t i) {
    const long p = -xs[i].floor();  // w^{-x-1/2} times the w from dw = i w dtheta
    std::vector<Complex> u(w.size());
    for (int j = 0; j < n; ++j) u[j] = std::exp(-prm.zprime * log_in[j] + prm.z * log_out[j]) * power(j, p);
    std::vector<Complex> out(w.size());
    for (int k = 0; k < n; ++k) {
      Complex acc = 0.0;
      int idx = k;
      for (int j = 0; j < n; ++j) {
        acc += u[j] * cauchy[idx];
        if (++idx == n) idx = 0;
      }
      out[k] = acc;
    }
    return out;
  });
  auto second = parallel::map_indexed(m, [&](std::size_t i) {
    const long p = -xs[i].floor();
    std::vector<Complex> v(w.size());
    for (int k = 0; k < n; ++k) v[k] = std::exp(-prm.z * log_in[k] + prm.zprime * log_out[k]) * power(k, p);
    return v;
  });
  std::vector<Complex> out(m * m);
  const double norm = 1.0 / (double(n) * double(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k) acc += corr[i][k] * second[j][k];
      out[i * m + j] = acc * norm;
    }
  }
  return out;
}

std::vector<Complex> contour_matrix(const std::vector<HalfInt>& xs, const ZParams& prm, const KernelOptions& opt) {
  if (prm.series == Series::SecondDegenerate) throw DomainError("double contour form requires 0 < xi < 1");
  const double rho = contour_radius(prm, opt);
  int n = opt.contour_nodes;
  std::vector<Complex> prev = contour_grid(xs, prm, rho, n);
  double diff = HUGE_VAL;
  for (int d = 0; d < opt.contour_doublings; ++d) {
    n *= 2;
    std::vector<Complex> next = contour_grid(xs, prm, rho, n);
    diff = 0.0;
    double scale = 1.0;
    for (std::size_t k = 0; k < next.size(); ++k) {
      diff = std::max(diff, std::abs(next[k] - prev[k]));
      scale = std::max(scale, std::abs(next[k]));
    }
    prev = std::move(next);
    if (diff <= 1e-12 * scale) return prev;
  }
  throw AccuracyError("double contour quadrature did not settle", diff);
}

void require_distinct(const std::vector<HalfInt>& points) {
  std::set<HalfInt> seen(points.begin(), points.end());
  if (seen.size() != points.size()) throw DomainError("points must be pairwise distinct");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(Complex v) {
  if (v.imag() == 0.0) return fmt(v.real());
  std::string im = fmt(v.imag());
  if (im.front() != '-') im = "+" + im;
  return fmt(v.real()) + im + "i";
}

// Entry for a point pair outside the finite window of a polynomial ensemble.
std::optional<double> frozen_entry(long xt, long yt, long top) {
  const bool x_low = xt < 0;
  const bool y_low = yt < 0;
  const bool x_high = top >= 0 && xt > top;
  const bool y_high = top >= 0 && yt > top;
  if (x_low || y_low) return (x_low && y_low && xt == yt) ? 1.0 : 0.0;
  if (x_high || y_high) return 0.0;
  return std::nullopt;
}

}  // namespace

std::string to_string(KernelMethod m) {
  switch (m) {
    case KernelMethod::Series: return "series";
    case KernelMethod::CD: return "cd";
    case KernelMethod::Contour: return "contour";
    case KernelMethod::MeixnerCD: return "meixner-cd";
    case KernelMethod::KrawtchoukCD: return "krawtchouk-cd";
  }
  return "unknown";
}

std::string to_string(Gauge g) { return g == Gauge::Hatted ? "hatted" : "underlined"; }

KernelMethod parse_kernel_method(const std::string& text) {
  for (auto m : {KernelMethod::Series, KernelMethod::CD, KernelMethod::Contour, KernelMethod::MeixnerCD,
                 KernelMethod::KrawtchoukCD}) {
    if (text == to_string(m)) return m;
  }
  throw DomainError("unknown kernel method '" + text + "'");
}

Gauge parse_gauge(const std::string& text) {
  if (text == "underlined") return Gauge::Underlined;
  if (text == "hatted") return Gauge::Hatted;
  throw DomainError("unknown gauge '" + text + "'");
}

namespace {

// For real z, z' the log-gammas carry multiples of i pi only, so the exponential is real
// up to rounding in its imaginary part.
bool real_parameters(const ZParams& prm) { return prm.z.imag() == 0.0 && prm.zprime.imag() == 0.0; }

}  // namespace

Complex phi(HalfInt x, HalfInt y, const ZParams& prm) {
  const double xv = x.value();
  const double yv = y.value();
  const Complex gx = lg(xv + prm.z + 0.5);
  const Complex gxp = lg(xv + prm.zprime + 0.5);
  const Complex gy = lg(yv + prm.z + 0.5);
  const Complex gyp = lg(yv + prm.zprime + 0.5);
  const Complex v = std::exp(0.5 * (gx + gxp + gy + gyp).real() - gxp - gy);
  return real_parameters(prm) ? Complex(v.real(), 0.0) : v;
}

Complex gauge_f(HalfInt x, const ZParams& prm) {
  const double xv = x.value();
  const Complex g = lg(xv + prm.z + 0.5);
  const Complex gp = lg(xv + prm.zprime + 0.5);
  const Complex v = std::exp(gp - 0.5 * (g + gp).real());
  return real_parameters(prm) ? Complex(v.real(), 0.0) : v;
}

SeriesKernelValue kernel_series_fixed(HalfInt x, HalfInt y, const ZParams& prm, HalfInt a_max) {
  if (a_max.twice() < 1) throw DomainError("a_max must be at least 1/2");
  SeriesKernelValue out;
  double last = 0.0;
  for (long k = 0; k <= a_max.floor(); ++k) {
    const HalfInt a = HalfInt::above(k);
    last = psi(a, x, prm) * psi(a, y, prm);
    out.value += last;
    ++out.terms;
  }
  out.tail = std::abs(last);
  return out;
}

SeriesKernelValue kernel_series_value(HalfInt x, HalfInt y, const ZParams& prm, const KernelOptions& opt) {
  const std::vector<HalfInt> xs = x == y ? std::vector<HalfInt>{x} : std::vector<HalfInt>{x, y};
  const SeriesTable t = series_table(xs, prm, opt);
  return {dot(t.columns.front(), t.columns.back()), t.tail, t.terms};
}

double kernel_series(HalfInt x, HalfInt y, const ZParams& prm) { return kernel_series_value(x, y, prm).value; }

double kernel_cd(HalfInt x, HalfInt y, const ZParams& prm) {
  if (x == y) throw DomainError("integrable form is not evaluated on the diagonal; use kernel_series");
  const HalfInt lo = HalfInt::from_twice(-1);
  const HalfInt hi = HalfInt::from_twice(1);
  const double num = psi(lo, x, prm) * psi(hi, y, prm) - psi(hi, x, prm) * psi(lo, y, prm);
  return cd_prefactor(prm) * num / double(integer_diff(x, y));
}

Complex kernel_contour(HalfInt x, HalfInt y, const ZParams& prm, const KernelOptions& opt) {
  const std::vector<HalfInt> xs = x == y ? std::vector<HalfInt>{x} : std::vector<HalfInt>{x, y};
  const auto m = contour_matrix(xs, prm, opt);
  return x == y ? m[0] : m[1];
}

double meixner_cd_kernel(int xt, int yt, int N, const MeixnerParams& prm) {
  validate(prm);
  if (N < 1) throw DomainError("Meixner kernel rank must be positive");
  if (xt < 0 || yt < 0) throw DomainError("Meixner kernel arguments must be nonnegative");
  double s = 0.0;
  for (int m = 0; m < N; ++m) s += meixner_tilde(m, xt, prm) * meixner_tilde(m, yt, prm);
  return s;
}

double krawtchouk_cd_kernel(int xt, int yt, int N, const KrawtchoukParams& prm) {
  validate(prm);
  if (N < 1 || N > prm.L + 1) throw DomainError("Krawtchouk kernel rank must lie in [1, L + 1]");
  if (xt < 0 || xt > prm.L || yt < 0 || yt > prm.L) throw DomainError("Krawtchouk kernel arguments must lie in [0, L]");
  const double root_w = std::sqrt(krawtchouk_weight(xt, prm) * krawtchouk_weight(yt, prm));
  double s = 0.0;
  for (int m = 0; m < N; ++m) s += krawtchouk(m, xt, prm) * krawtchouk(m, yt, prm) / krawtchouk_norm2(m, prm);
  return s * root_w;
}

Complex KernelMatrix::determinant() const {
  const auto n = static_cast<Eigen::Index>(dim());
  if (n == 0) return 1.0;
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return m.partialPivLu().determinant();
}

double KernelMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < i; ++j) worst = std::max(worst, std::abs(at(i, j) - at(j, i)));
  }
  return worst;
}

std::string KernelMatrix::to_json() const {
  nlohmann::json j;
  j["points"] = nlohmann::json::array();
  for (const auto& p : points) j["points"].push_back(p.value());
  j["method"] = to_string(method);
  j["gauge"] = to_string(gauge);
  j["entries"] = nlohmann::json::array();
  for (std::size_t r = 0; r < dim(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < dim(); ++c) {
      const Complex v = at(r, c);
      if (v.imag() == 0.0) {
        row.push_back(v.real());
      } else {
        row.push_back({v.real(), v.imag()});
      }
    }
    j["entries"].push_back(std::move(row));
  }
  return j.dump();
}

KernelMatrix KernelMatrix::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  KernelMatrix m;
  for (const auto& p : j.at("points")) {
    const double twice = 2.0 * p.get<double>();
    if (twice != std::round(twice)) throw DomainError("kernel matrix point is not a half-integer");
    m.points.push_back(HalfInt::from_twice(std::lround(twice)));
  }
  m.method = parse_kernel_method(j.at("method").get<std::string>());
  m.gauge = parse_gauge(j.at("gauge").get<std::string>());
  const auto& rows = j.at("entries");
  if (rows.size() != m.points.size()) throw DomainError("kernel matrix is not square");
  for (const auto& row : rows) {
    if (row.size() != m.points.size()) throw DomainError("kernel matrix is not square");
    for (const auto& v : row) {
      if (v.is_array()) {
        m.entries.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
      } else {
        m.entries.emplace_back(v.get<double>(), 0.0);
      }
    }
  }
  return m;
}

std::string KernelMatrix::to_csv() const {
  std::vector<std::size_t> order(dim());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::string out = "x,y,K\n";
  for (std::size_t i : order) {
    for (std::size_t j : order) out += points[i].str() + "," + points[j].str() + "," + fmt(at(i, j)) + "\n";
  }
  return out;
}

KernelMatrix kernel_matrix(const std::vector<HalfInt>& points, const ZParams& prm, KernelMethod method, Gauge gauge,
                           const KernelOptions& opt) {
  require_distinct(points);
  KernelMatrix out;
  out.points = points;
  out.method = method;
  out.gauge = gauge;
  const std::size_t n = points.size();
  out.entries.assign(n * n, 0.0);
  auto set = [&](std::size_t i, std::size_t j, Complex v) { out.entries[i * n + j] = v; };

  switch (method) {
    case KernelMethod::Series:
    case KernelMethod::CD: {
      const SeriesTable t = series_table(points, prm, opt);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (method == KernelMethod::CD && i != j) {
            set(i, j, kernel_cd(points[i], points[j], prm));
          } else {
            set(i, j, dot(t.columns[i], t.columns[j]));
          }
        }
      }
      if (gauge == Gauge::Hatted) {
        std::vector<Complex> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = gauge_f(points[i], prm);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) out.entries[i * n + j] *= f[i] / f[j];
        }
      }
      return out;
    }
    case KernelMethod::Contour: {
      out.entries = contour_matrix(points, prm, opt);
      if (gauge == Gauge::Underlined) {
        std::vector<Complex> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = gauge_f(points[i], prm);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) out.entries[i * n + j] *= f[j] / f[i];
        }
      }
      return out;
    }
    case KernelMethod::MeixnerCD:
    case KernelMethod::KrawtchoukCD: {
      if (gauge != Gauge::Underlined) throw DomainError("polynomial-ensemble kernels are provided in the underlined gauge only");
      const bool meixner = method == KernelMethod::MeixnerCD;
      if (meixner && prm.series != Series::Degenerate) throw DomainError("Meixner kernel requires the degenerate series");
      if (!meixner && prm.series != Series::SecondDegenerate) {
        throw DomainError("Krawtchouk kernel requires the second degenerate series");
      }
      const int N = prm.degenerate_N();
      if (N <= 0) throw DomainError("Meixner kernel requires a positive integer parameter");
      const long top = meixner ? -1 : N + prm.degenerate_Nprime() - 1;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const long xt = points[i].floor() + N;
          const long yt = points[j].floor() + N;
          if (auto frozen = frozen_entry(xt, yt, top)) {
            set(i, j, *frozen);
          } else if (meixner) {
            set(i, j, meixner_cd_kernel(int(xt), int(yt), N, {prm.meixner_beta(), prm.xi}));
          } else {
            set(i, j, krawtchouk_cd_kernel(int(xt), int(yt), N, {prm.xi / (prm.xi - 1.0), int(top)}));
          }
        }
      }
      return out;
    }
  }
  return out;
}

double corr_det(const std::vector<HalfInt>& points, const ZParams& prm, KernelMethod method, const KernelOptions& opt,
                Gauge gauge) {
  if (points.empty()) throw DomainError("correlation needs at least one point");
  return kernel_matrix(points, prm, method, gauge, opt).determinant().real();
}

}  // namespace zk
