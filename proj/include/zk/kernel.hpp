#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zk/psi.hpp"

namespace zk {

enum class KernelMethod { Series, CD, Contour, MeixnerCD, KrawtchoukCD };
enum class Gauge { Underlined, Hatted };

std::string to_string(KernelMethod m);
std::string to_string(Gauge g);
/// Accepts "series", "cd", "contour", "meixner-cd", "krawtchouk-cd".
KernelMethod parse_kernel_method(const std::string& text);
/// Accepts "underlined", "hatted".
Gauge parse_gauge(const std::string& text);

/// Knobs shared by the kernel evaluators.
struct KernelOptions {
  /// Radius of both circles in the double contour; default min(1.25, (1 + 1/sqrt(xi)) / 2).
  std::optional<double> contour_radius;
  int contour_nodes = 512;
  int contour_doublings = 5;
  /// Largest number of indices a = 1/2, 3/2, ... summed by the series form.
  int series_cap = 4096;
};

/// Gamma-ratio prefactor relating the two gauges: underlined = phi * hatted. Complex for
/// the principal series. Throws DomainError at gamma poles.
Complex phi(HalfInt x, HalfInt y, const ZParams& prm);
/// Gauge function f with hatted(x, y) = f(x) / f(y) * underlined(x, y).
Complex gauge_f(HalfInt x, const ZParams& prm);

struct SeriesKernelValue {
  double value = 0.0;
  /// Bound on the last summed block; the remainder is smaller by exponential decay.
  double tail = 0.0;
  int terms = 0;
};

/// Sum of psi_a(x) psi_a(y) over a = 1/2 .. a_max.
SeriesKernelValue kernel_series_fixed(HalfInt x, HalfInt y, const ZParams& prm, HalfInt a_max);
/// Same sum with a_max grown from 21/2 by doubling until the last block is below 1e-12.
/// Throws AccuracyError when the cap is reached with a tail above 1e-10.
SeriesKernelValue kernel_series_value(HalfInt x, HalfInt y, const ZParams& prm, const KernelOptions& opt = {});
double kernel_series(HalfInt x, HalfInt y, const ZParams& prm);

/// Integrable form from psi_{1/2} and psi_{-1/2}. Throws DomainError for x == y.
double kernel_cd(HalfInt x, HalfInt y, const ZParams& prm);

/// The hatted kernel by the double trapezoidal rule on two circles of equal radius.
Complex kernel_contour(HalfInt x, HalfInt y, const ZParams& prm, const KernelOptions& opt = {});

/// Sum over m < N of the orthonormal Meixner functions at xt and yt.
double meixner_cd_kernel(int xt, int yt, int N, const MeixnerParams& prm);
/// Sum over m < N of the orthonormal Krawtchouk functions at xt and yt.
double krawtchouk_cd_kernel(int xt, int yt, int N, const KrawtchoukParams& prm);

/// Dense kernel matrix on a list of lattice points.
struct KernelMatrix {
  std::vector<HalfInt> points;
  /// Row-major, points.size() squared entries.
  std::vector<Complex> entries;
  KernelMethod method = KernelMethod::Series;
  Gauge gauge = Gauge::Underlined;

  std::size_t dim() const { return points.size(); }
  Complex at(std::size_t i, std::size_t j) const { return entries[i * points.size() + j]; }
  Complex determinant() const;
  /// Largest |K(i, j) - K(j, i)|.
  double asymmetry() const;

  /// {"points":[...],"method":...,"gauge":...,"entries":[[...]]}; an entry with a nonzero
  /// imaginary part is written as [re, im].
  std::string to_json() const;
  static KernelMatrix from_json(const std::string& text);
  /// Header "x,y,K", rows sorted by (x, y); complex entries as "a+bi".
  std::string to_csv() const;
};

/// Assembles the matrix with the chosen representation. Series, CD and Contour support
/// both gauges. MeixnerCD (degenerate series, N > 0) and KrawtchoukCD (second degenerate
/// series) use the shifted coordinate x + N - 1/2 and are underlined only; points below
/// the shifted range are always occupied and points above the Krawtchouk range never are.
KernelMatrix kernel_matrix(const std::vector<HalfInt>& points, const ZParams& prm, KernelMethod method,
                           Gauge gauge = Gauge::Underlined, const KernelOptions& opt = {});

/// Correlation function as the determinant of the kernel matrix. Throws DomainError on
/// empty or repeated points.
double corr_det(const std::vector<HalfInt>& points, const ZParams& prm, KernelMethod method,
                const KernelOptions& opt = {}, Gauge gauge = Gauge::Underlined);

}  // namespace zk
