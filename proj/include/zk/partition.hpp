#pragma once

#include <compare>
#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zk {

using Complex = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A point of the half-integer lattice, stored exactly as twice its value.
class HalfInt {
 public:
  /// Throws DomainError unless `twice` is odd.
  static HalfInt from_twice(long twice);
  /// The lattice point k + 1/2.
  static HalfInt above(long k) { return HalfInt(2 * k + 1); }
  /// Parses the exact decimal form ("-0.5", "1.5").
  static HalfInt parse(std::string_view text);

  long twice() const noexcept { return twice_; }
  double value() const noexcept { return 0.5 * static_cast<double>(twice_); }
  /// floor(value), i.e. the integer k with value = k + 1/2.
  long floor() const noexcept { return (twice_ - 1) / 2; }

  HalfInt operator-() const noexcept { return HalfInt(-twice_); }
  HalfInt shifted(long k) const noexcept { return HalfInt(twice_ + 2 * k); }
  std::string str() const;

  auto operator<=>(const HalfInt&) const = default;

 private:
  explicit HalfInt(long twice) : twice_(twice) {}
  long twice_ = 1;
};

/// x + a for two lattice points; always an integer.
inline long integer_sum(HalfInt x, HalfInt a) noexcept { return (x.twice() + a.twice()) / 2; }
/// x - y for two lattice points; always an integer.
inline long integer_diff(HalfInt x, HalfInt y) noexcept { return (x.twice() - y.twice()) / 2; }

/// Young diagram. Parts are positive and weakly decreasing; zeros are never stored.
class Partition {
 public:
  Partition() = default;
  /// Trailing zeros are dropped. Throws DomainError on negative or increasing parts.
  explicit Partition(std::vector<int> parts);

  /// Parses "3,1,1"; the empty string is the empty diagram.
  static Partition parse(std::string_view text);

  std::span<const int> parts() const noexcept { return parts_; }
  int size() const noexcept { return size_; }
  int length() const noexcept { return static_cast<int>(parts_.size()); }
  /// lambda_i for 1-based row i, zero beyond the length.
  int part_at(int i) const noexcept {
    return (i >= 1 && i <= length()) ? parts_[static_cast<std::size_t>(i - 1)] : 0;
  }
  bool empty() const noexcept { return parts_.empty(); }

  Partition transpose() const;
  std::string str() const;

  bool operator==(const Partition&) const = default;
  auto operator<=>(const Partition& other) const { return parts_ <=> other.parts_; }

 private:
  std::vector<int> parts_;
  int size_ = 0;
};

/// Finite encoding of the Maya diagram {lambda_i - i + 1/2}: points above zero that are
/// occupied and points below zero that are vacant. Both lists are sorted decreasingly.
struct MayaDiagram {
  std::vector<HalfInt> added;
  std::vector<HalfInt> removed;

  bool operator==(const MayaDiagram&) const = default;
};

MayaDiagram maya(const Partition& lambda);
/// Throws DomainError when the diagram is unbalanced or the sets are on the wrong side of zero.
Partition maya_inverse(const MayaDiagram& diagram);
bool contains_point(const Partition& lambda, HalfInt x);

/// Number of standard tableaux, exact, by the factorial/Vandermonde product formula.
BigInt dim(const Partition& lambda);
/// Number of standard tableaux by recursion over removable corners.
BigInt dim_oracle(const Partition& lambda);
/// log(dim(lambda) / |lambda|!) in floating point, same product formula evaluated in log space.
double log_dim_over_factorial(const Partition& lambda);

/// Product over boxes (i, j) of (t + j - i).
Complex pochhammer_partition(Complex t, const Partition& lambda);

/// All partitions of n in reverse lexicographic order. Throws SizeLimitError for n > 60.
std::vector<Partition> enumerate_partitions(int n);

/// The rows x cols rectangle.
Partition rectangle(int rows, int cols);

}  // namespace zk
