#include "zk/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "zk/error.hpp"

namespace zk {

namespace {

long parse_long(std::string_view text, std::string_view what) {
  long value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw DomainError("cannot parse " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

HalfInt HalfInt::from_twice(long twice) {
  if (twice % 2 == 0) throw DomainError("half-integer requires an odd doubled value");
  return HalfInt(twice);
}

HalfInt HalfInt::parse(std::string_view text) {
  text = trim(text);
  const auto dot = text.find('.');
  if (dot == std::string_view::npos || text.substr(dot) != ".5") {
    throw DomainError("half-integer must be written as k.5: '" + std::string(text) + "'");
  }
  std::string_view whole = text.substr(0, dot);
  const bool negative = !whole.empty() && whole.front() == '-';
  if (negative) whole.remove_prefix(1);
  const long magnitude = whole.empty() ? 0 : parse_long(whole, "half-integer");
  if (magnitude < 0) throw DomainError("malformed half-integer: '" + std::string(text) + "'");
  const long twice = 2 * magnitude + 1;
  return HalfInt(negative ? -twice : twice);
}

std::string HalfInt::str() const {
  const long magnitude = (twice_ < 0 ? -twice_ : twice_) / 2;
  return (twice_ < 0 ? "-" : "") + std::to_string(magnitude) + ".5";
}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw DomainError("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw DomainError("partition parts must be weakly decreasing");
  }
  size_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

Partition Partition::parse(std::string_view text) {
  text = trim(text);
  std::vector<int> parts;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = trim(text.substr(0, comma));
    parts.push_back(static_cast<int>(parse_long(token, "partition part")));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (trim(text).empty()) throw DomainError("trailing comma in partition");
  }
  return Partition(std::move(parts));
}

Partition Partition::transpose() const {
  std::vector<int> columns(parts_.empty() ? 0 : static_cast<std::size_t>(parts_.front()), 0);
  for (int row : parts_) {
    for (int j = 0; j < row; ++j) ++columns[static_cast<std::size_t>(j)];
  }
  return Partition(std::move(columns));
}

std::string Partition::str() const {
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(parts_[i]);
  }
  return out;
}

MayaDiagram maya(const Partition& lambda) {
  // Rows i <= length give lambda_i - i + 1/2; rows beyond give -i + 1/2, so the
  // vacated points below zero are the -i + 1/2 (i <= length) not hit by any row.
  MayaDiagram out;
  const int len = lambda.length();
  std::vector<long> occupied_negative;
  for (int i = 1; i <= len; ++i) {
    const long k = lambda.part_at(i) - i;  // point k + 1/2
    if (k >= 0) {
      out.added.push_back(HalfInt::above(k));
    } else {
      occupied_negative.push_back(k);
    }
  }
  for (long k = -1; k >= -len; --k) {
    if (std::find(occupied_negative.begin(), occupied_negative.end(), k) == occupied_negative.end()) {
      out.removed.push_back(HalfInt::above(k));
    }
  }
  return out;
}

Partition maya_inverse(const MayaDiagram& diagram) {
  if (diagram.added.size() != diagram.removed.size()) {
    throw DomainError("Maya diagram must have as many particles above zero as holes below");
  }
  std::vector<long> particles;
  for (HalfInt x : diagram.added) {
    if (x.twice() < 0) throw DomainError("added point below zero");
    particles.push_back(x.floor());
  }
  long deepest = 0;
  std::vector<long> holes;
  for (HalfInt x : diagram.removed) {
    if (x.twice() > 0) throw DomainError("removed point above zero");
    holes.push_back(x.floor());
    deepest = std::min(deepest, x.floor());
  }
  std::sort(particles.begin(), particles.end(), std::greater<>());
  if (std::adjacent_find(particles.begin(), particles.end()) != particles.end() ||
      std::set<long>(holes.begin(), holes.end()).size() != holes.size()) {
    throw DomainError("duplicate points in Maya diagram");
  }
  const long bottom = deepest - static_cast<long>(particles.size()) - 1;
  for (long k = -1; k >= bottom; --k) {
    if (std::find(holes.begin(), holes.end(), k) == holes.end()) particles.push_back(k);
  }
  std::vector<int> parts;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const long part = particles[i] + static_cast<long>(i) + 1;
    if (part < 0) throw DomainError("inconsistent Maya diagram");
    parts.push_back(static_cast<int>(part));
  }
  return Partition(std::move(parts));
}

bool contains_point(const Partition& lambda, HalfInt x) {
  const long k = x.floor();
  const int len = lambda.length();
  if (k < -len) return true;
  for (int i = 1; i <= len; ++i) {
    if (lambda.part_at(i) - i == k) return true;
  }
  return false;
}

BigInt dim(const Partition& lambda) {
  const int n = lambda.length();
  BigInt numerator = 1;
  for (int k = 2; k <= lambda.size(); ++k) numerator *= k;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) numerator *= lambda.part_at(i) - i - lambda.part_at(j) + j;
  }
  BigInt denominator = 1;
  for (int i = 1; i <= n; ++i) {
    for (int k = 2; k <= lambda.part_at(i) + n - i; ++k) denominator *= k;
  }
  return numerator / denominator;
}

namespace {

BigInt dim_recursive(const Partition& lambda, std::map<Partition, BigInt>& memo) {
  if (lambda.size() <= 1) return 1;
  if (auto it = memo.find(lambda); it != memo.end()) return it->second;
  BigInt total = 0;
  std::vector<int> parts(lambda.parts().begin(), lambda.parts().end());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const bool corner = (i + 1 == parts.size()) || parts[i + 1] < parts[i];
    if (!corner) continue;
    --parts[i];
    total += dim_recursive(Partition(parts), memo);
    ++parts[i];
  }
  memo.emplace(lambda, total);
  return total;
}

}  // namespace

BigInt dim_oracle(const Partition& lambda) {
  std::map<Partition, BigInt> memo;
  return dim_recursive(lambda, memo);
}

double log_dim_over_factorial(const Partition& lambda) {
  const int n = lambda.length();
  double out = 0.0;
  for (int i = 1; i <= n; ++i) {
    out -= std::lgamma(static_cast<double>(lambda.part_at(i) + n - i + 1));
    for (int j = i + 1; j <= n; ++j) {
      out += std::log(static_cast<double>(lambda.part_at(i) - i - lambda.part_at(j) + j));
    }
  }
  return out;
}

Complex pochhammer_partition(Complex t, const Partition& lambda) {
  Complex out = 1.0;
  for (int i = 1; i <= lambda.length(); ++i) {
    for (int j = 1; j <= lambda.part_at(i); ++j) out *= t + static_cast<double>(j - i);
  }
  return out;
}

std::vector<Partition> enumerate_partitions(int n) {
  if (n < 0) throw DomainError("partition size must be nonnegative");
  if (n > 60) throw SizeLimitError("enumerate_partitions is limited to n <= 60");
  std::vector<Partition> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> parts{n};
  while (true) {
    out.emplace_back(parts);
    // Rightmost part greater than one is decremented; the freed boxes are repacked
    // greedily into parts no larger than it.
    int remainder = 0;
    while (!parts.empty() && parts.back() == 1) {
      ++remainder;
      parts.pop_back();
    }
    if (parts.empty()) break;
    const int cap = --parts.back();
    ++remainder;
    while (remainder > 0) {
      const int next = std::min(cap, remainder);
      parts.push_back(next);
      remainder -= next;
    }
  }
  return out;
}

Partition rectangle(int rows, int cols) {
  if (rows < 0 || cols < 0) throw DomainError("rectangle sides must be nonnegative");
  return Partition(std::vector<int>(static_cast<std::size_t>(cols > 0 ? rows : 0), cols));
}

}  // namespace zk
