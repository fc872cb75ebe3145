#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include "liftlab/error.hpp"

namespace liftlab {

/// Largest admissible |entry| of an IntMat. Every product of two guarded
/// entries and every 2x2 minor stays inside a signed 64-bit word.
inline constexpr std::int64_t kGuardBound = 2'000'000'000;

/// Exact integer N x N matrix (N = 2 or 3), row-major, immutable.
///
/// Ordering (operator<=>) is lexicographic on the row-major entries; the
/// lifting search relies on it for deterministic tie-breaking.
template <int N>
class IntMat {
  static_assert(N == 2 || N == 3, "IntMat supports SL2 and SL3 only");

 public:
  using Scalar = std::int64_t;
  using Storage = std::array<Scalar, N * N>;
  static constexpr int kDim = N;

  constexpr IntMat() = default;

  /// Throws OverflowError if any entry exceeds kGuardBound in absolute value.
  explicit IntMat(const Storage& entries) : e_(entries) {
    for (Scalar v : e_) {
      if (v > kGuardBound || v < -kGuardBound) {
        throw OverflowError("IntMat entry outside guard bound: " + std::to_string(v));
      }
    }
  }

  static IntMat identity() {
    Storage s{};
    for (int i = 0; i < N; ++i) s[i * N + i] = 1;
    return IntMat(s);
  }

  /// I + k * e_ij.
  static IntMat elementary(int i, int j, Scalar k) {
    Storage s = identity().e_;
    s[i * N + j] += k;
    return IntMat(s);
  }

  constexpr Scalar operator()(int i, int j) const { return e_[i * N + j]; }
  constexpr const Storage& entries() const { return e_; }

  friend constexpr auto operator<=>(const IntMat&, const IntMat&) = default;

 private:
  Storage e_{};
};

using Mat2 = IntMat<2>;
using Mat3 = IntMat<3>;

/// Exact norm gauges of a unimodular matrix.
struct IntGauge {
  std::int64_t norm_inf = 0;
  std::int64_t norm_inf_inverse = 0;
  std::int64_t delta = 0;  // norm_inf * norm_inf_inverse

  friend constexpr bool operator==(const IntGauge&, const IntGauge&) = default;
};

template <int N>
std::int64_t det(const IntMat<N>& m);

template <int N>
std::int64_t trace(const IntMat<N>& m) {
  std::int64_t t = 0;
  for (int i = 0; i < N; ++i) t += m(i, i);
  return t;
}

template <int N>
IntMat<N> mul(const IntMat<N>& a, const IntMat<N>& b);

template <int N>
IntMat<N> operator*(const IntMat<N>& a, const IntMat<N>& b) {
  return mul(a, b);
}

template <int N>
IntMat<N> transpose(const IntMat<N>& m) {
  typename IntMat<N>::Storage s{};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) s[j * N + i] = m(i, j);
  return IntMat<N>(s);
}

/// Adjugate inverse. Throws InvalidArgument unless det(m) == 1.
template <int N>
IntMat<N> inverse_unimodular(const IntMat<N>& m);

template <int N>
std::int64_t norm_inf(const IntMat<N>& m) {
  std::int64_t r = 0;
  for (auto v : m.entries()) r = std::max(r, v < 0 ? -v : v);
  return r;
}

template <int N>
IntGauge gauges(const IntMat<N>& m) {
  IntGauge g;
  g.norm_inf = norm_inf(m);
  g.norm_inf_inverse = norm_inf(inverse_unimodular(m));
  g.delta = g.norm_inf * g.norm_inf_inverse;
  return g;
}

/// Row-major literal: rows separated by ';', entries by whitespace.
template <int N>
std::string to_string(const IntMat<N>& m);

template <int N>
IntMat<N> parse_matrix(std::string_view text);

/// Parses a literal whose dimension (2 or 3) is inferred from the row count.
std::variant<Mat2, Mat3> parse_any_matrix(std::string_view text);

template <int N>
std::ostream& operator<<(std::ostream& os, const IntMat<N>& m);

template <>
std::int64_t det(const Mat2&);
template <>
std::int64_t det(const Mat3&);
template <>
Mat2 inverse_unimodular(const Mat2&);
template <>
Mat3 inverse_unimodular(const Mat3&);

extern template Mat2 mul(const Mat2&, const Mat2&);
extern template Mat3 mul(const Mat3&, const Mat3&);
extern template std::string to_string(const Mat2&);
extern template std::string to_string(const Mat3&);
extern template Mat2 parse_matrix<2>(std::string_view);
extern template Mat3 parse_matrix<3>(std::string_view);
extern template std::ostream& operator<<(std::ostream&, const Mat2&);
extern template std::ostream& operator<<(std::ostream&, const Mat3&);

}  // namespace liftlab
