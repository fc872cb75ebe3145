#include "liftlab/exact_matrix.hpp"

#include <ostream>
#include <sstream>
#include <vector>

namespace liftlab {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw OverflowError(std::string(what) + ": result does not fit in 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

std::int64_t guarded(Wide v, const char* what) {
  if (v > kGuardBound || v < -kGuardBound) {
    throw OverflowError(std::string(what) + ": entry outside guard bound");
  }
  return static_cast<std::int64_t>(v);
}

Wide minor2(const Mat3& m, int r0, int r1, int c0, int c1) {
  return Wide(m(r0, c0)) * m(r1, c1) - Wide(m(r0, c1)) * m(r1, c0);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::int64_t> parse_row(std::string_view row) {
  std::istringstream is{std::string(row)};
  std::vector<std::int64_t> vals;
  std::string tok;
  while (is >> tok) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      throw InvalidArgument("matrix literal: bad integer '" + tok + "'");
    }
    if (pos != tok.size()) throw InvalidArgument("matrix literal: bad integer '" + tok + "'");
    vals.push_back(v);
  }
  return vals;
}

}  // namespace

template <>
std::int64_t det(const Mat2& m) {
  return narrow(Wide(m(0, 0)) * m(1, 1) - Wide(m(0, 1)) * m(1, 0), "det");
}

template <>
std::int64_t det(const Mat3& m) {
  Wide d = Wide(m(0, 0)) * minor2(m, 1, 2, 1, 2) - Wide(m(0, 1)) * minor2(m, 1, 2, 0, 2) +
           Wide(m(0, 2)) * minor2(m, 1, 2, 0, 1);
  return narrow(d, "det");
}

template <int N>
IntMat<N> mul(const IntMat<N>& a, const IntMat<N>& b) {
  typename IntMat<N>::Storage s{};
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      Wide acc = 0;
      for (int k = 0; k < N; ++k) acc += Wide(a(i, k)) * b(k, j);
      s[i * N + j] = guarded(acc, "mul");
    }
  }
  return IntMat<N>(s);
}

template <>
Mat2 inverse_unimodular(const Mat2& m) {
  if (det(m) != 1) throw InvalidArgument("inverse_unimodular: determinant is not 1");
  return Mat2({m(1, 1), -m(0, 1), -m(1, 0), m(0, 0)});
}

template <>
Mat3 inverse_unimodular(const Mat3& m) {
  if (det(m) != 1) throw InvalidArgument("inverse_unimodular: determinant is not 1");
  Mat3::Storage s{};
  // inverse(i, j) = cofactor(j, i)
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      s[i * 3 + j] = guarded(minor2(m, r0, r1, c0, c1), "inverse_unimodular");
    }
  }
  return Mat3(s);
}

template <int N>
std::string to_string(const IntMat<N>& m) {
  std::string out;
  for (int i = 0; i < N; ++i) {
    if (i) out += "; ";
    for (int j = 0; j < N; ++j) {
      if (j) out += ' ';
      out += std::to_string(m(i, j));
    }
  }
  return out;
}

template <int N>
IntMat<N> parse_matrix(std::string_view text) {
  auto rows = split(text, ';');
  if (static_cast<int>(rows.size()) != N) {
    throw InvalidArgument("matrix literal: expected " + std::to_string(N) + " rows");
  }
  typename IntMat<N>::Storage s{};
  for (int i = 0; i < N; ++i) {
    auto vals = parse_row(rows[i]);
    if (static_cast<int>(vals.size()) != N) {
      throw InvalidArgument("matrix literal: row " + std::to_string(i + 1) + " must have " +
                            std::to_string(N) + " entries");
    }
    for (int j = 0; j < N; ++j) s[i * N + j] = vals[j];
  }
  return IntMat<N>(s);
}

std::variant<Mat2, Mat3> parse_any_matrix(std::string_view text) {
  auto rows = split(text, ';');
  if (rows.size() == 2) return parse_matrix<2>(text);
  if (rows.size() == 3) return parse_matrix<3>(text);
  throw InvalidArgument("matrix literal: expected 2 or 3 rows");
}

template <int N>
std::ostream& operator<<(std::ostream& os, const IntMat<N>& m) {
  return os << to_string(m);
}

template Mat2 mul(const Mat2&, const Mat2&);
template Mat3 mul(const Mat3&, const Mat3&);
template std::string to_string(const Mat2&);
template std::string to_string(const Mat3&);
template Mat2 parse_matrix<2>(std::string_view);
template Mat3 parse_matrix<3>(std::string_view);
template std::ostream& operator<<(std::ostream&, const Mat2&);
template std::ostream& operator<<(std::ostream&, const Mat3&);

}  // namespace liftlab
