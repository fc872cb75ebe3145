#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "liftlab/error.hpp"
#include "liftlab/exact_matrix.hpp"

namespace liftlab {

using RealMat2 = Eigen::Matrix2d;
using RealMat3 = Eigen::Matrix3d;

/// Singular values a1 >= a2 >= a3 (for 2x2: a1 >= a2 = 1/a1, a3 unused).
struct CartanCoords {
  int dim = 3;
  std::array<double, 3> a{1.0, 1.0, 1.0};

  double a1() const { return a[0]; }
  double a_min() const { return a[dim - 1]; }
};

/// Throws InvalidArgument on non-finite entries or det outside 1 +- 1e-9
/// (relative to the product of row norms).
template <class Derived>
void require_special_linear(const Eigen::MatrixBase<Derived>& g) {
  if (!g.allFinite()) throw InvalidArgument("matrix has non-finite entries");
  double scale = 1.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) scale *= std::max(1.0, static_cast<double>(g.row(i).norm()));
  if (std::abs(static_cast<double>(g.determinant()) - 1.0) > 1e-9 * scale)
    throw InvalidArgument("matrix determinant is not 1");
}

/// One-sided (Hestenes) cyclic Jacobi: rotates column pairs of a copy of g
/// until all are orthogonal, i.e. diagonalizes g^T g implicitly. Returns the
/// column norms, which are the singular values.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::ColsAtCompileTime, 1> jacobi_singular_values(
    const Eigen::MatrixBase<Derived>& g) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> w = g;
  const Eigen::Index n = w.cols();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const Scalar alpha = w.col(i).squaredNorm(), beta = w.col(j).squaredNorm();
        const Scalar gamma = w.col(i).dot(w.col(j));
        if (std::abs(gamma) <= Scalar(1e-15) * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Scalar zeta = (beta - alpha) / (2 * gamma);
        const Scalar t = (zeta >= 0 ? 1 : -1) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        const Scalar c = 1 / std::sqrt(1 + t * t), s = c * t;
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
          const Scalar x = w(r, i), y = w(r, j);
          w(r, i) = c * x - s * y;
          w(r, j) = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  Eigen::Matrix<Scalar, Derived::ColsAtCompileTime, 1> sv(n);
  for (Eigen::Index i = 0; i < n; ++i) sv(i) = w.col(i).norm();
  std::sort(sv.data(), sv.data() + n, [](Scalar a, Scalar b) { return a > b; });
  return sv;
}

template <class Derived>
CartanCoords cartan(const Eigen::MatrixBase<Derived>& g) {
  static_assert(Derived::RowsAtCompileTime == Derived::ColsAtCompileTime, "square matrix expected");
  require_special_linear(g);
  const auto sv = jacobi_singular_values(g.template cast<double>());
  CartanCoords c;
  c.dim = static_cast<int>(sv.size());
  if (c.dim != 2 && c.dim != 3) throw InvalidArgument("cartan: dimension must be 2 or 3");
  for (int i = 0; i < c.dim; ++i) c.a[i] = sv(i);
  if (c.dim == 2) c.a[2] = 0.0;
  return c;
}

template <class Derived>
double norm_K(const Eigen::MatrixBase<Derived>& g) {
  return cartan(g).a1();
}

/// a1 / a3 (a1 / a2 for 2x2).
template <class Derived>
double norm_delta(const Eigen::MatrixBase<Derived>& g) {
  const CartanCoords c = cartan(g);
  return c.a1() / c.a_min();
}

/// Largest singular value of a 2x2 matrix; equals exp(d(i, g i) / 2).
template <class Derived>
double norm_H(const Eigen::MatrixBase<Derived>& g) {
  static_assert(Derived::RowsAtCompileTime == 2, "norm_H is defined on SL2");
  return cartan(g).a1();
}

template <int N>
Eigen::Matrix<double, N, N> to_real(const IntMat<N>& m) {
  Eigen::Matrix<double, N, N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = static_cast<double>(m(i, j));
  return r;
}

/// Hyperbolic distance in the upper half plane.
double hyperbolic_distance(std::complex<double> z1, std::complex<double> z2);

/// Moebius action of a 2x2 real matrix.
std::complex<double> mobius(const RealMat2& g, std::complex<double> z);

/// (r11 / r33)^2 for g = k r with r upper triangular, positive diagonal.
double iwasawa_delta(const RealMat3& g);

/// Haar-uniform rotation (unit quaternion method).
RealMat3 random_rotation(std::mt19937_64& rng);

/// Random SL3(R) element k1 diag(e^x1, e^x2, e^x3) k2 with |xi| <= spread.
RealMat3 random_sl3_real(std::mt19937_64& rng, double spread);
RealMat2 random_sl2_real(std::mt19937_64& rng, double spread);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Samples are drawn in fixed chunks with independent seeded streams, so
/// the estimate does not depend on `threads`.
inline constexpr std::uint64_t kMonteCarloChunk = 4096;

/// Harish-Chandra Xi(g) = int_K delta^{-1/2}(g k) dk.
MonteCarloEstimate xi(const RealMat3& g, std::uint64_t n_samples, std::uint64_t seed,
                      unsigned threads = 1);

enum class VolumeGauge { K, Delta, H2 };
std::string to_string(VolumeGauge g);
VolumeGauge parse_volume_gauge(std::string_view text);

/// Haar measure of {||g|| <= T}; K has mass 1 and the chamber coordinates
/// u = alpha1 - alpha2, v = alpha2 - alpha3 carry Lebesgue measure.
double haar_ball_volume(VolumeGauge gauge, double T);

/// Chamber density |sinh(u) sinh(v) sinh(u + v)|.
inline double chamber_density(double u, double v) {
  return std::abs(std::sinh(u) * std::sinh(v) * std::sinh(u + v));
}

/// (chi * chi)(g) for chi the normalized indicator of the delta-ball of
/// radius T. Exactly 0 when ||g||_delta > T^2.
MonteCarloEstimate ball_autocorrelation(const RealMat3& g, double T, std::uint64_t n_samples,
                                        std::uint64_t seed, unsigned threads = 1);

/// Smallest C0 with Xi(g) <= ||g||_delta^-1 (log ||g||_delta + 1)^C0 at this sample.
double xi_upper_exponent(const RealMat3& g, double xi_value);

}  // namespace liftlab
