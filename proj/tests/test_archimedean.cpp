#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "liftlab/archimedean.hpp"
#include "liftlab/enumeration.hpp"
#include "liftlab/rng.hpp"

using namespace liftlab;

namespace {

RealMat3 diag3(double a, double b, double c) {
  return Eigen::Vector3d(a, b, c).asDiagonal();
}

// Closed-form inner integral of sinh(v) sinh(u + v) dv from 0 to V.
double inner_closed(double u, double V) {
  return 0.5 * ((std::sinh(u + 2 * V) - std::sinh(u)) / 2 - V * std::cosh(u));
}

}  // namespace

TEST_CASE("cartan coordinates") {
  const auto c = cartan(diag3(3, 1, 1.0 / 3));
  CHECK(c.a[0] == doctest::Approx(3).epsilon(1e-12));
  CHECK(c.a[1] == doctest::Approx(1).epsilon(1e-12));
  CHECK(c.a[2] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  const auto id = cartan(RealMat3::Identity());
  for (double a : id.a) CHECK(a == doctest::Approx(1));

  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const RealMat3 g = random_rotation(rng) * diag3(2, 1, 0.5) * random_rotation(rng);
    const auto cc = cartan(g);
    CHECK(std::abs(cc.a[0] - 2) < 1e-9);
    CHECK(std::abs(cc.a[1] - 1) < 1e-9);
    CHECK(std::abs(cc.a[2] - 0.5) < 1e-9);
  }
  // Against Eigen's two-sided Jacobi SVD.
  for (int t = 0; t < 200; ++t) {
    const RealMat3 g = random_sl3_real(rng, 3.0);
    const auto cc = cartan(g);
    const Eigen::Vector3d sv = Eigen::JacobiSVD<RealMat3>(g).singularValues();
    for (int i = 0; i < 3; ++i) CHECK(std::abs(cc.a[i] - sv(i)) <= 1e-10 * sv(0));
    CHECK(cc.a[0] * cc.a[1] * cc.a[2] == doctest::Approx(1).epsilon(1e-8));
  }
  RealMat3 bad = RealMat3::Identity();
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(cartan(bad), InvalidArgument);
  CHECK_THROWS_AS(cartan(diag3(2, 1, 1)), InvalidArgument);
}

TEST_CASE("gauges") {
  CHECK(norm_K(diag3(2, 1, 0.5)) == doctest::Approx(2));
  CHECK(norm_delta(diag3(2, 1, 0.5)) == doctest::Approx(4));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const RealMat3 g = random_sl3_real(rng, 2.0), h = random_sl3_real(rng, 2.0);
    const RealMat3 gi = g.inverse();
    CHECK(norm_delta(g) == doctest::Approx(norm_delta(gi)).epsilon(1e-9));
    CHECK(norm_delta(g) <= norm_K(g) * norm_K(g) * norm_K(g) * (1 + 1e-9));
    CHECK(norm_K(g * h) <= (1 + 1e-9) * norm_K(g) * norm_K(h));
    CHECK(norm_delta(g * h) <= (1 + 1e-9) * norm_delta(g) * norm_delta(h));
    const RealMat2 a = random_sl2_real(rng, 2.0), b = random_sl2_real(rng, 2.0);
    CHECK(norm_H(a * b) <= (1 + 1e-9) * norm_H(a) * norm_H(b));
  }
  // Gauge equivalence on integer matrices.
  double lo = 1e9, hi = 0;
  for (const auto& g : enumerate_sl3(3)) {
    const auto ga = gauges(g);
    const double r = norm_delta(to_real(g)) / static_cast<double>(ga.delta);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(lo >= 1.0 - 1e-12);
  CHECK(hi <= 9.0);
}

TEST_CASE("hyperbolic plane") {
  const std::complex<double> i(0, 1);
  CHECK(hyperbolic_distance(i, i) == 0);
  CHECK(hyperbolic_distance(i, 2.0 * i) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(hyperbolic_distance(i, {1, 0}), InvalidArgument);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    const RealMat2 g = random_sl2_real(rng, 3.0);
    CHECK(std::abs(norm_H(g) - std::exp(hyperbolic_distance(i, mobius(g, i)) / 2)) <= 1e-9 * norm_H(g));
  }
  for (int t = 0; t < 100; ++t) {
    const RealMat2 g = random_sl2_real(rng, 2.0);
    const std::complex<double> z(uniform01(rng) * 4 - 2, 0.1 + uniform01(rng) * 3);
    const std::complex<double> w(uniform01(rng) * 4 - 2, 0.1 + uniform01(rng) * 3);
    CHECK(std::abs(hyperbolic_distance(mobius(g, z), mobius(g, w)) - hyperbolic_distance(z, w)) <= 1e-9);
  }
}

TEST_CASE("iwasawa") {
  CHECK(iwasawa_delta(RealMat3::Identity()) == doctest::Approx(1));
  CHECK(iwasawa_delta(diag3(2, 1, 0.5)) == doctest::Approx(16));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const RealMat3 g = random_sl3_real(rng, 2.0);
    CHECK(iwasawa_delta(random_rotation(rng) * g) == doctest::Approx(iwasawa_delta(g)).epsilon(1e-9));
    // Gram-Schmidt closed form: r11 = |c1|, r11 r22 r33 = 1, r11 r22 = |c1 x c2|.
    const Eigen::Vector3d c1 = g.col(0), c2 = g.col(1);
    const double closed = c1.squaredNorm() * c1.cross(c2).squaredNorm();
    CHECK(iwasawa_delta(g) == doctest::Approx(closed).epsilon(1e-9));
  }
}

TEST_CASE("xi") {
  const auto e = xi(RealMat3::Identity(), 4000, 9);
  CHECK(std::abs(e.estimate - 1) <= 3 * e.std_error + 1e-12);
  const RealMat3 d = diag3(2, 1, 0.5);
  const auto a = xi(d, 20000, 1), b = xi(d, 20000, 2);
  CHECK(std::abs(a.estimate - b.estimate) <= 3 * std::hypot(a.std_error, b.std_error));
  CHECK(xi(d, 20000, 1, 3).estimate == a.estimate);
  CHECK(a.estimate >= 1.0 / norm_delta(d) - 3 * a.std_error);
  CHECK(a.estimate <= 1.0);
  CHECK_THROWS_AS(xi(d, 10, 1), InvalidArgument);
}

TEST_CASE("ball volumes") {
  CHECK(haar_ball_volume(VolumeGauge::H2, 1.0) == 0);
  CHECK(haar_ball_volume(VolumeGauge::H2, std::exp(0.5)) ==
        doctest::Approx(2 * std::numbers::pi * (std::cosh(1.0) - 1)));
  CHECK_THROWS_AS(haar_ball_volume(VolumeGauge::K, 0.5), InvalidArgument);
  // Nested 2-D integration against the closed-form inner integral.
  for (double L : {1.0, 2.5, 4.0}) {
    const int n = 4000;
    double s = 0;
    for (int k = 0; k < n; ++k) {
      const double u = (k + 0.5) * L / n;
      s += std::sinh(u) * inner_closed(u, L - u) * L / n;
    }
    CHECK(haar_ball_volume(VolumeGauge::Delta, std::exp(L)) == doctest::Approx(s).epsilon(1e-5));
  }
  std::vector<std::pair<double, double>> pts;
  for (double L = 2; L <= 6; L += 0.5) {
    const double T = std::exp(L);
    const double r = haar_ball_volume(VolumeGauge::Delta, T) / (T * T * L);
    CHECK(r > 0.01);
    CHECK(r < 1.0);
  }
}

TEST_CASE("autocorrelation") {
  const double T = 8.0;
  const double V = haar_ball_volume(VolumeGauge::Delta, T);
  const auto id = ball_autocorrelation(RealMat3::Identity(), T, 5000, 3);
  CHECK(std::abs(id.estimate - 1.0 / V) <= 3 * id.std_error + 1e-12 / V);
  const auto far = ball_autocorrelation(diag3(10, 1, 0.1), T, 5000, 3);
  CHECK(far.estimate == 0.0);
  CHECK(far.std_error == 0.0);
  const RealMat3 g = diag3(2, 1, 0.5);
  CHECK(ball_autocorrelation(g, T, 10000, 5, 3).estimate == ball_autocorrelation(g, T, 10000, 5, 1).estimate);
}
