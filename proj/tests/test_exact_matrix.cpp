#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "liftlab/exact_matrix.hpp"

using namespace liftlab;

TEST_CASE("determinant") {
  CHECK(det(Mat3::identity()) == 1);
  CHECK(det(Mat3::elementary(0, 1, 1)) == 1);
  CHECK(det(Mat2({2, 1, 1, 1})) == 1);
  CHECK(det(Mat3({2, 0, 0, 0, 3, 0, 0, 0, 5})) == 30);
}

TEST_CASE("inverse") {
  CHECK(inverse_unimodular(Mat3::identity()) == Mat3::identity());
  CHECK(inverse_unimodular(Mat3({1, 0, 1, 0, 1, 0, 0, 0, 1})) == Mat3({1, 0, -1, 0, 1, 0, 0, 0, 1}));
  CHECK(inverse_unimodular(Mat2({2, 1, 1, 1})) == Mat2({1, -1, -1, 2}));
  CHECK_THROWS_AS(inverse_unimodular(Mat2({2, 0, 0, 1})), InvalidArgument);
}

TEST_CASE("gauges") {
  CHECK(gauges(Mat3::identity()) == IntGauge{1, 1, 1});
  CHECK(gauges(Mat2({2, 1, 1, 1})) == IntGauge{2, 2, 4});
  CHECK(gauges(Mat3({1, 0, 1, 0, 1, 0, 0, 0, 1})) == IntGauge{1, 1, 1});
  CHECK(trace(Mat3::identity()) == 3);
}

TEST_CASE("guard bound") {
  CHECK_THROWS_AS(Mat2({kGuardBound + 1, 0, 0, 1}), OverflowError);
  const Mat2 big({1, 1'000'000'000, 0, 1});
  CHECK_THROWS_AS(mul(big, Mat2({1, 1'000'000'001, 0, 1})), OverflowError);
}

TEST_CASE("random products of generators") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Mat3 g = Mat3::identity();
    for (int step = 0; step < 12; ++step) {
      int i = static_cast<int>(rng() % 3), j = static_cast<int>(rng() % 3);
      if (i == j) continue;
      g = g * Mat3::elementary(i, j, static_cast<std::int64_t>(rng() % 5) - 2);
    }
    REQUIRE(det(g) == 1);
    const Mat3 gi = inverse_unimodular(g);
    CHECK(gi * g == Mat3::identity());
    const auto ga = gauges(g);
    CHECK(ga.norm_inf_inverse <= 2 * ga.norm_inf * ga.norm_inf);
    CHECK(ga.norm_inf <= 2 * ga.norm_inf_inverse * ga.norm_inf_inverse);
    CHECK(gauges(gi).delta == ga.delta);
    CHECK((g * gi) * g == g * (gi * g));
  }
}

TEST_CASE("literals") {
  const Mat3 m({1, 0, 1, 0, 1, 0, 0, 0, 1});
  CHECK(to_string(m) == "1 0 1; 0 1 0; 0 0 1");
  CHECK(parse_matrix<3>("1 0 1; 0 1 0; 0 0 1") == m);
  CHECK(parse_matrix<2>(" 2 1 ;1 1 ") == Mat2({2, 1, 1, 1}));
  CHECK(std::holds_alternative<Mat2>(parse_any_matrix("0 -1; 1 0")));
  CHECK_THROWS_AS(parse_matrix<3>("1 0; 0 1"), InvalidArgument);
  CHECK_THROWS_AS(parse_matrix<2>("1 x; 0 1"), InvalidArgument);
  std::ostringstream os;
  os << Mat2({0, -1, 1, 0});
  CHECK(os.str() == "0 -1; 1 0");
}
