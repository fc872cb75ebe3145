#include "liftlab/enumeration.hpp"

#include <string>

namespace liftlab {

std::int64_t delta_ball_inf_bound(std::int64_t D) {
  if (D < 1) throw InvalidArgument("delta bound must be >= 1");
  if (D > 1'000'000) throw InfeasibleBound("delta bound too large: " + std::to_string(D));
  const std::int64_t target = 2 * D * D;
  std::int64_t s = 1;
  while (s * s * s < target) ++s;
  return s;
}

void validate(const BallSpec& spec) {
  if (spec.bound < 1) throw InvalidArgument("ball bound must be >= 1");
  const auto& f = spec.filter;
  switch (f.kind) {
    case BallFilter::Kind::None:
      break;
    case BallFilter::Kind::IdentityMod:
      if (f.q < 1) throw InvalidArgument("congruence modulus must be >= 1");
      break;
    case BallFilter::Kind::FixesPoint:
      require_prime(f.q);
      if (f.point.q != f.q) throw InvalidArgument("filter point has a different modulus");
      break;
    case BallFilter::Kind::FixesFlag:
      require_prime(f.q);
      if (f.flag.line.q != f.q || f.flag.plane.q != f.q)
        throw InvalidArgument("filter flag has a different modulus");
      break;
  }
  if (spec.group == Group::SL2) {
    if (spec.gauge != Gauge::Inf) throw InvalidArgument("SL2 enumeration supports the inf gauge only");
    if (f.kind != BallFilter::Kind::None && f.kind != BallFilter::Kind::IdentityMod)
      throw InvalidArgument("point and flag filters need SL3");
    if (spec.bound > kMaxSl2Bound)
      throw InfeasibleBound("SL2 bound exceeds " + std::to_string(kMaxSl2Bound));
    return;
  }
  const std::int64_t box =
      spec.gauge == Gauge::Inf ? spec.bound : delta_ball_inf_bound(spec.bound);
  if (box > kMaxSl3Bound)
    throw InfeasibleBound("SL3 inf bound " + std::to_string(box) + " exceeds " +
                          std::to_string(kMaxSl3Bound));
}

namespace {

std::int64_t md(std::int64_t v, std::int64_t q) {
  const std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

using V3 = std::array<std::int64_t, 3>;

bool parallel_mod(const V3& a, const V3& b, std::int64_t q) {
  return md(a[1] * b[2] - a[2] * b[1], q) == 0 && md(a[2] * b[0] - a[0] * b[2], q) == 0 &&
         md(a[0] * b[1] - a[1] * b[0], q) == 0;
}

}  // namespace

bool passes_filter(const Mat3& gamma, const BallFilter& filter) {
  const std::int64_t q = filter.q;
  switch (filter.kind) {
    case BallFilter::Kind::None:
      return true;
    case BallFilter::Kind::IdentityMod:
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (md(gamma(i, j) - (i == j ? 1 : 0), q) != 0) return false;
      return true;
    case BallFilter::Kind::FixesPoint:
    case BallFilter::Kind::FixesFlag: {
      std::array<std::int64_t, 9> g{};
      for (int k = 0; k < 9; ++k) g[k] = md(gamma.entries()[k], q);
      const V3& p = filter.kind == BallFilter::Kind::FixesPoint ? filter.point.c : filter.flag.line.c;
      V3 gp{};
      for (int i = 0; i < 3; ++i) gp[i] = md(g[3 * i] * p[0] + g[3 * i + 1] * p[1] + g[3 * i + 2] * p[2], q);
      if (!parallel_mod(gp, p, q)) return false;
      if (filter.kind == BallFilter::Kind::FixesPoint) return true;
      const V3& f = filter.flag.plane.c;
      V3 fg{};
      for (int j = 0; j < 3; ++j) fg[j] = md(f[0] * g[j] + f[1] * g[3 + j] + f[2] * g[6 + j], q);
      return parallel_mod(fg, f, q);
    }
  }
  return false;
}

bool passes_filter(const Mat2& gamma, const BallFilter& filter) {
  switch (filter.kind) {
    case BallFilter::Kind::None:
      return true;
    case BallFilter::Kind::IdentityMod:
      return md(gamma(0, 0) - 1, filter.q) == 0 && md(gamma(0, 1), filter.q) == 0 &&
             md(gamma(1, 0), filter.q) == 0 && md(gamma(1, 1) - 1, filter.q) == 0;
    default:
      throw InvalidArgument("point and flag filters need SL3");
  }
}

namespace detail {

Sl3Plan make_sl3_plan(const BallSpec& spec) {
  Sl3Plan plan;
  if (spec.gauge == Gauge::Inf) {
    plan.box = spec.bound;
  } else {
    plan.box = delta_ball_inf_bound(spec.bound);
    plan.delta = spec.bound;
  }
  plan.filter = spec.filter;
  plan.post_filter = spec.filter.kind != BallFilter::Kind::None;

  // Residue constraints on the first two rows implied by the filter (-1: free).
  std::array<std::int64_t, 6> residue;
  residue.fill(-1);
  std::int64_t q = 1;
  const auto& f = spec.filter;
  if (f.kind == BallFilter::Kind::IdentityMod && f.q > 1) {
    q = f.q;
    residue = {1 % q, 0, 0, 0, 1 % q, 0};
  } else if (f.kind == BallFilter::Kind::FixesPoint && f.point == basepoint(f.q)) {
    q = f.q;
    residue[2] = 0;
    residue[5] = 0;
  } else if (f.kind == BallFilter::Kind::FixesFlag && f.flag == base_flag(f.q)) {
    q = f.q;
    residue[1] = 0;
    residue[2] = 0;
    residue[5] = 0;
  }
  for (int k = 0; k < 6; ++k) {
    for (std::int64_t v = -plan.box; v <= plan.box; ++v) {
      if (residue[k] < 0 || md(v, q) == residue[k]) plan.values[k].push_back(v);
    }
  }
  return plan;
}

}  // namespace detail

std::uint64_t count_ball(const BallSpec& spec, unsigned threads) {
  if (spec.group == Group::SL2) {
    std::uint64_t n = 0;
    for_each_sl2(spec, [&](const Mat2&) { ++n; });
    return n;
  }
  return reduce_sl3(
      spec, threads, std::uint64_t{0}, [](std::uint64_t& acc, const Mat3&) { ++acc; },
      [](std::uint64_t& total, std::uint64_t part) { total += part; });
}

std::vector<Mat2> enumerate_sl2(std::int64_t T, const BallFilter& filter) {
  std::vector<Mat2> out;
  for_each_sl2(BallSpec{Group::SL2, Gauge::Inf, T, filter}, [&](const Mat2& g) { out.push_back(g); });
  return out;
}

std::vector<Mat3> enumerate_sl3_oracle(std::int64_t T) {
  std::vector<Mat3> out;
  for_each_sl3_oracle(T, [&](const Mat3& g) { out.push_back(g); });
  return out;
}

std::vector<Mat3> enumerate_sl3(std::int64_t T, const BallFilter& filter) {
  std::vector<Mat3> out;
  for_each_sl3(BallSpec{Group::SL3, Gauge::Inf, T, filter}, [&](const Mat3& g) { out.push_back(g); });
  return out;
}

std::vector<Mat3> enumerate_delta_ball(std::int64_t D, const BallFilter& filter) {
  std::vector<Mat3> out;
  for_each_sl3(BallSpec{Group::SL3, Gauge::Delta, D, filter}, [&](const Mat3& g) { out.push_back(g); });
  return out;
}

}  // namespace liftlab
