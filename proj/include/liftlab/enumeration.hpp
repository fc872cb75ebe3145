#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <vector>

#include "liftlab/exact_matrix.hpp"
#include "liftlab/finite_geometry.hpp"
#include "liftlab/parallel.hpp"

namespace liftlab {

inline constexpr std::int64_t kMaxSl2Bound = 100'000;
inline constexpr std::int64_t kMaxSl3Bound = 40;
inline constexpr std::int64_t kMaxOracleBound = 3;

enum class Group { SL2, SL3 };
enum class Gauge { Inf, Delta };

/// Congruence restriction applied while enumerating.
struct BallFilter {
  enum class Kind { None, IdentityMod, FixesPoint, FixesFlag };
  Kind kind = Kind::None;
  std::int64_t q = 1;
  ProjPoint point{};
  Flag flag{};

  static BallFilter none() { return {}; }
  static BallFilter identity_mod(std::int64_t q) { return {Kind::IdentityMod, q, {}, {}}; }
  static BallFilter fixes_point(const ProjPoint& p) { return {Kind::FixesPoint, p.q, p, {}}; }
  static BallFilter fixes_flag(const Flag& f) { return {Kind::FixesFlag, f.line.q, {}, f}; }
};

struct BallSpec {
  Group group = Group::SL3;
  Gauge gauge = Gauge::Inf;
  std::int64_t bound = 1;  // T for the inf gauge, D for the delta gauge
  BallFilter filter{};
};

/// Smallest S with S^3 >= 2 D^2. Inside the delta ball ||g||^3 <= 2 D^2,
/// because ||g|| <= 2 ||g^-1||^2 (entries of g are 2x2 minors of g^-1).
std::int64_t delta_ball_inf_bound(std::int64_t D);

/// Validates the spec and throws InvalidArgument / InfeasibleBound.
void validate(const BallSpec& spec);

/// True iff the reduction of gamma satisfies the filter (decided without
/// building MatModQ: parallel vectors are tested with cross products).
bool passes_filter(const Mat3& gamma, const BallFilter& filter);
bool passes_filter(const Mat2& gamma, const BallFilter& filter);

namespace detail {

struct Sl3Plan {
  std::int64_t box = 1;     // inf bound on entries
  std::int64_t delta = 0;   // 0: no delta restriction
  std::array<std::vector<std::int64_t>, 6> values;  // r1[0..2], r2[0..2]
  BallFilter filter{};
  bool post_filter = false;
};

Sl3Plan make_sl3_plan(const BallSpec& spec);

inline std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

/// a x + b y = g >= 0.
inline std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    std::int64_t t = a / b;
    std::int64_t r = a - t * b;
    a = b;
    b = r;
    std::int64_t nx = x0 - t * x1, ny = y0 - t * y1;
    x0 = x1;
    y0 = y1;
    x1 = nx;
    y1 = ny;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

using V3 = std::array<std::int64_t, 3>;

inline V3 cross(const V3& a, const V3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline std::int64_t dot(const V3& a, const V3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline std::int64_t vnorm(const V3& a) {
  return std::max({iabs(a[0]), iabs(a[1]), iabs(a[2])});
}

/// Solution set of c . v = 1 for primitive c: p + s k1 + t k2.
struct Completion {
  V3 p, k1, k2;
};

/// Particular solution by nested extended gcd, kernel basis from the same
/// Bezout coefficients (k1 x k2 = -c), then Lagrange reduction of the basis
/// and size reduction of p against it.
inline Completion complete_row(const V3& c) {
  Completion r{};
  std::int64_t u, w, s, t;
  const std::int64_t g12 = ext_gcd(c[0], c[1], u, w);
  if (g12 == 0) {
    r.p = {0, 0, c[2]};
    r.k1 = {1, 0, 0};
    r.k2 = {0, 1, 0};
  } else {
    ext_gcd(g12, c[2], s, t);
    r.p = {s * u, s * w, t};
    r.k1 = {c[1] / g12, -c[0] / g12, 0};
    r.k2 = {-c[2] * u, -c[2] * w, g12};
  }
  // Lagrange (Gauss) reduction.
  for (;;) {
    std::int64_t n1 = dot(r.k1, r.k1), n2 = dot(r.k2, r.k2);
    if (n1 > n2) {
      std::swap(r.k1, r.k2);
      std::swap(n1, n2);
    }
    const std::int64_t d = dot(r.k1, r.k2);
    const auto mu = static_cast<std::int64_t>(std::llround(static_cast<double>(d) / n1));
    if (mu == 0) break;
    for (int i = 0; i < 3; ++i) r.k2[i] -= mu * r.k1[i];
    if (dot(r.k2, r.k2) >= n2) {
      // No progress (rounding tie); undo is unnecessary, the basis is still valid.
      break;
    }
  }
  // Move p close to the origin: subtract the nearest lattice vector of the
  // orthogonal projection (any lattice translate is still a solution).
  const double g11 = static_cast<double>(dot(r.k1, r.k1)), g22 = static_cast<double>(dot(r.k2, r.k2));
  const double g12d = static_cast<double>(dot(r.k1, r.k2));
  const double b1 = static_cast<double>(dot(r.p, r.k1)), b2 = static_cast<double>(dot(r.p, r.k2));
  const double detg = g11 * g22 - g12d * g12d;
  if (detg > 0) {
    const auto a1 = static_cast<std::int64_t>(std::llround((b1 * g22 - b2 * g12d) / detg));
    const auto a2 = static_cast<std::int64_t>(std::llround((b2 * g11 - b1 * g12d) / detg));
    for (int i = 0; i < 3; ++i) r.p[i] -= a1 * r.k1[i] + a2 * r.k2[i];
  }
  return r;
}

/// Every third row r3 with |r3|_inf <= box and c . r3 = 1, in increasing (s, t).
template <class F>
inline void for_each_completion(const V3& c, std::int64_t box, F&& emit) {
  const Completion sol = complete_row(c);
  const V3 n = cross(sol.k1, sol.k2);
  int z = 0;
  for (int i = 1; i < 3; ++i)
    if (iabs(n[i]) > iabs(n[z])) z = i;
  const int i = (z + 1) % 3, j = (z + 2) % 3;
  // Cramer on coordinates (i, j): s = (w_i k2_j - w_j k2_i) / Delta, |Delta| = |n_z|.
  const std::int64_t bound_num = (box + iabs(sol.p[i])) * iabs(sol.k2[j]) +
                                 (box + iabs(sol.p[j])) * iabs(sol.k2[i]);
  const std::int64_t s_max = bound_num / iabs(n[z]) + 1;
  for (std::int64_t s = -s_max; s <= s_max; ++s) {
    V3 w{sol.p[0] + s * sol.k1[0], sol.p[1] + s * sol.k1[1], sol.p[2] + s * sol.k1[2]};
    std::int64_t lo = INT64_MIN / 4, hi = INT64_MAX / 4;
    bool empty = false;
    for (int l = 0; l < 3 && !empty; ++l) {
      const std::int64_t k = sol.k2[l];
      if (k == 0) {
        empty = iabs(w[l]) > box;
      } else if (k > 0) {
        lo = std::max(lo, ceil_div(-box - w[l], k));
        hi = std::min(hi, floor_div(box - w[l], k));
      } else {
        lo = std::max(lo, ceil_div(box - w[l], k));
        hi = std::min(hi, floor_div(-box - w[l], k));
      }
    }
    if (empty) continue;
    for (std::int64_t t = lo; t <= hi; ++t) {
      emit(V3{w[0] + t * sol.k2[0], w[1] + t * sol.k2[1], w[2] + t * sol.k2[2]});
    }
  }
}

inline std::int64_t gcd3(const V3& v) {
  return std::gcd(std::gcd(iabs(v[0]), iabs(v[1])), iabs(v[2]));
}

/// Runs partition `part` (= index into plan.values[0]) of the two-row loop.
template <class Visitor>
void sl3_partition(const Sl3Plan& plan, std::size_t part, Visitor& visit) {
  const auto& v = plan.values;
  const std::int64_t box = plan.box, D = plan.delta;
  V3 r1{v[0][part], 0, 0};
  for (std::int64_t x1 : v[1]) {
    r1[1] = x1;
    for (std::int64_t x2 : v[2]) {
      r1[2] = x2;
      if (gcd3(r1) != 1) continue;
      const std::int64_t m1 = vnorm(r1);
      if (D && m1 > D) continue;
      V3 r2{};
      for (std::int64_t y0 : v[3]) {
        r2[0] = y0;
        for (std::int64_t y1 : v[4]) {
          r2[1] = y1;
          const std::int64_t c2 = r1[0] * y1 - r1[1] * y0;
          const std::int64_t m01 = std::max({m1, iabs(y0), iabs(y1)});
          if (D && iabs(c2) * m01 > D) continue;
          for (std::int64_t y2 : v[5]) {
            r2[2] = y2;
            const V3 c = cross(r1, r2);
            if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
            const std::int64_t m12 = std::max(m01, iabs(y2));
            const std::int64_t cn = vnorm(c);
            if (D && cn * m12 > D) continue;
            if (gcd3(c) != 1) continue;
            for_each_completion(c, box, [&](const V3& r3) {
              if (D) {
                const std::int64_t m = std::max(m12, vnorm(r3));
                const std::int64_t inv =
                    std::max({cn, vnorm(cross(r2, r3)), vnorm(cross(r3, r1))});
                if (m * inv > D) return;
              }
              const Mat3 g({r1[0], r1[1], r1[2], r2[0], r2[1], r2[2], r3[0], r3[1], r3[2]});
              if (plan.post_filter && !passes_filter(g, plan.filter)) return;
              visit(g);
            });
          }
        }
      }
    }
  }
}

inline std::size_t partition_count(const Sl3Plan& plan) { return plan.values[0].size(); }

}  // namespace detail

/// Every SL2(Z) element of the ball (inf gauge only), each exactly once.
template <class Visitor>
void for_each_sl2(const BallSpec& spec, Visitor&& visit) {
  validate(spec);
  const std::int64_t T = spec.bound;
  const bool cong = spec.filter.kind == BallFilter::Kind::IdentityMod;
  const std::int64_t q = cong ? spec.filter.q : 1;
  // smallest value >= -T congruent to r mod q
  auto first = [&](std::int64_t r) {
    std::int64_t x = -T;
    std::int64_t m = ((x - r) % q + q) % q;
    return m == 0 ? x : x + (q - m);
  };
  for (std::int64_t a = first(1); a <= T; a += q) {
    for (std::int64_t b = first(0); b <= T; b += q) {
      if (a == 0) {
        if (b != 1 && b != -1) continue;
        const std::int64_t c = -b;
        if (cong && ((c % q) != 0)) continue;
        for (std::int64_t d = first(1); d <= T; d += q) visit(Mat2({a, b, c, d}));
        continue;
      }
      for (std::int64_t c = first(0); c <= T; c += q) {
        const std::int64_t num = 1 + b * c;
        if (num % a != 0) continue;
        const std::int64_t d = num / a;
        if (d > T || d < -T) continue;
        if (cong && (((d - 1) % q + q) % q) != 0) continue;
        visit(Mat2({a, b, c, d}));
      }
    }
  }
}

/// Reference semantics: nine nested loops with a determinant filter (T <= 3).
template <class Visitor>
void for_each_sl3_oracle(std::int64_t T, Visitor&& visit) {
  if (T < 1) throw InvalidArgument("oracle bound must be >= 1");
  if (T > kMaxOracleBound) throw InfeasibleBound("oracle enumeration limited to T <= 3");
  std::array<std::int64_t, 9> e{};
  auto rec = [&](auto&& self, int k) -> void {
    if (k == 9) {
      const Mat3 g(e);
      if (det(g) == 1) visit(g);
      return;
    }
    for (std::int64_t x = -T; x <= T; ++x) {
      e[k] = x;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
}

/// Every SL3(Z) element of the ball, serially, in a deterministic order.
template <class Visitor>
void for_each_sl3(const BallSpec& spec, Visitor&& visit) {
  validate(spec);
  const detail::Sl3Plan plan = detail::make_sl3_plan(spec);
  for (std::size_t p = 0; p < detail::partition_count(plan); ++p) detail::sl3_partition(plan, p, visit);
}

/// Partitioned reduction over the ball. Each partition folds into its own
/// copy of `init` via step(acc, gamma); partials are merged in partition
/// order, so the result does not depend on `threads`.
template <class Acc, class Step, class Merge>
Acc reduce_sl3(const BallSpec& spec, unsigned threads, Acc init, Step step, Merge merge) {
  validate(spec);
  const detail::Sl3Plan plan = detail::make_sl3_plan(spec);
  const std::size_t parts = detail::partition_count(plan);
  std::vector<std::optional<Acc>> partial(parts);
  parallel_for(parts, threads, [&](std::size_t p) {
    Acc local = init;
    auto visit = [&](const Mat3& g) { step(local, g); };
    detail::sl3_partition(plan, p, visit);
    partial[p] = std::move(local);
  });
  Acc total = std::move(init);
  for (auto& part : partial) merge(total, *part);
  return total;
}

/// Number of elements in the ball.
std::uint64_t count_ball(const BallSpec& spec, unsigned threads = 1);

// Materializing helpers (test and CLI convenience).
std::vector<Mat2> enumerate_sl2(std::int64_t T, const BallFilter& filter = {});
std::vector<Mat3> enumerate_sl3_oracle(std::int64_t T);
std::vector<Mat3> enumerate_sl3(std::int64_t T, const BallFilter& filter = {});
/// Delta-gauge ball ||g||_inf ||g^-1||_inf <= D.
std::vector<Mat3> enumerate_delta_ball(std::int64_t D, const BallFilter& filter = {});

}  // namespace liftlab
