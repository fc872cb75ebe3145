#include "liftlab/counting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace liftlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::int64_t md(std::int64_t v, std::int64_t q) {
  const std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

std::int64_t md128(__int128 v, std::int64_t q) {
  const auto r = static_cast<std::int64_t>(v % q);
  return r < 0 ? r + q : r;
}

// Counts divisors of n inside a window, factoring with a smallest-prime-factor
// table where it reaches and trial division beyond.
class DivisorCounter {
 public:
  explicit DivisorCounter(std::int64_t limit) {
    constexpr std::int64_t kCap = 20'000'000;
    const std::int64_t n = std::min(limit, kCap);
    spf_.assign(static_cast<std::size_t>(n + 1), 0);
    for (std::int64_t i = 2; i <= n; ++i) {
      if (spf_[i]) continue;
      for (std::int64_t j = i; j <= n; j += i)
        if (!spf_[j]) spf_[j] = static_cast<std::int32_t>(i);
    }
  }

  /// #{e | n : lo <= e <= hi}, n >= 1.
  std::uint64_t count_in(std::int64_t n, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) return 0;
    factor(n);
    divs_.assign(1, 1);
    for (auto [p, k] : factors_) {
      const std::size_t base = divs_.size();
      std::int64_t pk = 1;
      for (int e = 1; e <= k; ++e) {
        pk *= p;
        for (std::size_t i = 0; i < base; ++i) divs_.push_back(divs_[i] * pk);
      }
    }
    std::uint64_t c = 0;
    for (auto d : divs_) c += (d >= lo && d <= hi);
    return c;
  }

 private:
  void factor(std::int64_t n) {
    factors_.clear();
    auto push = [&](std::int64_t p) {
      if (!factors_.empty() && factors_.back().first == p)
        ++factors_.back().second;
      else
        factors_.push_back({p, 1});
    };
    while (n > 1 && n < static_cast<std::int64_t>(spf_.size()) && n >= 2) {
      const std::int64_t p = spf_[n];
      push(p);
      n /= p;
    }
    if (n <= 1) return;
    for (std::int64_t p = 2; p * p <= n; ++p) {
      while (n % p == 0) {
        push(p);
        n /= p;
      }
    }
    if (n > 1) push(n);
  }

  std::vector<std::int32_t> spf_;
  std::vector<std::pair<std::int64_t, int>> factors_;
  std::vector<std::int64_t> divs_;
};

std::int64_t first_in_class(std::int64_t lo, std::int64_t r, std::int64_t m) {
  return lo + md(r - lo, m);
}

}  // namespace

std::string to_string(Space s) {
  switch (s) {
    case Space::None: return "none";
    case Space::Proj: return "proj";
    case Space::Flag: return "flag";
  }
  return "?";
}

std::string to_string(Gauge g) { return g == Gauge::Inf ? "inf" : "delta"; }

Space parse_space(std::string_view text) {
  if (text == "none") return Space::None;
  if (text == "proj") return Space::Proj;
  if (text == "flag") return Space::Flag;
  throw InvalidArgument("unknown space: " + std::string(text));
}

Gauge parse_gauge(std::string_view text) {
  if (text == "inf") return Gauge::Inf;
  if (text == "delta") return Gauge::Delta;
  throw InvalidArgument("unknown gauge: " + std::string(text));
}

void sort_records(std::vector<CountRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const CountRecord& a, const CountRecord& b) {
    return a.q != b.q ? a.q < b.q : a.T < b.T;
  });
}

CountRecord count_sl2_congruence(std::int64_t q, std::int64_t T) {
  if (q < 1) throw InvalidArgument("q must be >= 1");
  if (T < 1) throw InvalidArgument("T must be >= 1");
  if (T > 1'000'000) throw InfeasibleBound("count-sl2 limited to T <= 10^6");
  const double work = (2.0 * T / q + 1) * (2.0 * T / (static_cast<double>(q) * q) + 1);
  if (work > 4e9) throw InfeasibleBound("count-sl2: (q, T) needs too many (a, d) pairs");
  const auto t0 = Clock::now();
  const std::int64_t q2 = q * q;
  const std::int64_t L = T / q;
  DivisorCounter divisors((T * T + 1) / q2 + 1);
  std::uint64_t total = 0;
  for (std::int64_t a = first_in_class(-T, 1, q); a <= T; a += q) {
    // ad = 1 (mod q^2) is forced by b, c = 0 (mod q).
    std::int64_t x, y;
    if (detail::ext_gcd(md(a, q2), q2, x, y) != 1) continue;
    const std::int64_t dres = md(x, q2);
    for (std::int64_t d = first_in_class(-T, dres, q2); d <= T; d += q2) {
      const std::int64_t m = (a * d - 1) / q2;  // b' c' = m with b = q b', c = q c'
      if (m == 0) {
        total += static_cast<std::uint64_t>(2 * (2 * L + 1) - 1);
        continue;
      }
      if (L == 0) continue;
      const std::int64_t n = m < 0 ? -m : m;
      total += 2 * divisors.count_in(n, (n + L - 1) / L, L);
    }
  }
  return CountRecord{q, Gauge::Inf, T, Space::None, total, seconds_since(t0)};
}

namespace {

struct PairAcc {
  std::uint64_t fast = 0, law = 0, brute = 0, elements = 0;
  std::array<std::uint64_t, 8> types{};
  std::array<std::uint64_t, 3> classes{};

  void merge(const PairAcc& o) {
    fast += o.fast;
    law += o.law;
    brute += o.brute;
    elements += o.elements;
    for (int i = 0; i < 8; ++i) types[i] += o.types[i];
    for (int i = 0; i < 3; ++i) classes[i] += o.classes[i];
  }
};

using V3 = std::array<std::int64_t, 3>;

bool parallel_mod(const V3& a, const V3& b, std::int64_t q) {
  return md(a[1] * b[2] - a[2] * b[1], q) == 0 && md(a[2] * b[0] - a[0] * b[2], q) == 0 &&
         md(a[0] * b[1] - a[1] * b[0], q) == 0;
}

V3 apply(const Mat3ModQ& m, const V3& v) {
  return {m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2],
          m(1, 0) * v[0] + m(1, 1) * v[1] + m(1, 2) * v[2],
          m(2, 0) * v[0] + m(2, 1) * v[1] + m(2, 2) * v[2]};
}

V3 apply_left(const V3& f, const Mat3ModQ& m) {
  return {f[0] * m(0, 0) + f[1] * m(1, 0) + f[2] * m(2, 0),
          f[0] * m(0, 1) + f[1] * m(1, 1) + f[2] * m(2, 1),
          f[0] * m(0, 2) + f[1] * m(1, 2) + f[2] * m(2, 2)};
}

void check_space(Space space, std::int64_t q) {
  if (space == Space::None) throw InvalidArgument("space must be proj or flag");
  require_prime(q);
  if (space == Space::Flag && q > kMaxFlagPrime)
    throw InfeasibleBound("flag counting limited to q <= " + std::to_string(kMaxFlagPrime));
  if (space == Space::Proj && q > kMaxPointPrime)
    throw InfeasibleBound("point counting limited to q <= " + std::to_string(kMaxPointPrime));
}

PairAcc run_fixed_pairs(std::int64_t q, std::int64_t D, Space space, unsigned threads, bool full) {
  check_space(space, q);
  std::vector<V3> points;
  std::vector<std::pair<V3, V3>> flags;
  if (full) {
    if (space == Space::Proj)
      for (const auto& p : enumerate_points(q)) points.push_back(p.c);
    else
      for (const auto& f : enumerate_flags(q)) flags.push_back({f.line.c, f.plane.c});
  }
  const BallSpec spec{Group::SL3, Gauge::Delta, D, {}};
  return reduce_sl3(
      spec, threads, PairAcc{},
      [&](PairAcc& acc, const Mat3& g) {
        const Mat3ModQ m = reduce_mod(g, q);
        ++acc.elements;
        acc.fast += static_cast<std::uint64_t>(space == Space::Proj ? count_fixed_points(m)
                                                                    : count_fixed_flags(m));
        if (!full) return;
        const ConjugacyType type = conjugacy_type(m);
        ++acc.types[static_cast<int>(type)];
        ++acc.classes[static_cast<int>(classify(m).kind)];
        acc.law += static_cast<std::uint64_t>(space == Space::Proj ? law_fixed_points(type, q)
                                                                   : law_fixed_flags(type, q));
        if (space == Space::Proj) {
          for (const auto& p : points) acc.brute += parallel_mod(apply(m, p), p, q);
        } else {
          for (const auto& [l, f] : flags)
            acc.brute += parallel_mod(apply(m, l), l, q) && parallel_mod(apply_left(f, m), f, q);
        }
      },
      [](PairAcc& total, const PairAcc& part) { total.merge(part); });
}

}  // namespace

CountRecord count_fixed_pairs(std::int64_t q, std::int64_t D, Space space, unsigned threads) {
  const auto t0 = Clock::now();
  const PairAcc acc = run_fixed_pairs(q, D, space, threads, false);
  return CountRecord{q, Gauge::Delta, D, space, acc.fast, seconds_since(t0)};
}

FixedPairsTable tabulate_fixed_pairs(std::int64_t q, std::int64_t D, Space space, unsigned threads) {
  const auto t0 = Clock::now();
  const PairAcc acc = run_fixed_pairs(q, D, space, threads, true);
  FixedPairsTable t;
  t.record = CountRecord{q, Gauge::Delta, D, space, acc.fast, seconds_since(t0)};
  t.law_sum = acc.law;
  t.brute_sum = acc.brute;
  t.elements = acc.elements;
  t.type_counts = acc.types;
  t.class_counts = acc.classes;
  return t;
}

BadCount count_bad(std::int64_t q, std::int64_t S, std::int64_t R, unsigned threads) {
  require_prime(q);
  if (S < 1 || R < 1) throw InvalidArgument("S and R must be >= 1");
  if (S > R) throw InvalidArgument("count-bad requires S <= R");
  const auto t0 = Clock::now();
  using Acc = std::pair<std::uint64_t, std::uint64_t>;
  const Acc acc = reduce_sl3(
      BallSpec{Group::SL3, Gauge::Inf, S, {}}, threads, Acc{0, 0},
      [&](Acc& a, const Mat3& g) {
        if (norm_inf(inverse_unimodular(g)) > R) return;
        const auto kind = classify(reduce_mod(g, q)).kind;
        if (kind == ReductionClass::Kind::BadDimTwo) ++a.first;
        if (kind == ReductionClass::Kind::Identity) ++a.second;
      },
      [](Acc& t, const Acc& p) {
        t.first += p.first;
        t.second += p.second;
      });
  return BadCount{q, S, R, acc.first, acc.second, seconds_since(t0)};
}

bool IdentityReport::passed(std::string_view name) const {
  for (const auto& [n, ok] : checks)
    if (n == name) return ok;
  throw InvalidArgument("no such check: " + std::string(name));
}

bool IdentityReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

IdentityReport verify_bad_identities(const Mat3& gamma, std::int64_t q) {
  require_prime(q);
  if (det(gamma) != 1) throw InvalidArgument("gamma must have determinant 1");
  const Mat3ModQ m = reduce_mod(gamma, q);
  IdentityReport r;
  r.gamma = gamma;
  r.q = q;
  r.cls = classify(m);
  if (r.cls.kind != ReductionClass::Kind::BadDimTwo)
    throw InvalidArgument("gamma is not BadDimTwo mod " + std::to_string(q));
  const std::int64_t a = r.cls.alpha;
  const std::int64_t ai = inv_mod(a, q);
  const std::int64_t ai2 = ai * ai % q;
  const Mat3 inv = inverse_unimodular(gamma);
  const Mat3ModQ mi = reduce_mod(inv, q);

  bool rel = true;
  const std::int64_t diag = md(a + ai2, q);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      rel = rel && md(m(i, j) + ai * mi(i, j) - (i == j ? diag : 0), q) == 0;
  r.checks.push_back({"3.1", rel});

  const std::int64_t t = trace(gamma), ti = trace(inv);
  r.checks.push_back({"3.2-corrected", md(t - 2 * a - ai2, q) == 0 && md(ti - 2 * ai - a * a, q) == 0});
  r.checks.push_back({"3.2-printed", md(t - a - 2 * ai2, q) == 0 && md(ti - ai - 2 * a * a, q) == 0});

  const std::int64_t L = 2 * a > q ? a - q : a;
  r.alpha_used = L;
  const __int128 lhs = static_cast<__int128>(L) * L * t - static_cast<__int128>(L) * ti;
  const __int128 rhs = static_cast<__int128>(L) * L * L - 1;
  r.checks.push_back({"3.3", md128(lhs - rhs, q * q) == 0});
  return r;
}

IdentityReport verify_identity_congruences(const Mat3& gamma, std::int64_t q) {
  if (q < 2) throw InvalidArgument("q must be >= 2");
  if (det(gamma) != 1) throw InvalidArgument("gamma must have determinant 1");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (md(gamma(i, j) - (i == j ? 1 : 0), q) != 0)
        throw InvalidArgument("gamma is not congruent to I mod " + std::to_string(q));
  IdentityReport r;
  r.gamma = gamma;
  r.q = q;
  r.cls = ReductionClass{ReductionClass::Kind::Identity, 0};
  r.alpha_used = 1;
  const std::int64_t q2 = q * q, q3 = q2 * q;
  const std::int64_t t = trace(gamma), ti = trace(inverse_unimodular(gamma));
  r.checks.push_back({"trace-3-mod-q2", md(t - 3, q2) == 0 && md(ti - 3, q2) == 0});
  r.checks.push_back({"trace-inverse-mod-q3", md(t - ti, q3) == 0});
  bool sq = true;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      __int128 s = 0;
      for (int k = 0; k < 3; ++k)
        s += static_cast<__int128>(gamma(i, k) - (i == k)) * (gamma(k, j) - (k == j));
      sq = sq && md128(s, q2) == 0;
    }
  }
  r.checks.push_back({"square-mod-q2", sq});
  return r;
}

namespace {

void check_trace_ranges(std::int64_t q, std::int64_t S, std::int64_t R) {
  require_prime(q);
  if (S < 0 || R < 0) throw InvalidArgument("S and R must be >= 0");
  if ((2.0 * S + 1) * (2.0 * R + 1) * static_cast<double>(q - 1) > 2e9)
    throw InfeasibleBound("trace-solutions: ranges too large for the triple loop");
}

// Solutions (x, y) of the trace relations for one alpha.
template <class F>
void for_each_trace_solution(std::int64_t q, std::int64_t S, std::int64_t R, std::int64_t a, F&& f) {
  const std::int64_t ai = inv_mod(a, q);
  const std::int64_t xr = md(2 * a + ai * ai, q), yr = md(2 * ai + a * a, q);
  const std::int64_t L = 2 * a > q ? a - q : a;
  const std::int64_t q2 = q * q;
  for (std::int64_t x = first_in_class(-S, xr, q); x <= S; x += q)
    for (std::int64_t y = first_in_class(-R, yr, q); y <= R; y += q)
      if (md(L * L * x - L * y - (L * L * L - 1), q2) == 0) f(x, y);
}

}  // namespace

TraceCount count_trace_solutions(std::int64_t q, std::int64_t S, std::int64_t R) {
  check_trace_ranges(q, S, R);
  const auto t0 = Clock::now();
  TraceCount c{q, S, R, 0, 0, 0.0};
  for (std::int64_t a = 1; a < q; ++a)
    for_each_trace_solution(q, S, R, a, [&](std::int64_t, std::int64_t) { ++c.value; });
  const std::int64_t Z = 2 * S / q, W = 2 * R / q;
  for (std::int64_t a = 1; a < q; ++a)
    for (std::int64_t z = -Z; z <= Z; ++z)
      for (std::int64_t w = -W; w <= W; ++w) c.eq51_value += md(a * z - w, q) == 0;
  c.wall_seconds = seconds_since(t0);
  return c;
}

std::pair<std::uint64_t, std::uint64_t> trace_reduction_check(std::int64_t q, std::int64_t S,
                                                              std::int64_t R) {
  check_trace_ranges(q, S, R);
  std::uint64_t bad = 0, checked = 0;
  for (std::int64_t a = 1; a < q; ++a) {
    std::vector<std::pair<std::int64_t, std::int64_t>> sols;
    for_each_trace_solution(q, S, R, a, [&](std::int64_t x, std::int64_t y) { sols.push_back({x, y}); });
    for (const auto& [x1, y1] : sols) {
      for (const auto& [x2, y2] : sols) {
        ++checked;
        if ((x1 - x2) % q != 0 || (y1 - y2) % q != 0) {
          ++bad;
          continue;
        }
        const std::int64_t z = (x1 - x2) / q, w = (y1 - y2) / q;
        const bool ok = std::abs(z) * q <= 2 * S && std::abs(w) * q <= 2 * R && md(a * z - w, q) == 0;
        bad += !ok;
      }
    }
  }
  return {bad, checked};
}

ExponentFit fit_loglog(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw InvalidArgument("fit needs at least two points");
  std::vector<double> xs, ys;
  for (const auto& [x, y] : points) {
    if (!(x > 0) || !(y > 0)) throw InvalidArgument("fit needs positive coordinates");
    xs.push_back(std::log(x));
    ys.push_back(std::log(y));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0) throw InvalidArgument("fit needs at least two distinct abscissae");
  ExponentFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (f.intercept + f.slope * xs[i]);
    ssr += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - ssr / syy : 1.0;
  return f;
}

ExponentFit fit_exponent(const std::vector<CountRecord>& records) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records) pts.push_back({static_cast<double>(r.T), static_cast<double>(r.value)});
  return fit_loglog(pts);
}

}  // namespace liftlab
