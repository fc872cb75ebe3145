#include "liftlab/lifting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <random>

#include "liftlab/rng.hpp"

namespace liftlab {

namespace {

using V3 = std::array<std::int64_t, 3>;

std::int64_t md(std::int64_t v, std::int64_t q) {
  const std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

bool parallel_mod(const V3& a, const V3& b, std::int64_t q) {
  return md(a[1] * b[2] - a[2] * b[1], q) == 0 && md(a[2] * b[0] - a[0] * b[2], q) == 0 &&
         md(a[0] * b[1] - a[1] * b[0], q) == 0;
}

template <class E>
V3 times(const E& g, const V3& v) {
  return {g[0] * v[0] + g[1] * v[1] + g[2] * v[2], g[3] * v[0] + g[4] * v[1] + g[5] * v[2],
          g[6] * v[0] + g[7] * v[1] + g[8] * v[2]};
}

template <class E>
V3 times_left(const V3& f, const E& g) {
  return {f[0] * g[0] + f[1] * g[3] + f[2] * g[6], f[0] * g[1] + f[1] * g[4] + f[2] * g[7],
          f[0] * g[2] + f[1] * g[5] + f[2] * g[8]};
}

// Works on any row-major 9-entry container.
template <class E>
bool maps_to_entries(const E& g, const SpacePoint& x, const SpacePoint& y) {
  const std::int64_t q = x.q();
  if (x.space == Space::Proj) return parallel_mod(times(g, x.point.c), y.point.c, q);
  // f_x g^-1 ~ f_y  <=>  f_y g ~ f_x.
  return parallel_mod(times(g, x.flag.line.c), y.flag.line.c, q) &&
         parallel_mod(times_left(y.flag.plane.c, g), x.flag.plane.c, q);
}

void check_pair(const SpacePoint& x, const SpacePoint& y) {
  if (x.space != y.space) throw InvalidArgument("source and target live in different spaces");
  if (x.q() != y.q()) throw InvalidArgument("source and target have different moduli");
}

void check_ball(std::int64_t T) {
  if (T < 1) throw InvalidArgument("ball radius must be >= 1");
  if (T > kMaxSl3Bound) throw InfeasibleBound("ball radius exceeds " + std::to_string(kMaxSl3Bound));
}

std::array<std::int8_t, 9> pack(const Mat3& g) {
  std::array<std::int8_t, 9> p{};
  for (int k = 0; k < 9; ++k) p[k] = static_cast<std::int8_t>(g.entries()[k]);
  return p;
}

Mat3 unpack(const std::array<std::int8_t, 9>& p) {
  Mat3::Storage s{};
  for (int k = 0; k < 9; ++k) s[k] = p[k];
  return Mat3(s);
}

}  // namespace

std::size_t space_size(Space space, std::int64_t q) {
  require_prime(q);
  switch (space) {
    case Space::Proj:
      if (q > kMaxPointPrime) throw InfeasibleBound("q exceeds " + std::to_string(kMaxPointPrime));
      return point_count(q);
    case Space::Flag:
      if (q > kMaxFlagPrime) throw InfeasibleBound("q exceeds " + std::to_string(kMaxFlagPrime));
      return flag_count(q);
    case Space::None:
      break;
  }
  throw InvalidArgument("space must be proj or flag");
}

SpacePoint space_point_at(Space space, std::int64_t q, std::size_t index) {
  if (index >= space_size(space, q)) throw InvalidArgument("space index out of range");
  return space == Space::Proj ? SpacePoint::of(point_at(q, index)) : SpacePoint::of(flag_at(q, index));
}

SpacePoint space_basepoint(Space space, std::int64_t q) {
  space_size(space, q);
  return space == Space::Proj ? SpacePoint::of(basepoint(q)) : SpacePoint::of(base_flag(q));
}

namespace {

std::size_t draw_excluding(std::mt19937_64& rng, std::size_t n, std::size_t skip) {
  std::size_t i = static_cast<std::size_t>(rng() % (n - 1));
  return i >= skip ? i + 1 : i;
}

}  // namespace

SpacePoint generic_source(Space space, std::int64_t q, std::uint64_t seed) {
  const std::size_t n = space_size(space, q);
  std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(q)));
  return space_point_at(space, q, draw_excluding(rng, n, space_basepoint(space, q).index()));
}

std::string to_string(const SpacePoint& x) {
  return x.space == Space::Proj ? to_string(x.point) : to_string(x.flag);
}

SpacePoint parse_space_point(Space space, std::int64_t q, std::string_view text) {
  space_size(space, q);
  return space == Space::Proj ? SpacePoint::of(parse_point(q, text)) : SpacePoint::of(parse_flag(q, text));
}

std::size_t image_index(const Mat3& gamma, const SpacePoint& x, const PrimeField& F) {
  const auto& g = gamma.entries();
  if (x.space == Space::Proj) {
    const V3 v = times(g, x.point.c);
    return point_index_of(F, v[0], v[1], v[2]);
  }
  const V3 line = times(g, x.flag.line.c);
  // Columns of gamma^-1 are r2 x r3, r3 x r1, r1 x r2.
  const V3 r1{g[0], g[1], g[2]}, r2{g[3], g[4], g[5]}, r3{g[6], g[7], g[8]};
  auto cross = [](const V3& a, const V3& b) {
    return V3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  const V3& f = x.flag.plane.c;
  auto dot = [](const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
  const V3 fi{dot(f, cross(r2, r3)), dot(f, cross(r3, r1)), dot(f, cross(r1, r2))};
  return flag_index_of(F, line, fi);
}

bool maps_to(const Mat3& gamma, const SpacePoint& x, const SpacePoint& y) {
  check_pair(x, y);
  return maps_to_entries(gamma.entries(), x, y);
}

std::size_t IndexSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

void IndexSet::merge(const IndexSet& other) {
  if (other.n_ != n_) throw InvalidArgument("IndexSet size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
}

std::vector<std::size_t> IndexSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n_; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

IndexSet reachable_set(const SpacePoint& x, std::int64_t T, unsigned threads) {
  check_ball(T);
  const std::int64_t q = x.q();
  const std::size_t n = space_size(x.space, q);
  const PrimeField F(q);
  return reduce_sl3(
      BallSpec{Group::SL3, Gauge::Inf, T, {}}, threads, IndexSet(n),
      [&](IndexSet& acc, const Mat3& g) { acc.insert(image_index(g, x, F)); },
      [](IndexSet& total, const IndexSet& part) { total.merge(part); });
}

bool ShellCache::cacheable(std::int64_t T) {
  // |ball(T)| is about 640 T^6 over the desk range.
  const double estimate = 640.0 * std::pow(static_cast<double>(T), 6);
  return estimate <= static_cast<double>(max_cached_ball_);
}

const std::vector<std::array<std::int8_t, 9>>& ShellCache::shell(std::int64_t T) {
  check_ball(T);
  if (!cacheable(T)) throw InfeasibleBound("shell " + std::to_string(T) + " exceeds the cache budget");
  auto it = shells_.find(T);
  if (it != shells_.end()) return it->second;
  using Shell = std::vector<std::array<std::int8_t, 9>>;
  Shell s = reduce_sl3(
      BallSpec{Group::SL3, Gauge::Inf, T, {}}, threads_, Shell{},
      [&](Shell& acc, const Mat3& g) {
        if (norm_inf(g) == T) acc.push_back(pack(g));
      },
      [](Shell& total, const Shell& part) { total.insert(total.end(), part.begin(), part.end()); });
  std::sort(s.begin(), s.end());
  return shells_.emplace(T, std::move(s)).first->second;
}

LiftResult find_lift(const SpacePoint& x, const SpacePoint& y, std::int64_t T_max, ShellCache& cache) {
  check_pair(x, y);
  check_ball(T_max);
  space_size(x.space, x.q());
  LiftResult r;
  if (x == y) {
    r.found = true;
    r.gamma = Mat3::identity();
    r.norm = 1;
    r.candidates_scanned = 1;
    return r;
  }
  for (std::int64_t T = 1; T <= T_max; ++T) {
    if (cache.cacheable(T)) {
      const auto& sh = cache.shell(T);
      for (std::size_t i = 0; i < sh.size(); ++i) {
        if (maps_to_entries(sh[i], x, y)) {
          r.found = true;
          r.gamma = unpack(sh[i]);
          r.norm = T;
          r.candidates_scanned += i + 1;
          return r;
        }
      }
      r.candidates_scanned += sh.size();
      continue;
    }
    struct Best {
      std::optional<Mat3> gamma;
      std::uint64_t shell = 0;
    };
    const Best b = reduce_sl3(
        BallSpec{Group::SL3, Gauge::Inf, T, {}}, cache.threads(), Best{},
        [&](Best& acc, const Mat3& g) {
          if (norm_inf(g) != T) return;
          ++acc.shell;
          if (maps_to_entries(g.entries(), x, y) && (!acc.gamma || g < *acc.gamma)) acc.gamma = g;
        },
        [](Best& total, const Best& part) {
          total.shell += part.shell;
          if (part.gamma && (!total.gamma || *part.gamma < *total.gamma)) total.gamma = part.gamma;
        });
    r.candidates_scanned += b.shell;
    if (b.gamma) {
      r.found = true;
      r.gamma = *b.gamma;
      r.norm = T;
      return r;
    }
  }
  return r;
}

LiftResult find_lift(const SpacePoint& x, const SpacePoint& y, std::int64_t T_max, unsigned threads) {
  ShellCache cache(30'000'000, threads);
  return find_lift(x, y, T_max, cache);
}

std::vector<std::int64_t> min_norm_map(const SpacePoint& x, std::int64_t T, unsigned threads) {
  check_ball(T);
  const std::int64_t q = x.q();
  const std::size_t n = space_size(x.space, q);
  const PrimeField F(q);
  using Map = std::vector<std::int64_t>;
  return reduce_sl3(
      BallSpec{Group::SL3, Gauge::Inf, T, {}}, threads, Map(n, 0),
      [&](Map& acc, const Mat3& g) {
        const std::size_t i = image_index(g, x, F);
        const std::int64_t v = norm_inf(g);
        if (acc[i] == 0 || v < acc[i]) acc[i] = v;
      },
      [](Map& total, const Map& part) {
        for (std::size_t i = 0; i < total.size(); ++i)
          if (part[i] != 0 && (total[i] == 0 || part[i] < total[i])) total[i] = part[i];
      });
}

CoverageReport coverage_curve(const SpacePoint& x, std::vector<std::int64_t> T_list, unsigned threads) {
  if (T_list.empty()) throw InvalidArgument("coverage needs at least one T");
  std::sort(T_list.begin(), T_list.end());
  T_list.erase(std::unique(T_list.begin(), T_list.end()), T_list.end());
  for (auto T : T_list) check_ball(T);
  const auto mins = min_norm_map(x, T_list.back(), threads);
  CoverageReport rep;
  rep.q = x.q();
  rep.space = x.space;
  rep.source = to_string(x);
  for (auto T : T_list) {
    std::uint64_t c = 0;
    for (auto m : mins) c += (m != 0 && m <= T);
    rep.rows.push_back({T, c, static_cast<double>(c) / static_cast<double>(mins.size())});
  }
  return rep;
}

std::int64_t full_coverage_threshold(const SpacePoint& x, std::int64_t T_limit, unsigned threads) {
  check_ball(T_limit);
  const std::size_t n = space_size(x.space, x.q());
  for (std::int64_t T = 1; T <= T_limit; ++T)
    if (reachable_set(x, T, threads).count() == n) return T;
  return 0;
}

ObstructionResult obstruction_check(std::int64_t q, std::int64_t T, unsigned threads) {
  const SpacePoint base = space_basepoint(Space::Proj, q);
  ObstructionResult r;
  r.q = q;
  r.T = T;
  r.reachable = reachable_set(base, T, threads).count();
  const auto side = static_cast<std::uint64_t>(2 * T + 1);
  r.bound = (side * side * side - 1) / 2;
  r.space_size = point_count(q);
  return r;
}

std::int64_t exponent_t_max(std::int64_t q, double eps, Space space) {
  if (space == Space::None) throw InvalidArgument("space must be proj or flag");
  if (!(eps >= 0) || !std::isfinite(eps)) throw InvalidArgument("eps must be >= 0");
  const double e = space == Space::Proj ? 1.0 / 3.0 : 0.5;
  const double v = std::pow(static_cast<double>(q), e + eps);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(v - 1e-9)));
}

std::vector<ExponentRow> exponent_experiment(const std::vector<std::int64_t>& q_list, double eps,
                                             std::uint64_t n_pairs, std::uint64_t seed, Space space,
                                             ShellCache& cache) {
  if (q_list.empty()) throw InvalidArgument("exponent experiment needs at least one q");
  if (n_pairs == 0) throw InvalidArgument("n_pairs must be >= 1");
  for (auto q : q_list) {
    space_size(space, q);
    check_ball(exponent_t_max(q, eps, space));
  }
  std::vector<ExponentRow> rows;
  for (auto q : q_list) {
    ExponentRow row;
    row.q = q;
    row.space = space;
    row.eps = eps;
    row.T_max = exponent_t_max(q, eps, space);
    row.n_pairs = n_pairs;
    const std::size_t n = space_size(space, q);
    const std::size_t base = space_basepoint(space, q).index();
    std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(q)));
    for (std::uint64_t k = 0; k < n_pairs; ++k) {
      const std::size_t xi = draw_excluding(rng, n, base);
      const std::size_t yi = static_cast<std::size_t>(rng() % n);
      const LiftResult r =
          find_lift(space_point_at(space, q, xi), space_point_at(space, q, yi), row.T_max, cache);
      if (r.found) {
        ++row.successes;
        ++row.norm_histogram[r.norm];
      }
    }
    row.fraction = static_cast<double>(row.successes) / static_cast<double>(n_pairs);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace liftlab
