#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "liftlab/counting.hpp"
#include "liftlab/enumeration.hpp"
#include "liftlab/exact_matrix.hpp"
#include "liftlab/finite_geometry.hpp"

namespace liftlab {

/// A point of P^2(F_q) or a complete flag, depending on `space`.
struct SpacePoint {
  Space space = Space::Proj;
  ProjPoint point{};
  Flag flag{};

  static SpacePoint of(const ProjPoint& p) { return {Space::Proj, p, {}}; }
  static SpacePoint of(const Flag& f) { return {Space::Flag, {}, f}; }

  std::int64_t q() const { return space == Space::Proj ? point.q : flag.line.q; }
  std::size_t index() const { return space == Space::Proj ? point_index(point) : flag_index(flag); }

  friend bool operator==(const SpacePoint&, const SpacePoint&) = default;
};

/// Throws InvalidArgument for Space::None, a non-prime q, or InfeasibleBound
/// beyond the desk limits of finite_geometry.
std::size_t space_size(Space space, std::int64_t q);
SpacePoint space_point_at(Space space, std::int64_t q, std::size_t index);
/// [0:0:1], or the base flag.
SpacePoint space_basepoint(Space space, std::int64_t q);
/// Uniform over the space minus the basepoint, drawn from split_seed(seed, q).
SpacePoint generic_source(Space space, std::int64_t q, std::uint64_t seed);
std::string to_string(const SpacePoint& x);
SpacePoint parse_space_point(Space space, std::int64_t q, std::string_view text);

/// Index of gamma . x (flags: line by gamma, functional by gamma^-1).
std::size_t image_index(const Mat3& gamma, const SpacePoint& x, const PrimeField& F);
/// gamma . x == y, decided without canonicalizing the image.
bool maps_to(const Mat3& gamma, const SpacePoint& x, const SpacePoint& y);

/// Fixed-size set of space indices.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  void insert(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool contains(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  std::size_t universe() const { return n_; }
  std::size_t count() const;
  void merge(const IndexSet& other);
  std::vector<std::size_t> members() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// { gamma . x : |gamma|_inf <= T }, one enumeration pass.
IndexSet reachable_set(const SpacePoint& x, std::int64_t T, unsigned threads = 1);

/// Elements of norm exactly T, sorted lexicographically, built on demand.
/// Shells whose ball exceeds `max_cached_ball` elements are streamed from
/// the enumerator instead of stored.
class ShellCache {
 public:
  explicit ShellCache(std::uint64_t max_cached_ball = 30'000'000, unsigned threads = 1)
      : max_cached_ball_(max_cached_ball), threads_(threads) {}

  /// True if shell T is (or will be) held in memory.
  bool cacheable(std::int64_t T);
  /// Sorted shell; only for cacheable T.
  const std::vector<std::array<std::int8_t, 9>>& shell(std::int64_t T);
  unsigned threads() const { return threads_; }

 private:
  std::uint64_t max_cached_ball_;
  unsigned threads_;
  std::map<std::int64_t, std::vector<std::array<std::int8_t, 9>>> shells_;
};

struct LiftResult {
  bool found = false;
  Mat3 gamma;
  std::int64_t norm = 0;
  std::uint64_t candidates_scanned = 0;
};

/// Minimal-norm gamma with gamma . x = y, ties broken lexicographically on
/// the row-major entries; scans T = 1 .. T_max.
LiftResult find_lift(const SpacePoint& x, const SpacePoint& y, std::int64_t T_max, ShellCache& cache);
LiftResult find_lift(const SpacePoint& x, const SpacePoint& y, std::int64_t T_max, unsigned threads = 1);

struct CoverageRow {
  std::int64_t T = 0;
  std::uint64_t reachable = 0;
  double fraction = 0.0;
};

struct CoverageReport {
  std::int64_t q = 0;
  Space space = Space::Proj;
  std::string source;
  std::vector<CoverageRow> rows;
};

/// Minimal norm of each target (0 when unreached) over the ball of radius T.
std::vector<std::int64_t> min_norm_map(const SpacePoint& x, std::int64_t T, unsigned threads = 1);

/// One pass at max(T_list), bucketed by minimal norm.
CoverageReport coverage_curve(const SpacePoint& x, std::vector<std::int64_t> T_list, unsigned threads = 1);

/// Smallest T <= T_limit at which the ball reaches the whole space from x,
/// or 0 if it does not.
std::int64_t full_coverage_threshold(const SpacePoint& x, std::int64_t T_limit, unsigned threads = 1);

struct ObstructionResult {
  std::int64_t q = 0, T = 0;
  std::uint64_t reachable = 0;
  std::uint64_t bound = 0;  // ((2T+1)^3 - 1) / 2
  std::uint64_t space_size = 0;
  bool holds() const { return reachable <= bound; }
};

ObstructionResult obstruction_check(std::int64_t q, std::int64_t T, unsigned threads = 1);

struct ExponentRow {
  std::int64_t q = 0;
  Space space = Space::Proj;
  double eps = 0.0;
  std::int64_t T_max = 0;
  std::uint64_t n_pairs = 0;
  std::uint64_t successes = 0;
  double fraction = 0.0;
  std::map<std::int64_t, std::uint64_t> norm_histogram;  // minimal norm -> count
};

/// ceil(q^(e + eps)) with e = 1/3 (proj) or 1/2 (flag).
std::int64_t exponent_t_max(std::int64_t q, double eps, Space space);

/// For each q: n_pairs uniform (x, y) with x != basepoint, find_lift with
/// T_max = exponent_t_max. Streams are seeded by split_seed(seed, q).
std::vector<ExponentRow> exponent_experiment(const std::vector<std::int64_t>& q_list, double eps,
                                             std::uint64_t n_pairs, std::uint64_t seed, Space space,
                                             ShellCache& cache);

}  // namespace liftlab
