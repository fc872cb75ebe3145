#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liftlab/enumeration.hpp"
#include "liftlab/exact_matrix.hpp"
#include "liftlab/finite_geometry.hpp"

namespace liftlab {

enum class Space { None, Proj, Flag };

std::string to_string(Space s);
std::string to_string(Gauge g);
Space parse_space(std::string_view text);
Gauge parse_gauge(std::string_view text);

/// One experiment row: q, gauge, T, space, value, wall_seconds.
struct CountRecord {
  std::int64_t q = 1;
  Gauge gauge = Gauge::Inf;
  std::int64_t T = 0;
  Space space = Space::None;
  std::uint64_t value = 0;
  double wall_seconds = 0.0;
};

/// Sorts by q, then T (stable).
void sort_records(std::vector<CountRecord>& records);

/// |{g in SL2(Z) : g = I mod q, |g|_inf <= T}|, via divisor pairs of
/// (ad - 1)/q^2; the ad = 1 family in closed form.
CountRecord count_sl2_congruence(std::int64_t q, std::int64_t T);

/// Number of (gamma, x) with |gamma|_delta <= D and gamma x = x mod q,
/// x ranging over P^2(F_q) (Space::Proj) or complete flags (Space::Flag).
/// Summed with the eigenspace-based counters.
CountRecord count_fixed_pairs(std::int64_t q, std::int64_t D, Space space, unsigned threads = 1);

/// The same sum computed three ways, plus the per-type element census.
struct FixedPairsTable {
  CountRecord record;                 // eigenspace counters (= record.value)
  std::uint64_t law_sum = 0;          // sum over types of count * law
  std::uint64_t brute_sum = 0;        // direct scan of the space per element
  std::uint64_t elements = 0;
  std::array<std::uint64_t, 8> type_counts{};  // indexed by ConjugacyType
  std::array<std::uint64_t, 3> class_counts{};  // indexed by ReductionClass::Kind
};

FixedPairsTable tabulate_fixed_pairs(std::int64_t q, std::int64_t D, Space space,
                                     unsigned threads = 1);

struct BadCount {
  std::int64_t q = 0, S = 0, R = 0;
  std::uint64_t bad_dim_two = 0;
  std::uint64_t identity = 0;
  double wall_seconds = 0.0;
};

/// Elements with |g|_inf <= S, |g^-1|_inf <= R whose reduction is
/// BadDimTwo, and separately those reducing to the identity.
BadCount count_bad(std::int64_t q, std::int64_t S, std::int64_t R, unsigned threads = 1);

struct IdentityReport {
  Mat3 gamma;
  std::int64_t q = 0;
  ReductionClass cls;
  std::vector<std::pair<std::string, bool>> checks;
  std::int64_t alpha_used = 0;

  /// Throws InvalidArgument for an unknown check name.
  bool passed(std::string_view name) const;
  bool all_passed() const;
};

/// Checks "3.1", "3.2-corrected", "3.2-printed" and "3.3" for a gamma
/// that is BadDimTwo(alpha) mod q. alpha_used is the lift in (-q/2, q/2].
IdentityReport verify_bad_identities(const Mat3& gamma, std::int64_t q);

/// For gamma = I mod q: "trace-3-mod-q2", "trace-inverse-mod-q3",
/// "square-mod-q2".
IdentityReport verify_identity_congruences(const Mat3& gamma, std::int64_t q);

struct TraceCount {
  std::int64_t q = 0, S = 0, R = 0;
  std::uint64_t value = 0;       // (x, y, alpha) solutions
  std::uint64_t eq51_value = 0;  // (z, w, alpha) with alpha z = w mod q
  double wall_seconds = 0.0;
};

/// Brute-force count of integer traces x = tr g, y = tr g^-1 with |x| <= S,
/// |y| <= R and alpha in F_q^x satisfying
///   x = 2a + a^-2, y = 2a^-1 + a^2 (mod q) and L^2 x - L y = L^3 - 1 (mod q^2)
/// for the lift L of a; and of the reduced equation with |z| <= 2S/q,
/// |w| <= 2R/q.
TraceCount count_trace_solutions(std::int64_t q, std::int64_t S, std::int64_t R);

/// Number of same-alpha solution pairs whose differences fail to give a
/// solution of the reduced equation (expected 0), and the number checked.
std::pair<std::uint64_t, std::uint64_t> trace_reduction_check(std::int64_t q, std::int64_t S,
                                                              std::int64_t R);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

/// Least squares of log(value) against log(T).
ExponentFit fit_exponent(const std::vector<CountRecord>& records);
/// Least squares of log(y) against log(x).
ExponentFit fit_loglog(const std::vector<std::pair<double, double>>& points);

}  // namespace liftlab
