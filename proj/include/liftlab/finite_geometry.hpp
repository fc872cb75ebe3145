#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "liftlab/exact_matrix.hpp"

namespace liftlab {

inline constexpr std::int64_t kMaxPointPrime = 2000;
// The flag list has (q^2+q+1)(q+1) entries; beyond this it no longer fits in memory.
inline constexpr std::int64_t kMaxFlagPrime = 200;

bool is_prime(std::int64_t n);

/// Throws InvalidArgument unless q is a prime.
void require_prime(std::int64_t q);

/// Arithmetic in F_q with a precomputed inverse table.
class PrimeField {
 public:
  explicit PrimeField(std::int64_t q);

  std::int64_t q() const { return q_; }
  std::int64_t reduce(std::int64_t v) const {
    std::int64_t r = v % q_;
    return r < 0 ? r + q_ : r;
  }
  /// a must be a nonzero residue in [0, q).
  std::int64_t inv(std::int64_t a) const { return inv_[static_cast<std::size_t>(a)]; }
  std::int64_t mul(std::int64_t a, std::int64_t b) const { return (a * b) % q_; }
  /// Integer representative in (-q/2, q/2].
  std::int64_t lift(std::int64_t a) const {
    std::int64_t r = reduce(a);
    return 2 * r > q_ ? r - q_ : r;
  }

 private:
  std::int64_t q_;
  std::vector<std::int64_t> inv_;
};

std::int64_t inv_mod(std::int64_t a, std::int64_t q);

/// Matrix over F_q, entries in [0, q).
template <int N>
struct MatModQ {
  std::int64_t q = 2;
  std::array<std::int64_t, N * N> e{};

  constexpr std::int64_t operator()(int i, int j) const { return e[i * N + j]; }
  static MatModQ identity(std::int64_t q) {
    MatModQ m{q, {}};
    for (int i = 0; i < N; ++i) m.e[i * N + i] = 1;
    return m;
  }
  bool is_identity() const { return *this == identity(q); }
  friend constexpr bool operator==(const MatModQ&, const MatModQ&) = default;
};

using Mat3ModQ = MatModQ<3>;

template <int N>
MatModQ<N> reduce_mod(const IntMat<N>& m, std::int64_t q);

std::int64_t det_mod(const Mat3ModQ& m);
Mat3ModQ mul_mod(const Mat3ModQ& a, const Mat3ModQ& b);
Mat3ModQ transpose_mod(const Mat3ModQ& m);
/// Throws InvalidArgument if m is singular.
Mat3ModQ inverse_mod(const Mat3ModQ& m);
int rank_mod(const Mat3ModQ& m);
/// Basis of the right kernel {v : m v = 0}.
std::vector<std::array<std::int64_t, 3>> kernel_basis(const Mat3ModQ& m);

/// Point of P^2(F_q), stored with its first nonzero coordinate equal to 1.
struct ProjPoint {
  std::int64_t q = 2;
  std::array<std::int64_t, 3> c{0, 0, 1};

  friend constexpr auto operator<=>(const ProjPoint&, const ProjPoint&) = default;
};

/// Complete flag V1 < V2: `line` spans V1, `plane` holds the coefficients of a
/// linear functional with kernel V2 (same canonical form as a point).
struct Flag {
  ProjPoint line;
  ProjPoint plane;

  friend constexpr auto operator<=>(const Flag&, const Flag&) = default;
};

/// Canonicalizes (x, y, z) mod q. Throws InvalidArgument on the zero vector.
ProjPoint make_point(std::int64_t q, std::int64_t x, std::int64_t y, std::int64_t z);
/// Throws InvalidArgument unless the functional annihilates the line.
Flag make_flag(const ProjPoint& line, const ProjPoint& plane);

/// [0:0:1]
ProjPoint basepoint(std::int64_t q);
/// (span e3, span{e2, e3}); its functional is [1:0:0].
Flag base_flag(std::int64_t q);

constexpr std::size_t point_count(std::int64_t q) {
  return static_cast<std::size_t>(q * q + q + 1);
}
constexpr std::size_t flag_count(std::int64_t q) {
  return point_count(q) * static_cast<std::size_t>(q + 1);
}

/// Dense index in [0, point_count(q)); ordering matches enumerate_points.
std::size_t point_index(const ProjPoint& p);
ProjPoint point_at(std::int64_t q, std::size_t index);
/// Dense index in [0, flag_count(q)); ordering matches enumerate_flags.
std::size_t flag_index(const Flag& f);
Flag flag_at(std::int64_t q, std::size_t index);

/// Index of the class of an arbitrary nonzero integer vector, without
/// building a ProjPoint. Returns SIZE_MAX for the zero class.
std::size_t point_index_of(const PrimeField& F, std::int64_t x, std::int64_t y, std::int64_t z);
/// Flag index for a (line vector, functional) pair of arbitrary integers.
std::size_t flag_index_of(const PrimeField& F, const std::array<std::int64_t, 3>& line,
                          const std::array<std::int64_t, 3>& functional);

std::vector<ProjPoint> enumerate_points(std::int64_t q);
std::vector<Flag> enumerate_flags(std::int64_t q);

ProjPoint act_point(const Mat3ModQ& m, const ProjPoint& p);
/// Line by m, functional by the inverse transpose.
Flag act_flag(const Mat3ModQ& m, const Flag& f);

struct EigenPair {
  std::int64_t value = 0;
  int multiplicity = 0;  // geometric

  friend constexpr bool operator==(const EigenPair&, const EigenPair&) = default;
};

/// Eigenvalues in F_q (ascending) with geometric multiplicities.
std::vector<EigenPair> eigen_structure(const Mat3ModQ& m);

struct ReductionClass {
  enum class Kind { Identity, BadDimTwo, Other };
  Kind kind = Kind::Other;
  std::int64_t alpha = 0;  // set for BadDimTwo only

  friend constexpr bool operator==(const ReductionClass&, const ReductionClass&) = default;
};

std::string to_string(ReductionClass::Kind kind);

ReductionClass classify(const Mat3ModQ& m);

/// Conjugacy type over F_q as far as it determines the fixed sets. Scalar
/// covers the identity and, when q = 1 mod 3, the other cube roots of unity.
enum class ConjugacyType {
  Scalar,             // geometric multiplicity 3
  Diag2Plus1,         // diag(a, a, b), a != b
  Jordan2Plus1,       // J2(a) + (b), a != b
  Transvection,       // J2(a) + (a)
  Jordan3,            // J3(a)
  Split,              // three distinct eigenvalues in F_q
  LinePlusQuadratic,  // one eigenvalue in F_q, irreducible quadratic factor
  Irreducible,        // no eigenvalue in F_q
};

ConjugacyType conjugacy_type(const Mat3ModQ& m);
std::string to_string(ConjugacyType type);
/// Closed-form fixed-point / fixed-flag counts of a conjugacy type.
std::int64_t law_fixed_points(ConjugacyType type, std::int64_t q);
std::int64_t law_fixed_flags(ConjugacyType type, std::int64_t q);

// Fixed sets, sorted. The *_brute variants scan the whole space; the *_eigen
// variants build the sets from eigenspaces of m and of its transpose.
std::vector<ProjPoint> fixed_points_brute(const Mat3ModQ& m);
std::vector<ProjPoint> fixed_points_eigen(const Mat3ModQ& m);
std::vector<Flag> fixed_flags_brute(const Mat3ModQ& m);
std::vector<Flag> fixed_flags_eigen(const Mat3ModQ& m);

// Cardinalities via eigenspace dimensions, no set materialization for points.
std::int64_t count_fixed_points(const Mat3ModQ& m);
std::int64_t count_fixed_flags(const Mat3ModQ& m);

enum class Stabilizer {
  Gamma0Prime,  // fixes the basepoint [0:0:1]
  Gamma2Prime,  // fixes the base flag
};

/// Decided through the action on the basepoint / base flag.
bool in_stabilizer(const Mat3& gamma, std::int64_t q, Stabilizer which);
/// Entry-congruence pattern: (1,3),(2,3) for Gamma0', plus (1,2) for Gamma2'.
bool in_stabilizer_by_entries(const Mat3& gamma, std::int64_t q, Stabilizer which);

// Literals "x:y:z" and "x:y:z|u:v:w".
std::string to_string(const ProjPoint& p);
std::string to_string(const Flag& f);
ProjPoint parse_point(std::int64_t q, std::string_view text);
Flag parse_flag(std::int64_t q, std::string_view text);

extern template MatModQ<2> reduce_mod(const Mat2&, std::int64_t);
extern template MatModQ<3> reduce_mod(const Mat3&, std::int64_t);

}  // namespace liftlab
