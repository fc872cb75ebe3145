#include "liftlab/finite_geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace liftlab {

namespace {

using Vec3 = std::array<std::int64_t, 3>;

std::int64_t md(std::int64_t v, std::int64_t q) {
  std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t q) {
  std::int64_t r = 1 % q;
  b = md(b, q);
  while (e > 0) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
    e >>= 1;
  }
  return r;
}

std::int64_t geometric_count(std::int64_t q, int dim) {
  // (q^dim - 1) / (q - 1)
  std::int64_t s = 0, p = 1;
  for (int i = 0; i < dim; ++i) {
    s += p;
    p *= q;
  }
  return s;
}

ProjPoint canonical(std::int64_t q, Vec3 v) {
  for (auto& x : v) x = md(x, q);
  int lead = v[0] ? 0 : v[1] ? 1 : v[2] ? 2 : -1;
  if (lead < 0) throw InvalidArgument("projective point: zero vector");
  std::int64_t s = inv_mod(v[lead], q);
  for (auto& x : v) x = x * s % q;
  return ProjPoint{q, v};
}

Vec3 apply(const Mat3ModQ& m, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i) r[i] = (m(i, 0) * v[0] + m(i, 1) * v[1] + m(i, 2) * v[2]) % m.q;
  return r;
}

std::int64_t dot_mod(const Vec3& a, const Vec3& b, std::int64_t q) {
  return md(a[0] * b[0] + a[1] * b[1] + a[2] * b[2], q);
}

Mat3ModQ shifted(const Mat3ModQ& m, std::int64_t lambda) {
  Mat3ModQ r = m;
  for (int i = 0; i < 3; ++i) r.e[i * 4] = md(r.e[i * 4] - lambda, m.q);
  return r;
}

// Row echelon form mod q; returns the reduced matrix and pivot columns.
std::vector<int> rref(Mat3ModQ& m) {
  const std::int64_t q = m.q;
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < 3 && row < 3; ++col) {
    int piv = -1;
    for (int r = row; r < 3; ++r)
      if (m.e[r * 3 + col]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    for (int c = 0; c < 3; ++c) std::swap(m.e[row * 3 + c], m.e[piv * 3 + c]);
    std::int64_t s = inv_mod(m.e[row * 3 + col], q);
    for (int c = 0; c < 3; ++c) m.e[row * 3 + c] = m.e[row * 3 + c] * s % q;
    for (int r = 0; r < 3; ++r) {
      if (r == row || !m.e[r * 3 + col]) continue;
      std::int64_t f = m.e[r * 3 + col];
      for (int c = 0; c < 3; ++c) m.e[r * 3 + c] = md(m.e[r * 3 + c] - f * m.e[row * 3 + c], q);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// All points of the projectivized span of `basis`.
std::vector<ProjPoint> span_points(std::int64_t q, const std::vector<Vec3>& basis) {
  std::vector<ProjPoint> out;
  const int d = static_cast<int>(basis.size());
  if (d == 0) return out;
  // Canonical coefficient vectors: first nonzero coefficient is 1.
  std::vector<std::int64_t> coef(d, 0);
  for (int lead = 0; lead < d; ++lead) {
    const int free = d - lead - 1;
    std::int64_t combos = 1;
    for (int i = 0; i < free; ++i) combos *= q;
    for (std::int64_t code = 0; code < combos; ++code) {
      std::fill(coef.begin(), coef.end(), 0);
      coef[lead] = 1;
      std::int64_t c = code;
      for (int i = lead + 1; i < d; ++i) {
        coef[i] = c % q;
        c /= q;
      }
      Vec3 v{};
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < 3; ++k) v[k] = (v[k] + coef[i] * basis[i][k]) % q;
      out.push_back(canonical(q, v));
    }
  }
  return out;
}

// Basis (u1, u2) of the functionals vanishing on canonical p; see flag_index.
std::array<Vec3, 2> annihilator_basis(const ProjPoint& p) {
  const std::int64_t q = p.q;
  const auto& c = p.c;
  if (c[0] == 1) return {Vec3{md(-c[1], q), 1, 0}, Vec3{md(-c[2], q), 0, 1}};
  if (c[1] == 1) return {Vec3{1, 0, 0}, Vec3{0, md(-c[2], q), 1}};
  return {Vec3{1, 0, 0}, Vec3{0, 1, 0}};
}

// Coordinates (a, b) of functional f in annihilator_basis(p).
std::pair<std::int64_t, std::int64_t> annihilator_coords(const ProjPoint& p, const Vec3& f) {
  if (p.c[0] == 1) return {f[1], f[2]};
  if (p.c[1] == 1) return {f[0], f[2]};
  return {f[0], f[1]};
}

std::vector<Vec3> eigenspace(const Mat3ModQ& m, std::int64_t lambda) {
  return kernel_basis(shifted(m, lambda));
}

std::vector<std::int64_t> split_ints(std::string_view text, char sep) {
  std::vector<std::int64_t> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      std::string tok(text.substr(start, i - start));
      std::size_t pos = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &pos);
      } catch (const std::exception&) {
        throw InvalidArgument("bad coordinate '" + tok + "'");
      }
      while (pos < tok.size() && tok[pos] == ' ') ++pos;
      if (pos != tok.size()) throw InvalidArgument("bad coordinate '" + tok + "'");
      out.push_back(v);
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

void require_prime(std::int64_t q) {
  if (!is_prime(q)) throw InvalidArgument("modulus " + std::to_string(q) + " is not prime");
}

std::int64_t inv_mod(std::int64_t a, std::int64_t q) {
  a = md(a, q);
  if (a == 0) throw InvalidArgument("inverse of zero mod " + std::to_string(q));
  return pow_mod(a, q - 2, q);
}

PrimeField::PrimeField(std::int64_t q) : q_(q) {
  require_prime(q);
  inv_.assign(static_cast<std::size_t>(q), 0);
  inv_[1] = 1;
  for (std::int64_t a = 2; a < q; ++a) inv_[a] = (q - (q / a) * inv_[q % a] % q) % q;
}

template <int N>
MatModQ<N> reduce_mod(const IntMat<N>& m, std::int64_t q) {
  require_prime(q);
  MatModQ<N> r{q, {}};
  for (int k = 0; k < N * N; ++k) r.e[k] = md(m.entries()[k], q);
  return r;
}

template MatModQ<2> reduce_mod(const Mat2&, std::int64_t);
template MatModQ<3> reduce_mod(const Mat3&, std::int64_t);

std::int64_t det_mod(const Mat3ModQ& m) {
  const std::int64_t q = m.q;
  std::int64_t d = m(0, 0) * md(m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1), q) % q -
                   m(0, 1) * md(m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0), q) % q +
                   m(0, 2) * md(m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0), q) % q;
  return md(d, q);
}

Mat3ModQ mul_mod(const Mat3ModQ& a, const Mat3ModQ& b) {
  if (a.q != b.q) throw InvalidArgument("mul_mod: mismatched moduli");
  Mat3ModQ r{a.q, {}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.e[i * 3 + j] = (a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j)) % a.q;
  return r;
}

Mat3ModQ transpose_mod(const Mat3ModQ& m) {
  Mat3ModQ r{m.q, {}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.e[j * 3 + i] = m(i, j);
  return r;
}

Mat3ModQ inverse_mod(const Mat3ModQ& m) {
  const std::int64_t q = m.q;
  const std::int64_t d = det_mod(m);
  if (d == 0) throw InvalidArgument("inverse_mod: singular matrix");
  const std::int64_t s = inv_mod(d, q);
  Mat3ModQ r{q, {}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      std::int64_t cof = md(m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0), q);
      r.e[i * 3 + j] = cof * s % q;
    }
  }
  return r;
}

int rank_mod(const Mat3ModQ& m) {
  Mat3ModQ w = m;
  return static_cast<int>(rref(w).size());
}

std::vector<std::array<std::int64_t, 3>> kernel_basis(const Mat3ModQ& m) {
  Mat3ModQ w = m;
  const auto pivots = rref(w);
  std::vector<Vec3> basis;
  for (int free = 0; free < 3; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    Vec3 v{};
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = md(-w.e[r * 3 + free], m.q);
    basis.push_back(v);
  }
  return basis;
}

ProjPoint make_point(std::int64_t q, std::int64_t x, std::int64_t y, std::int64_t z) {
  require_prime(q);
  return canonical(q, {x, y, z});
}

Flag make_flag(const ProjPoint& line, const ProjPoint& plane) {
  if (line.q != plane.q) throw InvalidArgument("flag: mismatched moduli");
  if (dot_mod(line.c, plane.c, line.q) != 0) {
    throw InvalidArgument("flag: functional does not vanish on the line");
  }
  return Flag{line, plane};
}

ProjPoint basepoint(std::int64_t q) { return make_point(q, 0, 0, 1); }

Flag base_flag(std::int64_t q) { return make_flag(basepoint(q), make_point(q, 1, 0, 0)); }

std::size_t point_index(const ProjPoint& p) {
  const std::int64_t q = p.q;
  if (p.c[0] == 1) return static_cast<std::size_t>(p.c[1] * q + p.c[2]);
  if (p.c[1] == 1) return static_cast<std::size_t>(q * q + p.c[2]);
  return static_cast<std::size_t>(q * q + q);
}

ProjPoint point_at(std::int64_t q, std::size_t index) {
  const auto i = static_cast<std::int64_t>(index);
  if (i < q * q) return ProjPoint{q, {1, i / q, i % q}};
  if (i < q * q + q) return ProjPoint{q, {0, 1, i - q * q}};
  if (i == q * q + q) return ProjPoint{q, {0, 0, 1}};
  throw InvalidArgument("point index out of range");
}

std::size_t flag_index(const Flag& f) {
  const std::int64_t q = f.line.q;
  auto [a, b] = annihilator_coords(f.line, f.plane.c);
  std::int64_t k = a != 0 ? b * inv_mod(a, q) % q : q;
  return point_index(f.line) * static_cast<std::size_t>(q + 1) + static_cast<std::size_t>(k);
}

Flag flag_at(std::int64_t q, std::size_t index) {
  const ProjPoint line = point_at(q, index / static_cast<std::size_t>(q + 1));
  const auto k = static_cast<std::int64_t>(index % static_cast<std::size_t>(q + 1));
  const std::int64_t a = k < q ? 1 : 0;
  const std::int64_t b = k < q ? k : 1;
  const auto [u1, u2] = annihilator_basis(line);
  Vec3 f{};
  for (int i = 0; i < 3; ++i) f[i] = (a * u1[i] + b * u2[i]) % q;
  return Flag{line, canonical(q, f)};
}

std::size_t point_index_of(const PrimeField& F, std::int64_t x, std::int64_t y, std::int64_t z) {
  const std::int64_t q = F.q();
  x = F.reduce(x);
  y = F.reduce(y);
  z = F.reduce(z);
  if (x) {
    const std::int64_t s = F.inv(x);
    return static_cast<std::size_t>((y * s % q) * q + z * s % q);
  }
  if (y) return static_cast<std::size_t>(q * q + z * F.inv(y) % q);
  if (z) return static_cast<std::size_t>(q * q + q);
  return std::numeric_limits<std::size_t>::max();
}

std::size_t flag_index_of(const PrimeField& F, const std::array<std::int64_t, 3>& line,
                          const std::array<std::int64_t, 3>& functional) {
  const std::int64_t q = F.q();
  const std::size_t li = point_index_of(F, line[0], line[1], line[2]);
  const ProjPoint p = point_at(q, li);
  Vec3 f{F.reduce(functional[0]), F.reduce(functional[1]), F.reduce(functional[2])};
  auto [a, b] = annihilator_coords(p, f);
  const std::int64_t k = a != 0 ? b * F.inv(a) % q : q;
  return li * static_cast<std::size_t>(q + 1) + static_cast<std::size_t>(k);
}

std::vector<ProjPoint> enumerate_points(std::int64_t q) {
  require_prime(q);
  if (q > kMaxPointPrime) throw InfeasibleBound("enumerate_points: q exceeds 2000");
  std::vector<ProjPoint> out;
  out.reserve(point_count(q));
  for (std::size_t i = 0; i < point_count(q); ++i) out.push_back(point_at(q, i));
  return out;
}

std::vector<Flag> enumerate_flags(std::int64_t q) {
  require_prime(q);
  if (q > kMaxFlagPrime) throw InfeasibleBound("enumerate_flags: q exceeds 200");
  std::vector<Flag> out;
  out.reserve(flag_count(q));
  for (std::size_t i = 0; i < flag_count(q); ++i) out.push_back(flag_at(q, i));
  return out;
}

ProjPoint act_point(const Mat3ModQ& m, const ProjPoint& p) {
  if (m.q != p.q) throw InvalidArgument("act_point: mismatched moduli");
  return canonical(m.q, apply(m, p.c));
}

Flag act_flag(const Mat3ModQ& m, const Flag& f) {
  if (m.q != f.line.q) throw InvalidArgument("act_flag: mismatched moduli");
  const Mat3ModQ dual = transpose_mod(inverse_mod(m));
  return Flag{canonical(m.q, apply(m, f.line.c)), canonical(m.q, apply(dual, f.plane.c))};
}

std::vector<EigenPair> eigen_structure(const Mat3ModQ& m) {
  const std::int64_t q = m.q;
  std::vector<EigenPair> out;
  // Characteristic polynomial det(lambda I - m) = l^3 - t l^2 + s l - d.
  const std::int64_t t = md(m(0, 0) + m(1, 1) + m(2, 2), q);
  const std::int64_t s = md(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                                m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1),
                            q);
  const std::int64_t d = det_mod(m);
  for (std::int64_t l = 0; l < q; ++l) {
    const std::int64_t l2 = l * l % q;
    if (md(l2 * l - t * l2 + s * l - d, q) != 0) continue;
    out.push_back({l, 3 - rank_mod(shifted(m, l))});
  }
  return out;
}

std::string to_string(ReductionClass::Kind kind) {
  switch (kind) {
    case ReductionClass::Kind::Identity:
      return "identity";
    case ReductionClass::Kind::BadDimTwo:
      return "bad_dim_two";
    case ReductionClass::Kind::Other:
      return "other";
  }
  return "?";
}

ReductionClass classify(const Mat3ModQ& m) {
  if (m.is_identity()) return {ReductionClass::Kind::Identity, 0};
  for (const auto& ep : eigen_structure(m)) {
    if (ep.multiplicity >= 2) return {ReductionClass::Kind::BadDimTwo, ep.value};
  }
  return {ReductionClass::Kind::Other, 0};
}

ConjugacyType conjugacy_type(const Mat3ModQ& m) {
  const std::int64_t q = m.q;
  const std::int64_t t = md(m(0, 0) + m(1, 1) + m(2, 2), q);
  const std::int64_t s = md(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                                m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1),
                            q);
  const std::int64_t d = det_mod(m);
  const auto eig = eigen_structure(m);
  if (eig.empty()) return ConjugacyType::Irreducible;
  // Algebraic multiplicities by repeated synthetic division.
  std::vector<int> alg;
  for (const auto& ep : eig) {
    std::vector<std::int64_t> c = {1, md(-t, q), s, md(-d, q)};
    int k = 0;
    while (c.size() > 1) {
      std::vector<std::int64_t> quo(c.size() - 1);
      std::int64_t acc = 0;
      for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        acc = md(acc * ep.value + c[i], q);
        quo[i] = acc;
      }
      if (md(acc * ep.value + c.back(), q) != 0) break;
      c = quo;
      ++k;
    }
    alg.push_back(k);
  }
  if (eig.size() == 3) return ConjugacyType::Split;
  if (eig.size() == 1) {
    const int a = alg[0], g = eig[0].multiplicity;
    if (a == 1) return ConjugacyType::LinePlusQuadratic;
    if (g == 3) return ConjugacyType::Scalar;
    if (g == 2) return ConjugacyType::Transvection;
    return ConjugacyType::Jordan3;
  }
  const std::size_t dbl = alg[0] == 2 ? 0 : 1;
  return eig[dbl].multiplicity == 2 ? ConjugacyType::Diag2Plus1 : ConjugacyType::Jordan2Plus1;
}

std::string to_string(ConjugacyType type) {
  switch (type) {
    case ConjugacyType::Scalar: return "scalar";
    case ConjugacyType::Diag2Plus1: return "diag2plus1";
    case ConjugacyType::Jordan2Plus1: return "jordan2plus1";
    case ConjugacyType::Transvection: return "transvection";
    case ConjugacyType::Jordan3: return "jordan3";
    case ConjugacyType::Split: return "split";
    case ConjugacyType::LinePlusQuadratic: return "line_plus_quadratic";
    case ConjugacyType::Irreducible: return "irreducible";
  }
  return "?";
}

std::int64_t law_fixed_points(ConjugacyType type, std::int64_t q) {
  switch (type) {
    case ConjugacyType::Scalar: return q * q + q + 1;
    case ConjugacyType::Diag2Plus1: return q + 2;
    case ConjugacyType::Jordan2Plus1: return 2;
    case ConjugacyType::Transvection: return q + 1;
    case ConjugacyType::Jordan3: return 1;
    case ConjugacyType::Split: return 3;
    case ConjugacyType::LinePlusQuadratic: return 1;
    case ConjugacyType::Irreducible: return 0;
  }
  return 0;
}

std::int64_t law_fixed_flags(ConjugacyType type, std::int64_t q) {
  switch (type) {
    case ConjugacyType::Scalar: return (q * q + q + 1) * (q + 1);
    case ConjugacyType::Diag2Plus1: return 3 * q + 3;
    case ConjugacyType::Jordan2Plus1: return 3;
    case ConjugacyType::Transvection: return 2 * q + 1;
    case ConjugacyType::Jordan3: return 1;
    case ConjugacyType::Split: return 6;
    case ConjugacyType::LinePlusQuadratic: return 0;
    case ConjugacyType::Irreducible: return 0;
  }
  return 0;
}

std::vector<ProjPoint> fixed_points_brute(const Mat3ModQ& m) {
  std::vector<ProjPoint> out;
  for (const auto& p : enumerate_points(m.q))
    if (act_point(m, p) == p) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ProjPoint> fixed_points_eigen(const Mat3ModQ& m) {
  std::vector<ProjPoint> out;
  for (const auto& ep : eigen_structure(m)) {
    auto pts = span_points(m.q, eigenspace(m, ep.value));
    out.insert(out.end(), pts.begin(), pts.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Flag> fixed_flags_brute(const Mat3ModQ& m) {
  std::vector<Flag> out;
  const Mat3ModQ dual = transpose_mod(inverse_mod(m));
  for (const auto& f : enumerate_flags(m.q)) {
    if (canonical(m.q, apply(m, f.line.c)) == f.line &&
        canonical(m.q, apply(dual, f.plane.c)) == f.plane) {
      out.push_back(f);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Flag> fixed_flags_eigen(const Mat3ModQ& m) {
  const std::int64_t q = m.q;
  const Mat3ModQ mt = transpose_mod(m);
  std::vector<ProjPoint> functionals;
  // An invariant plane ker f satisfies f m = mu f, i.e. f is an eigenvector of m^T.
  for (const auto& ep : eigen_structure(mt)) {
    auto pts = span_points(q, eigenspace(mt, ep.value));
    functionals.insert(functionals.end(), pts.begin(), pts.end());
  }
  std::vector<Flag> out;
  for (const auto& p : fixed_points_eigen(m))
    for (const auto& f : functionals)
      if (dot_mod(p.c, f.c, q) == 0) out.push_back(Flag{p, f});
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t count_fixed_points(const Mat3ModQ& m) {
  std::int64_t n = 0;
  for (const auto& ep : eigen_structure(m)) n += geometric_count(m.q, ep.multiplicity);
  return n;
}

std::int64_t count_fixed_flags(const Mat3ModQ& m) {
  const std::int64_t q = m.q;
  if (m.is_identity()) return geometric_count(q, 3) * (q + 1);
  const Mat3ModQ mt = transpose_mod(m);
  std::vector<std::vector<Vec3>> dual_spaces;
  for (const auto& ep : eigen_structure(mt)) dual_spaces.push_back(eigenspace(mt, ep.value));
  std::int64_t n = 0;
  for (const auto& p : fixed_points_eigen(m)) {
    for (const auto& basis : dual_spaces) {
      // Functionals of the eigenspace vanishing at p form a subspace of
      // dimension dim - rank(evaluation at p).
      bool nonzero = false;
      for (const auto& b : basis) nonzero = nonzero || dot_mod(b, p.c, q) != 0;
      n += geometric_count(q, static_cast<int>(basis.size()) - (nonzero ? 1 : 0));
    }
  }
  return n;
}

bool in_stabilizer(const Mat3& gamma, std::int64_t q, Stabilizer which) {
  const Mat3ModQ m = reduce_mod(gamma, q);
  if (which == Stabilizer::Gamma0Prime) return act_point(m, basepoint(q)) == basepoint(q);
  return act_flag(m, base_flag(q)) == base_flag(q);
}

bool in_stabilizer_by_entries(const Mat3& gamma, std::int64_t q, Stabilizer which) {
  require_prime(q);
  const bool col3 = md(gamma(0, 2), q) == 0 && md(gamma(1, 2), q) == 0;
  if (which == Stabilizer::Gamma0Prime) return col3;
  return col3 && md(gamma(0, 1), q) == 0;
}

std::string to_string(const ProjPoint& p) {
  return std::to_string(p.c[0]) + ":" + std::to_string(p.c[1]) + ":" + std::to_string(p.c[2]);
}

std::string to_string(const Flag& f) { return to_string(f.line) + "|" + to_string(f.plane); }

ProjPoint parse_point(std::int64_t q, std::string_view text) {
  auto v = split_ints(text, ':');
  if (v.size() != 3) throw InvalidArgument("point literal must be x:y:z");
  return make_point(q, v[0], v[1], v[2]);
}

Flag parse_flag(std::int64_t q, std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos) throw InvalidArgument("flag literal must be x:y:z|u:v:w");
  return make_flag(parse_point(q, text.substr(0, bar)), parse_point(q, text.substr(bar + 1)));
}

}  // namespace liftlab
