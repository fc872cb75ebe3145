#include "liftlab/archimedean.hpp"

#include <numbers>
#include <vector>

#include "liftlab/parallel.hpp"
#include "liftlab/rng.hpp"

namespace liftlab {

double hyperbolic_distance(std::complex<double> z1, std::complex<double> z2) {
  if (!(z1.imag() > 0) || !(z2.imag() > 0))
    throw InvalidArgument("hyperbolic_distance: points must lie in the upper half plane");
  // arcosh(1 + |z1 - z2|^2 / (2 y1 y2)) in a cancellation-free form.
  return 2.0 * std::asinh(std::abs(z1 - z2) / (2.0 * std::sqrt(z1.imag() * z2.imag())));
}

std::complex<double> mobius(const RealMat2& g, std::complex<double> z) {
  return (g(0, 0) * z + g(0, 1)) / (g(1, 0) * z + g(1, 1));
}

double iwasawa_delta(const RealMat3& g) {
  if (!g.allFinite()) throw InvalidArgument("iwasawa_delta: non-finite entries");
  const Eigen::HouseholderQR<RealMat3> qr(g);
  const RealMat3 r = qr.matrixQR().triangularView<Eigen::Upper>();
  const double r11 = std::abs(r(0, 0)), r33 = std::abs(r(2, 2));
  if (!(r33 > 0)) throw InvalidArgument("iwasawa_delta: singular matrix");
  const double ratio = r11 / r33;
  return ratio * ratio;
}

RealMat3 random_rotation(std::mt19937_64& rng) {
  const double u1 = uniform01(rng), u2 = uniform01(rng), u3 = uniform01(rng);
  const double two_pi = 2.0 * std::numbers::pi;
  const Eigen::Quaterniond q(std::sqrt(u1) * std::cos(two_pi * u3), std::sqrt(1 - u1) * std::sin(two_pi * u2),
                             std::sqrt(1 - u1) * std::cos(two_pi * u2), std::sqrt(u1) * std::sin(two_pi * u3));
  return q.toRotationMatrix();
}

RealMat3 random_sl3_real(std::mt19937_64& rng, double spread) {
  const double x1 = (2 * uniform01(rng) - 1) * spread, x2 = (2 * uniform01(rng) - 1) * spread;
  const Eigen::Vector3d d(std::exp(x1), std::exp(x2), std::exp(-x1 - x2));
  return random_rotation(rng) * d.asDiagonal() * random_rotation(rng);
}

RealMat2 random_sl2_real(std::mt19937_64& rng, double spread) {
  auto rot = [&] {
    const double t = 2.0 * std::numbers::pi * uniform01(rng);
    RealMat2 k;
    k << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return k;
  };
  const double x = (2 * uniform01(rng) - 1) * spread;
  const Eigen::Vector2d d(std::exp(x), std::exp(-x));
  return rot() * d.asDiagonal() * rot();
}

namespace {

struct Moments {
  double sum = 0.0, sumsq = 0.0;
  std::uint64_t n = 0;
};

// Runs sample(rng) n times in fixed chunks and merges the moments in chunk order.
template <class Sample>
MonteCarloEstimate run_chunks(std::uint64_t n, std::uint64_t seed, unsigned threads, Sample&& sample) {
  const std::uint64_t chunks = (n + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::vector<Moments> parts(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::mt19937_64 rng(split_seed(seed, c));
    const std::uint64_t count = std::min<std::uint64_t>(kMonteCarloChunk, n - c * kMonteCarloChunk);
    Moments m;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double x = sample(rng);
      m.sum += x;
      m.sumsq += x * x;
    }
    m.n = count;
    parts[c] = m;
  });
  Moments total;
  for (const auto& p : parts) {
    total.sum += p.sum;
    total.sumsq += p.sumsq;
    total.n += p.n;
  }
  MonteCarloEstimate e;
  e.n_samples = n;
  e.seed = seed;
  const double nn = static_cast<double>(total.n);
  e.estimate = total.sum / nn;
  const double var = total.n > 1 ? std::max(0.0, (total.sumsq - nn * e.estimate * e.estimate) / (nn - 1)) : 0.0;
  e.std_error = std::sqrt(var / nn);
  return e;
}

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole, double rel,
                   double abs_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  const double both = left + right;
  if (depth <= 0 || std::abs(both - whole) <= 15.0 * std::max(abs_tol, rel * std::abs(both)))
    return both + (both - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, rel, abs_tol / 2, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, rel, abs_tol / 2, depth - 1);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double rel) {
  if (!(b > a)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, rel, 1e-300, 40);
}

}  // namespace

MonteCarloEstimate xi(const RealMat3& g, std::uint64_t n_samples, std::uint64_t seed, unsigned threads) {
  require_special_linear(g);
  if (n_samples < 1000) throw InvalidArgument("xi needs at least 1000 samples");
  return run_chunks(n_samples, seed, threads, [&](std::mt19937_64& rng) {
    return 1.0 / std::sqrt(iwasawa_delta(g * random_rotation(rng)));
  });
}

std::string to_string(VolumeGauge g) {
  switch (g) {
    case VolumeGauge::K: return "K";
    case VolumeGauge::Delta: return "delta";
    case VolumeGauge::H2: return "H2";
  }
  return "?";
}

VolumeGauge parse_volume_gauge(std::string_view text) {
  if (text == "K" || text == "k") return VolumeGauge::K;
  if (text == "delta") return VolumeGauge::Delta;
  if (text == "H2" || text == "h2") return VolumeGauge::H2;
  throw InvalidArgument("unknown volume gauge: " + std::string(text));
}

double haar_ball_volume(VolumeGauge gauge, double T) {
  if (!(T >= 1.0) || !std::isfinite(T)) throw InvalidArgument("haar_ball_volume: T must be >= 1");
  const double L = std::log(T);
  if (gauge == VolumeGauge::H2) return 2.0 * std::numbers::pi * (std::cosh(2.0 * L) - 1.0);
  if (L == 0.0) return 0.0;
  constexpr double kRel = 1e-10;
  // K: alpha1 = (2u + v) / 3 <= L.  delta: u + v <= L.
  auto v_max = [&](double u) { return gauge == VolumeGauge::K ? 3.0 * L - 2.0 * u : L - u; };
  const double u_max = gauge == VolumeGauge::K ? 1.5 * L : L;
  return adaptive_simpson(
      [&](double u) {
        return adaptive_simpson([&](double v) { return chamber_density(u, v); }, 0.0, v_max(u), kRel);
      },
      0.0, u_max, kRel);
}

MonteCarloEstimate ball_autocorrelation(const RealMat3& g, double T, std::uint64_t n_samples,
                                        std::uint64_t seed, unsigned threads) {
  require_special_linear(g);
  if (!(T > 1.0)) throw InvalidArgument("ball_autocorrelation: T must be > 1");
  if (n_samples < 1) throw InvalidArgument("ball_autocorrelation: n_samples must be >= 1");
  if (norm_delta(g) > T * T) return MonteCarloEstimate{0.0, 0.0, n_samples, seed};
  const double L = std::log(T);
  const double volume = haar_ball_volume(VolumeGauge::Delta, T);
  const double s_max = std::sinh(L / 2) * std::sinh(L / 2) * std::sinh(L);
  const double threshold = T * (1.0 + 1e-12);
  constexpr int kMaxRejections = 1'000'000;
  MonteCarloEstimate e = run_chunks(n_samples, seed, threads, [&](std::mt19937_64& rng) {
    double u = 0, v = 0;
    for (int tries = 0;; ++tries) {
      if (tries == kMaxRejections) throw InvalidArgument("ball_autocorrelation: sampler failed");
      double r1 = uniform01(rng), r2 = uniform01(rng);
      if (r1 + r2 > 1.0) {
        r1 = 1.0 - r1;
        r2 = 1.0 - r2;
      }
      u = L * r1;
      v = L * r2;
      if (uniform01(rng) * s_max <= chamber_density(u, v)) break;
    }
    const Eigen::Vector3d inv_diag(std::exp(-(2 * u + v) / 3), std::exp(-(v - u) / 3), std::exp((u + 2 * v) / 3));
    const RealMat3 k1 = random_rotation(rng), k2 = random_rotation(rng);
    // h = k1 diag k2, h^-1 g = k2^T diag^-1 k1^T g.
    const RealMat3 hg = k2.transpose() * inv_diag.asDiagonal() * k1.transpose() * g;
    const auto sv = jacobi_singular_values(hg);
    return sv(0) / sv(2) <= threshold ? 1.0 : 0.0;
  });
  e.estimate /= volume;
  e.std_error /= volume;
  return e;
}

double xi_upper_exponent(const RealMat3& g, double xi_value) {
  const double n = norm_delta(g);
  if (n <= 1.0 + 1e-12) return 0.0;
  return std::log(xi_value * n) / std::log(std::log(n) + 1.0);
}

}  // namespace liftlab
