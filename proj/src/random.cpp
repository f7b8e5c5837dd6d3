#include "tomolearn/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tomolearn {

namespace {

std::uint64_t sm_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t mix2(std::uint64_t h, std::uint64_t v) {
  return sm_finalize(h + 0x9E3779B97F4A7C15ull * (v + 1));
}

}  // namespace

RngSeed RngSeed::derive(std::uint64_t a, std::uint64_t b) const {
  return RngSeed{mix2(mix2(mix2(seed, stream), a), b), stream};
}

Rng::Rng(RngSeed s) : engine_(mix2(s.seed, s.stream)) {}

double Rng::uniform01() {
  // (0,1) strictly, so the inverse CDF stays finite.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

double Rng::normal() { return inverse_normal_cdf(uniform01()); }

// Wichura's algorithm AS 241, PPND16.
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf: p must be in (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
            1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    val = num / den;
  }
  return q < 0.0 ? -val : val;
}

AngleSet sample_angles(int n, int n_theta, RngSeed seed) {
  if (n_theta <= 0) throw std::invalid_argument("sample_angles: n_theta must be positive");
  if (n < 1 || n > n_theta)
    throw std::invalid_argument("sample_angles: need 1 <= N <= n_theta");
  Rng rng(seed);
  std::vector<int> pool(static_cast<std::size_t>(n_theta));
  std::iota(pool.begin(), pool.end(), 0);
  // Partial Fisher-Yates: the first n entries are a uniform n-subset.
  for (int i = 0; i < n; ++i) {
    const auto j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n_theta - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(n));
  std::sort(pool.begin(), pool.end());
  return AngleSet(std::move(pool), n_theta);
}

Vector gaussian_noise(Eigen::Index len, RngSeed seed) {
  if (len < 1) throw std::invalid_argument("gaussian_noise: len must be >= 1");
  Rng rng(seed);
  Vector out(len);
  for (Eigen::Index i = 0; i < len; ++i) out[i] = rng.normal();
  return out;
}

}  // namespace tomolearn
