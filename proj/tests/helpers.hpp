#pragma once

// Shared test utilities: a seeded generator independent of the library's
// own RNG, plus brute-force oracles for the operator tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mrseg/types.hpp"

namespace testutil {

class Rand {
 public:
  explicit Rand(uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double signed_unit() { return 2.0 * uniform() - 1.0; }
  uint64_t integer(uint64_t bound) { return gen_() % bound; }

 private:
  std::mt19937_64 gen_;
};

inline mrseg::RealImage random_image(mrseg::Grid g, Rand& rng, double lo = -1.0, double hi = 1.0) {
  mrseg::RealImage img = mrseg::RealImage::zeros(g);
  for (double& x : img.values) x = rng.uniform(lo, hi);
  return img;
}

inline std::vector<mrseg::Complex> random_samples(int m, Rand& rng) {
  std::vector<mrseg::Complex> z(static_cast<size_t>(m));
  for (auto& x : z) x = mrseg::Complex(rng.signed_unit(), rng.signed_unit());
  return z;
}

inline mrseg::SamplingMask random_mask(mrseg::Grid g, double rate, Rand& rng) {
  mrseg::SamplingMask mask{g, std::vector<uint8_t>(static_cast<size_t>(g.n()), 0), 0};
  mask.selected[0] = 1;
  for (int i = 1; i < g.n(); ++i) mask.selected[static_cast<size_t>(i)] = rng.uniform() < rate;
  mask.m = static_cast<int>(std::count(mask.selected.begin(), mask.selected.end(), uint8_t{1}));
  return mask;
}

/// O(n^2) unitary DFT, the independent oracle for the FFT-backed operators.
inline std::vector<mrseg::Complex> naive_dft(const mrseg::RealImage& img) {
  const int n1 = img.grid.n1, n2 = img.grid.n2;
  std::vector<mrseg::Complex> out(static_cast<size_t>(n1) * n2);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n1) * n2);
  for (int k1 = 0; k1 < n1; ++k1) {
    for (int k2 = 0; k2 < n2; ++k2) {
      mrseg::Complex acc(0.0, 0.0);
      for (int r = 0; r < n1; ++r) {
        for (int c = 0; c < n2; ++c) {
          const double phase =
              -2.0 * M_PI * (static_cast<double>(k1) * r / n1 + static_cast<double>(k2) * c / n2);
          acc += img.values[static_cast<size_t>(r) * n2 + c] *
                 mrseg::Complex(std::cos(phase), std::sin(phase));
        }
      }
      out[static_cast<size_t>(k1) * n2 + k2] = acc * scale;
    }
  }
  return out;
}

/// Brute-force Euclidean projection onto the probability simplex by
/// enumerating all active sets.
inline std::vector<double> simplex_projection_oracle(const std::vector<double>& y) {
  const int ell = static_cast<int>(y.size());
  std::vector<double> best;
  double best_dist = 1e300;
  for (unsigned mask = 1; mask < (1u << ell); ++mask) {
    int support = 0;
    double sum = 0.0;
    for (int j = 0; j < ell; ++j)
      if (mask & (1u << j)) {
        ++support;
        sum += y[static_cast<size_t>(j)];
      }
    const double theta = (sum - 1.0) / support;
    std::vector<double> x(y.size(), 0.0);
    bool feasible = true;
    for (int j = 0; j < ell; ++j) {
      if (mask & (1u << j)) {
        x[static_cast<size_t>(j)] = y[static_cast<size_t>(j)] - theta;
        if (x[static_cast<size_t>(j)] < -1e-12) feasible = false;
      }
    }
    if (!feasible) continue;
    double dist = 0.0;
    for (int j = 0; j < ell; ++j) {
      const double d = x[static_cast<size_t>(j)] - y[static_cast<size_t>(j)];
      dist += d * d;
    }
    if (dist < best_dist) {
      best_dist = dist;
      best = x;
    }
  }
  return best;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm2_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace testutil
