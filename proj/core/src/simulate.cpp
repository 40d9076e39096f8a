#include "mrseg/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mrseg/operators.hpp"
#include "rng.hpp"

namespace mrseg {

namespace {

struct Painter {
  RealImage image;
  HardSegmentation labels;
  const std::vector<double>& values;

  Painter(Grid g, const std::vector<double>& vals)
      : image(RealImage::zeros(g)),
        labels{g, static_cast<int>(vals.size()), std::vector<int>(static_cast<size_t>(g.n()), 0)},
        values(vals) {
    fill(0);
  }

  void fill(int cls) {
    std::fill(image.values.begin(), image.values.end(), values[static_cast<size_t>(cls)]);
    std::fill(labels.labels.begin(), labels.labels.end(), cls);
  }

  void disk(double cy_px, double cx_px, double r_px, int cls) {
    const Grid g = image.grid;
    const double r2 = r_px * r_px;
    const int r_lo = std::max(0, static_cast<int>(std::floor(cy_px - r_px)));
    const int r_hi = std::min(g.n1 - 1, static_cast<int>(std::ceil(cy_px + r_px)));
    for (int r = r_lo; r <= r_hi; ++r) {
      for (int c = 0; c < g.n2; ++c) {
        const double dy = r - cy_px, dx = c - cx_px;
        if (dy * dy + dx * dx <= r2) {
          const int i = r * g.n2 + c;
          image.values[static_cast<size_t>(i)] = values[static_cast<size_t>(cls)];
          labels.labels[static_cast<size_t>(i)] = cls;
        }
      }
    }
  }

  void ellipse(double cx, double cy, double ax, double ay, double angle_deg, int cls) {
    const Grid g = image.grid;
    const double phi = angle_deg * M_PI / 180.0;
    const double cph = std::cos(phi), sph = std::sin(phi);
    for (int r = 0; r < g.n1; ++r) {
      for (int c = 0; c < g.n2; ++c) {
        // normalized coordinates in [-1, 1]
        const double x = 2.0 * c / (g.n2 - 1) - 1.0;
        const double y = 2.0 * r / (g.n1 - 1) - 1.0;
        const double xr = cph * (x - cx) + sph * (y - cy);
        const double yr = -sph * (x - cx) + cph * (y - cy);
        if ((xr * xr) / (ax * ax) + (yr * yr) / (ay * ay) <= 1.0) {
          const int i = r * g.n2 + c;
          image.values[static_cast<size_t>(i)] = values[static_cast<size_t>(cls)];
          labels.labels[static_cast<size_t>(i)] = cls;
        }
      }
    }
  }
};

int clamp_class(int cls, int ell) { return std::min(cls, ell - 1); }

}  // namespace

PhantomResult make_phantom(const PhantomSpec& spec) {
  if (spec.values.size() < 2) throw std::invalid_argument("phantom: need at least two region values");
  const Grid g = spec.grid;
  const int ell = static_cast<int>(spec.values.size());
  const double minn = static_cast<double>(std::min(g.n1, g.n2));
  const double cy = 0.5 * (g.n1 - 1), cx = 0.5 * (g.n2 - 1);
  Painter paint(g, spec.values);
  detail::Rng rng(spec.seed);

  switch (spec.kind) {
    case PhantomKind::two_region:
      paint.disk(cy, cx, spec.disk_radius * minn, 1);
      break;

    case PhantomKind::bubbles: {
      double allow = 0.5 * minn;  // bubbles stay inside this radius
      if (spec.pipe_radius > 0.0) {
        paint.disk(cy, cx, spec.pipe_radius * minn, 1);
        allow = spec.pipe_radius * minn;
      } else {
        paint.fill(1);
      }
      for (int b = 0; b < spec.n_bubbles; ++b) {
        const double rb = rng.uniform(spec.bubble_rmin, spec.bubble_rmax) * minn;
        const double angle = rng.uniform(0.0, 2.0 * M_PI);
        const double reach = std::max(allow - rb - 1.0, 0.0);
        const double dist = std::sqrt(rng.uniform()) * reach;
        paint.disk(cy + dist * std::sin(angle), cx + dist * std::cos(angle), rb, 0);
      }
      break;
    }

    case PhantomKind::disks: {
      if (!spec.disks.empty()) {
        for (const DiskSpec& d : spec.disks)
          paint.disk(d.cy * (g.n1 - 1), d.cx * (g.n2 - 1), d.radius * minn, clamp_class(d.cls, ell));
      } else {
        for (int k = 0; k < spec.n_disks; ++k) {
          const double dcx = rng.uniform(0.25, 0.75) * (g.n2 - 1);
          const double dcy = rng.uniform(0.25, 0.75) * (g.n1 - 1);
          const double r = rng.uniform(spec.disk_rmin, spec.disk_rmax) * minn;
          paint.disk(dcy, dcx, r, 1 + k % (ell - 1));
        }
      }
      break;
    }

    case PhantomKind::shepp_logan_like: {
      // piecewise-constant ellipse stack, loosely brain-shaped
      struct E { double cx, cy, ax, ay, angle; int cls; };
      const E stack[] = {
          {0.0, 0.0, 0.72, 0.94, 0.0, 1},       // head
          {0.0, -0.02, 0.62, 0.84, 0.0, 2},     // brain
          {0.24, 0.0, 0.12, 0.32, -18.0, 3},    // right ventricle
          {-0.24, 0.0, 0.16, 0.42, 18.0, 3},    // left ventricle
          {0.0, 0.38, 0.20, 0.24, 0.0, 3},      // upper structure
          {0.0, -0.48, 0.14, 0.14, 0.0, 3},     // lower structure
      };
      for (const E& e : stack) paint.ellipse(e.cx, e.cy, e.ax, e.ay, e.angle, clamp_class(e.cls, ell));
      break;
    }
  }

  return PhantomResult{std::move(paint.image), std::move(paint.labels), RegionMeans{spec.values}};
}

namespace {

int wrap_bin(int k, int extent) { return ((k % extent) + extent) % extent; }

// wraparound distance of a bin from DC along one axis
double axis_dist(int k, int extent) {
  const int d = std::min(k, extent - k);
  return static_cast<double>(d);
}

SamplingMask finish_mask(Grid grid, std::vector<uint8_t> selected) {
  const int m = static_cast<int>(std::count(selected.begin(), selected.end(), uint8_t{1}));
  return SamplingMask{grid, std::move(selected), m};
}

}  // namespace

SamplingMask make_mask(const MaskSpec& spec, Grid grid) {
  if (!(spec.rate > 0.0 && spec.rate <= 1.0)) throw std::invalid_argument("mask: rate must lie in (0,1]");
  const int n = grid.n();
  const int m = static_cast<int>(std::lround(spec.rate * n));
  if (m < 1) throw std::invalid_argument("mask: rate too small to include the DC bin");

  std::vector<uint8_t> selected(static_cast<size_t>(n), 0);
  selected[0] = 1;  // DC always sampled
  detail::Rng rng(spec.seed);

  switch (spec.kind) {
    case MaskKind::uniform_random: {
      std::vector<int> pool(static_cast<size_t>(n) - 1);
      std::iota(pool.begin(), pool.end(), 1);
      for (int k = 0; k < m - 1; ++k) {
        const size_t j = static_cast<size_t>(k) + rng.integer(pool.size() - k);
        std::swap(pool[static_cast<size_t>(k)], pool[j]);
        selected[static_cast<size_t>(pool[static_cast<size_t>(k)])] = 1;
      }
      break;
    }

    case MaskKind::variable_density_random: {
      // weighted sampling without replacement via exponential keys
      const double s = std::max(spec.vd_falloff * std::min(grid.n1, grid.n2), 1e-6);
      std::vector<std::pair<double, int>> keys;
      keys.reserve(static_cast<size_t>(n) - 1);
      for (int i = 1; i < n; ++i) {
        const double dy = axis_dist(i / grid.n2, grid.n1);
        const double dx = axis_dist(i % grid.n2, grid.n2);
        const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * s * s)) + 1e-12;
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        keys.emplace_back(std::log(u) / w, i);
      }
      std::partial_sort(keys.begin(), keys.begin() + (m - 1), keys.end(),
                        [](const auto& a, const auto& b) { return a.first > b.first; });
      for (int k = 0; k < m - 1; ++k) selected[static_cast<size_t>(keys[static_cast<size_t>(k)].second)] = 1;
      break;
    }

    case MaskKind::spiral: {
      const double rmax = 0.5 * std::min(grid.n1, grid.n2) - 1.0;
      const double theta_max = 2.0 * M_PI * spec.spiral_turns;
      // keep consecutive walk points well under a pixel apart
      const int spt = std::max(spec.samples_per_turn,
                               static_cast<int>(std::ceil(2.0 * M_PI * rmax / 0.4)));
      const double dtheta = 2.0 * M_PI / spt;
      int count = 1;
      double theta = 0.0;
      while (count < m) {
        theta += dtheta;
        if (theta > theta_max)
          throw std::invalid_argument("mask: spiral cannot reach the requested rate; add turns");
        const double r = rmax * theta / theta_max;
        const int ky = static_cast<int>(std::lround(r * std::sin(theta)));
        const int kx = static_cast<int>(std::lround(r * std::cos(theta)));
        const int bin = wrap_bin(ky, grid.n1) * grid.n2 + wrap_bin(kx, grid.n2);
        if (!selected[static_cast<size_t>(bin)]) {
          selected[static_cast<size_t>(bin)] = 1;
          ++count;
        }
      }
      break;
    }
  }

  return finish_mask(grid, std::move(selected));
}

KSpaceData simulate_kspace(const RealImage& u_gt, const SamplingMask& mask, double sigma,
                           uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("simulate: sigma must be nonnegative");
  ForwardOperator op(mask);
  std::vector<Complex> samples = op.forward(u_gt);
  if (sigma > 0.0) {
    detail::Rng rng(seed);
    for (Complex& z : samples) {
      const double re = sigma * rng.normal();
      const double im = sigma * rng.normal();
      z += Complex(re, im);
    }
  }
  return KSpaceData{mask, std::move(samples), sigma};
}

double snr_of(const KSpaceData& data, std::span<const Complex> clean) {
  double clean_norm = 0.0;
  for (const Complex& z : clean) clean_norm += std::norm(z);
  clean_norm = std::sqrt(clean_norm);
  if (clean_norm == 0.0) return -std::numeric_limits<double>::infinity();
  if (data.noise_sigma == 0.0) return std::numeric_limits<double>::infinity();
  const double noise_norm = data.noise_sigma * std::sqrt(2.0 * static_cast<double>(data.mask.m));
  return 20.0 * std::log10(clean_norm / noise_norm);
}

}  // namespace mrseg
