#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mrseg/types.hpp"

namespace mrseg {

enum class PhantomKind { bubbles, disks, shepp_logan_like, two_region };

/// One explicit disk for the `disks` kind: center and radius as fractions
/// of the grid (radius relative to min(n1, n2)), class index into values.
struct DiskSpec {
  double cx = 0.5;
  double cy = 0.5;
  double radius = 0.2;
  int cls = 1;
};

struct PhantomSpec {
  PhantomKind kind = PhantomKind::two_region;
  Grid grid{64, 64};
  std::vector<double> values{0.0, 1.0};  // one intensity per class, pairwise distinct
  uint64_t seed = 0;

  // two_region
  double disk_radius = 0.25;  // fraction of min(n1, n2)

  // bubbles: liquid fills the pipe (or the whole image when pipe_radius = 0)
  // and gas bubbles are punched out. Overlaps resolve by draw order.
  double pipe_radius = 0.0;
  int n_bubbles = 8;
  double bubble_rmin = 0.04;
  double bubble_rmax = 0.09;

  // disks: explicit geometry wins; otherwise n_disks random disks.
  std::vector<DiskSpec> disks;
  int n_disks = 3;
  double disk_rmin = 0.08;
  double disk_rmax = 0.2;
};

struct PhantomResult {
  RealImage image;
  HardSegmentation labels;
  RegionMeans means;
};

/// Deterministic procedural phantom for a spec and seed; labels and
/// intensities stay consistent by construction.
PhantomResult make_phantom(const PhantomSpec& spec);

enum class MaskKind { uniform_random, variable_density_random, spiral };

struct MaskSpec {
  MaskKind kind = MaskKind::uniform_random;
  double rate = 0.15;  // in (0, 1]
  uint64_t seed = 0;
  // spiral
  int spiral_turns = 16;
  int samples_per_turn = 512;  // walk resolution along the path
  // variable density: Gaussian falloff std as fraction of min(n1, n2)
  double vd_falloff = 0.25;
};

/// Sampling mask with exactly round(rate * n) bins; the DC bin is always
/// included. Throws when the rate is too small to include DC or the spiral
/// cannot reach the requested count.
SamplingMask make_mask(const MaskSpec& spec, Grid grid);

/// f = A u_gt + eta with eta complex Gaussian: real and imaginary parts
/// i.i.d. N(0, sigma^2) per component. Deterministic per seed.
KSpaceData simulate_kspace(const RealImage& u_gt, const SamplingMask& mask, double sigma,
                           uint64_t seed);

/// SNR in dB under the convention 20 log10(||clean||_2 / (sigma sqrt(2m))).
/// Returns +inf for sigma = 0 and -inf for zero clean data.
double snr_of(const KSpaceData& data, std::span<const Complex> clean);

}  // namespace mrseg
