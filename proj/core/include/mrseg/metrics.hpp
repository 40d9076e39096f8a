#pragma once

#include "mrseg/types.hpp"

namespace mrseg {

struct MetricReport {
  double rre = 0.0;
  double psnr_paper = 0.0;
  double psnr_standard = 0.0;
  double rse = 0.0;
};

/// Relative reconstruction error ||u_gt - u||_2 / ||u_gt||_2.
/// Throws for a zero ground truth.
double rre(const RealImage& u, const RealImage& u_gt);

enum class PsnrVariant {
  paper,           // 10 log10( max(u_gt) / (||u_gt - u||_2 / N) )
  standard,        // 10 log10( max(u_gt)^2 * N / ||u_gt - u||_2^2 )
  paper_max_recon  // paper formula with max over the reconstruction instead
};

/// Peak signal-to-noise ratio in dB. Identical images give +infinity.
double psnr(const RealImage& u, const RealImage& u_gt, PsnrVariant variant);

/// Relative segmentation error: fraction of pixels whose labels differ.
double rse(const HardSegmentation& seg, const HardSegmentation& seg_gt);

MetricReport evaluate(const RealImage& u, const RealImage& u_gt, const HardSegmentation& seg,
                      const HardSegmentation& seg_gt);

}  // namespace mrseg
