#include "mrseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mrseg {

namespace {

double l2_diff(const RealImage& a, const RealImage& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

double rre(const RealImage& u, const RealImage& u_gt) {
  if (!(u.grid == u_gt.grid)) throw std::invalid_argument("rre: grid mismatch");
  double gt_norm = 0.0;
  for (double x : u_gt.values) gt_norm += x * x;
  gt_norm = std::sqrt(gt_norm);
  if (gt_norm == 0.0) throw std::invalid_argument("rre: zero ground truth");
  return l2_diff(u, u_gt) / gt_norm;
}

double psnr(const RealImage& u, const RealImage& u_gt, PsnrVariant variant) {
  if (!(u.grid == u_gt.grid)) throw std::invalid_argument("psnr: grid mismatch");
  const double err = l2_diff(u, u_gt);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(u_gt.grid.n());
  const double peak_gt = *std::max_element(u_gt.values.begin(), u_gt.values.end());
  switch (variant) {
    case PsnrVariant::paper:
      return 10.0 * std::log10(peak_gt / (err / n));
    case PsnrVariant::standard:
      return 10.0 * std::log10(peak_gt * peak_gt * n / (err * err));
    case PsnrVariant::paper_max_recon: {
      const double peak_u = *std::max_element(u.values.begin(), u.values.end());
      return 10.0 * std::log10(peak_u / (err / n));
    }
  }
  return 0.0;
}

double rse(const HardSegmentation& seg, const HardSegmentation& seg_gt) {
  if (!(seg.grid == seg_gt.grid)) throw std::invalid_argument("rse: grid mismatch");
  long mismatches = 0;
  for (size_t i = 0; i < seg.labels.size(); ++i)
    if (seg.labels[i] != seg_gt.labels[i]) ++mismatches;
  return static_cast<double>(mismatches) / static_cast<double>(seg.labels.size());
}

MetricReport evaluate(const RealImage& u, const RealImage& u_gt, const HardSegmentation& seg,
                      const HardSegmentation& seg_gt) {
  return MetricReport{rre(u, u_gt), psnr(u, u_gt, PsnrVariant::paper),
                      psnr(u, u_gt, PsnrVariant::standard), rse(seg, seg_gt)};
}

}  // namespace mrseg
