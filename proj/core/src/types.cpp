#include "mrseg/types.hpp"

#include <algorithm>
#include <cmath>

namespace mrseg {

std::vector<int> SamplingMask::selected_bins() const {
  std::vector<int> bins;
  bins.reserve(static_cast<size_t>(m));
  for (int i = 0; i < grid.n(); ++i) {
    if (selected[static_cast<size_t>(i)]) bins.push_back(i);
  }
  return bins;
}

JointConfig default_joint_config(Grid grid, int num_classes) {
  JointConfig cfg;
  cfg.tol_v = 1e-3 * std::sqrt(static_cast<double>(grid.n()) * num_classes);
  return cfg;
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::tolerance: return "tolerance";
    case StopReason::discrepancy: return "discrepancy";
    case StopReason::max_iters: return "max_iters";
  }
  return "unknown";
}

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::vector<std::string> validate(const Grid& g) {
  std::vector<std::string> out;
  if (g.n1 < 2) out.push_back("grid: n1 < 2");
  if (g.n2 < 2) out.push_back("grid: n2 < 2");
  return out;
}

std::vector<std::string> validate(const RealImage& img) {
  auto out = validate(img.grid);
  if (img.values.size() != static_cast<size_t>(img.grid.n()))
    out.push_back("image: value count does not match grid");
  else if (!all_finite(img.values))
    out.push_back("image: non-finite value");
  return out;
}

std::vector<std::string> validate(const ComplexSpectrum& spec) {
  auto out = validate(spec.grid);
  if (spec.values.size() != static_cast<size_t>(spec.grid.n())) {
    out.push_back("spectrum: value count does not match grid");
    return out;
  }
  for (const Complex& z : spec.values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      out.push_back("spectrum: non-finite value");
      break;
    }
  }
  return out;
}

std::vector<std::string> validate(const SamplingMask& mask) {
  auto out = validate(mask.grid);
  if (mask.selected.size() != static_cast<size_t>(mask.grid.n()))
    out.push_back("mask: flag count does not match grid");
  const long count = std::count(mask.selected.begin(), mask.selected.end(), uint8_t{1});
  if (mask.m < 1) out.push_back("mask: empty (m < 1)");
  if (mask.m > mask.grid.n()) out.push_back("mask: m exceeds bin count");
  if (count != mask.m) out.push_back("mask: m does not match selected count");
  return out;
}

std::vector<std::string> validate(const KSpaceData& data) {
  auto out = validate(data.mask);
  if (data.samples.size() != static_cast<size_t>(data.mask.m))
    out.push_back("kspace: sample count does not match mask.m");
  if (!(data.noise_sigma >= 0.0)) out.push_back("kspace: negative noise sigma");
  return out;
}

std::vector<std::string> validate(const RegionMeans& c) {
  std::vector<std::string> out;
  if (c.num_classes() < 2) out.push_back("means: fewer than two classes");
  for (size_t a = 0; a < c.values.size(); ++a)
    for (size_t b = a + 1; b < c.values.size(); ++b)
      if (c.values[a] == c.values[b]) {
        out.push_back("means: duplicate entries");
        return out;
      }
  return out;
}

std::vector<std::string> validate(const LabelRelaxation& v) {
  auto out = validate(v.grid);
  const int n = v.grid.n();
  if (v.num_classes < 2) out.push_back("relaxation: fewer than two classes");
  if (v.values.size() != static_cast<size_t>(n) * v.num_classes) {
    out.push_back("relaxation: value count does not match grid");
    return out;
  }
  bool neg = false, rowsum = false;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < v.num_classes; ++j) {
      const double x = v.at(i, j);
      if (x < -v.eps_simplex) neg = true;
      s += x;
    }
    if (std::abs(s - 1.0) > v.eps_simplex) rowsum = true;
    if (neg && rowsum) break;
  }
  if (neg) out.push_back("relaxation: negative entry beyond eps_simplex");
  if (rowsum) out.push_back("relaxation: row sum deviates from 1 beyond eps_simplex");
  return out;
}

std::vector<std::string> validate(const HardSegmentation& seg) {
  auto out = validate(seg.grid);
  if (seg.labels.size() != static_cast<size_t>(seg.grid.n()))
    out.push_back("segmentation: label count does not match grid");
  for (int lab : seg.labels) {
    if (lab < 0 || lab >= seg.num_classes) {
      out.push_back("segmentation: label out of range");
      break;
    }
  }
  return out;
}

std::vector<std::string> validate(const DualField& field, double radius) {
  auto out = validate(field.grid);
  const int n = field.grid.n();
  if (field.channels != 2 && (field.channels < 2 || field.channels % 2 != 0))
    out.push_back("dual field: channel count not 2 or 2*ell");
  if (field.values.size() != static_cast<size_t>(n) * field.channels) {
    out.push_back("dual field: value count does not match grid");
    return out;
  }
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < field.channels; ++c) s += field.at(i, c) * field.at(i, c);
    if (std::sqrt(s) > radius + 1e-12) {
      out.push_back("dual field: pointwise norm exceeds radius");
      break;
    }
  }
  return out;
}

std::vector<std::string> validate(const JointConfig& cfg) {
  std::vector<std::string> out;
  if (!(cfg.alpha > 0)) out.push_back("config: alpha must be positive");
  if (!(cfg.beta > 0)) out.push_back("config: beta must be positive");
  if (!(cfg.delta >= 0)) out.push_back("config: delta must be nonnegative");
  if (!(cfg.tol_v > 0)) out.push_back("config: tol_v must be positive");
  if (cfg.max_outer < 1) out.push_back("config: max_outer must be positive");
  if (cfg.inner_iters < 1) out.push_back("config: inner_iters must be positive");
  if (!(cfg.cg_tol > 0)) out.push_back("config: cg_tol must be positive");
  if (cfg.cg_max < 1) out.push_back("config: cg_max must be positive");
  if (!(cfg.epsilon_aug >= 0)) out.push_back("config: epsilon_aug must be nonnegative");
  if (!(cfg.mu > 0 && cfg.mu < 1)) out.push_back("config: mu must lie in (0,1)");
  return out;
}

std::vector<std::string> validate(const SolveReport& report, int max_outer) {
  std::vector<std::string> out;
  if (report.iterations.size() > static_cast<size_t>(max_outer))
    out.push_back("report: more iterations than max_outer");
  return out;
}

HardSegmentation argmax_labels(const LabelRelaxation& v) {
  const int n = v.grid.n();
  HardSegmentation seg{v.grid, v.num_classes, std::vector<int>(static_cast<size_t>(n), 0)};
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_val = v.at(i, 0);
    for (int j = 1; j < v.num_classes; ++j) {
      const double x = v.at(i, j);
      if (x > best_val) {
        best = j;
        best_val = x;
      }
    }
    seg.labels[static_cast<size_t>(i)] = best;
  }
  return seg;
}

}  // namespace mrseg
