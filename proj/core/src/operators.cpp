#include "mrseg/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dft.hpp"
#include "rng.hpp"

namespace mrseg {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::vector<Complex> to_complex(const RealImage& img) {
  std::vector<Complex> out(img.values.size());
  for (size_t i = 0; i < img.values.size(); ++i) out[i] = Complex(img.values[i], 0.0);
  return out;
}

}  // namespace

ComplexSpectrum dft(const RealImage& img) {
  require(img.values.size() == static_cast<size_t>(img.grid.n()), "dft: shape mismatch");
  detail::Dft plan(img.grid);
  ComplexSpectrum spec{img.grid, {}};
  plan.forward(to_complex(img), spec.values);
  return spec;
}

ComplexSpectrum idft(const ComplexSpectrum& spec) {
  require(spec.values.size() == static_cast<size_t>(spec.grid.n()), "idft: shape mismatch");
  detail::Dft plan(spec.grid);
  ComplexSpectrum out{spec.grid, {}};
  plan.inverse(spec.values, out.values);
  return out;
}

ForwardOperator::ForwardOperator(SamplingMask mask)
    : mask_(std::move(mask)),
      bins_(mask_.selected_bins()),
      dft_(std::make_unique<detail::Dft>(mask_.grid)),
      scratch_a_(static_cast<size_t>(mask_.grid.n())),
      scratch_b_(static_cast<size_t>(mask_.grid.n())) {
  require(static_cast<int>(bins_.size()) == mask_.m, "forward operator: inconsistent mask");
}

ForwardOperator::~ForwardOperator() = default;
ForwardOperator::ForwardOperator(ForwardOperator&&) noexcept = default;
ForwardOperator& ForwardOperator::operator=(ForwardOperator&&) noexcept = default;

std::vector<Complex> ForwardOperator::forward(const RealImage& u) const {
  require(u.grid == mask_.grid, "forward: grid mismatch");
  for (size_t i = 0; i < u.values.size(); ++i) scratch_a_[i] = Complex(u.values[i], 0.0);
  dft_->forward(scratch_a_, scratch_b_);
  std::vector<Complex> out(bins_.size());
  for (size_t k = 0; k < bins_.size(); ++k) out[k] = scratch_b_[static_cast<size_t>(bins_[k])];
  return out;
}

RealImage ForwardOperator::adjoint(std::span<const Complex> z) const {
  require(static_cast<int>(z.size()) == mask_.m, "adjoint: sample count mismatch");
  std::fill(scratch_a_.begin(), scratch_a_.end(), Complex(0.0, 0.0));
  for (size_t k = 0; k < bins_.size(); ++k) scratch_a_[static_cast<size_t>(bins_[k])] = z[k];
  dft_->inverse(scratch_a_, scratch_b_);
  RealImage out = RealImage::zeros(mask_.grid);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = scratch_b_[i].real();
  return out;
}

RealImage ForwardOperator::normal(const RealImage& u) const {
  require(u.grid == mask_.grid, "normal: grid mismatch");
  for (size_t i = 0; i < u.values.size(); ++i) scratch_a_[i] = Complex(u.values[i], 0.0);
  dft_->forward(scratch_a_, scratch_b_);
  std::fill(scratch_a_.begin(), scratch_a_.end(), Complex(0.0, 0.0));
  for (int bin : bins_) scratch_a_[static_cast<size_t>(bin)] = scratch_b_[static_cast<size_t>(bin)];
  dft_->inverse(scratch_a_, scratch_b_);
  RealImage out = RealImage::zeros(mask_.grid);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = scratch_b_[i].real();
  return out;
}

double operator_norm_estimate(const ForwardOperator& op, int iters, uint64_t seed) {
  detail::Rng rng(seed);
  RealImage x = RealImage::zeros(op.grid());
  for (double& v : x.values) v = rng.uniform() - 0.5;
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    const double nx = std::sqrt(std::inner_product(x.values.begin(), x.values.end(), x.values.begin(), 0.0));
    if (nx == 0.0) return 0.0;
    for (double& v : x.values) v /= nx;
    RealImage y = op.normal(x);
    lambda = std::inner_product(x.values.begin(), x.values.end(), y.values.begin(), 0.0);
    x = std::move(y);
  }
  return std::sqrt(std::max(lambda, 0.0));
}

RealImage zero_fill(const KSpaceData& data) {
  ForwardOperator op(data.mask);
  return op.adjoint(data.samples);
}

namespace kernels {

void gradient_into(const RealImage& u, DualField& out) {
  const int n1 = u.grid.n1, n2 = u.grid.n2, n = u.grid.n();
  out.grid = u.grid;
  out.channels = 2;
  out.values.resize(static_cast<size_t>(n) * 2);
  double* d1 = out.values.data();
  double* d2 = out.values.data() + n;
  const double* p = u.values.data();
  for (int r = 0; r < n1; ++r) {
    for (int c = 0; c < n2; ++c) {
      const int i = r * n2 + c;
      d1[i] = (r + 1 < n1) ? p[i + n2] - p[i] : 0.0;
      d2[i] = (c + 1 < n2) ? p[i + 1] - p[i] : 0.0;
    }
  }
}

void gradient_vec_into(const LabelRelaxation& v, DualField& out) {
  const int n1 = v.grid.n1, n2 = v.grid.n2, n = v.grid.n();
  out.grid = v.grid;
  out.channels = 2 * v.num_classes;
  out.values.resize(static_cast<size_t>(n) * out.channels);
  for (int j = 0; j < v.num_classes; ++j) {
    const double* p = v.values.data() + static_cast<size_t>(j) * n;
    double* d1 = out.values.data() + static_cast<size_t>(2 * j) * n;
    double* d2 = out.values.data() + static_cast<size_t>(2 * j + 1) * n;
    for (int r = 0; r < n1; ++r) {
      for (int c = 0; c < n2; ++c) {
        const int i = r * n2 + c;
        d1[i] = (r + 1 < n1) ? p[i + n2] - p[i] : 0.0;
        d2[i] = (c + 1 < n2) ? p[i + 1] - p[i] : 0.0;
      }
    }
  }
}

namespace {

// div = -gradient^T; entries of y in the zeroed gradient positions (last
// row of d1, last column of d2) never contribute.
void div_channel_pair(const double* d1, const double* d2, double* out, int n1, int n2) {
  for (int r = 0; r < n1; ++r) {
    for (int c = 0; c < n2; ++c) {
      const int i = r * n2 + c;
      double acc = 0.0;
      if (r + 1 < n1) acc += d1[i];
      if (r > 0) acc -= d1[i - n2];
      if (c + 1 < n2) acc += d2[i];
      if (c > 0) acc -= d2[i - 1];
      out[i] = acc;
    }
  }
}

}  // namespace

void divergence_into(const DualField& y, RealImage& out) {
  const int n = y.grid.n();
  out.grid = y.grid;
  out.values.resize(static_cast<size_t>(n));
  div_channel_pair(y.values.data(), y.values.data() + n, out.values.data(), y.grid.n1, y.grid.n2);
}

void divergence_vec_into(const DualField& y, ClassField& out) {
  const int n = y.grid.n();
  const int ell = y.channels / 2;
  out.grid = y.grid;
  out.num_classes = ell;
  out.values.resize(static_cast<size_t>(n) * ell);
  for (int j = 0; j < ell; ++j) {
    div_channel_pair(y.values.data() + static_cast<size_t>(2 * j) * n,
                     y.values.data() + static_cast<size_t>(2 * j + 1) * n,
                     out.values.data() + static_cast<size_t>(j) * n, y.grid.n1, y.grid.n2);
  }
}

void project_dual_ball_inplace(DualField& y, double radius) {
  const int n = y.grid.n();
  const int ell = y.channels / 2;
  const double r2 = radius * radius;
  // Pointwise norms accumulate per-class contributions in sorted order so
  // that class permutations reproduce bit-identical results.
  std::vector<double> cls(static_cast<size_t>(ell));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < ell; ++j) {
      const double a = y.values[static_cast<size_t>(2 * j) * n + i];
      const double b = y.values[static_cast<size_t>(2 * j + 1) * n + i];
      cls[static_cast<size_t>(j)] = a * a + b * b;
    }
    if (ell > 1) std::sort(cls.begin(), cls.end());
    double s = 0.0;
    for (double x : cls) s += x;
    if (s > r2) {
      const double scale = radius / std::sqrt(s);
      for (int c = 0; c < y.channels; ++c) y.values[static_cast<size_t>(c) * n + i] *= scale;
    }
  }
}

namespace {

// Projection of one contiguous row onto the probability simplex.
void simplex_row(const double* in, double* out, double* work, int ell) {
  for (int j = 0; j < ell; ++j) work[j] = in[j];
  std::sort(work, work + ell, std::greater<double>());
  double cumulative = work[0];
  double theta = cumulative - 1.0;
  int support = 1;
  for (int j = 1; j < ell; ++j) {
    cumulative += work[j];
    const double candidate = (cumulative - 1.0) / (j + 1);
    if (work[j] - candidate > 0.0) {
      theta = candidate;
      support = j + 1;
    }
  }
  (void)support;
  for (int j = 0; j < ell; ++j) out[j] = std::max(in[j] - theta, 0.0);
}

}  // namespace

void project_simplex_rows(const ClassField& in, LabelRelaxation& out) {
  const int n = in.grid.n();
  const int ell = in.num_classes;
  out.grid = in.grid;
  out.num_classes = ell;
  out.values.resize(static_cast<size_t>(n) * ell);
  std::vector<double> row(static_cast<size_t>(ell)), proj(static_cast<size_t>(ell)),
      work(static_cast<size_t>(ell));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < ell; ++j) row[static_cast<size_t>(j)] = in.values[static_cast<size_t>(j) * n + i];
    simplex_row(row.data(), proj.data(), work.data(), ell);
    for (int j = 0; j < ell; ++j) out.values[static_cast<size_t>(j) * n + i] = proj[static_cast<size_t>(j)];
  }
}

}  // namespace kernels

DualField gradient(const RealImage& u) {
  DualField out;
  kernels::gradient_into(u, out);
  return out;
}

DualField gradient_vec(const LabelRelaxation& v) {
  DualField out;
  kernels::gradient_vec_into(v, out);
  return out;
}

RealImage divergence(const DualField& y) {
  require(y.channels == 2, "divergence: expected 2 channels");
  RealImage out;
  kernels::divergence_into(y, out);
  return out;
}

ClassField divergence_vec(const DualField& y) {
  require(y.channels >= 2 && y.channels % 2 == 0, "divergence_vec: expected 2*ell channels");
  ClassField out;
  kernels::divergence_vec_into(y, out);
  return out;
}

double tv_scalar(const RealImage& u) {
  const int n1 = u.grid.n1, n2 = u.grid.n2;
  const double* p = u.values.data();
  double tv = 0.0;
  for (int r = 0; r < n1; ++r) {
    for (int c = 0; c < n2; ++c) {
      const int i = r * n2 + c;
      const double d1 = (r + 1 < n1) ? p[i + n2] - p[i] : 0.0;
      const double d2 = (c + 1 < n2) ? p[i + 1] - p[i] : 0.0;
      tv += std::sqrt(d1 * d1 + d2 * d2);
    }
  }
  return tv;
}

double tv_vector(const LabelRelaxation& v) {
  const int n1 = v.grid.n1, n2 = v.grid.n2, n = v.grid.n();
  const int ell = v.num_classes;
  std::vector<double> cls(static_cast<size_t>(ell));
  double tv = 0.0;
  for (int r = 0; r < n1; ++r) {
    for (int c = 0; c < n2; ++c) {
      const int i = r * n2 + c;
      for (int j = 0; j < ell; ++j) {
        const double* p = v.values.data() + static_cast<size_t>(j) * n;
        const double d1 = (r + 1 < n1) ? p[i + n2] - p[i] : 0.0;
        const double d2 = (c + 1 < n2) ? p[i + 1] - p[i] : 0.0;
        cls[static_cast<size_t>(j)] = d1 * d1 + d2 * d2;
      }
      if (ell > 1) std::sort(cls.begin(), cls.end());
      double s = 0.0;
      for (double x : cls) s += x;
      tv += std::sqrt(s);
    }
  }
  return tv;
}

DualField project_dual_ball(const DualField& y, double radius) {
  require(radius > 0.0, "project_dual_ball: radius must be positive");
  DualField out = y;
  kernels::project_dual_ball_inplace(out, radius);
  return out;
}

std::vector<double> project_simplex(std::span<const double> row) {
  require(row.size() >= 2, "project_simplex: need at least two entries");
  std::vector<double> out(row.size()), work(row.size());
  kernels::simplex_row(row.data(), out.data(), work.data(), static_cast<int>(row.size()));
  return out;
}

}  // namespace mrseg
