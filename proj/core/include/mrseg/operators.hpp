#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mrseg/types.hpp"

namespace mrseg {

namespace detail {
class Dft;
}

/// Unitary 2-D DFT of a real image (scale 1/sqrt(n) on both directions).
ComplexSpectrum dft(const RealImage& img);
/// Inverse unitary 2-D DFT.
ComplexSpectrum idft(const ComplexSpectrum& spec);

/// MRI forward operator A = S F with unitary F and binary sampling S,
/// together with its adjoint A* = Re . F^{-1} . S^T. Instances own FFT
/// plans and scratch buffers: not safe for concurrent use, but any number
/// of instances may run in parallel.
class ForwardOperator {
 public:
  explicit ForwardOperator(SamplingMask mask);
  ~ForwardOperator();
  ForwardOperator(ForwardOperator&&) noexcept;
  ForwardOperator& operator=(ForwardOperator&&) noexcept;
  ForwardOperator(const ForwardOperator&) = delete;
  ForwardOperator& operator=(const ForwardOperator&) = delete;

  const SamplingMask& mask() const { return mask_; }
  Grid grid() const { return mask_.grid; }
  int m() const { return mask_.m; }

  /// A u: masked unitary DFT coefficients in row-major bin order.
  std::vector<Complex> forward(const RealImage& u) const;
  /// A* z: real part of the inverse unitary DFT of the zero-filled spectrum.
  RealImage adjoint(std::span<const Complex> z) const;
  /// A* A u in one pass (two transforms).
  RealImage normal(const RealImage& u) const;

 private:
  SamplingMask mask_;
  std::vector<int> bins_;
  std::unique_ptr<detail::Dft> dft_;
  mutable std::vector<Complex> scratch_a_, scratch_b_;
};

/// Largest singular value of A estimated by power iteration on A*A.
double operator_norm_estimate(const ForwardOperator& op, int iters = 50, uint64_t seed = 0x5eed);

/// u_z = A* f.
RealImage zero_fill(const KSpaceData& data);

/// Forward differences with replicate boundary (last row/column difference
/// is zero). Two channels: d/drow, d/dcol.
DualField gradient(const RealImage& u);
/// Per-class forward differences; channels (2j, 2j+1) hold class j.
DualField gradient_vec(const LabelRelaxation& v);

/// Negative adjoint of gradient(): <gradient(u), y> = -<u, divergence(y)>
/// holds exactly.
RealImage divergence(const DualField& y);
/// Per-class divergence of a 2*ell-channel field, one plane per class.
ClassField divergence_vec(const DualField& y);

/// Isotropic discrete TV: sum over pixels of the gradient's Euclidean norm.
double tv_scalar(const RealImage& u);
/// Vector TV coupling all classes in one pointwise norm.
double tv_vector(const LabelRelaxation& v);

/// Pointwise projection onto the Euclidean ball of the given radius across
/// all channels.
DualField project_dual_ball(const DualField& y, double radius);

/// Euclidean projection of one row onto the probability simplex
/// (sorting-based).
std::vector<double> project_simplex(std::span<const double> row);

// In-place kernels used by the solvers (and handy in tests).
namespace kernels {
void gradient_into(const RealImage& u, DualField& out);
void gradient_vec_into(const LabelRelaxation& v, DualField& out);
void divergence_into(const DualField& y, RealImage& out);
void divergence_vec_into(const DualField& y, ClassField& out);
void project_dual_ball_inplace(DualField& y, double radius);
/// Projects every pixel row of a class field onto the simplex, writing into
/// a LabelRelaxation of the same shape.
void project_simplex_rows(const ClassField& in, LabelRelaxation& out);
}  // namespace kernels

}  // namespace mrseg
