#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrseg {

using Complex = std::complex<double>;

/// Discrete image domain of n1 rows by n2 columns. Pixels are stored
/// row-major with flat index i = row * n2 + col.
struct Grid {
  int n1 = 0;
  int n2 = 0;

  int n() const { return n1 * n2; }
  bool operator==(const Grid&) const = default;
};

/// Real-valued image on a grid. Holds reconstructions u, subgradients p
/// and zero-fill solutions alike.
struct RealImage {
  Grid grid;
  std::vector<double> values;

  static RealImage zeros(Grid g) { return {g, std::vector<double>(static_cast<size_t>(g.n()), 0.0)}; }

  double& at(int row, int col) { return values[static_cast<size_t>(row) * grid.n2 + col]; }
  double at(int row, int col) const { return values[static_cast<size_t>(row) * grid.n2 + col]; }
};

/// Full complex Fourier spectrum, one coefficient per frequency bin,
/// in the same row-major bin order as the image pixels.
struct ComplexSpectrum {
  Grid grid;
  std::vector<Complex> values;

  static ComplexSpectrum zeros(Grid g) { return {g, std::vector<Complex>(static_cast<size_t>(g.n()))}; }
};

/// Binary k-space sampling pattern. m counts the selected bins.
struct SamplingMask {
  Grid grid;
  std::vector<uint8_t> selected;  // one flag per bin, row-major
  int m = 0;

  static SamplingMask full(Grid g) {
    return {g, std::vector<uint8_t>(static_cast<size_t>(g.n()), 1), g.n()};
  }
  /// Selected bin indices in row-major order.
  std::vector<int> selected_bins() const;
};

/// Undersampled, possibly noisy k-space measurements: the m sampled
/// coefficients in row-major bin order plus the per-component noise level.
struct KSpaceData {
  SamplingMask mask;
  std::vector<Complex> samples;
  double noise_sigma = 0.0;  // std of real and imaginary parts, each
};

/// Mean intensity per segmentation class (c_1 .. c_ell).
struct RegionMeans {
  std::vector<double> values;

  int num_classes() const { return static_cast<int>(values.size()); }
};

/// Relaxed labelling: one probability-simplex vector per pixel.
/// Storage is class-major planes: value of class j at pixel i lives at
/// values[j * n + i].
struct LabelRelaxation {
  Grid grid;
  int num_classes = 0;
  std::vector<double> values;
  double eps_simplex = 1e-8;

  static LabelRelaxation uniform(Grid g, int ell) {
    LabelRelaxation v{g, ell, std::vector<double>(static_cast<size_t>(g.n()) * ell, 1.0 / ell), 1e-8};
    return v;
  }
  double& at(int pixel, int cls) { return values[static_cast<size_t>(cls) * grid.n() + pixel]; }
  double at(int pixel, int cls) const { return values[static_cast<size_t>(cls) * grid.n() + pixel]; }
};

/// Per-pixel class field of the same shape as a LabelRelaxation but
/// without the simplex constraint (fidelity fields g, subgradients q).
struct ClassField {
  Grid grid;
  int num_classes = 0;
  std::vector<double> values;  // class-major planes

  static ClassField zeros(Grid g, int ell) {
    return {g, ell, std::vector<double>(static_cast<size_t>(g.n()) * ell, 0.0)};
  }
  double& at(int pixel, int cls) { return values[static_cast<size_t>(cls) * grid.n() + pixel]; }
  double at(int pixel, int cls) const { return values[static_cast<size_t>(cls) * grid.n() + pixel]; }
};

/// Hard per-pixel labels in [0, num_classes).
struct HardSegmentation {
  Grid grid;
  int num_classes = 0;
  std::vector<int> labels;
};

/// Gradient-shaped dual variable: 2 channels for a scalar image,
/// 2 per class for a vector-valued labelling. Channel c of pixel i lives
/// at values[c * n + i]; class j owns channels (2j, 2j+1).
struct DualField {
  Grid grid;
  int channels = 0;
  std::vector<double> values;

  static DualField zeros(Grid g, int ch) {
    return {g, ch, std::vector<double>(static_cast<size_t>(g.n()) * ch, 0.0)};
  }
  double& at(int pixel, int channel) { return values[static_cast<size_t>(channel) * grid.n() + pixel]; }
  double at(int pixel, int channel) const { return values[static_cast<size_t>(channel) * grid.n() + pixel]; }
};

/// Solver configuration shared by the reconstruction, segmentation and
/// joint solvers.
struct JointConfig {
  double alpha = 1.0;        // reconstruction TV weight
  double beta = 0.01;        // segmentation TV weight
  double delta = 0.1;        // coupling weight
  double tol_v = 1e-3;       // outer stop on ||v^{k+1} - v^k||_2 (absolute)
  int max_outer = 30;
  int inner_iters = 300;
  double cg_tol = 1e-10;
  int cg_max = 50;
  double epsilon_aug = 0.0;  // strong-convexity augmentation weight
  double mu = 0.5;           // two-class threshold
};

/// Default configuration for a given problem size; tol_v follows the
/// relative step rule 1e-3 * sqrt(n * ell).
JointConfig default_joint_config(Grid grid, int num_classes);

enum class StopReason { tolerance, discrepancy, max_iters };

std::string to_string(StopReason r);

/// One outer-iteration record of a solve.
struct IterationRecord {
  int k = 0;
  double data_residual = 0.0;     // ||A u - f||_2
  double coupling = 0.0;          // sum_ij v_ij (c_j - u_i)^2 (unweighted)
  double tv_u = 0.0;
  double tv_v = 0.0;
  double energy = 0.0;            // E(u, v)
  double surrogate = 0.0;         // F(z^{k+1}, r^k)
  double du_norm = 0.0;
  double dv_norm = 0.0;
  double bregman_u = 0.0;         // D_TV^{p^k}(u^{k+1}, u^k)
  double bregman_v = 0.0;         // D_TV^{q^k}(v^{k+1}, v^k)
  double w_norm = 0.0;            // surrogate subgradient norm
  double ratio = 0.0;             // ||w|| / ||dz||, NaN when dz = 0
};

struct SolveReport {
  std::vector<IterationRecord> iterations;
  StopReason stop_reason = StopReason::max_iters;
  bool surrogate_nonmonotone = false;  // flagged when F increases beyond slack
  bool empty_class = false;            // flagged by region-mean updates
};

/// Solver failure (NaN divergence and friends).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invariant checks. Each returns a list of human-readable violations;
// an empty list means the object is valid. They report, never abort.
std::vector<std::string> validate(const Grid& g);
std::vector<std::string> validate(const RealImage& img);
std::vector<std::string> validate(const ComplexSpectrum& spec);
std::vector<std::string> validate(const SamplingMask& mask);
std::vector<std::string> validate(const KSpaceData& data);
std::vector<std::string> validate(const RegionMeans& c);
std::vector<std::string> validate(const LabelRelaxation& v);
std::vector<std::string> validate(const HardSegmentation& seg);
std::vector<std::string> validate(const DualField& field, double radius);
std::vector<std::string> validate(const JointConfig& cfg);
std::vector<std::string> validate(const SolveReport& report, int max_outer);

/// Per-pixel argmax labels; ties go to the lowest class index.
HardSegmentation argmax_labels(const LabelRelaxation& v);

}  // namespace mrseg
