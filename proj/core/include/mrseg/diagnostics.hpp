#pragma once

#include <vector>

#include "mrseg/types.hpp"

namespace mrseg {

class ForwardOperator;

/// E(u, v) = 1/2 ||A u - f||^2 + delta sum_ij v_ij (c_j - u_i)^2.
double energy_E(const RealImage& u, const LabelRelaxation& v, const KSpaceData& data,
                const RegionMeans& c, double delta);
double energy_E(const ForwardOperator& A, const RealImage& u, const LabelRelaxation& v,
                const std::vector<Complex>& f, const RegionMeans& c, double delta);

/// D_TV^{p_ref}(u, u_ref) = TV(u) - TV(u_ref) - <p_ref, u - u_ref>.
double bregman_tv(const RealImage& u, const RealImage& u_ref, const RealImage& p_ref);
/// Vector-TV Bregman distance for labellings.
double bregman_tv_vec(const LabelRelaxation& v, const LabelRelaxation& v_ref,
                      const ClassField& q_ref);

/// Per-iteration view of the convergence quantities recorded by a solver.
struct SurrogateRecord {
  int k = 0;
  double energy = 0.0;
  double d_r1 = 0.0;
  double d_r2 = 0.0;
  double surrogate = 0.0;
  double step_norm = 0.0;
  double w_norm = 0.0;
  double ratio = 0.0;  // ||w|| / ||dz||, NaN when the step vanished
};

std::vector<SurrogateRecord> surrogate_history(const SolveReport& report);

struct DecreaseCheck {
  bool pass = true;
  double worst_margin = 0.0;  // max over k of F(z^{k+1},r^k) - F(z^k,r^{k-1})
  int worst_k = -1;
};

/// Verifies F(z^{k+1}, r^k) <= F(z^k, r^{k-1}) + slack along the recorded
/// history. A single-iterate history passes vacuously.
DecreaseCheck check_sufficient_decrease(const SolveReport& report, double slack = 1e-6);

/// Ratios ||w^{k+1}|| / ||z^{k+1} - z^k||; iterations with a vanishing step
/// are skipped.
std::vector<double> check_subgradient_bound(const SolveReport& report);

}  // namespace mrseg
