#pragma once

#include <utility>

#include "mrseg/types.hpp"

namespace mrseg {

/// Full state of the alternating solver: z = (u, v) and the subgradients
/// r = (p, q), plus the inner-solver duals for warm starts.
struct JointState {
  RealImage u;
  RealImage p;
  DualField y;
  LabelRelaxation v;
  ClassField q;
  DualField w;
  RegionMeans means;
  int outer_iters = 0;
};

struct JointResult {
  RealImage u;
  LabelRelaxation v;
  SolveReport report;
};

/// Alternating Bregman scheme coupling reconstruction and segmentation:
/// per outer iteration one PDHG solve in u, the subgradient update for p,
/// one PDHG solve in v, and the update for q. Stops when
/// ||v^{k+1} - v^k||_2 < tol_v or at max_outer. With update_means enabled
/// the class means are re-estimated from (u, v) after each outer iteration.
/// v0 seeds the coupling before the first u step; by default it is produced
/// by the sequential pipeline (TV reconstruction plus plain segmentation at
/// the configured alpha and beta). Pass a uniform relaxation for a
/// data-independent start.
JointResult joint_solve(const KSpaceData& data, const RegionMeans& c, const JointConfig& cfg,
                        JointState* state_out = nullptr, bool update_means = false,
                        const LabelRelaxation* v0 = nullptr);

/// One-hot relaxation of the per-pixel nearest class argmin_j (c_j - u_i)^2
/// (ties to the lowest index).
LabelRelaxation nearest_class_relaxation(const RealImage& u, const RegionMeans& c);

/// Subgradient update from the optimality condition of the u step:
///   p^{k+1} = p^k - 1/alpha [ A*(A u^{k+1} - f)
///                             + 2 delta sum_j v^k_j (u^{k+1} - c_j)
///                             + eps (u^{k+1} - u^k) ].
RealImage subgradient_update_u(const RealImage& p_prev, const RealImage& u_next,
                               const RealImage& u_prev, const LabelRelaxation& v_prev,
                               const KSpaceData& data, const RegionMeans& c,
                               const JointConfig& cfg);

struct ConstrainedJointResult {
  RealImage u;
  LabelRelaxation v;
  SolveReport report;
};

/// Data-consistency-constrained variant: alternates the plain segmentation
/// of u with a u step that minimizes the coupling term subject to S F u = f,
/// enforced by overwriting the sampled Fourier coefficients (and their
/// conjugate mirrors, keeping the spectrum Hermitian) after each update.
/// With delta = 0 the reconstruction is the zero-filled solution.
ConstrainedJointResult constrained_joint_solve(const KSpaceData& data, const RegionMeans& c,
                                               double beta, double delta, const JointConfig& cfg);

/// c_j = sum_i v_ij u_i / sum_i v_ij. A class with (numerically) empty
/// support keeps its previous mean; empty_class reports whether that
/// happened.
RegionMeans update_region_means(const RealImage& u, const LabelRelaxation& v,
                                const RegionMeans& previous, bool* empty_class = nullptr);

}  // namespace mrseg
