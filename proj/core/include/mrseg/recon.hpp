#pragma once

#include <utility>
#include <vector>

#include "mrseg/types.hpp"

namespace mrseg {

/// Reconstruction solver state: iterate u, TV subgradient p and the PDHG
/// dual variable y, exposed for diagnostics and warm starts.
struct ReconState {
  RealImage u;
  RealImage p;
  DualField y;
  int outer_iters = 0;
};

/// TV-regularized variational reconstruction
///   min_u 1/2 ||A u - f||^2 + alpha TV(u)
/// solved by PDHG with the data-term prox inverted by CG. The optional
/// trace records the objective of the running iterate average, one entry
/// per inner iteration.
std::pair<RealImage, SolveReport> tv_reconstruct(const KSpaceData& data, double alpha,
                                                 const JointConfig& cfg,
                                                 ReconState* state_out = nullptr,
                                                 std::vector<double>* avg_objective_trace = nullptr);

/// Iterative TV regularization via Bregman distances with subgradient
/// updates, stopped by the discrepancy principle ||f - A u||_2 <= sigma
/// sqrt(m) (first iterate that satisfies it) or max_outer.
std::pair<RealImage, SolveReport> bregman_tv_reconstruct(const KSpaceData& data, double alpha,
                                                         const JointConfig& cfg,
                                                         ReconState* state_out = nullptr);

}  // namespace mrseg
