#pragma once

#include <utility>

#include "mrseg/types.hpp"

namespace mrseg {

/// Segmentation solver state exposed for diagnostics: relaxation v, TV
/// subgradient q, dual field w and the fidelity field g.
struct SegState {
  LabelRelaxation v;
  ClassField q;
  DualField w;
  ClassField g;
  int outer_iters = 0;
};

/// g_{ij} = (c_j - u_i)^2.
ClassField fidelity_field(const RealImage& u, const RegionMeans& c);

/// Convex-relaxed multi-class segmentation of a fixed image:
///   min_{v in simplex} delta <g, v> + beta (TV(v) - <q, v>)
/// by PDHG with pointwise linear terms and per-pixel simplex projection.
/// q = nullptr means q = 0 (the plain model); v0 overrides the uniform
/// initialization.
std::pair<LabelRelaxation, SolveReport> segment(const RealImage& u, const RegionMeans& c,
                                                double beta, double delta, const ClassField* q,
                                                const JointConfig& cfg,
                                                const LabelRelaxation* v0 = nullptr,
                                                SegState* state_out = nullptr,
                                                std::vector<double>* avg_objective_trace = nullptr);

/// Hard labels. For two classes, class 1 wins when v_1 >= mu (exact ties go
/// to class 0); for more classes, per-pixel argmax with ties to the lowest
/// index.
HardSegmentation threshold(const LabelRelaxation& v, double mu);

/// Bregman-iterated segmentation: repeats segment() with the subgradient
/// update q^{k+1} = q^k - (delta/beta) g, stopping on ||v^{k+1} - v^k|| <
/// tol_v or max_outer.
std::pair<LabelRelaxation, SolveReport> bregman_segment(const RealImage& u, const RegionMeans& c,
                                                        double beta, double delta,
                                                        const JointConfig& cfg,
                                                        SegState* state_out = nullptr);

}  // namespace mrseg
