#pragma once

#include <vector>

#include "mrseg/operators.hpp"
#include "mrseg/types.hpp"

namespace mrseg::detail {

// ||grad|| <= sqrt(8) for forward differences; steps follow sigma = tau = 0.99/||grad||.
inline constexpr double kGradNormBound = 2.8284271247461903;
inline constexpr double kPdhgStep = 0.99 / kGradNormBound;

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
double norm2_diff(const std::vector<double>& a, const std::vector<double>& b);
bool all_finite(const std::vector<double>& a);

/// Conjugate gradient for (coef I + tau A*A) x = b, warm started at x.
/// Returns iterations used.
int cg_normal_solve(const ForwardOperator& A, double coef, double tau,
                    const std::vector<double>& b, std::vector<double>& x, double tol,
                    int max_iters);

struct USubproblem {
  const ForwardOperator& A;
  const std::vector<Complex>& f;
  const RealImage& astar_f;
  double alpha = 1.0;              // TV weight, carried as the dual-ball radius
  double delta = 0.0;              // coupling weight
  double eps_aug = 0.0;
  const RealImage* p = nullptr;       // Bregman subgradient of TV at the anchor
  const RealImage* vc = nullptr;      // sum_j v_j c_j, required when delta > 0
  const RealImage* anchor = nullptr;  // proximity center for eps_aug
  int iters = 300;
  double cg_tol = 1e-10;
  int cg_max = 50;
  double exit_tol = 0.0;           // relative-change gap surrogate; <= 0 disables
  std::vector<double>* avg_objective_trace = nullptr;  // Eq-(3)-style objective of the running mean
};

/// PDHG on the u subproblem; u and y are updated in place (warm start).
/// Returns the number of inner iterations performed.
int solve_u_subproblem(const USubproblem& prob, RealImage& u, DualField& y);

struct VSubproblem {
  const ClassField& lin;              // delta*g - beta*q
  double beta = 0.01;                 // vector-TV weight / dual-ball radius
  double eps_aug = 0.0;
  const LabelRelaxation* anchor = nullptr;
  int iters = 300;
  double exit_tol = 0.0;
  std::vector<double>* avg_objective_trace = nullptr;  // <lin, v_avg> + beta TV(v_avg)
};

/// PDHG on the v subproblem; v and w are updated in place.
int solve_v_subproblem(const VSubproblem& prob, LabelRelaxation& v, DualField& w);

}  // namespace mrseg::detail
