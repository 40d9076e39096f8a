#include "mrseg/recon.hpp"

#include <cmath>

#include "mrseg/operators.hpp"
#include "pdhg.hpp"

namespace mrseg {

namespace {

double residual_norm(const std::vector<Complex>& Au, const std::vector<Complex>& f) {
  double s = 0.0;
  for (size_t i = 0; i < Au.size(); ++i) s += std::norm(Au[i] - f[i]);
  return std::sqrt(s);
}

}  // namespace

std::pair<RealImage, SolveReport> tv_reconstruct(const KSpaceData& data, double alpha,
                                                 const JointConfig& cfg, ReconState* state_out,
                                                 std::vector<double>* avg_objective_trace) {
  if (!(alpha > 0.0)) throw std::invalid_argument("tv_reconstruct: alpha must be positive");
  ForwardOperator A(data.mask);
  const RealImage astar_f = A.adjoint(data.samples);
  const Grid grid = A.grid();

  RealImage u = RealImage::zeros(grid);
  DualField y = DualField::zeros(grid, 2);
  const RealImage anchor = RealImage::zeros(grid);

  detail::USubproblem prob{A, data.samples, astar_f};
  prob.alpha = alpha;
  prob.delta = 0.0;
  prob.eps_aug = cfg.epsilon_aug;
  prob.anchor = &anchor;
  prob.iters = cfg.inner_iters;
  prob.cg_tol = cfg.cg_tol;
  prob.cg_max = cfg.cg_max;
  prob.exit_tol = cfg.cg_tol;
  prob.avg_objective_trace = avg_objective_trace;
  const int used = detail::solve_u_subproblem(prob, u, y);

  if (!detail::all_finite(u.values)) throw SolverError("tv_reconstruct: iterate diverged (NaN)");

  const std::vector<Complex> Au = A.forward(u);
  const double res = residual_norm(Au, data.samples);
  const double tv = tv_scalar(u);

  SolveReport report;
  IterationRecord rec;
  rec.k = 0;
  rec.data_residual = res;
  rec.tv_u = tv;
  rec.energy = 0.5 * res * res;
  rec.bregman_u = tv;  // D_TV^0(u, 0) = TV(u)
  rec.surrogate = rec.energy + alpha * tv;
  rec.du_norm = detail::norm2(u.values);
  report.iterations.push_back(rec);
  report.stop_reason = used < cfg.inner_iters ? StopReason::tolerance : StopReason::max_iters;

  if (state_out) *state_out = ReconState{u, RealImage::zeros(grid), y, 1};
  return {std::move(u), std::move(report)};
}

std::pair<RealImage, SolveReport> bregman_tv_reconstruct(const KSpaceData& data, double alpha,
                                                         const JointConfig& cfg,
                                                         ReconState* state_out) {
  if (!(alpha > 0.0)) throw std::invalid_argument("bregman_tv_reconstruct: alpha must be positive");
  ForwardOperator A(data.mask);
  const RealImage astar_f = A.adjoint(data.samples);
  const Grid grid = A.grid();
  const size_t n = static_cast<size_t>(grid.n());
  const double threshold = data.noise_sigma * std::sqrt(static_cast<double>(data.mask.m));

  RealImage u = RealImage::zeros(grid);
  RealImage p = RealImage::zeros(grid);
  DualField y = DualField::zeros(grid, 2);
  RealImage u_old = u;

  SolveReport report;
  report.stop_reason = StopReason::max_iters;
  int outer = 0;

  for (int k = 0; k < cfg.max_outer; ++k) {
    u_old.values = u.values;

    detail::USubproblem prob{A, data.samples, astar_f};
    prob.alpha = alpha;
    prob.delta = 0.0;
    prob.eps_aug = cfg.epsilon_aug;
    prob.p = &p;
    prob.anchor = &u_old;
    prob.iters = cfg.inner_iters;
    prob.cg_tol = cfg.cg_tol;
    prob.cg_max = cfg.cg_max;
    prob.exit_tol = cfg.cg_tol;
    detail::solve_u_subproblem(prob, u, y);

    if (!detail::all_finite(u.values))
      throw SolverError("bregman_tv_reconstruct: iterate diverged (NaN)");
    ++outer;

    const std::vector<Complex> Au = A.forward(u);
    const double res = residual_norm(Au, data.samples);

    // p^{k+1} = p^k - (1/alpha)(A*(Au - f) + eps (u^{k+1} - u^k))
    std::vector<Complex> res_vec(Au.size());
    for (size_t i = 0; i < Au.size(); ++i) res_vec[i] = Au[i] - data.samples[i];
    const RealImage grad_data = A.adjoint(res_vec);

    const double tv = tv_scalar(u);
    const double tv_old = tv_scalar(u_old);
    double inner_prod = 0.0;
    for (size_t i = 0; i < n; ++i) inner_prod += p.values[i] * (u.values[i] - u_old.values[i]);
    const double bregman = tv - tv_old - inner_prod;

    for (size_t i = 0; i < n; ++i) {
      double g = grad_data.values[i];
      if (cfg.epsilon_aug > 0.0) g += cfg.epsilon_aug * (u.values[i] - u_old.values[i]);
      p.values[i] -= g / alpha;
    }

    IterationRecord rec;
    rec.k = k;
    rec.data_residual = res;
    rec.tv_u = tv;
    rec.energy = 0.5 * res * res;
    rec.bregman_u = bregman;
    rec.surrogate = rec.energy + alpha * bregman;
    rec.du_norm = detail::norm2_diff(u.values, u_old.values);
    report.iterations.push_back(rec);

    if (res <= threshold) {
      report.stop_reason = StopReason::discrepancy;
      break;
    }
  }

  if (state_out) *state_out = ReconState{u, p, y, outer};
  return {std::move(u), std::move(report)};
}

}  // namespace mrseg
