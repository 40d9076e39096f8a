#include "mrseg/segment.hpp"

#include <cmath>

#include "mrseg/operators.hpp"
#include "pdhg.hpp"

namespace mrseg {

ClassField fidelity_field(const RealImage& u, const RegionMeans& c) {
  const int n = u.grid.n();
  const int ell = c.num_classes();
  ClassField g = ClassField::zeros(u.grid, ell);
  for (int j = 0; j < ell; ++j) {
    const double cj = c.values[static_cast<size_t>(j)];
    double* plane = g.values.data() + static_cast<size_t>(j) * n;
    for (int i = 0; i < n; ++i) {
      const double d = cj - u.values[static_cast<size_t>(i)];
      plane[i] = d * d;
    }
  }
  return g;
}

namespace {

double coupling_sum(const LabelRelaxation& v, const ClassField& g) {
  double s = 0.0;
  for (size_t i = 0; i < v.values.size(); ++i) s += v.values[i] * g.values[i];
  return s;
}

double bregman_vec(const LabelRelaxation& v, const LabelRelaxation& v_ref, const ClassField* q_ref) {
  double ip = 0.0;
  if (q_ref) {
    for (size_t i = 0; i < v.values.size(); ++i)
      ip += q_ref->values[i] * (v.values[i] - v_ref.values[i]);
  }
  return tv_vector(v) - tv_vector(v_ref) - ip;
}

}  // namespace

std::pair<LabelRelaxation, SolveReport> segment(const RealImage& u, const RegionMeans& c,
                                                double beta, double delta, const ClassField* q,
                                                const JointConfig& cfg, const LabelRelaxation* v0,
                                                SegState* state_out,
                                                std::vector<double>* avg_objective_trace) {
  if (!(beta > 0.0)) throw std::invalid_argument("segment: beta must be positive");
  if (!(u.grid.n() > 0)) throw std::invalid_argument("segment: empty grid");
  const int ell = c.num_classes();
  const int n = u.grid.n();

  ClassField g = fidelity_field(u, c);
  ClassField lin = ClassField::zeros(u.grid, ell);
  for (size_t i = 0; i < lin.values.size(); ++i) {
    lin.values[i] = delta * g.values[i];
    if (q) lin.values[i] -= beta * q->values[i];
  }

  LabelRelaxation v = v0 ? *v0 : LabelRelaxation::uniform(u.grid, ell);
  LabelRelaxation v_init = v;
  DualField w = DualField::zeros(u.grid, 2 * ell);

  detail::VSubproblem prob{lin};
  prob.beta = beta;
  prob.eps_aug = cfg.epsilon_aug;
  prob.anchor = &v_init;
  prob.iters = cfg.inner_iters;
  prob.exit_tol = cfg.cg_tol;
  prob.avg_objective_trace = avg_objective_trace;
  const int used = detail::solve_v_subproblem(prob, v, w);

  if (!detail::all_finite(v.values)) throw SolverError("segment: iterate diverged (NaN)");

  SolveReport report;
  IterationRecord rec;
  rec.k = 0;
  rec.coupling = coupling_sum(v, g);
  rec.tv_v = tv_vector(v);
  rec.energy = delta * rec.coupling;
  rec.bregman_v = bregman_vec(v, v_init, q);
  rec.surrogate = rec.energy + beta * rec.bregman_v;
  rec.dv_norm = detail::norm2_diff(v.values, v_init.values);
  report.iterations.push_back(rec);
  report.stop_reason = used < cfg.inner_iters ? StopReason::tolerance : StopReason::max_iters;

  if (state_out) {
    ClassField q_copy = q ? *q : ClassField::zeros(u.grid, ell);
    *state_out = SegState{v, std::move(q_copy), std::move(w), std::move(g), 1};
  }
  (void)n;
  return {std::move(v), std::move(report)};
}

HardSegmentation threshold(const LabelRelaxation& v, double mu) {
  if (v.num_classes == 2) {
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("threshold: mu must lie in (0,1)");
    const int n = v.grid.n();
    HardSegmentation seg{v.grid, 2, std::vector<int>(static_cast<size_t>(n), 0)};
    for (int i = 0; i < n; ++i) {
      const double v0 = v.at(i, 0), v1 = v.at(i, 1);
      seg.labels[static_cast<size_t>(i)] = (v1 != v0 && v1 >= mu) ? 1 : 0;
    }
    return seg;
  }
  return argmax_labels(v);
}

std::pair<LabelRelaxation, SolveReport> bregman_segment(const RealImage& u, const RegionMeans& c,
                                                        double beta, double delta,
                                                        const JointConfig& cfg,
                                                        SegState* state_out) {
  if (!(beta > 0.0)) throw std::invalid_argument("bregman_segment: beta must be positive");
  const int ell = c.num_classes();

  const ClassField g = fidelity_field(u, c);
  ClassField q = ClassField::zeros(u.grid, ell);
  ClassField lin = ClassField::zeros(u.grid, ell);
  LabelRelaxation v = LabelRelaxation::uniform(u.grid, ell);
  LabelRelaxation v_old = v;
  DualField w = DualField::zeros(u.grid, 2 * ell);

  SolveReport report;
  report.stop_reason = StopReason::max_iters;
  int outer = 0;

  for (int k = 0; k < cfg.max_outer; ++k) {
    v_old.values = v.values;
    for (size_t i = 0; i < lin.values.size(); ++i)
      lin.values[i] = delta * g.values[i] - beta * q.values[i];

    detail::VSubproblem prob{lin};
    prob.beta = beta;
    prob.eps_aug = cfg.epsilon_aug;
    prob.anchor = &v_old;
    prob.iters = cfg.inner_iters;
    prob.exit_tol = cfg.cg_tol;
    detail::solve_v_subproblem(prob, v, w);

    if (!detail::all_finite(v.values)) throw SolverError("bregman_segment: iterate diverged (NaN)");
    ++outer;

    const double breg = bregman_vec(v, v_old, &q);
    // q^{k+1} = q^k - (1/beta)(delta g + eps (v^{k+1} - v^k)); independent of v
    // up to the augmentation term.
    for (size_t i = 0; i < q.values.size(); ++i) {
      double grad = delta * g.values[i];
      if (cfg.epsilon_aug > 0.0) grad += cfg.epsilon_aug * (v.values[i] - v_old.values[i]);
      q.values[i] -= grad / beta;
    }

    IterationRecord rec;
    rec.k = k;
    rec.coupling = coupling_sum(v, g);
    rec.tv_v = tv_vector(v);
    rec.energy = delta * rec.coupling;
    rec.bregman_v = breg;
    rec.surrogate = rec.energy + beta * breg;
    rec.dv_norm = detail::norm2_diff(v.values, v_old.values);
    report.iterations.push_back(rec);

    if (rec.dv_norm < cfg.tol_v) {
      report.stop_reason = StopReason::tolerance;
      break;
    }
  }

  if (state_out) *state_out = SegState{v, q, w, g, outer};
  return {std::move(v), std::move(report)};
}

}  // namespace mrseg
