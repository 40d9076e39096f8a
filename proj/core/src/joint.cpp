#include "mrseg/joint.hpp"

#include <cmath>
#include <limits>

#include "dft.hpp"
#include "mrseg/operators.hpp"
#include "mrseg/recon.hpp"
#include "mrseg/segment.hpp"
#include "pdhg.hpp"

namespace mrseg {

namespace {

// vc_i = sum_j v_ij c_j
RealImage weighted_means(const LabelRelaxation& v, const RegionMeans& c) {
  const int n = v.grid.n();
  RealImage vc = RealImage::zeros(v.grid);
  for (int j = 0; j < v.num_classes; ++j) {
    const double cj = c.values[static_cast<size_t>(j)];
    const double* plane = v.values.data() + static_cast<size_t>(j) * n;
    for (int i = 0; i < n; ++i) vc.values[static_cast<size_t>(i)] += plane[i] * cj;
  }
  return vc;
}

double coupling_sum(const LabelRelaxation& v, const ClassField& g) {
  double s = 0.0;
  for (size_t i = 0; i < v.values.size(); ++i) s += v.values[i] * g.values[i];
  return s;
}

}  // namespace

LabelRelaxation nearest_class_relaxation(const RealImage& u, const RegionMeans& c) {
  const int n = u.grid.n();
  const int ell = c.num_classes();
  LabelRelaxation v{u.grid, ell, std::vector<double>(static_cast<size_t>(n) * ell, 0.0), 1e-8};
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_d = std::abs(u.values[static_cast<size_t>(i)] - c.values[0]);
    for (int j = 1; j < ell; ++j) {
      const double d = std::abs(u.values[static_cast<size_t>(i)] - c.values[static_cast<size_t>(j)]);
      if (d < best_d) {
        best = j;
        best_d = d;
      }
    }
    v.at(i, best) = 1.0;
  }
  return v;
}

JointResult joint_solve(const KSpaceData& data, const RegionMeans& c0, const JointConfig& cfg,
                        JointState* state_out, bool update_means, const LabelRelaxation* v0) {
  if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0) || !(cfg.delta >= 0.0) || !(cfg.tol_v > 0.0))
    throw std::invalid_argument("joint_solve: invalid configuration");
  ForwardOperator A(data.mask);
  const RealImage astar_f = A.adjoint(data.samples);
  const Grid grid = A.grid();
  const size_t n = static_cast<size_t>(grid.n());
  const int ell = c0.num_classes();
  RegionMeans c = c0;

  RealImage u = RealImage::zeros(grid);
  RealImage p = RealImage::zeros(grid);
  DualField y = DualField::zeros(grid, 2);
  LabelRelaxation v;
  if (v0) {
    v = *v0;
  } else {
    // seed the coupling with the sequential pipeline at the same parameters;
    // the u iterate itself still starts from zero with p0 = 0
    auto [u_seq, seq_report] = tv_reconstruct(data, cfg.alpha, cfg);
    v = segment(u_seq, c, cfg.beta, 1.0, nullptr, cfg).first;
  }
  ClassField q = ClassField::zeros(grid, ell);
  DualField w = DualField::zeros(grid, 2 * ell);
  RealImage u_old = u;
  LabelRelaxation v_old = v;

  SolveReport report;
  report.stop_reason = StopReason::max_iters;
  int outer = 0;

  for (int k = 0; k < cfg.max_outer; ++k) {
    u_old.values = u.values;
    v_old.values = v.values;

    // --- u step: PDHG on the coupled reconstruction subproblem
    RealImage vc;
    detail::USubproblem uprob{A, data.samples, astar_f};
    uprob.alpha = cfg.alpha;
    uprob.delta = cfg.delta;
    uprob.eps_aug = cfg.epsilon_aug;
    uprob.p = &p;
    uprob.anchor = &u_old;
    uprob.iters = cfg.inner_iters;
    uprob.cg_tol = cfg.cg_tol;
    uprob.cg_max = cfg.cg_max;
    uprob.exit_tol = cfg.cg_tol;
    if (cfg.delta > 0.0) {
      vc = weighted_means(v_old, c);
      uprob.vc = &vc;
    }
    detail::solve_u_subproblem(uprob, u, y);
    if (!detail::all_finite(u.values)) throw SolverError("joint_solve: u diverged (NaN)");
    ++outer;

    const std::vector<Complex> Au = A.forward(u);
    std::vector<Complex> res_vec(Au.size());
    double res = 0.0;
    for (size_t i = 0; i < Au.size(); ++i) {
      res_vec[i] = Au[i] - data.samples[i];
      res += std::norm(res_vec[i]);
    }
    res = std::sqrt(res);
    const RealImage grad_data = A.adjoint(res_vec);

    // --- p update from the optimality condition of the u step
    RealImage p_new = p;
    for (size_t i = 0; i < n; ++i) {
      double grad = grad_data.values[i];
      if (cfg.delta > 0.0) grad += 2.0 * cfg.delta * (u.values[i] - vc.values[i]);
      if (cfg.epsilon_aug > 0.0) grad += cfg.epsilon_aug * (u.values[i] - u_old.values[i]);
      p_new.values[i] -= grad / cfg.alpha;
    }

    // --- v step: PDHG on the segmentation subproblem
    const ClassField g = fidelity_field(u, c);
    ClassField lin = ClassField::zeros(grid, ell);
    for (size_t i = 0; i < lin.values.size(); ++i)
      lin.values[i] = cfg.delta * g.values[i] - cfg.beta * q.values[i];

    detail::VSubproblem vprob{lin};
    vprob.beta = cfg.beta;
    vprob.eps_aug = cfg.epsilon_aug;
    vprob.anchor = &v_old;
    vprob.iters = cfg.inner_iters;
    vprob.exit_tol = cfg.cg_tol;
    detail::solve_v_subproblem(vprob, v, w);
    if (!detail::all_finite(v.values)) throw SolverError("joint_solve: v diverged (NaN)");

    // --- q update; independent of v^{k+1} apart from the augmentation term
    ClassField q_new = q;
    for (size_t i = 0; i < q.values.size(); ++i) {
      double grad = cfg.delta * g.values[i];
      if (cfg.epsilon_aug > 0.0) grad += cfg.epsilon_aug * (v.values[i] - v_old.values[i]);
      q_new.values[i] -= grad / cfg.beta;
    }

    // --- diagnostics
    IterationRecord rec;
    rec.k = k;
    rec.data_residual = res;
    rec.coupling = coupling_sum(v, g);
    rec.tv_u = tv_scalar(u);
    rec.tv_v = tv_vector(v);
    rec.energy = 0.5 * res * res + cfg.delta * rec.coupling;

    double ip_u = 0.0;
    for (size_t i = 0; i < n; ++i) ip_u += p.values[i] * (u.values[i] - u_old.values[i]);
    rec.bregman_u = rec.tv_u - tv_scalar(u_old) - ip_u;
    double ip_v = 0.0;
    for (size_t i = 0; i < v.values.size(); ++i)
      ip_v += q.values[i] * (v.values[i] - v_old.values[i]);
    rec.bregman_v = rec.tv_v - tv_vector(v_old) - ip_v;
    rec.surrogate = rec.energy + cfg.alpha * rec.bregman_u + cfg.beta * rec.bregman_v;

    rec.du_norm = detail::norm2_diff(u.values, u_old.values);
    rec.dv_norm = detail::norm2_diff(v.values, v_old.values);

    // surrogate subgradient w^{k+1}; its u block evaluates grad_u E at v^{k+1}
    const RealImage vc_new = weighted_means(v, c);
    double wsq = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double wu = grad_data.values[i] + 2.0 * cfg.delta * (u.values[i] - vc_new.values[i]) +
                        cfg.alpha * (p_new.values[i] - p.values[i]);
      wsq += wu * wu;
      const double w3 = u_old.values[i] - u.values[i];
      wsq += w3 * w3;
    }
    for (size_t i = 0; i < v.values.size(); ++i) {
      const double wv = cfg.delta * g.values[i] + cfg.beta * (q_new.values[i] - q.values[i]);
      wsq += wv * wv;
      const double w4 = v_old.values[i] - v.values[i];
      wsq += w4 * w4;
    }
    rec.w_norm = std::sqrt(wsq);
    const double dz = std::sqrt(rec.du_norm * rec.du_norm + rec.dv_norm * rec.dv_norm);
    rec.ratio = dz > 0.0 ? rec.w_norm / dz : std::numeric_limits<double>::quiet_NaN();

    if (!report.iterations.empty() &&
        rec.surrogate > report.iterations.back().surrogate + 1e-6)
      report.surrogate_nonmonotone = true;
    report.iterations.push_back(rec);

    p = std::move(p_new);
    q = std::move(q_new);

    if (update_means) {
      bool empty = false;
      c = update_region_means(u, v, c, &empty);
      report.empty_class = report.empty_class || empty;
    }

    // an exactly zero step means the v block is inactive (delta = 0) or has
    // reached a fixed point; the tolerance rule applies to moving iterates
    if (rec.dv_norm > 0.0 && rec.dv_norm < cfg.tol_v) {
      report.stop_reason = StopReason::tolerance;
      break;
    }
  }

  if (state_out) *state_out = JointState{u, p, y, v, q, w, c, outer};
  return JointResult{std::move(u), std::move(v), std::move(report)};
}

RealImage subgradient_update_u(const RealImage& p_prev, const RealImage& u_next,
                               const RealImage& u_prev, const LabelRelaxation& v_prev,
                               const KSpaceData& data, const RegionMeans& c,
                               const JointConfig& cfg) {
  ForwardOperator A(data.mask);
  const std::vector<Complex> Au = A.forward(u_next);
  std::vector<Complex> res_vec(Au.size());
  for (size_t i = 0; i < Au.size(); ++i) res_vec[i] = Au[i] - data.samples[i];
  const RealImage grad_data = A.adjoint(res_vec);
  const RealImage vc = weighted_means(v_prev, c);

  RealImage p_new = p_prev;
  for (size_t i = 0; i < p_new.values.size(); ++i) {
    double grad = grad_data.values[i];
    if (cfg.delta > 0.0) grad += 2.0 * cfg.delta * (u_next.values[i] - vc.values[i]);
    if (cfg.epsilon_aug > 0.0) grad += cfg.epsilon_aug * (u_next.values[i] - u_prev.values[i]);
    p_new.values[i] -= grad / cfg.alpha;
  }
  return p_new;
}

namespace {

int mirror_bin(int bin, Grid g) {
  const int r = bin / g.n2, c = bin % g.n2;
  return ((g.n1 - r) % g.n1) * g.n2 + (g.n2 - c) % g.n2;
}

}  // namespace

ConstrainedJointResult constrained_joint_solve(const KSpaceData& data, const RegionMeans& c,
                                               double beta, double delta, const JointConfig& cfg) {
  if (!(beta > 0.0) || !(delta >= 0.0))
    throw std::invalid_argument("constrained_joint_solve: invalid weights");
  const Grid grid = data.mask.grid;
  const int ell = c.num_classes();
  const std::vector<int> bins = data.mask.selected_bins();
  detail::Dft dft(grid);

  std::vector<Complex> buf_in(static_cast<size_t>(grid.n()));
  std::vector<Complex> buf_out(static_cast<size_t>(grid.n()));

  // Projection of a target image onto {u real : S F u = f}: overwrite the
  // sampled coefficients with f and keep the spectrum Hermitian by writing
  // conjugates into unsampled mirror bins.
  auto project_consistent = [&](const RealImage& target) {
    for (size_t i = 0; i < buf_in.size(); ++i) buf_in[i] = Complex(target.values[i], 0.0);
    dft.forward(buf_in, buf_out);
    for (size_t k = 0; k < bins.size(); ++k) {
      const int b = bins[k];
      const int mb = mirror_bin(b, grid);
      buf_out[static_cast<size_t>(b)] = data.samples[k];
      if (!data.mask.selected[static_cast<size_t>(mb)])
        buf_out[static_cast<size_t>(mb)] = std::conj(data.samples[k]);
    }
    dft.inverse(buf_out, buf_in);
    RealImage out = RealImage::zeros(grid);
    for (size_t i = 0; i < buf_in.size(); ++i) out.values[i] = buf_in[i].real();
    return out;
  };

  RealImage u = project_consistent(RealImage::zeros(grid));
  LabelRelaxation v = LabelRelaxation::uniform(grid, ell);
  LabelRelaxation v_old = v;
  DualField w = DualField::zeros(grid, 2 * ell);

  SolveReport report;
  report.stop_reason = StopReason::max_iters;

  for (int k = 0; k < cfg.max_outer; ++k) {
    v_old.values = v.values;

    const ClassField g = fidelity_field(u, c);
    ClassField lin = ClassField::zeros(grid, ell);
    for (size_t i = 0; i < lin.values.size(); ++i) lin.values[i] = delta * g.values[i];

    detail::VSubproblem vprob{lin};
    vprob.beta = beta;
    vprob.eps_aug = cfg.epsilon_aug;
    vprob.anchor = &v_old;
    vprob.iters = cfg.inner_iters;
    vprob.exit_tol = cfg.cg_tol;
    detail::solve_v_subproblem(vprob, v, w);
    if (!detail::all_finite(v.values))
      throw SolverError("constrained_joint_solve: v diverged (NaN)");

    if (delta > 0.0) {
      u = project_consistent(weighted_means(v, c));
      if (!detail::all_finite(u.values))
        throw SolverError("constrained_joint_solve: u diverged (NaN)");
    }

    IterationRecord rec;
    rec.k = k;
    rec.coupling = coupling_sum(v, g);
    rec.tv_v = tv_vector(v);
    rec.energy = delta * rec.coupling;
    rec.dv_norm = detail::norm2_diff(v.values, v_old.values);
    report.iterations.push_back(rec);

    if (rec.dv_norm < cfg.tol_v) {
      report.stop_reason = StopReason::tolerance;
      break;
    }
  }

  return ConstrainedJointResult{std::move(u), std::move(v), std::move(report)};
}

RegionMeans update_region_means(const RealImage& u, const LabelRelaxation& v,
                                const RegionMeans& previous, bool* empty_class) {
  const int n = u.grid.n();
  const int ell = v.num_classes;
  if (previous.num_classes() != ell)
    throw std::invalid_argument("update_region_means: class count mismatch");
  RegionMeans c = previous;
  bool any_empty = false;
  for (int j = 0; j < ell; ++j) {
    const double* plane = v.values.data() + static_cast<size_t>(j) * n;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      num += plane[i] * u.values[static_cast<size_t>(i)];
      den += plane[i];
    }
    if (den > 1e-12) {
      c.values[static_cast<size_t>(j)] = num / den;
    } else {
      any_empty = true;  // keep the previous mean
    }
  }
  if (empty_class) *empty_class = any_empty;
  return c;
}

}  // namespace mrseg
