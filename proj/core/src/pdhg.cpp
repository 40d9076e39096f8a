#include "pdhg.hpp"

#include <cmath>

namespace mrseg::detail {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double norm2_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool all_finite(const std::vector<double>& a) {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

int cg_normal_solve(const ForwardOperator& A, double coef, double tau,
                    const std::vector<double>& b, std::vector<double>& x, double tol,
                    int max_iters) {
  const size_t n = b.size();
  RealImage tmp{A.grid(), x};
  RealImage Ax = A.normal(tmp);
  std::vector<double> r(n), p(n), ap(n);
  for (size_t i = 0; i < n; ++i) r[i] = b[i] - (coef * x[i] + tau * Ax.values[i]);
  p = r;
  double rs = dot(r, r);
  const double target = tol * std::max(norm2(b), 1e-300);
  int it = 0;
  for (; it < max_iters && std::sqrt(rs) > target; ++it) {
    tmp.values = p;
    RealImage Ap = A.normal(tmp);
    for (size_t i = 0; i < n; ++i) ap[i] = coef * p[i] + tau * Ap.values[i];
    const double denom = dot(p, ap);
    if (denom <= 0.0) break;
    const double step = rs / denom;
    for (size_t i = 0; i < n; ++i) {
      x[i] += step * p[i];
      r[i] -= step * ap[i];
    }
    const double rs_new = dot(r, r);
    const double ratio = rs_new / rs;
    rs = rs_new;
    for (size_t i = 0; i < n; ++i) p[i] = r[i] + ratio * p[i];
  }
  return it;
}

int solve_u_subproblem(const USubproblem& prob, RealImage& u, DualField& y) {
  const Grid grid = prob.A.grid();
  const size_t n = static_cast<size_t>(grid.n());
  const double tau = kPdhgStep, sigma = kPdhgStep;
  const double eps = (prob.eps_aug > 0.0 && prob.anchor) ? prob.eps_aug : 0.0;
  const double coef = 1.0 + tau * (2.0 * prob.delta + eps);

  // constant linear part of the proximal right-hand side
  std::vector<double> lin = prob.astar_f.values;
  if (prob.p) {
    for (size_t i = 0; i < n; ++i) lin[i] += prob.alpha * prob.p->values[i];
  }
  if (prob.delta > 0.0 && prob.vc) {
    for (size_t i = 0; i < n; ++i) lin[i] += 2.0 * prob.delta * prob.vc->values[i];
  }
  if (eps > 0.0) {
    for (size_t i = 0; i < n; ++i) lin[i] += eps * prob.anchor->values[i];
  }

  RealImage ubar = u;
  RealImage u_prev = u;
  DualField grad_buf = DualField::zeros(grid, 2);
  RealImage div_buf = RealImage::zeros(grid);
  std::vector<double> rhs(n), y_prev;
  std::vector<double> usum;
  if (prob.avg_objective_trace) usum.assign(n, 0.0);

  int it = 0;
  for (; it < prob.iters; ++it) {
    if (prob.exit_tol > 0.0) y_prev = y.values;

    kernels::gradient_into(ubar, grad_buf);
    for (size_t i = 0; i < y.values.size(); ++i) y.values[i] += sigma * grad_buf.values[i];
    kernels::project_dual_ball_inplace(y, prob.alpha);

    kernels::divergence_into(y, div_buf);
    for (size_t i = 0; i < n; ++i) rhs[i] = u.values[i] + tau * (div_buf.values[i] + lin[i]);

    u_prev.values = u.values;
    cg_normal_solve(prob.A, coef, tau, rhs, u.values, prob.cg_tol, prob.cg_max);

    for (size_t i = 0; i < n; ++i) ubar.values[i] = 2.0 * u.values[i] - u_prev.values[i];

    if (prob.avg_objective_trace) {
      for (size_t i = 0; i < n; ++i) usum[i] += u.values[i];
      RealImage uavg{grid, usum};
      const double inv = 1.0 / (it + 1);
      for (double& x : uavg.values) x *= inv;
      const std::vector<Complex> Au = prob.A.forward(uavg);
      double res = 0.0;
      for (size_t k = 0; k < Au.size(); ++k) res += std::norm(Au[k] - prob.f[k]);
      prob.avg_objective_trace->push_back(0.5 * res + prob.alpha * tv_scalar(uavg));
    }

    if (prob.exit_tol > 0.0) {
      const double du = norm2_diff(u.values, u_prev.values) / std::max(1.0, norm2(u.values));
      const double dy = norm2_diff(y.values, y_prev) / std::max(1.0, norm2(y.values));
      if (du + dy < prob.exit_tol) {
        ++it;
        break;
      }
    }
  }
  return it;
}

int solve_v_subproblem(const VSubproblem& prob, LabelRelaxation& v, DualField& w) {
  const Grid grid = v.grid;
  const int ell = v.num_classes;
  const size_t total = v.values.size();
  const double tau = kPdhgStep, sigma = kPdhgStep;
  const bool aug = prob.eps_aug > 0.0 && prob.anchor != nullptr;
  const double scale = aug ? 1.0 / (1.0 + tau * prob.eps_aug) : 1.0;

  LabelRelaxation vbar = v;
  LabelRelaxation v_prev = v;
  DualField grad_buf = DualField::zeros(grid, 2 * ell);
  ClassField div_buf = ClassField::zeros(grid, ell);
  ClassField prox_arg = ClassField::zeros(grid, ell);
  std::vector<double> w_prev;
  std::vector<double> vsum;
  if (prob.avg_objective_trace) vsum.assign(total, 0.0);

  int it = 0;
  for (; it < prob.iters; ++it) {
    if (prob.exit_tol > 0.0) w_prev = w.values;

    kernels::gradient_vec_into(vbar, grad_buf);
    for (size_t i = 0; i < w.values.size(); ++i) w.values[i] += sigma * grad_buf.values[i];
    kernels::project_dual_ball_inplace(w, prob.beta);

    kernels::divergence_vec_into(w, div_buf);
    if (aug) {
      for (size_t i = 0; i < total; ++i)
        prox_arg.values[i] = scale * (v.values[i] + tau * (div_buf.values[i] - prob.lin.values[i] +
                                                           prob.eps_aug * prob.anchor->values[i]));
    } else {
      for (size_t i = 0; i < total; ++i)
        prox_arg.values[i] = v.values[i] + tau * (div_buf.values[i] - prob.lin.values[i]);
    }

    v_prev.values = v.values;
    kernels::project_simplex_rows(prox_arg, v);

    for (size_t i = 0; i < total; ++i) vbar.values[i] = 2.0 * v.values[i] - v_prev.values[i];

    if (prob.avg_objective_trace) {
      for (size_t i = 0; i < total; ++i) vsum[i] += v.values[i];
      LabelRelaxation vavg = v;
      const double inv = 1.0 / (it + 1);
      double lin_term = 0.0;
      for (size_t i = 0; i < total; ++i) {
        vavg.values[i] = vsum[i] * inv;
        lin_term += prob.lin.values[i] * vavg.values[i];
      }
      prob.avg_objective_trace->push_back(lin_term + prob.beta * tv_vector(vavg));
    }

    if (prob.exit_tol > 0.0) {
      const double dv = norm2_diff(v.values, v_prev.values) / std::max(1.0, norm2(v.values));
      const double dw = norm2_diff(w.values, w_prev) / std::max(1.0, norm2(w.values));
      if (dv + dw < prob.exit_tol) {
        ++it;
        break;
      }
    }
  }
  return it;
}

}  // namespace mrseg::detail
