#include "mrseg/diagnostics.hpp"

#include <cmath>

#include "mrseg/operators.hpp"

namespace mrseg {

double energy_E(const ForwardOperator& A, const RealImage& u, const LabelRelaxation& v,
                const std::vector<Complex>& f, const RegionMeans& c, double delta) {
  const std::vector<Complex> Au = A.forward(u);
  double res = 0.0;
  for (size_t i = 0; i < Au.size(); ++i) res += std::norm(Au[i] - f[i]);
  const int n = u.grid.n();
  double coupling = 0.0;
  for (int j = 0; j < v.num_classes; ++j) {
    const double cj = c.values[static_cast<size_t>(j)];
    const double* plane = v.values.data() + static_cast<size_t>(j) * n;
    for (int i = 0; i < n; ++i) {
      const double d = cj - u.values[static_cast<size_t>(i)];
      coupling += plane[i] * d * d;
    }
  }
  return 0.5 * res + delta * coupling;
}

double energy_E(const RealImage& u, const LabelRelaxation& v, const KSpaceData& data,
                const RegionMeans& c, double delta) {
  ForwardOperator A(data.mask);
  return energy_E(A, u, v, data.samples, c, delta);
}

double bregman_tv(const RealImage& u, const RealImage& u_ref, const RealImage& p_ref) {
  double ip = 0.0;
  for (size_t i = 0; i < u.values.size(); ++i)
    ip += p_ref.values[i] * (u.values[i] - u_ref.values[i]);
  return tv_scalar(u) - tv_scalar(u_ref) - ip;
}

double bregman_tv_vec(const LabelRelaxation& v, const LabelRelaxation& v_ref,
                      const ClassField& q_ref) {
  double ip = 0.0;
  for (size_t i = 0; i < v.values.size(); ++i)
    ip += q_ref.values[i] * (v.values[i] - v_ref.values[i]);
  return tv_vector(v) - tv_vector(v_ref) - ip;
}

std::vector<SurrogateRecord> surrogate_history(const SolveReport& report) {
  std::vector<SurrogateRecord> out;
  out.reserve(report.iterations.size());
  for (const IterationRecord& r : report.iterations) {
    SurrogateRecord s;
    s.k = r.k;
    s.energy = r.energy;
    s.d_r1 = r.bregman_u;
    s.d_r2 = r.bregman_v;
    s.surrogate = r.surrogate;
    s.step_norm = std::sqrt(r.du_norm * r.du_norm + r.dv_norm * r.dv_norm);
    s.w_norm = r.w_norm;
    s.ratio = r.ratio;
    out.push_back(s);
  }
  return out;
}

DecreaseCheck check_sufficient_decrease(const SolveReport& report, double slack) {
  DecreaseCheck out;
  const auto& iters = report.iterations;
  for (size_t k = 1; k < iters.size(); ++k) {
    const double margin = iters[k].surrogate - iters[k - 1].surrogate;
    if (margin > out.worst_margin || out.worst_k < 0) {
      out.worst_margin = margin;
      out.worst_k = static_cast<int>(k);
    }
    if (margin > slack) out.pass = false;
  }
  return out;
}

std::vector<double> check_subgradient_bound(const SolveReport& report) {
  std::vector<double> ratios;
  for (const IterationRecord& r : report.iterations) {
    const double dz = std::sqrt(r.du_norm * r.du_norm + r.dv_norm * r.dv_norm);
    if (dz > 0.0 && std::isfinite(r.ratio)) ratios.push_back(r.ratio);
  }
  return ratios;
}

}  // namespace mrseg
