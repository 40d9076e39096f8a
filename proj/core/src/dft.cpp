#include "dft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace mrseg::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Dft::Dft(Grid grid)
    : grid_(grid),
      buf_in_(static_cast<size_t>(grid.n())),
      buf_out_(static_cast<size_t>(grid.n())) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_ESTIMATE keeps plans deterministic across runs.
  fwd_ = fftw_plan_dft_2d(grid_.n1, grid_.n2,
                          reinterpret_cast<fftw_complex*>(buf_in_.data()),
                          reinterpret_cast<fftw_complex*>(buf_out_.data()),
                          FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_2d(grid_.n1, grid_.n2,
                          reinterpret_cast<fftw_complex*>(buf_in_.data()),
                          reinterpret_cast<fftw_complex*>(buf_out_.data()),
                          FFTW_BACKWARD, FFTW_ESTIMATE);
}

Dft::~Dft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(fwd_);
  if (bwd_) fftw_destroy_plan(bwd_);
}

void Dft::run(fftw_plan_s* plan, const std::vector<Complex>& in, std::vector<Complex>& out) {
  buf_in_ = in;
  fftw_execute(plan);
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid_.n()));
  out.resize(buf_out_.size());
  for (size_t i = 0; i < buf_out_.size(); ++i) out[i] = buf_out_[i] * scale;
}

void Dft::forward(const std::vector<Complex>& in, std::vector<Complex>& out) { run(fwd_, in, out); }

void Dft::inverse(const std::vector<Complex>& in, std::vector<Complex>& out) { run(bwd_, in, out); }

}  // namespace mrseg::detail
