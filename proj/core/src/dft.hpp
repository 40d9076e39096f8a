#pragma once

#include <complex>
#include <vector>

#include "mrseg/types.hpp"

// Forward declarations so fftw3.h stays out of public-ish headers.
struct fftw_plan_s;

namespace mrseg::detail {

// Unitary 2-D DFT for one grid size, backed by FFTW. Plan creation and
// destruction are serialized globally (the FFTW planner is not reentrant);
// instances are cheap but not safe for concurrent use, so each solver owns
// its own.
class Dft {
 public:
  explicit Dft(Grid grid);
  ~Dft();
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  Grid grid() const { return grid_; }

  /// out = F in, scaled by 1/sqrt(n).
  void forward(const std::vector<Complex>& in, std::vector<Complex>& out);
  /// out = F^{-1} in, scaled by 1/sqrt(n) (inverse of forward).
  void inverse(const std::vector<Complex>& in, std::vector<Complex>& out);

 private:
  void run(fftw_plan_s* plan, const std::vector<Complex>& in, std::vector<Complex>& out);

  Grid grid_;
  fftw_plan_s* fwd_ = nullptr;
  fftw_plan_s* bwd_ = nullptr;
  std::vector<Complex> buf_in_, buf_out_;
};

}  // namespace mrseg::detail
