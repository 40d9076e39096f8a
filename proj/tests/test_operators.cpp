#include <doctest.h>

#include <complex>

#include "helpers.hpp"
#include "mrseg/operators.hpp"

using namespace mrseg;

TEST_SUITE_BEGIN("operators");

TEST_CASE("dft of a constant image is DC-only") {
  RealImage u = RealImage::zeros(Grid{4, 4});
  std::fill(u.values.begin(), u.values.end(), 1.0);
  const ComplexSpectrum spec = dft(u);
  CHECK(std::abs(spec.values[0]) == doctest::Approx(4.0).epsilon(1e-12));
  for (size_t i = 1; i < spec.values.size(); ++i) CHECK(std::abs(spec.values[i]) < 1e-12);
}

TEST_CASE("dft of zero is zero and idft inverts dft") {
  const Grid g{8, 8};
  RealImage zero = RealImage::zeros(g);
  for (const Complex& z : dft(zero).values) CHECK(std::abs(z) == 0.0);

  testutil::Rand rng(3);
  const RealImage u = testutil::random_image(g, rng);
  const ComplexSpectrum back = idft(dft(u));
  double unorm = testutil::norm2(u.values);
  double err = 0.0;
  for (size_t i = 0; i < u.values.size(); ++i) err += std::norm(back.values[i] - u.values[i]);
  CHECK(std::sqrt(err) <= 1e-12 * unorm);
}

TEST_CASE("dft matches the direct-sum oracle and Parseval holds") {
  testutil::Rand rng(17);
  const Grid g{8, 8};
  const RealImage u = testutil::random_image(g, rng);
  const ComplexSpectrum spec = dft(u);
  const auto oracle = testutil::naive_dft(u);
  for (size_t i = 0; i < oracle.size(); ++i)
    CHECK(std::abs(spec.values[i] - oracle[i]) < 1e-10);
  double spec_norm = 0.0;
  for (const Complex& z : spec.values) spec_norm += std::norm(z);
  CHECK(std::sqrt(spec_norm) ==
        doctest::Approx(testutil::norm2(u.values)).epsilon(1e-10));
}

TEST_CASE("forward of an impulse has flat magnitude") {
  const Grid g{8, 8};
  RealImage u = RealImage::zeros(g);
  u.values[0] = 1.0;
  ForwardOperator A(SamplingMask::full(g));
  const auto f = A.forward(u);
  REQUIRE(static_cast<int>(f.size()) == g.n());
  for (const Complex& z : f) CHECK(std::abs(z) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("forward returns m samples matching the masked oracle") {
  testutil::Rand rng(23);
  const Grid g{8, 8};
  const SamplingMask mask = testutil::random_mask(g, 0.25, rng);
  const RealImage u = testutil::random_image(g, rng);
  ForwardOperator A(mask);
  const auto f = A.forward(u);
  REQUIRE(static_cast<int>(f.size()) == mask.m);
  const auto oracle = testutil::naive_dft(u);
  const auto bins = mask.selected_bins();
  for (size_t k = 0; k < bins.size(); ++k)
    CHECK(std::abs(f[k] - oracle[static_cast<size_t>(bins[k])]) < 1e-10);
}

TEST_CASE("adjoint inverts forward under full sampling") {
  testutil::Rand rng(29);
  const Grid g{8, 8};
  ForwardOperator A(SamplingMask::full(g));
  const RealImage u = testutil::random_image(g, rng);
  const RealImage back = A.adjoint(A.forward(u));
  CHECK(testutil::norm2_diff(back.values, u.values) <= 1e-12 * testutil::norm2(u.values));

  const RealImage zero = A.adjoint(std::vector<Complex>(static_cast<size_t>(g.n())));
  CHECK(testutil::norm2(zero.values) == 0.0);
}

TEST_CASE("adjoint identity holds on random pairs across grids") {
  testutil::Rand rng(31);
  for (int side : {4, 8, 16}) {
    const Grid g{side, side};
    for (int t = 0; t < 100; ++t) {
      const SamplingMask mask = testutil::random_mask(g, 0.3, rng);
      ForwardOperator A(mask);
      const RealImage u = testutil::random_image(g, rng);
      const auto z = testutil::random_samples(mask.m, rng);
      const auto Au = A.forward(u);
      const RealImage Az = A.adjoint(z);
      double lhs = 0.0;
      for (size_t i = 0; i < Au.size(); ++i) lhs += (Au[i] * std::conj(z[i])).real();
      double rhs = 0.0;
      for (size_t i = 0; i < u.values.size(); ++i) rhs += u.values[i] * Az.values[i];
      double zn = 0.0;
      for (const Complex& x : z) zn += std::norm(x);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (testutil::norm2(u.values) * std::sqrt(zn)));
    }
  }
}

TEST_CASE("operator norm stays within the unitary bound") {
  testutil::Rand rng(37);
  for (int side : {8, 16}) {
    const SamplingMask mask = testutil::random_mask(Grid{side, side}, 0.4, rng);
    ForwardOperator A(mask);
    CHECK(operator_norm_estimate(A, 50) <= 1.0 + 1e-6);
  }
}

TEST_CASE("zero_fill reproduces the image under noiseless full sampling") {
  const Grid g{16, 16};
  testutil::Rand rng(41);
  const RealImage u = testutil::random_image(g, rng, 0.0, 1.0);
  ForwardOperator A(SamplingMask::full(g));
  const KSpaceData data{SamplingMask::full(g), A.forward(u), 0.0};
  const RealImage uz = zero_fill(data);
  CHECK(testutil::norm2_diff(uz.values, u.values) <= 1e-12 * testutil::norm2(u.values));
}

TEST_CASE("zero_fill of undersampled data shows aliasing") {
  const Grid g{32, 32};
  RealImage disk = RealImage::zeros(g);
  for (int r = 0; r < g.n1; ++r)
    for (int c = 0; c < g.n2; ++c)
      if ((r - 15.5) * (r - 15.5) + (c - 15.5) * (c - 15.5) <= 64.0) disk.at(r, c) = 1.0;
  testutil::Rand rng(43);
  const SamplingMask mask = testutil::random_mask(g, 0.15, rng);
  ForwardOperator A(mask);
  const KSpaceData data{mask, A.forward(disk), 0.0};
  const RealImage uz = zero_fill(data);
  CHECK(testutil::norm2_diff(uz.values, disk.values) > 0.1);
}

TEST_CASE("gradient of a constant image vanishes") {
  RealImage u = RealImage::zeros(Grid{5, 7});
  std::fill(u.values.begin(), u.values.end(), 2.5);
  const DualField y = gradient(u);
  CHECK(testutil::norm2(y.values) == 0.0);
}

TEST_CASE("gradient of a column ramp") {
  const Grid g{4, 4};
  RealImage u = RealImage::zeros(g);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) u.at(r, c) = c;
  const DualField y = gradient(u);
  for (int i = 0; i < g.n(); ++i) CHECK(y.at(i, 0) == 0.0);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) CHECK(y.values[static_cast<size_t>(g.n()) + r * 4 + c] ==
                                      (c == 3 ? 0.0 : 1.0));
}

TEST_CASE("gradient matches the finite-difference loop oracle") {
  testutil::Rand rng(47);
  const Grid g{6, 6};
  const RealImage u = testutil::random_image(g, rng);
  const DualField y = gradient(u);
  for (int r = 0; r < g.n1; ++r) {
    for (int c = 0; c < g.n2; ++c) {
      const int i = r * g.n2 + c;
      const double d1 = r + 1 < g.n1 ? u.at(r + 1, c) - u.at(r, c) : 0.0;
      const double d2 = c + 1 < g.n2 ? u.at(r, c + 1) - u.at(r, c) : 0.0;
      CHECK(y.at(i, 0) == d1);
      CHECK(y.at(i, 1) == d2);
    }
  }
}

TEST_CASE("divergence is the exact negative adjoint of gradient") {
  testutil::Rand rng(53);
  const Grid g{8, 8};
  for (int t = 0; t < 50; ++t) {
    const RealImage u = testutil::random_image(g, rng);
    DualField y = DualField::zeros(g, 2);
    for (double& x : y.values) x = rng.signed_unit();
    const DualField gu = gradient(u);
    const RealImage dy = divergence(y);
    double lhs = 0.0;
    for (size_t i = 0; i < gu.values.size(); ++i) lhs += gu.values[i] * y.values[i];
    double rhs = 0.0;
    for (size_t i = 0; i < u.values.size(); ++i) rhs += u.values[i] * dy.values[i];
    CHECK(std::abs(lhs + rhs) <=
          1e-10 * std::max(1.0, testutil::norm2(u.values) * testutil::norm2(y.values)));
  }
  // vector-field version
  LabelRelaxation v = LabelRelaxation::uniform(g, 3);
  testutil::Rand rng2(59);
  for (double& x : v.values) x = rng2.uniform();
  DualField w = DualField::zeros(g, 6);
  for (double& x : w.values) x = rng2.signed_unit();
  const DualField gv = gradient_vec(v);
  const ClassField dw = divergence_vec(w);
  double lhs = 0.0, rhs = 0.0;
  for (size_t i = 0; i < gv.values.size(); ++i) lhs += gv.values[i] * w.values[i];
  for (size_t i = 0; i < v.values.size(); ++i) rhs += v.values[i] * dw.values[i];
  CHECK(std::abs(lhs + rhs) <= 1e-10 * std::max(1.0, testutil::norm2(v.values)));
}

TEST_CASE("divergence of zero and of a ramp gradient") {
  const Grid g{6, 6};
  CHECK(testutil::norm2(divergence(DualField::zeros(g, 2)).values) == 0.0);

  RealImage ramp = RealImage::zeros(g);
  for (int r = 0; r < g.n1; ++r)
    for (int c = 0; c < g.n2; ++c) ramp.at(r, c) = c;
  const RealImage div = divergence(gradient(ramp));
  // interior of the ramp: constant first differences cancel
  for (int r = 1; r + 1 < g.n1; ++r)
    for (int c = 1; c + 2 < g.n2; ++c) CHECK(div.at(r, c) == 0.0);
  CHECK(div.at(2, 0) == 1.0);  // boundary correction
}

TEST_CASE("tv of constants and aligned relaxations is zero") {
  RealImage u = RealImage::zeros(Grid{5, 5});
  std::fill(u.values.begin(), u.values.end(), 3.0);
  CHECK(tv_scalar(u) == 0.0);
  LabelRelaxation v = LabelRelaxation::uniform(Grid{5, 5}, 3);
  for (int i = 0; i < 25; ++i) {
    v.at(i, 0) = 1.0;
    v.at(i, 1) = 0.0;
    v.at(i, 2) = 0.0;
  }
  CHECK(tv_vector(v) == 0.0);
}

TEST_CASE("tv matches the direct-summation oracle on a square indicator") {
  const Grid g{8, 8};
  RealImage u = RealImage::zeros(g);
  for (int r = 3; r < 6; ++r)
    for (int c = 3; c < 6; ++c) u.at(r, c) = 1.0;
  double oracle = 0.0;
  for (int r = 0; r < g.n1; ++r) {
    for (int c = 0; c < g.n2; ++c) {
      const double d1 = r + 1 < g.n1 ? u.at(r + 1, c) - u.at(r, c) : 0.0;
      const double d2 = c + 1 < g.n2 ? u.at(r, c + 1) - u.at(r, c) : 0.0;
      oracle += std::sqrt(d1 * d1 + d2 * d2);
    }
  }
  CHECK(tv_scalar(u) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("tv is invariant under constant shifts") {
  testutil::Rand rng(61);
  const Grid g{7, 9};
  RealImage u = testutil::random_image(g, rng);
  const double before = tv_scalar(u);
  for (double& x : u.values) x += 17.25;
  CHECK(tv_scalar(u) == before);
}

TEST_CASE("dual ball projection basics") {
  const Grid g{3, 3};
  CHECK(testutil::norm2(project_dual_ball(DualField::zeros(g, 2), 1.0).values) == 0.0);

  DualField y = DualField::zeros(g, 2);
  y.at(4, 0) = 3.0;
  y.at(4, 1) = 4.0;
  const DualField proj = project_dual_ball(y, 1.0);
  CHECK(proj.at(4, 0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(proj.at(4, 1) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("dual ball projection bounds norms and is a fixed point") {
  testutil::Rand rng(67);
  DualField y = DualField::zeros(Grid{8, 8}, 4);
  for (double& x : y.values) x = 5.0 * rng.signed_unit();
  const DualField p1 = project_dual_ball(y, 2.0);
  CHECK(validate(p1, 2.0).empty());
  const DualField p2 = project_dual_ball(p1, 2.0);
  CHECK(p2.values == p1.values);
}

TEST_CASE("simplex projection keeps feasible points and snaps vertices") {
  const std::vector<double> feasible{0.4, 0.3, 0.3};
  CHECK(project_simplex(feasible) == feasible);
  const std::vector<double> vertex = project_simplex(std::vector<double>{2.0, 0.0});
  CHECK(vertex[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(vertex[1] == 0.0);
}

TEST_CASE("simplex projection matches the active-set enumeration oracle") {
  testutil::Rand rng(71);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> y(5);
    for (double& x : y) x = rng.uniform(-2.0, 2.0);
    const auto got = project_simplex(y);
    const auto want = testutil::simplex_projection_oracle(y);
    REQUIRE(want.size() == got.size());
    for (size_t j = 0; j < got.size(); ++j) CHECK(got[j] == doctest::Approx(want[j]).epsilon(1e-9));
  }
}

TEST_CASE("simplex projection is idempotent and 1-Lipschitz") {
  testutil::Rand rng(73);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> a(4), b(4);
    for (int j = 0; j < 4; ++j) {
      a[static_cast<size_t>(j)] = rng.uniform(-3.0, 3.0);
      b[static_cast<size_t>(j)] = rng.uniform(-3.0, 3.0);
    }
    const auto pa = project_simplex(a);
    const auto pb = project_simplex(b);
    const auto paa = project_simplex(pa);
    for (size_t j = 0; j < pa.size(); ++j) CHECK(paa[j] == doctest::Approx(pa[j]).epsilon(1e-12));
    CHECK(testutil::norm2_diff(pa, pb) <= testutil::norm2_diff(a, b) + 1e-12);
  }
}

TEST_SUITE_END();
