#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mrseg/metrics.hpp"

using namespace mrseg;

TEST_SUITE_BEGIN("metrics");

namespace {

RealImage constant_image(Grid g, double value) {
  RealImage img = RealImage::zeros(g);
  std::fill(img.values.begin(), img.values.end(), value);
  return img;
}

}  // namespace

TEST_CASE("rre basics") {
  testutil::Rand rng(5);
  const Grid g{8, 8};
  const RealImage gt = testutil::random_image(g, rng, 0.5, 1.5);
  CHECK(rre(gt, gt) == 0.0);
  CHECK(rre(RealImage::zeros(g), gt) == doctest::Approx(1.0).epsilon(1e-14));
  RealImage scaled = gt;
  for (double& x : scaled.values) x *= 1.1;
  CHECK(rre(scaled, gt) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(rre(gt, RealImage::zeros(g)), std::invalid_argument);
}

TEST_CASE("psnr paper formula on the worked example") {
  // max(gt) = 1, N = 4096, ||diff|| = 4.096 -> 10 log10(1/0.001) = 30
  const Grid g{64, 64};
  RealImage gt = constant_image(g, 1.0);
  RealImage u = gt;
  const double per_pixel = 4.096 / 64.0;  // ||diff||_2 = 4.096
  for (double& x : u.values) x += per_pixel;
  CHECK(psnr(u, gt, PsnrVariant::paper) == doctest::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("identical images give infinite psnr") {
  const Grid g{4, 4};
  const RealImage gt = constant_image(g, 1.0);
  CHECK(std::isinf(psnr(gt, gt, PsnrVariant::paper)));
  CHECK(std::isinf(psnr(gt, gt, PsnrVariant::standard)));
}

TEST_CASE("doubling the error lowers the paper psnr by 10 log10 2") {
  testutil::Rand rng(7);
  const Grid g{8, 8};
  const RealImage gt = testutil::random_image(g, rng, 0.0, 1.0);
  RealImage u1 = gt, u2 = gt;
  for (size_t i = 0; i < gt.values.size(); ++i) {
    const double e = 0.01 * std::sin(static_cast<double>(i));
    u1.values[i] += e;
    u2.values[i] += 2.0 * e;
  }
  CHECK(psnr(u1, gt, PsnrVariant::paper) - psnr(u2, gt, PsnrVariant::paper) ==
        doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-10));
}

TEST_CASE("standard psnr and rre are monotonically linked") {
  testutil::Rand rng(11);
  const Grid g{8, 8};
  const RealImage gt = testutil::random_image(g, rng, 0.5, 1.0);
  RealImage a = gt, b = gt;
  for (size_t i = 0; i < gt.values.size(); ++i) {
    a.values[i] += 0.01 * rng.signed_unit();
    b.values[i] += 0.05 * rng.signed_unit();
  }
  CHECK(rre(a, gt) < rre(b, gt));
  CHECK(psnr(a, gt, PsnrVariant::standard) > psnr(b, gt, PsnrVariant::standard));
}

TEST_CASE("rse counts mismatches") {
  const Grid g{10, 10};
  HardSegmentation a{g, 2, std::vector<int>(100, 0)};
  HardSegmentation b = a;
  CHECK(rse(a, b) == 0.0);
  for (int& lab : b.labels) lab = 1;
  CHECK(rse(a, b) == 1.0);
  b = a;
  b.labels[3] = b.labels[40] = b.labels[77] = 1;
  CHECK(rse(a, b) == doctest::Approx(0.03).epsilon(1e-14));
}

TEST_CASE("rse is invariant under a relabeling applied to both arguments") {
  testutil::Rand rng(13);
  const Grid g{8, 8};
  HardSegmentation a{g, 3, {}}, b{g, 3, {}};
  for (int i = 0; i < g.n(); ++i) {
    a.labels.push_back(static_cast<int>(rng.integer(3)));
    b.labels.push_back(static_cast<int>(rng.integer(3)));
  }
  const double base = rse(a, b);
  const int perm[3] = {2, 0, 1};
  HardSegmentation ap = a, bp = b;
  for (int i = 0; i < g.n(); ++i) {
    ap.labels[static_cast<size_t>(i)] = perm[a.labels[static_cast<size_t>(i)]];
    bp.labels[static_cast<size_t>(i)] = perm[b.labels[static_cast<size_t>(i)]];
  }
  CHECK(rse(ap, bp) == base);
}

TEST_SUITE_END();
