#include <doctest.h>

#include "helpers.hpp"
#include "mrseg/types.hpp"

using namespace mrseg;

TEST_SUITE_BEGIN("types");

TEST_CASE("simplex-feasible relaxation validates clean") {
  LabelRelaxation v = LabelRelaxation::uniform(Grid{4, 4}, 3);
  CHECK(validate(v).empty());
}

TEST_CASE("row-sum violation is reported") {
  LabelRelaxation v = LabelRelaxation::uniform(Grid{4, 4}, 2);
  v.at(5, 0) = 1.0;
  v.at(5, 1) = 0.5;  // row sums to 1.5
  const auto violations = validate(v);
  REQUIRE(violations.size() == 1);
  CHECK(violations.front().find("row sum") != std::string::npos);
}

TEST_CASE("negative entries beyond the slack are reported") {
  LabelRelaxation v = LabelRelaxation::uniform(Grid{4, 4}, 2);
  v.at(3, 0) = -1e-6;
  v.at(3, 1) = 1.0 + 1e-6;
  const auto violations = validate(v);
  REQUIRE(violations.size() == 1);
  CHECK(violations.front().find("negative") != std::string::npos);
}

TEST_CASE("empty sampling mask is a violation") {
  SamplingMask mask{Grid{4, 4}, std::vector<uint8_t>(16, 0), 0};
  const auto violations = validate(mask);
  REQUIRE(!violations.empty());
  CHECK(violations.front().find("empty") != std::string::npos);
}

TEST_CASE("grid needs two pixels per side") {
  CHECK(!validate(Grid{1, 4}).empty());
  CHECK(!validate(Grid{4, 1}).empty());
  CHECK(validate(Grid{2, 2}).empty());
}

TEST_CASE("region means must be pairwise distinct") {
  CHECK(validate(RegionMeans{{0.0, 1.0}}).empty());
  CHECK(!validate(RegionMeans{{0.5, 0.5}}).empty());
  CHECK(!validate(RegionMeans{{1.0}}).empty());
}

TEST_CASE("config sign constraints") {
  JointConfig cfg;
  CHECK(validate(cfg).empty());
  cfg.alpha = 0.0;
  CHECK(!validate(cfg).empty());
  cfg = JointConfig{};
  cfg.mu = 1.0;
  CHECK(!validate(cfg).empty());
  cfg = JointConfig{};
  cfg.delta = -0.1;
  CHECK(!validate(cfg).empty());
}

TEST_CASE("dual field radius validation") {
  DualField y = DualField::zeros(Grid{2, 2}, 2);
  y.at(0, 0) = 3.0;
  y.at(0, 1) = 4.0;
  CHECK(validate(y, 5.0).empty());
  CHECK(!validate(y, 4.0).empty());
}

TEST_CASE("argmax labels are invariant under positive per-pixel rescaling") {
  testutil::Rand rng(11);
  const Grid g{6, 5};
  LabelRelaxation v{g, 3, std::vector<double>(static_cast<size_t>(g.n()) * 3), 1e-8};
  for (double& x : v.values) x = rng.uniform();
  const HardSegmentation base = argmax_labels(v);
  LabelRelaxation scaled = v;
  for (int i = 0; i < g.n(); ++i) {
    const double s = 0.1 + 5.0 * rng.uniform();
    for (int j = 0; j < 3; ++j) scaled.at(i, j) = v.at(i, j) * s;
  }
  CHECK(argmax_labels(scaled).labels == base.labels);
}

TEST_CASE("default config applies the relative step rule for tol_v") {
  const JointConfig cfg = default_joint_config(Grid{64, 64}, 2);
  CHECK(cfg.tol_v == doctest::Approx(1e-3 * std::sqrt(64.0 * 64.0 * 2.0)));
  CHECK(validate(cfg).empty());
}

TEST_CASE("solve report length bound") {
  SolveReport report;
  report.iterations.resize(5);
  CHECK(validate(report, 5).empty());
  CHECK(!validate(report, 4).empty());
}

TEST_SUITE_END();
