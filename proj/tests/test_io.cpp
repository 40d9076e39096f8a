#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "mrseg/experiment.hpp"
#include "mrseg/io.hpp"

using namespace mrseg;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("io");

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mrseg_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("image round trip is bit exact through the sidecar") {
  TempDir tmp;
  testutil::Rand rng(3);
  const Grid g{9, 7};
  const RealImage img = testutil::random_image(g, rng, -2.5, 3.5);
  write_image(tmp.path / "img.pgm", img);
  const RealImage back = read_image(tmp.path / "img.pgm");
  CHECK(back.grid == g);
  CHECK(back.values == img.values);
}

TEST_CASE("constant image writes a degenerate scale and reads back exactly") {
  TempDir tmp;
  RealImage img = RealImage::zeros(Grid{4, 4});
  std::fill(img.values.begin(), img.values.end(), 0.75);
  const ImageScale scale = write_image(tmp.path / "c.pgm", img);
  CHECK(scale.min == scale.max);
  const RealImage back = read_image(tmp.path / "c.pgm");
  for (double x : back.values) CHECK(x == 0.75);
}

TEST_CASE("pgm fallback inverts the recorded scale when the sidecar is gone") {
  TempDir tmp;
  testutil::Rand rng(5);
  const RealImage img = testutil::random_image(Grid{6, 6}, rng, 0.0, 1.0);
  write_image(tmp.path / "img.pgm", img);
  fs::remove(tmp.path / "img.f64");
  const RealImage back = read_image(tmp.path / "img.pgm");
  for (size_t i = 0; i < img.values.size(); ++i)
    CHECK(back.values[i] == doctest::Approx(img.values[i]).epsilon(1e-4));
}

TEST_CASE("segmentation round trip") {
  TempDir tmp;
  testutil::Rand rng(7);
  HardSegmentation seg{Grid{5, 8}, 4, {}};
  for (int i = 0; i < 40; ++i) seg.labels.push_back(static_cast<int>(rng.integer(4)));
  write_segmentation(tmp.path / "seg.pgm", seg);
  const HardSegmentation back = read_segmentation(tmp.path / "seg.pgm");
  CHECK(back.num_classes == 4);
  CHECK(back.labels == seg.labels);
}

TEST_CASE("kspace round trip is bit exact") {
  TempDir tmp;
  testutil::Rand rng(9);
  const Grid g{8, 8};
  const SamplingMask mask = testutil::random_mask(g, 0.4, rng);
  KSpaceData data{mask, testutil::random_samples(mask.m, rng), 0.3125};
  write_kspace(tmp.path / "d.ksp", data);
  const KSpaceData back = read_kspace(tmp.path / "d.ksp");
  CHECK(back.mask.selected == data.mask.selected);
  CHECK(back.mask.m == data.mask.m);
  CHECK(back.noise_sigma == data.noise_sigma);
  CHECK(back.samples == data.samples);
}

TEST_CASE("kspace parser reports truncation with the failing record") {
  TempDir tmp;
  testutil::Rand rng(11);
  const Grid g{4, 4};
  const SamplingMask mask = testutil::random_mask(g, 0.8, rng);
  KSpaceData data{mask, testutil::random_samples(mask.m, rng), 0.0};
  write_kspace(tmp.path / "d.ksp", data);
  std::string bytes = slurp(tmp.path / "d.ksp");

  // cut in the middle of record 2
  const size_t cut = 4 + 12 + 8 + 2 * 20 + 7;
  std::ofstream out(tmp.path / "trunc.ksp", std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(cut));
  out.close();
  try {
    read_kspace(tmp.path / "trunc.ksp");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("record 2") != std::string::npos);
  }

  std::ofstream bad(tmp.path / "bad.ksp", std::ios::binary | std::ios::trunc);
  bad << "KSPX";
  bad.close();
  CHECK_THROWS_AS(read_kspace(tmp.path / "bad.ksp"), IoError);
}

TEST_CASE("kv parser handles comments, spacing and errors") {
  TempDir tmp;
  {
    std::ofstream out(tmp.path / "cfg.txt");
    out << "# comment\n\n  method = joint \nsigma=0.5\n";
  }
  const auto kv = parse_kv_file(tmp.path / "cfg.txt");
  CHECK(kv.at("method") == "joint");
  CHECK(kv.at("sigma") == "0.5");

  {
    std::ofstream out(tmp.path / "bad.txt");
    out << "method joint\n";
  }
  CHECK_THROWS_AS(parse_kv_file(tmp.path / "bad.txt"), ConfigError);
}

TEST_CASE("experiment config rejects unknown keys and bad values") {
  std::map<std::string, std::string> kv{{"method", "joint"}};
  kv["grid.n1"] = "32";
  kv["grid.n2"] = "32";
  CHECK_NOTHROW(parse_experiment_config(kv));

  auto bad = kv;
  bad["metod"] = "joint";
  CHECK_THROWS_AS(parse_experiment_config(bad), ConfigError);

  bad = kv;
  bad["sigma"] = "-1";
  CHECK_THROWS_AS(parse_experiment_config(bad), ConfigError);

  bad = kv;
  bad["solver.alpha"] = "zero";
  CHECK_THROWS_AS(parse_experiment_config(bad), ConfigError);

  bad = kv;
  bad["phantom.values"] = "1,1";
  CHECK_THROWS_AS(parse_experiment_config(bad), ConfigError);

  // manifest annotations are ignored
  auto annotated = kv;
  annotated["out.gt.min"] = "0";
  CHECK_NOTHROW(parse_experiment_config(annotated));
}

TEST_CASE("manifest text round trips to the same resolved config") {
  std::map<std::string, std::string> kv{{"method", "bregman_seq"},
                                        {"seed", "17"},
                                        {"sigma", "0.25"},
                                        {"grid.n1", "48"},
                                        {"grid.n2", "32"},
                                        {"phantom.kind", "bubbles"},
                                        {"phantom.values", "0,2"},
                                        {"mask.kind", "spiral"},
                                        {"mask.rate", "0.2"},
                                        {"sweep.alpha", "0.1,0.2"}};
  const ExperimentConfig cfg = parse_experiment_config(kv);
  const std::string manifest = manifest_text(cfg);

  // feed the manifest back through the parser
  TempDir tmp;
  {
    std::ofstream out(tmp.path / "manifest.txt");
    out << manifest;
  }
  const ExperimentConfig again = parse_experiment_config(parse_kv_file(tmp.path / "manifest.txt"));
  CHECK(manifest_text(again) == manifest);
  CHECK(again.solver.tol_v == cfg.solver.tol_v);
  CHECK(again.sweep.alpha == cfg.sweep.alpha);
  CHECK(again.phantom.seed == 17);
  CHECK(again.mask.seed == 18);
}

TEST_SUITE_END();
