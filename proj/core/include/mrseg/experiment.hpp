#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrseg/simulate.hpp"
#include "mrseg/types.hpp"

namespace mrseg {

enum class Method { zero_fill, tv_seq, bregman_seq, joint, constrained_joint };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

/// Values swept per parameter; empty means "use the base value only". Runs
/// enumerate the cartesian product in the order alpha, beta, delta, rate,
/// sigma.
struct SweepSpec {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> delta;
  std::vector<double> rate;
  std::vector<double> sigma;
};

struct ExperimentConfig {
  PhantomSpec phantom;
  MaskSpec mask;
  double sigma = 0.25;
  Method method = Method::joint;
  JointConfig solver;
  SweepSpec sweep;
  std::filesystem::path output_dir = "out";
  uint64_t seed = 0;
};

/// Builds a config from parsed key=value pairs, applying defaults and
/// rejecting unknown keys (keys with the reserved "out." prefix are
/// ignored so manifests can be re-run). Throws ConfigError.
ExperimentConfig parse_experiment_config(const std::map<std::string, std::string>& kv);

/// Serializes the fully resolved config as a manifest that parses back to
/// the same experiment.
std::string manifest_text(const ExperimentConfig& cfg);

/// Runs the experiment: writes ground truth, per-run reconstructions,
/// segmentations, iteration CSVs and one metrics CSV row per run. Honors
/// MRSEG_THREADS for parallel sweep entries. Returns a process exit code
/// (0 ok, 2 solver failure).
int run_experiment(const ExperimentConfig& cfg);

}  // namespace mrseg
