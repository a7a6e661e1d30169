#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgchan/config.hpp"
#include "cgchan/manifest.hpp"

namespace cgchan {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingArtifact : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One CHO/CIO evaluation condition from the sweep grid.
struct ObserverCondition {
  std::string observer;  // "cho" or "cio"
  std::string method;    // cg / cg_cmd / pls
  int channels = 0;
  int n_train = 0;

  std::string id() const;
};

// Config-driven runner for the study pipeline: dataset generation, channel
// construction, observer scoring, and report/figure export, with every
// artifact registered in the run manifest and reproducible from
// (config, master seed) alone.
class Experiment {
 public:
  Experiment(ExperimentConfig cfg, std::filesystem::path out_dir);

  void generate();
  void channels();
  // Scores every enabled observer; per-condition failures are reported and
  // skipped rather than aborting the sweep. Returns the failed condition ids.
  std::vector<std::string> observers();
  void report();
  void reproduce_figure(int figure);

  std::vector<ObserverCondition> conditions() const;
  const ExperimentConfig& config() const { return cfg_; }
  const RunManifest& manifest() const { return manifest_; }

  static std::string dataset_key(const std::string& name);
  static std::string bank_key(const std::string& method, int n_train);

 private:
  LabeledDataset load_dataset_artifact(const std::string& name);
  std::vector<ImageVector> load_images_artifact(const std::string& name);
  ChannelBank load_bank_artifact(const std::string& method, int n_train);
  void save_score_rows(const std::string& observer_id, const LabeledDataset& test,
                       const std::vector<double>& per_image);
  IoTask io_task() const;

  ExperimentConfig cfg_;
  std::filesystem::path out_dir_;
  RunManifest manifest_;
  std::string hash_;
};

}  // namespace cgchan
