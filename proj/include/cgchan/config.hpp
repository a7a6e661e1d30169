#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cgchan/imaging.hpp"
#include "cgchan/observers.hpp"

namespace cgchan {

struct SweepConfig {
  std::vector<std::string> methods = {"cg", "cg_cmd", "pls"};
  std::vector<int> channel_counts = {10, 20, 30};
  std::vector<int> train_sizes = {400, 2000};  // total images per training condition
};

struct ObserversConfig {
  bool cho = true;
  bool cio = true;
  bool ho_reference = true;
  bool io_reference = true;
  std::string mcmc_preset = "desk";
};

struct EvalConfig {
  int test_per_class = 200;
  int n_boot = 1000;
};

struct TrainingConfig {
  int cho_train_per_class = 2500;      // separate set for channelized covariance
  int cmd_reference_backgrounds = 10000;  // reference HO covariance
};

// Single-JSON experiment description; see configs/ for the shipped presets.
struct ExperimentConfig {
  std::string name = "desk";
  TaskConfig task;
  SweepConfig sweep;
  ObserversConfig observers;
  EvalConfig eval;
  TrainingConfig training;
  std::uint64_t master_seed = 20260809;

  void validate() const;
  MCMCConfig mcmc() const { return mcmc_preset(observers.mcmc_preset); }
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json_text(const ExperimentConfig& cfg);

// Built-in presets: "paper" (G = 64, full study sizes, 200k-step MCMC) and
// "desk" (G = 32, reduced sizes, 20k-step MCMC).
ExperimentConfig preset_config(const std::string& name);

// FNV-1a over the canonical JSON serialization.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace cgchan
