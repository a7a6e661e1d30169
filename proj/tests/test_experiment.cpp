#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cgchan/experiment.hpp"

using namespace cgchan;

namespace {

// Miniature study: 16x16 grid, tiny sweeps, MCMC reduced via the desk preset
// but with a small test set so the suite stays fast.
ExperimentConfig micro_config(bool with_mcmc) {
  ExperimentConfig cfg = preset_config("desk");
  cfg.name = "micro";
  cfg.task.op = GaussianOperator(FieldOfView(64.0, 64.0, 16), 2.5, 36.0);
  cfg.sweep.methods = {"cg", "cg_cmd", "pls"};
  cfg.sweep.channel_counts = {3, 6};
  cfg.sweep.train_sizes = {60};
  cfg.eval.test_per_class = 20;
  cfg.eval.n_boot = 150;
  cfg.training.cho_train_per_class = 80;
  cfg.training.cmd_reference_backgrounds = 200;
  cfg.observers.cio = with_mcmc;
  cfg.observers.io_reference = with_mcmc;
  cfg.master_seed = 99;
  return cfg;
}

std::filesystem::path fresh_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("cgchan_exp_" + tag);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE_BEGIN("experiment");

TEST_CASE("pipeline end to end: generate, channels, observers, report") {
  const auto dir = fresh_dir("e2e");
  Experiment exp(micro_config(false), dir);
  exp.generate();
  exp.channels();
  const auto failed = exp.observers();
  CHECK(failed.empty());
  exp.report();

  CHECK(std::filesystem::exists(dir / "tables" / "report.csv"));
  const std::string table = slurp(dir / "tables" / "report.csv");
  CHECK(table.find("ho_reference") != std::string::npos);
  CHECK(table.find("cho_cg_D3_n60") != std::string::npos);
  CHECK(table.find("cho_cg_cmd_D6_n60") != std::string::npos);
  CHECK(table.find("cho_pls_D6_n60") != std::string::npos);

  // stage reruns are hash hits: artifacts do not change
  const std::string scores_before = slurp(dir / "scores" / "cho_cg_D3_n60.csv");
  exp.generate();
  exp.channels();
  exp.observers();
  CHECK(slurp(dir / "scores" / "cho_cg_D3_n60.csv") == scores_before);
}

TEST_CASE("two fresh runs with the same config produce byte-identical artifacts") {
  const auto dir_a = fresh_dir("det_a");
  const auto dir_b = fresh_dir("det_b");
  for (const auto& dir : {dir_a, dir_b}) {
    Experiment exp(micro_config(false), dir);
    exp.generate();
    exp.channels();
    exp.observers();
    exp.report();
  }
  for (const auto& rel :
       {"datasets/test.f32", "banks/cg_n60.f64", "scores/ho_reference.csv",
        "scores/cho_pls_D6_n60.csv", "tables/report.csv", "manifest.json"}) {
    CHECK(slurp(dir_a / rel) == slurp(dir_b / rel));
  }
}

TEST_CASE("observers stage requires generated artifacts") {
  const auto dir = fresh_dir("missing");
  Experiment exp(micro_config(false), dir);
  CHECK_THROWS_AS(exp.observers(), MissingArtifact);
  CHECK_THROWS_AS(exp.channels(), MissingArtifact);
}

TEST_CASE("report with no scores raises a missing-artifact error") {
  const auto dir = fresh_dir("noscores");
  Experiment exp(micro_config(false), dir);
  exp.generate();
  CHECK_THROWS_AS(exp.report(), MissingArtifact);
}

TEST_CASE("a run directory rejects a different config") {
  const auto dir = fresh_dir("confguard");
  {
    Experiment exp(micro_config(false), dir);
    exp.generate();
  }
  auto other = micro_config(false);
  other.master_seed = 100;
  CHECK_THROWS(Experiment(other, dir));
}

TEST_CASE("figure export writes channel images, gram matrices, and AUC plots") {
  const auto dir = fresh_dir("figs");
  auto cfg = micro_config(false);
  Experiment exp(cfg, dir);
  exp.reproduce_figure(2);
  exp.reproduce_figure(3);
  exp.reproduce_figure(4);
  exp.reproduce_figure(6);
  exp.reproduce_figure(8);
  CHECK(std::filesystem::exists(dir / "figures" / "fig2_cg.csv"));
  CHECK(std::filesystem::exists(dir / "figures" / "fig3_gram_cg_cmd.csv"));
  CHECK(std::filesystem::exists(dir / "figures" / "fig4_pls.csv"));
  CHECK(std::filesystem::exists(dir / "figures" / "fig6_templates.csv"));
  CHECK(std::filesystem::exists(dir / "figures" / "fig8.csv"));
  CHECK(std::filesystem::exists(dir / "figures" / "fig8_n60.svg"));
}

TEST_CASE("micro pipeline with MCMC observers produces IO and CIO scores") {
  const auto dir = fresh_dir("mcmc");
  auto cfg = micro_config(true);
  cfg.sweep.methods = {"cg"};
  cfg.sweep.channel_counts = {4};
  cfg.eval.test_per_class = 6;
  Experiment exp(cfg, dir);
  exp.generate();
  exp.channels();
  const auto failed = exp.observers();
  CHECK(failed.empty());
  CHECK(std::filesystem::exists(dir / "scores" / "io.csv"));
  CHECK(std::filesystem::exists(dir / "scores" / "cio_cg_D4_n60.csv"));
}

TEST_SUITE_END();
