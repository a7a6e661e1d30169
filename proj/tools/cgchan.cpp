// cgchan -- config-driven experiment runner for CG-channelized observer
// studies: dataset generation, channel construction, observer scoring,
// evaluation tables, and figure-data export.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "cgchan/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitMissing = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
  std::string config_path;
  std::string preset = "desk";
  std::string out_dir = "runs/default";
  std::optional<std::uint64_t> seed;
};

cgchan::ExperimentConfig resolve_config(const CommonOpts& opts) {
  cgchan::ExperimentConfig cfg = opts.config_path.empty()
                                     ? cgchan::preset_config(opts.preset)
                                     : cgchan::load_config(opts.config_path);
  if (opts.seed) cfg.master_seed = *opts.seed;
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config JSON");
  cmd->add_option("--preset", opts.preset, "built-in preset (paper, desk)")
      ->check(CLI::IsMember({"paper", "desk"}));
  cmd->add_option("--out", opts.out_dir, "run output directory");
  cmd->add_option("--seed", opts.seed, "override the master seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CG-channel construction and channelized observer studies"};
  app.require_subcommand(1);

  CommonOpts opts;
  int figure = 7;

  auto* cmd_generate = app.add_subcommand("generate", "generate datasets");
  add_common(cmd_generate, opts);
  auto* cmd_channels = app.add_subcommand("channels", "build channel banks");
  add_common(cmd_channels, opts);
  auto* cmd_observers = app.add_subcommand("observers", "compute observer scores");
  add_common(cmd_observers, opts);
  auto* cmd_report = app.add_subcommand("report", "AUC tables from score artifacts");
  add_common(cmd_report, opts);
  auto* cmd_reproduce = app.add_subcommand("reproduce", "emit figure data (CSV/SVG)");
  add_common(cmd_reproduce, opts);
  cmd_reproduce->add_option("--figure", figure, "figure number")
      ->check(CLI::IsMember({2, 3, 4, 6, 7, 8, 9}));

  CLI11_PARSE(app, argc, argv);

  try {
    cgchan::Experiment exp(resolve_config(opts), opts.out_dir);
    if (cmd_generate->parsed()) {
      exp.generate();
    } else if (cmd_channels->parsed()) {
      exp.channels();
    } else if (cmd_observers->parsed()) {
      const auto failed = exp.observers();
      if (!failed.empty()) {
        std::cerr << failed.size() << " observer condition(s) failed\n";
        return kExitNumerical;
      }
    } else if (cmd_report->parsed()) {
      exp.report();
    } else if (cmd_reproduce->parsed()) {
      exp.reproduce_figure(figure);
    }
  } catch (const cgchan::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cgchan::MissingArtifact& e) {
    std::cerr << "missing artifact: " << e.what() << "\n";
    return kExitMissing;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
