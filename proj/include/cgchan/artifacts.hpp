#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cgchan/channels.hpp"
#include "cgchan/imaging.hpp"

namespace cgchan {

// Raw little-endian arrays with a JSON sidecar (`<stem>.meta.json`).
// Datasets are 32-bit floats, image-major with row-major pixels; channel
// banks and other matrices are 64-bit doubles, row-major.

std::string to_hex(std::uint64_t v);
std::uint64_t hash_file(const std::filesystem::path& path);

void save_dataset(const std::filesystem::path& stem, const LabeledDataset& dataset,
                  const std::string& config_hash);
LabeledDataset load_dataset(const std::filesystem::path& stem);

void save_images(const std::filesystem::path& stem, const std::vector<ImageVector>& images,
                 int grid, std::uint64_t seed, const std::string& config_hash);
std::vector<ImageVector> load_images(const std::filesystem::path& stem);

void save_bank(const std::filesystem::path& stem, const ChannelBank& bank,
               const std::string& config_hash);
ChannelBank load_bank(const std::filesystem::path& stem);

void save_matrix(const std::filesystem::path& stem, const Eigen::MatrixXd& m,
                 const std::string& kind, const std::string& config_hash);
Eigen::MatrixXd load_matrix(const std::filesystem::path& stem);

// Score files: CSV with columns (image_id, label, observer_id, t), one row
// per test image in dataset order. Doubles print as shortest round-trip.
struct ScoreRow {
  int image_id = 0;
  int label = 0;
  std::string observer_id;
  double t = 0.0;
};

void save_scores_csv(const std::filesystem::path& path, const std::vector<ScoreRow>& rows);
std::vector<ScoreRow> load_scores_csv(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace cgchan
