#include "cgchan/statistics.hpp"

#include <stdexcept>

namespace cgchan {

namespace {

// (n-1)-normalized covariance of one group, centered on its own mean.
// Rank updates run on the lower triangle in chunks of images.
Eigen::MatrixXd group_covariance(const std::vector<const ImageVector*>& group) {
  const std::size_t n = group.size();
  const Eigen::Index m = group[0]->values.size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
  for (const auto* img : group) mean += img->values;
  mean /= static_cast<double>(n);

  constexpr std::size_t kChunk = 256;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd block(m, kChunk);
  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t len = std::min(kChunk, n - start);
    for (std::size_t k = 0; k < len; ++k)
      block.col(static_cast<Eigen::Index>(k)) = group[start + k]->values - mean;
    cov.selfadjointView<Eigen::Lower>().rankUpdate(block.leftCols(static_cast<Eigen::Index>(len)),
                                                   1.0);
  }
  cov /= static_cast<double>(n - 1);
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  return cov;
}

}  // namespace

MeanDifference sample_mean_difference(const LabeledDataset& dataset) {
  const int n0 = dataset.count(Label::H0);
  const int n1 = dataset.count(Label::H1);
  if (n0 == 0 || n1 == 0)
    throw std::invalid_argument("sample_mean_difference: both classes must be present");
  const Eigen::Index m = dataset.images[0].values.size();
  Eigen::VectorXd mean0 = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd mean1 = Eigen::VectorXd::Zero(m);
  for (const auto& img : dataset.images) {
    if (img.label == Label::H0) mean0 += img.values;
    if (img.label == Label::H1) mean1 += img.values;
  }
  MeanDifference d;
  d.vector = mean1 / n1 - mean0 / n0;
  d.provenance = MeanDifferenceProvenance::empirical;
  return d;
}

MeanDifference known_signal_mean_difference(const ImageVector& signal) {
  MeanDifference d;
  d.vector = signal.values;
  d.provenance = MeanDifferenceProvenance::known_signal;
  return d;
}

CovarianceModel sample_covariance(const std::vector<ImageVector>& images) {
  std::vector<const ImageVector*> h0, h1, all;
  all.reserve(images.size());
  for (const auto& img : images) {
    all.push_back(&img);
    if (img.label == Label::H0) h0.push_back(&img);
    if (img.label == Label::H1) h1.push_back(&img);
  }
  if (all.size() < 2) throw std::invalid_argument("sample_covariance: needs >= 2 images");
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i]->values.size() != all[0]->values.size())
      throw std::invalid_argument("sample_covariance: mixed image sizes");

  CovarianceModel model;
  model.provenance = CovarianceProvenance::sample;
  model.n_samples = static_cast<int>(all.size());
  const bool two_class = !h0.empty() && !h1.empty();
  if (two_class) {
    if (h0.size() < 2 || h1.size() < 2)
      throw std::invalid_argument("sample_covariance: needs >= 2 images per class");
    model.matrix = 0.5 * (group_covariance(h0) + group_covariance(h1));
    // equal-weight average of two symmetric matrices stays symmetric, but
    // keep the explicit symmetrization as the documented bit-exact step
    Eigen::MatrixXd sym = 0.5 * (model.matrix + model.matrix.transpose());
    model.matrix = std::move(sym);
  } else {
    model.matrix = group_covariance(all);
  }
  return model;
}

CovarianceModel cmd_covariance(const std::vector<ImageVector>& noiseless_backgrounds,
                               const NoiseModel& noise, bool signal_random) {
  if (signal_random)
    throw std::invalid_argument("cmd_covariance: random signals are not supported (SKE only)");
  if (noise.kind != NoiseKind::iid_gaussian)
    throw std::invalid_argument("cmd_covariance: noise model must be iid Gaussian");
  if (noiseless_backgrounds.size() < 2)
    throw std::invalid_argument("cmd_covariance: needs >= 2 background images");
  for (const auto& img : noiseless_backgrounds)
    if (img.provenance == Provenance::measured)
      throw std::invalid_argument("cmd_covariance: backgrounds must be noiseless");

  std::vector<const ImageVector*> group;
  group.reserve(noiseless_backgrounds.size());
  for (const auto& img : noiseless_backgrounds) group.push_back(&img);

  CovarianceModel model;
  model.matrix = group_covariance(group);
  model.matrix.diagonal().array() += noise.std_dev * noise.std_dev;
  model.provenance = CovarianceProvenance::cmd;
  model.n_samples = static_cast<int>(group.size());
  model.noise_variance = noise.std_dev * noise.std_dev;
  return model;
}

}  // namespace cgchan
