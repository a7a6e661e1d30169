#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "cgchan/imaging.hpp"

namespace cgchan {

enum class CovarianceProvenance { sample, cmd };

struct CovarianceModel {
  Eigen::MatrixXd matrix;  // M x M, symmetric PSD up to round-off
  CovarianceProvenance provenance = CovarianceProvenance::sample;
  int n_samples = 0;
  std::optional<double> noise_variance;  // sigma^2 of the sigma^2 * I part, if CMD

  int dim() const { return static_cast<int>(matrix.rows()); }
};

enum class MeanDifferenceProvenance { known_signal, empirical };

struct MeanDifference {
  Eigen::VectorXd vector;
  MeanDifferenceProvenance provenance = MeanDifferenceProvenance::empirical;
};

// H1 sample mean minus H0 sample mean. Throws if either class is missing.
MeanDifference sample_mean_difference(const LabeledDataset& dataset);

// SKE bypass: the known signal image serves as the ground-truth mean
// difference.
MeanDifference known_signal_mean_difference(const ImageVector& signal);

// Unbiased (n-1)-normalized sample covariance. If the list carries both H0
// and H1 labels this is the pooled intraclass estimate (K0 + K1)/2 with
// per-class centering; otherwise the images are treated as one group.
// Accumulation runs in fixed-size chunks; the result is symmetrized exactly.
CovarianceModel sample_covariance(const std::vector<ImageVector>& images);

// CMD estimate K_g = sigma^2 I + K_b with K_b the sample covariance of the
// noiseless background images. For SKE tasks signal_random must be false
// (a random signal would add a K_s term this model does not carry).
CovarianceModel cmd_covariance(const std::vector<ImageVector>& noiseless_backgrounds,
                               const NoiseModel& noise, bool signal_random = false);

}  // namespace cgchan
