#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "cgchan/observers.hpp"

namespace cgchan {

struct RocSummary {
  double auc = 0.0;
  double auc_stderr = 0.0;
  int n_boot = 0;
  double percentile_lo = 0.0;  // 2.5% bootstrap percentile
  double percentile_hi = 0.0;  // 97.5%
  std::vector<std::pair<double, double>> roc_points;  // (FPF, TPF), (0,0) -> (1,1)
};

struct SnrSummary {
  double snr_t = 0.0;
};

// Mann-Whitney AUC with ties counted 1/2 (average-rank method); equals the
// trapezoidal area under the empirical ROC. Throws on an empty class.
RocSummary auc(const ObserverScores& scores);

// Class-stratified bootstrap: H0 and H1 lists resampled independently.
// stderr is the standard deviation of the bootstrap AUCs; the 2.5/97.5
// percentiles are reported alongside. Bit-exact reproducible per seed.
RocSummary bootstrap_auc(const ObserverScores& scores, int n_boot, std::uint64_t seed);

// (mean1 - mean0) / sqrt((var0 + var1)/2) with unbiased variances.
SnrSummary snr_t(const ObserverScores& scores);

// Standard normal CDF.
double normal_cdf(double x);

// Energy fraction removed by a 3x3 box smoothing of the G x G image; a
// roughness score used to compare channel/template noisiness.
double high_frequency_energy_fraction(const Eigen::VectorXd& image, int grid);

}  // namespace cgchan
