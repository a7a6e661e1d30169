#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "cgchan/imaging.hpp"
#include "cgchan/statistics.hpp"

namespace cgchan {

enum class ChannelMethod { cg, cg_cmd, pls };

std::string to_string(ChannelMethod m);
ChannelMethod channel_method_from_string(const std::string& s);

struct CgIterationRecord {
  double alpha = 0.0;
  double beta = 0.0;
  double residual_norm = 0.0;
  bool reorthogonalized = false;
};

struct CgBuildLog {
  std::vector<CgIterationRecord> iterations;
  Eigen::VectorXd final_template;            // w after the last completed update
  std::vector<Eigen::VectorXd> template_history;  // filled when requested
  double initial_residual_norm = 0.0;
};

// Rows are channel vectors t_i. CG-built banks carry the orthonormality
// contract (Gram ~ identity); PLS banks only have unit rows.
struct ChannelBank {
  Eigen::MatrixXd matrix;  // D x M
  ChannelMethod method = ChannelMethod::cg;
  double tau_orth = 1e-6;
  bool truncated = false;  // fewer channels than requested (exact convergence / rank)
  CgBuildLog build_log;

  int channel_count() const { return static_cast<int>(matrix.rows()); }
  int image_dim() const { return static_cast<int>(matrix.cols()); }

  // First d channels. CG residual channels are nested (earlier iterations are
  // unaffected by later ones) and PLS components are nested under deflation,
  // so slicing is equivalent to rebuilding at the smaller count.
  ChannelBank prefix(int d) const;
};

struct CgBuildOptions {
  double tau_orth = 1e-6;            // normalized-inner-product trigger for MGS
  double convergence_tol = 1e-12;    // early stop when |r| / |r0| drops below
  bool reorthogonalize = true;
  bool record_template_history = false;
};

// CG iteration on K w = delta; every residual, normalized, becomes a channel.
//   w0 = 0, r0 = delta, d0 = r0, t0 = r0/|r0|
//   loop i = 0..D-1: alpha = r'r / d'Kd; w += alpha d; r -= alpha K d;
//     MGS re-orthogonalization sweep when any normalized inner product with a
//     prior residual exceeds tau_orth; emit t_{i+1} = r/|r| (skipped for
//     i = D-1, which only finishes the template); beta = r'r/r_prev'r_prev;
//     d = r + beta d.
// Returns t_0..t_{D-1}; build_log.final_template holds w after D updates.
// Stops early (truncated = true) once |r|/|r0| underflows convergence_tol;
// throws on non-positive curvature d'Kd <= 0 or zero delta.
ChannelBank build_cg_channels(const CovarianceModel& K, const MeanDifference& delta, int D,
                              const CgBuildOptions& opts = {});

// PLS1 channels: images column-centered, labels mapped to centered +/-1;
// each direction is the image-label cross-covariance of the deflated data,
// normalized; data are deflated against the component scores before the next
// extraction. Rows come out in extraction order.
ChannelBank build_pls_channels(const LabeledDataset& dataset, int D);

// v = T g
Eigen::VectorXd channelize(const ChannelBank& bank, const Eigen::VectorXd& image);

// Channelized dataset as a D x n matrix (columns follow dataset order).
Eigen::MatrixXd channelize_all(const ChannelBank& bank, const std::vector<ImageVector>& images);

// Pairwise channel inner products; identity for orthonormal banks.
Eigen::MatrixXd gram_matrix(const ChannelBank& bank);

}  // namespace cgchan
