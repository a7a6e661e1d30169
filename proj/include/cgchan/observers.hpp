#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cgchan/channels.hpp"
#include "cgchan/imaging.hpp"
#include "cgchan/statistics.hpp"

namespace cgchan {

enum class TemplateSpace { image, channel };

struct LinearTemplate {
  Eigen::VectorXd weights;
  TemplateSpace space = TemplateSpace::image;
};

// Paired test statistics under the two hypotheses.
struct ObserverScores {
  std::vector<double> t_h0;
  std::vector<double> t_h1;
  std::string observer_id;
};

// ---------------------------------------------------------------------------
// Linear observers
// ---------------------------------------------------------------------------

// Dense symmetric solve of K w = delta. A numerically singular K gets a ridge
// of 1e-8 * trace(K)/M when allow_ridge is set, otherwise the solve fails
// with the residual-based condition diagnostic.
LinearTemplate hotelling_template(const CovarianceModel& K, const MeanDifference& delta,
                                  bool allow_ridge = true);

// SNR of the ideal linear observer with exact statistics: sqrt(delta' K^-1 delta).
double hotelling_snr(const CovarianceModel& K, const MeanDifference& delta);

// SNR of the channelized Hotelling observer computed from exact statistics:
// sqrt(delta_v' (T K T')^-1 delta_v) with delta_v = T delta.
double channelized_hotelling_snr(const CovarianceModel& K, const MeanDifference& delta,
                                 const ChannelBank& bank);

// Channelizes the training data and solves the D x D Hotelling system with
// pooled per-class-centered channel covariance. Requires D <= n_class - 1.
LinearTemplate cho_template(const ChannelBank& bank, const LabeledDataset& training);

// Per-image inner products, dataset order.
std::vector<double> linear_scores(const LinearTemplate& tmpl,
                                  const std::vector<ImageVector>& images);
std::vector<double> linear_scores_channelized(const LinearTemplate& tmpl,
                                              const Eigen::MatrixXd& channelized);

ObserverScores split_scores(const std::vector<double>& per_image,
                            const std::vector<ImageVector>& images, std::string observer_id);

ObserverScores apply_linear(const LinearTemplate& tmpl, const std::vector<ImageVector>& images,
                            std::string observer_id);

// ---------------------------------------------------------------------------
// Ideal observers
// ---------------------------------------------------------------------------

// log Lambda_BKE(g | b) = s'(g - b)/sigma^2 - s's/(2 sigma^2) for i.i.d.
// Gaussian noise.
double bke_log_likelihood_ratio(const Eigen::VectorXd& g, const Eigen::VectorXd& b,
                                const Eigen::VectorXd& s, const NoiseModel& noise);

struct McmcProposal {
  double move_prob = 0.8;
  double move_std = 0.8;  // a.u.; calibrated to ~0.2-0.5 move acceptance
  double birth_prob = 0.1;
  double death_prob = 0.1;
};

enum class ChainInit {
  prior,   // draw theta_0 from the lumpy prior
  greedy,  // deterministic matching-pursuit fit of g (burn-in starts at the mode)
};

struct MCMCConfig {
  long n_steps = 200000;
  long burn_in = 1000;
  McmcProposal proposal;
  std::uint64_t seed = 0;
  int max_lumps = 50;  // truncation of the Poisson support
  ChainInit init = ChainInit::greedy;
  bool warn_on_bad_acceptance = true;

  void validate() const;
};

// 200,000 / 1,000 for "paper", 20,000 / 500 for "desk".
MCMCConfig mcmc_preset(const std::string& name);

// Deterministic greedy fit of g under the H0 lumpy model: repeatedly adds a
// lump at the best-matching pixel while that strictly improves the data
// misfit. Used to start chains at the posterior mode.
LumpyState greedy_lumpy_fit(const Eigen::VectorXd& g, const LumpyModelParams& lumpy,
                            const GaussianOperator& op, int max_lumps);

// Everything the posterior sampler needs about the task: the stochastic
// background model, the imaging operator, the noise, and the known (already
// projected) signal image.
struct IoTask {
  LumpyModelParams lumpy;
  GaussianOperator op;
  NoiseModel noise;
  Eigen::VectorXd signal;
};

struct McmcDiagnostics {
  long proposed[3] = {0, 0, 0};  // move, birth, death
  long accepted[3] = {0, 0, 0};

  double acceptance_rate() const;
};

// Invoked once per post-burn-in step with the current state; used for chain
// diagnostics (e.g. the lump-count marginal).
using ChainObserver = std::function<void(const LumpyState&)>;

// Metropolis-Hastings over theta = (N_b, centers) targeting
// pr(theta | g, H0) prop pr(g | b(theta)) Pois(N_b | Nbar) Uniform(centers).
// Moves perturb one lump center (Gaussian step, rejected outside the FOV);
// birth adds a uniform lump with acceptance factor Nbar p_d / (p_b (N+1));
// death removes a uniform lump with factor N p_b / (p_d Nbar).
// Returns log t_IO: the log of the posterior mean of Lambda_BKE (Eq.-style
// plain average over post-burn-in steps, accumulated in log space).
double mcmc_io_statistic(const Eigen::VectorXd& g, const IoTask& task, const MCMCConfig& cfg,
                         McmcDiagnostics* diag = nullptr,
                         const LumpyState* init_state = nullptr,
                         const ChainObserver& on_sample = nullptr);

// Same chain structure in channel space: likelihoods of v = T g with mean
// T b(theta) and covariance sigma^2 Gram(T) (exact, so non-orthonormal banks
// are handled correctly).
double mcmc_cio_statistic(const Eigen::VectorXd& v, const ChannelBank& bank, const IoTask& task,
                          const MCMCConfig& cfg, McmcDiagnostics* diag = nullptr,
                          const LumpyState* init_state = nullptr);

// One independent chain per test image, parallelized, seeds keyed by image
// index. Returns per-image log statistics in dataset order.
std::vector<double> mcmc_io_scores(const std::vector<ImageVector>& images, const IoTask& task,
                                   const MCMCConfig& cfg);
std::vector<double> mcmc_cio_scores(const std::vector<ImageVector>& images,
                                    const ChannelBank& bank, const IoTask& task,
                                    const MCMCConfig& cfg);

}  // namespace cgchan
