#include "cgchan/observers.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "cgchan/parallel.hpp"
#include "cgchan/rng.hpp"

namespace cgchan {

namespace {

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& K, const Eigen::VectorXd& rhs,
                          bool allow_ridge, const char* what) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
  const double rhs_norm = rhs.norm();
  if (ldlt.info() == Eigen::Success) {
    Eigen::VectorXd w = ldlt.solve(rhs);
    const double rel_res = (K.selfadjointView<Eigen::Lower>() * w - rhs).norm() /
                           (rhs_norm > 0.0 ? rhs_norm : 1.0);
    if (rel_res < 1e-8) return w;
  }
  if (!allow_ridge) {
    const double dmax = K.diagonal().maxCoeff();
    const double dmin = K.diagonal().minCoeff();
    throw std::runtime_error(std::string(what) +
                             ": matrix numerically singular (diag range [" +
                             std::to_string(dmin) + ", " + std::to_string(dmax) +
                             "]), ridge disabled");
  }
  const double ridge = 1e-8 * K.trace() / static_cast<double>(K.rows());
  Eigen::MatrixXd Kr = K;
  Kr.diagonal().array() += ridge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt2(Kr);
  if (ldlt2.info() != Eigen::Success)
    throw std::runtime_error(std::string(what) + ": solve failed even with ridge");
  return ldlt2.solve(rhs);
}

}  // namespace

LinearTemplate hotelling_template(const CovarianceModel& K, const MeanDifference& delta,
                                  bool allow_ridge) {
  if (K.matrix.rows() != delta.vector.size())
    throw std::invalid_argument("hotelling_template: dimension mismatch");
  LinearTemplate t;
  t.weights = solve_spd(K.matrix, delta.vector, allow_ridge, "hotelling_template");
  t.space = TemplateSpace::image;
  return t;
}

double hotelling_snr(const CovarianceModel& K, const MeanDifference& delta) {
  const Eigen::VectorXd w = solve_spd(K.matrix, delta.vector, true, "hotelling_snr");
  return std::sqrt(std::max(0.0, w.dot(delta.vector)));
}

double channelized_hotelling_snr(const CovarianceModel& K, const MeanDifference& delta,
                                 const ChannelBank& bank) {
  if (bank.image_dim() != K.matrix.rows())
    throw std::invalid_argument("channelized_hotelling_snr: bank/covariance mismatch");
  const Eigen::MatrixXd kv = bank.matrix * K.matrix.selfadjointView<Eigen::Lower>() *
                             bank.matrix.transpose();
  const Eigen::VectorXd dv = bank.matrix * delta.vector;
  const Eigen::VectorXd wv = solve_spd(kv, dv, true, "channelized_hotelling_snr");
  return std::sqrt(std::max(0.0, wv.dot(dv)));
}

LinearTemplate cho_template(const ChannelBank& bank, const LabeledDataset& training) {
  const int n0 = training.count(Label::H0);
  const int n1 = training.count(Label::H1);
  if (n0 < 2 || n1 < 2)
    throw std::invalid_argument("cho_template: needs >= 2 training images per class");
  const int d = bank.channel_count();
  if (d > std::min(n0, n1) - 1)
    throw std::invalid_argument(
        "cho_template: channel count exceeds per-class training size - 1 "
        "(channelized covariance singular)");

  const Eigen::MatrixXd v = channelize_all(bank, training.images);
  Eigen::VectorXd mean0 = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd mean1 = Eigen::VectorXd::Zero(d);
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    if (training.images[static_cast<std::size_t>(j)].label == Label::H0) mean0 += v.col(j);
    else mean1 += v.col(j);
  }
  mean0 /= n0;
  mean1 /= n1;

  Eigen::MatrixXd k0 = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd k1 = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    if (training.images[static_cast<std::size_t>(j)].label == Label::H0) {
      const Eigen::VectorXd c = v.col(j) - mean0;
      k0.selfadjointView<Eigen::Lower>().rankUpdate(c, 1.0);
    } else {
      const Eigen::VectorXd c = v.col(j) - mean1;
      k1.selfadjointView<Eigen::Lower>().rankUpdate(c, 1.0);
    }
  }
  k0 /= (n0 - 1);
  k1 /= (n1 - 1);
  Eigen::MatrixXd kv = 0.5 * (k0 + k1);
  kv.triangularView<Eigen::StrictlyUpper>() = kv.transpose();

  LinearTemplate t;
  t.weights = solve_spd(kv, (mean1 - mean0).eval(), false, "cho_template");
  t.space = TemplateSpace::channel;
  return t;
}

std::vector<double> linear_scores(const LinearTemplate& tmpl,
                                  const std::vector<ImageVector>& images) {
  if (tmpl.space != TemplateSpace::image)
    throw std::invalid_argument("linear_scores: template lives in channel space");
  std::vector<double> out(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].values.size() != tmpl.weights.size())
      throw std::invalid_argument("linear_scores: image dimension mismatch");
    out[i] = tmpl.weights.dot(images[i].values);
  }
  return out;
}

std::vector<double> linear_scores_channelized(const LinearTemplate& tmpl,
                                              const Eigen::MatrixXd& channelized) {
  if (tmpl.space != TemplateSpace::channel)
    throw std::invalid_argument("linear_scores_channelized: template lives in image space");
  if (channelized.rows() != tmpl.weights.size())
    throw std::invalid_argument("linear_scores_channelized: dimension mismatch");
  std::vector<double> out(static_cast<std::size_t>(channelized.cols()));
  for (Eigen::Index j = 0; j < channelized.cols(); ++j)
    out[static_cast<std::size_t>(j)] = tmpl.weights.dot(channelized.col(j));
  return out;
}

ObserverScores split_scores(const std::vector<double>& per_image,
                            const std::vector<ImageVector>& images, std::string observer_id) {
  if (per_image.size() != images.size())
    throw std::invalid_argument("split_scores: size mismatch");
  ObserverScores s;
  s.observer_id = std::move(observer_id);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].label == Label::H0) s.t_h0.push_back(per_image[i]);
    else if (images[i].label == Label::H1) s.t_h1.push_back(per_image[i]);
  }
  return s;
}

ObserverScores apply_linear(const LinearTemplate& tmpl, const std::vector<ImageVector>& images,
                            std::string observer_id) {
  return split_scores(linear_scores(tmpl, images), images, std::move(observer_id));
}

double bke_log_likelihood_ratio(const Eigen::VectorXd& g, const Eigen::VectorXd& b,
                                const Eigen::VectorXd& s, const NoiseModel& noise) {
  if (noise.kind != NoiseKind::iid_gaussian)
    throw std::invalid_argument("bke_log_likelihood_ratio: noise must be iid Gaussian");
  if (g.size() != b.size() || g.size() != s.size())
    throw std::invalid_argument("bke_log_likelihood_ratio: dimension mismatch");
  const double inv_var = 1.0 / (noise.std_dev * noise.std_dev);
  return s.dot(g - b) * inv_var - 0.5 * s.squaredNorm() * inv_var;
}

void MCMCConfig::validate() const {
  if (burn_in < 0 || burn_in >= n_steps)
    throw std::invalid_argument("MCMCConfig: need 0 <= burn_in < n_steps");
  const double total = proposal.move_prob + proposal.birth_prob + proposal.death_prob;
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("MCMCConfig: proposal probabilities must sum to 1");
  if (proposal.move_prob < 0 || proposal.birth_prob < 0 || proposal.death_prob < 0)
    throw std::invalid_argument("MCMCConfig: proposal probabilities must be nonnegative");
  if (!(proposal.move_std > 0.0)) throw std::invalid_argument("MCMCConfig: move_std must be > 0");
  if (max_lumps < 0) throw std::invalid_argument("MCMCConfig: max_lumps must be >= 0");
}

MCMCConfig mcmc_preset(const std::string& name) {
  MCMCConfig cfg;
  if (name == "paper") {
    cfg.n_steps = 200000;
    cfg.burn_in = 1000;
  } else if (name == "desk") {
    cfg.n_steps = 20000;
    cfg.burn_in = 500;
  } else {
    throw std::invalid_argument("mcmc_preset: unknown preset '" + name + "'");
  }
  return cfg;
}

double McmcDiagnostics::acceptance_rate() const {
  const long p = proposed[0] + proposed[1] + proposed[2];
  const long a = accepted[0] + accepted[1] + accepted[2];
  return p > 0 ? static_cast<double>(a) / static_cast<double>(p) : 0.0;
}

namespace {

// Deterministic matching-pursuit start: add the best-scoring lump (scanning
// pixel centers) while it strictly improves the likelihood.
template <typename Backend>
LumpyState greedy_init_state(Backend& backend, const IoTask& task, int max_lumps) {
  LumpyState state;
  backend.reset(state);
  const int g = task.op.fov.grid_size;
  for (int k = 0; k < max_lumps; ++k) {
    double best = 0.0;
    Vec2 best_center{0.0, 0.0};
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) {
        const Vec2 c = task.op.fov.pixel_center(i, j);
        const double dll = backend.delta_loglik_add(c);
        if (dll > best) {
          best = dll;
          best_center = c;
        }
      }
    }
    if (!(best > 0.0)) break;
    backend.delta_loglik_add(best_center);
    backend.commit();
    state.centers.push_back(best_center);
  }
  return state;
}

// Shared Metropolis-Hastings kernel over the lumpy-object parameters.
// The Backend supplies the data-misfit side: it keeps the residual for the
// current background image and scores proposals that add/remove one lump.
template <typename Backend>
double run_lumpy_chain(Backend& backend, const IoTask& task, const MCMCConfig& cfg,
                       McmcDiagnostics* diag_out, const LumpyState* init_state,
                       const ChainObserver& on_sample) {
  cfg.validate();
  auto rng = make_rng(cfg.seed);

  LumpyState state;
  if (init_state) {
    state = *init_state;
    backend.reset(state);
  } else if (cfg.init == ChainInit::greedy) {
    state = greedy_init_state(backend, task, cfg.max_lumps);
  } else {
    state = sample_lumpy_state(task.lumpy, task.op.fov, rng);
    while (state.lump_count() > cfg.max_lumps)
      state = sample_lumpy_state(task.lumpy, task.op.fov, rng);
    backend.reset(state);
  }

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_real_distribution<double> ux(0.0, task.op.fov.extent_x);
  std::uniform_real_distribution<double> uy(0.0, task.op.fov.extent_y);
  std::normal_distribution<double> step(0.0, cfg.proposal.move_std);

  const double log_nbar = std::log(task.lumpy.mean_lump_count);
  // log(0) = -inf makes an unreversible birth/death proposal auto-reject
  const double log_pb = std::log(cfg.proposal.birth_prob);
  const double log_pd = std::log(cfg.proposal.death_prob);

  McmcDiagnostics diag;
  std::vector<double> log_lambda;
  log_lambda.reserve(static_cast<std::size_t>(cfg.n_steps - cfg.burn_in));

  long accepted_since_refresh = 0;
  for (long step_idx = 0; step_idx < cfg.n_steps; ++step_idx) {
    const double u = unif(rng);
    const int n = state.lump_count();
    if (u < cfg.proposal.move_prob) {
      if (n > 0) {  // nothing to move in an empty state: null step
        ++diag.proposed[0];
        std::uniform_int_distribution<int> pick(0, n - 1);
        const int idx = pick(rng);
        const Vec2 old_c = state.centers[static_cast<std::size_t>(idx)];
        const Vec2 new_c{old_c[0] + step(rng), old_c[1] + step(rng)};
        if (task.op.fov.contains(new_c)) {  // uniform prior has no mass outside
          const double dll = backend.delta_loglik_move(old_c, new_c);
          if (dll >= 0.0 || std::log(unif(rng)) < dll) {
            backend.commit();
            state.centers[static_cast<std::size_t>(idx)] = new_c;
            ++diag.accepted[0];
            ++accepted_since_refresh;
          }
        }
      }
    } else if (u < cfg.proposal.move_prob + cfg.proposal.birth_prob) {
      if (n < cfg.max_lumps) {  // truncated count support
        ++diag.proposed[1];
        const Vec2 c{ux(rng), uy(rng)};
        const double dll = backend.delta_loglik_add(c);
        const double log_accept = dll + log_nbar + log_pd - log_pb - std::log1p(n);
        if (log_accept >= 0.0 || std::log(unif(rng)) < log_accept) {
          backend.commit();
          state.centers.push_back(c);
          ++diag.accepted[1];
          ++accepted_since_refresh;
        }
      }
    } else {
      if (n > 0) {
        ++diag.proposed[2];
        std::uniform_int_distribution<int> pick(0, n - 1);
        const int idx = pick(rng);
        const Vec2 c = state.centers[static_cast<std::size_t>(idx)];
        const double dll = backend.delta_loglik_remove(c);
        const double log_accept = dll + std::log(n) + log_pb - log_pd - log_nbar;
        if (log_accept >= 0.0 || std::log(unif(rng)) < log_accept) {
          backend.commit();
          state.centers.erase(state.centers.begin() + idx);
          ++diag.accepted[2];
          ++accepted_since_refresh;
        }
      }
    }

    // Incremental residual updates drift at round-off level; refresh
    // periodically from the full lump list.
    if (accepted_since_refresh >= 4096) {
      backend.reset(state);
      accepted_since_refresh = 0;
    }

    if (step_idx >= cfg.burn_in) {
      log_lambda.push_back(backend.log_bke_lambda());
      if (on_sample) on_sample(state);
    }
  }

  if (diag_out) *diag_out = diag;
  const double rate = diag.acceptance_rate();
  if (cfg.warn_on_bad_acceptance && (rate < 0.1 || rate > 0.7))
    std::cerr << "[cgchan] warning: MCMC acceptance rate " << rate
              << " outside [0.1, 0.7] (seed " << cfg.seed << ")\n";

  // log of the plain average of Lambda over post-burn-in samples, max-shifted
  double max_ll = -std::numeric_limits<double>::infinity();
  for (double ll : log_lambda) max_ll = std::max(max_ll, ll);
  if (!std::isfinite(max_ll)) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (double ll : log_lambda) acc += std::exp(ll - max_ll);
  return max_ll + std::log(acc / static_cast<double>(log_lambda.size()));
}

// Image-space likelihood: residual e = g - b(theta), log-lik = -|e|^2/(2 s^2).
class ImageSpaceBackend {
 public:
  ImageSpaceBackend(const Eigen::VectorXd& g, const IoTask& task)
      : g_(g), task_(task), inv_var_(1.0 / (task.noise.std_dev * task.noise.std_dev)) {
    if (g_.size() != task_.op.measurement_count())
      throw std::invalid_argument("mcmc_io_statistic: image size does not match operator");
    if (task_.signal.size() != g_.size())
      throw std::invalid_argument("mcmc_io_statistic: signal size does not match image");
    half_s2_ = 0.5 * task_.signal.squaredNorm() * inv_var_;
  }

  void reset(const LumpyState& state) {
    e_ = g_;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(g_.size());
    for (const auto& c : state.centers)
      accumulate_lump_projection(b, task_.op, task_.lumpy, c, 1.0);
    e_ -= b;
  }

  double delta_loglik_move(const Vec2& old_c, const Vec2& new_c) {
    proposed_ = e_;
    accumulate_lump_projection(proposed_, task_.op, task_.lumpy, old_c, 1.0);
    accumulate_lump_projection(proposed_, task_.op, task_.lumpy, new_c, -1.0);
    return 0.5 * inv_var_ * (e_.squaredNorm() - proposed_.squaredNorm());
  }
  double delta_loglik_add(const Vec2& c) {
    proposed_ = e_;
    accumulate_lump_projection(proposed_, task_.op, task_.lumpy, c, -1.0);
    return 0.5 * inv_var_ * (e_.squaredNorm() - proposed_.squaredNorm());
  }
  double delta_loglik_remove(const Vec2& c) {
    proposed_ = e_;
    accumulate_lump_projection(proposed_, task_.op, task_.lumpy, c, 1.0);
    return 0.5 * inv_var_ * (e_.squaredNorm() - proposed_.squaredNorm());
  }
  void commit() { e_.swap(proposed_); }

  double log_bke_lambda() const { return task_.signal.dot(e_) * inv_var_ - half_s2_; }

 private:
  Eigen::VectorXd g_;
  const IoTask& task_;
  double inv_var_;
  double half_s2_ = 0.0;
  Eigen::VectorXd e_, proposed_;
};

// Channel-space likelihood: residual e_v = v - T b(theta) with covariance
// sigma^2 Gram(T); log-lik = -e_v' Sigma^-1 e_v / 2.
class ChannelSpaceBackend {
 public:
  ChannelSpaceBackend(const Eigen::VectorXd& v, const ChannelBank& bank, const IoTask& task)
      : v_(v), bank_(bank), task_(task) {
    if (v_.size() != bank_.channel_count())
      throw std::invalid_argument("mcmc_cio_statistic: v size does not match bank");
    if (bank_.image_dim() != task_.op.measurement_count())
      throw std::invalid_argument("mcmc_cio_statistic: bank does not match operator grid");
    const Eigen::MatrixXd sigma =
        task_.noise.std_dev * task_.noise.std_dev * (bank_.matrix * bank_.matrix.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("mcmc_cio_statistic: channelized noise covariance not SPD");
    sigma_inv_ = llt.solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
    const Eigen::VectorXd sv = bank_.matrix * task_.signal;
    sigma_inv_sv_ = sigma_inv_ * sv;
    half_svs_ = 0.5 * sv.dot(sigma_inv_sv_);
    lump_image_.resize(bank_.image_dim());
  }

  void reset(const LumpyState& state) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(bank_.image_dim());
    for (const auto& c : state.centers)
      accumulate_lump_projection(b, task_.op, task_.lumpy, c, 1.0);
    e_ = v_ - bank_.matrix * b;
  }

  double delta_loglik_move(const Vec2& old_c, const Vec2& new_c) {
    lump_image_.setZero();
    accumulate_lump_projection(lump_image_, task_.op, task_.lumpy, old_c, 1.0);
    accumulate_lump_projection(lump_image_, task_.op, task_.lumpy, new_c, -1.0);
    return propose_shift();
  }
  double delta_loglik_add(const Vec2& c) {
    lump_image_.setZero();
    accumulate_lump_projection(lump_image_, task_.op, task_.lumpy, c, -1.0);
    return propose_shift();
  }
  double delta_loglik_remove(const Vec2& c) {
    lump_image_.setZero();
    accumulate_lump_projection(lump_image_, task_.op, task_.lumpy, c, 1.0);
    return propose_shift();
  }
  void commit() { e_.swap(proposed_); }

  double log_bke_lambda() const { return sigma_inv_sv_.dot(e_) - half_svs_; }

 private:
  double propose_shift() {
    proposed_ = e_ + bank_.matrix * lump_image_;
    return 0.5 * (quad(e_) - quad(proposed_));
  }
  double quad(const Eigen::VectorXd& x) const { return x.dot(sigma_inv_ * x); }

  Eigen::VectorXd v_;
  const ChannelBank& bank_;
  const IoTask& task_;
  Eigen::MatrixXd sigma_inv_;
  Eigen::VectorXd sigma_inv_sv_;
  double half_svs_ = 0.0;
  Eigen::VectorXd e_, proposed_, lump_image_;
};

}  // namespace

double mcmc_io_statistic(const Eigen::VectorXd& g, const IoTask& task, const MCMCConfig& cfg,
                         McmcDiagnostics* diag, const LumpyState* init_state,
                         const ChainObserver& on_sample) {
  ImageSpaceBackend backend(g, task);
  return run_lumpy_chain(backend, task, cfg, diag, init_state, on_sample);
}

double mcmc_cio_statistic(const Eigen::VectorXd& v, const ChannelBank& bank, const IoTask& task,
                          const MCMCConfig& cfg, McmcDiagnostics* diag,
                          const LumpyState* init_state) {
  ChannelSpaceBackend backend(v, bank, task);
  return run_lumpy_chain(backend, task, cfg, diag, init_state, nullptr);
}

LumpyState greedy_lumpy_fit(const Eigen::VectorXd& g, const LumpyModelParams& lumpy,
                            const GaussianOperator& op, int max_lumps) {
  IoTask task;
  task.lumpy = lumpy;
  task.op = op;
  task.noise = NoiseModel(NoiseKind::iid_gaussian, 1.0);  // scale cancels in the argmax
  task.signal = Eigen::VectorXd::Zero(op.measurement_count());
  ImageSpaceBackend backend(g, task);
  return greedy_init_state(backend, task, max_lumps);
}

std::vector<double> mcmc_io_scores(const std::vector<ImageVector>& images, const IoTask& task,
                                   const MCMCConfig& cfg) {
  std::vector<double> out(images.size());
  parallel_for(images.size(), [&](std::size_t i) {
    MCMCConfig chain_cfg = cfg;
    chain_cfg.seed = seed_mix(cfg.seed, "io-chain", i);
    chain_cfg.warn_on_bad_acceptance = false;
    out[i] = mcmc_io_statistic(images[i].values, task, chain_cfg);
  });
  return out;
}

std::vector<double> mcmc_cio_scores(const std::vector<ImageVector>& images,
                                    const ChannelBank& bank, const IoTask& task,
                                    const MCMCConfig& cfg) {
  std::vector<double> out(images.size());
  parallel_for(images.size(), [&](std::size_t i) {
    MCMCConfig chain_cfg = cfg;
    chain_cfg.seed = seed_mix(cfg.seed, "cio-chain", i);
    chain_cfg.warn_on_bad_acceptance = false;
    const Eigen::VectorXd v = bank.matrix * images[i].values;
    if (chain_cfg.init == ChainInit::greedy) {
      // the measured image localizes the lumps far better than its D
      // channel projections; start the chain from the image-space fit
      // (initialization only, the chain still targets pr(theta | v, H0))
      const LumpyState init =
          greedy_lumpy_fit(images[i].values, task.lumpy, task.op, chain_cfg.max_lumps);
      out[i] = mcmc_cio_statistic(v, bank, task, chain_cfg, nullptr, &init);
    } else {
      out[i] = mcmc_cio_statistic(v, bank, task, chain_cfg);
    }
  });
  return out;
}

}  // namespace cgchan
