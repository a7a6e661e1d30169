#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "cgchan/evaluation.hpp"
#include "cgchan/observers.hpp"
#include "cgchan/rng.hpp"
#include "support/test_util.hpp"
#include "support/toy_posterior.hpp"

using namespace cgchan;

namespace {

CovarianceModel wrap_cov(const Eigen::MatrixXd& m) {
  CovarianceModel K;
  K.matrix = m;
  return K;
}

MeanDifference wrap_delta(const Eigen::VectorXd& v) {
  MeanDifference d;
  d.vector = v;
  return d;
}

}  // namespace

TEST_SUITE_BEGIN("observers");

TEST_CASE("hotelling template: scaled identity gives delta / c") {
  auto rng = make_rng(1);
  const Eigen::VectorXd delta = testsupport::random_vector(10, rng);
  const auto w = hotelling_template(wrap_cov(4.0 * Eigen::MatrixXd::Identity(10, 10)),
                                    wrap_delta(delta));
  CHECK((w.weights - delta / 4.0).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("hotelling template: dense-solve residual below 1e-10 on random SPD") {
  const int m = 64;
  auto rng = make_rng(2);
  const Eigen::MatrixXd K = testsupport::random_spd(m, testsupport::log_spaced(m, 0.1, 10.0), rng);
  const Eigen::VectorXd delta = testsupport::random_vector(m, rng);
  const auto w = hotelling_template(wrap_cov(K), wrap_delta(delta));
  CHECK((K * w.weights - delta).norm() / delta.norm() < 1e-10);
}

TEST_CASE("hotelling template: singular covariance fails without ridge, solves with it") {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(6, 6);
  K(0, 0) = 1.0;  // rank 1
  const Eigen::VectorXd delta = Eigen::VectorXd::Ones(6);
  CHECK_THROWS_WITH_AS(hotelling_template(wrap_cov(K), wrap_delta(delta), false),
                       doctest::Contains("singular"), std::runtime_error);
  CHECK_NOTHROW(hotelling_template(wrap_cov(K), wrap_delta(delta), true));
}

TEST_CASE("channelized Hotelling SNR with a full orthonormal bank equals the HO SNR") {
  const int m = 64;
  auto rng = make_rng(3);
  const Eigen::MatrixXd Km =
      testsupport::random_spd(m, testsupport::log_spaced(m, 1e-5, 1.0), rng);
  const auto K = wrap_cov(Km);
  const auto delta = wrap_delta(testsupport::random_vector(m, rng));
  const auto bank = build_cg_channels(K, delta, m);
  REQUIRE(bank.channel_count() == m);
  const double cho_snr = channelized_hotelling_snr(K, delta, bank);
  const double ho_snr = hotelling_snr(K, delta);
  CHECK(std::abs(cho_snr - ho_snr) / ho_snr < 1e-6);
}

TEST_CASE("exact channelized SNR is non-decreasing in the channel count") {
  const int m = 48;
  auto rng = make_rng(4);
  const auto K = wrap_cov(
      testsupport::random_spd(m, testsupport::log_spaced(m, 1e-4, 1.0), rng));
  const auto delta = wrap_delta(testsupport::random_vector(m, rng));
  const auto bank = build_cg_channels(K, delta, m);
  double prev = 0.0;
  for (int d = 1; d <= bank.channel_count(); ++d) {
    const double snr = channelized_hotelling_snr(K, delta, bank.prefix(d));
    CHECK(snr >= prev * (1.0 - 1e-9));
    prev = snr;
  }
  CHECK(prev == doctest::Approx(hotelling_snr(K, delta)).epsilon(1e-6));
}

TEST_CASE("cho_template: D = 1 with channel s/|s| is a positive matched filter") {
  auto rng = make_rng(5);
  const int m = 25;
  Eigen::VectorXd s = testsupport::random_vector(m, rng);
  ChannelBank bank;
  bank.matrix = (s / s.norm()).transpose();
  LabeledDataset ds;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < 60; ++k) {
    ImageVector img;
    img.values = testsupport::random_vector(m, rng);
    img.label = Label::H0;
    ds.images.push_back(img);
    img.values = testsupport::random_vector(m, rng) + s;
    img.label = Label::H1;
    ds.images.push_back(img);
  }
  const auto w = cho_template(bank, ds);
  REQUIRE(w.weights.size() == 1);
  CHECK(w.space == TemplateSpace::channel);
  CHECK(w.weights[0] > 0.0);
}

TEST_CASE("cho_template rejects too many channels for the training size") {
  auto rng = make_rng(6);
  ChannelBank bank;
  bank.matrix = Eigen::MatrixXd::Identity(5, 8);
  LabeledDataset ds;
  for (int k = 0; k < 10; ++k) {  // 5 per class; D = 5 > 5 - 1
    ImageVector img;
    img.values = testsupport::random_vector(8, rng);
    img.label = k % 2 ? Label::H1 : Label::H0;
    ds.images.push_back(img);
  }
  CHECK_THROWS(cho_template(bank, ds));
}

TEST_CASE("apply_linear: zero template scores zero and gives AUC 1/2") {
  LinearTemplate w;
  w.weights = Eigen::VectorXd::Zero(9);
  std::vector<ImageVector> images(8);
  for (std::size_t i = 0; i < images.size(); ++i) {
    images[i].values = Eigen::VectorXd::Constant(9, static_cast<double>(i));
    images[i].label = i % 2 ? Label::H1 : Label::H0;
  }
  const auto scores = apply_linear(w, images, "zero");
  for (double t : scores.t_h0) CHECK(t == 0.0);
  for (double t : scores.t_h1) CHECK(t == 0.0);
  CHECK(auc(scores).auc == doctest::Approx(0.5));
}

TEST_CASE("apply_linear: positive scaling leaves the ROC/AUC unchanged") {
  auto rng = make_rng(7);
  LinearTemplate w1, w2;
  w1.weights = testsupport::random_vector(12, rng);
  w2.weights = 7.5 * w1.weights;
  std::vector<ImageVector> images(40);
  for (std::size_t i = 0; i < images.size(); ++i) {
    images[i].values = testsupport::random_vector(12, rng);
    images[i].label = i % 2 ? Label::H1 : Label::H0;
  }
  CHECK(auc(apply_linear(w1, images, "a")).auc ==
        doctest::Approx(auc(apply_linear(w2, images, "b")).auc).epsilon(1e-14));
}

TEST_CASE("template = s on noise-free paired data separates classes by s's") {
  auto rng = make_rng(8);
  const Eigen::VectorXd s = testsupport::random_vector(15, rng);
  LinearTemplate w;
  w.weights = s;
  std::vector<ImageVector> images;
  for (int k = 0; k < 10; ++k) {
    ImageVector img;
    img.values = testsupport::random_vector(15, rng);
    img.label = Label::H0;
    images.push_back(img);
    img.values = img.values + s;
    img.label = Label::H1;
    images.push_back(img);
  }
  const auto scores = apply_linear(w, images, "mf");
  double mean0 = 0.0, mean1 = 0.0;
  for (double t : scores.t_h0) mean0 += t / scores.t_h0.size();
  for (double t : scores.t_h1) mean1 += t / scores.t_h1.size();
  CHECK(mean1 - mean0 == doctest::Approx(s.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("BKE log likelihood ratio: closed form and density-ratio oracle") {
  const NoiseModel noise(NoiseKind::iid_gaussian, 1.5);
  Eigen::VectorXd b(4), s(4);
  b << 1.0, -2.0, 0.5, 3.0;
  s << 0.4, 0.1, -0.6, 1.0;
  const double half = 0.5 * s.squaredNorm() / (1.5 * 1.5);
  CHECK(bke_log_likelihood_ratio(b, b, s, noise) == doctest::Approx(-half).epsilon(1e-13));
  CHECK(bke_log_likelihood_ratio((b + s).eval(), b, s, noise) ==
        doctest::Approx(half).epsilon(1e-13));
  CHECK(bke_log_likelihood_ratio(b, b, Eigen::VectorXd::Zero(4), noise) == 0.0);

  // explicit Gaussian densities on a length-4 vector
  auto rng = make_rng(9);
  const Eigen::VectorXd g = b + 1.5 * testsupport::random_vector(4, rng);
  auto log_density = [&](const Eigen::VectorXd& mean) {
    double acc = -2.0 * std::log(2.0 * M_PI * 1.5 * 1.5);
    acc -= (g - mean).squaredNorm() / (2.0 * 1.5 * 1.5);
    return acc;
  };
  const double oracle = log_density(b + s) - log_density(b);
  CHECK(bke_log_likelihood_ratio(g, b, s, noise) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("pinned chain reduces the IO statistic to the closed-form BKE value") {
  IoTask task = testsupport::toy_task();
  auto rng = make_rng(10);
  task.signal = testsupport::random_vector(64, rng);
  const Eigen::VectorXd g = testsupport::random_vector(64, rng);

  MCMCConfig cfg;
  cfg.n_steps = 2000;
  cfg.burn_in = 100;
  cfg.proposal = {1.0, 1.0, 0.0, 0.0};  // moves only; empty init state never changes
  cfg.seed = 77;
  cfg.warn_on_bad_acceptance = false;
  const LumpyState empty;
  const double t = mcmc_io_statistic(g, task, cfg, nullptr, &empty);
  const double expected =
      bke_log_likelihood_ratio(g, Eigen::VectorXd::Zero(64), task.signal, task.noise);
  CHECK(t == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("chain lump-count marginal matches the quadrature posterior (reduced toy)") {
  IoTask task = testsupport::toy_task();
  // a 2-lump ground truth with mild noise
  LumpyState truth;
  truth.centers = {{2.8, 3.2}, {5.5, 4.9}};
  Eigen::VectorXd g = Eigen::VectorXd::Zero(64);
  accumulate_lump_projection(g, task.op, task.lumpy, truth.centers[0], 1.0);
  accumulate_lump_projection(g, task.op, task.lumpy, truth.centers[1], 1.0);
  auto rng = make_rng(11);
  std::normal_distribution<double> gauss(0.0, task.noise.std_dev);
  for (int i = 0; i < 64; ++i) g[i] += gauss(rng);

  const int nmax = 3;
  const auto quad = testsupport::quadrature_count_marginal(g, task, nmax, 8);

  MCMCConfig cfg;
  cfg.n_steps = 120000;
  cfg.burn_in = 2000;
  cfg.proposal.move_std = task.lumpy.lump_width;
  cfg.seed = 303;
  cfg.max_lumps = nmax;
  cfg.warn_on_bad_acceptance = false;
  const auto chain = testsupport::chain_count_marginal(g, task, cfg, nmax);

  CHECK(testsupport::total_variation(quad, chain) < 0.1);
}

TEST_CASE("CIO with the full orthonormal bank reproduces the IO statistic") {
  IoTask task = testsupport::toy_task();
  auto rng = make_rng(12);
  task.signal = testsupport::random_vector(64, rng);
  Eigen::VectorXd g = testsupport::random_vector(64, rng) * task.noise.std_dev;

  // full-rank orthonormal bank from a CG build on a slow-converging system
  CovarianceModel K;
  K.matrix = testsupport::random_spd(64, testsupport::log_spaced(64, 1e-6, 1.0), rng);
  MeanDifference delta;
  delta.vector = testsupport::random_vector(64, rng);
  const auto bank = build_cg_channels(K, delta, 64);
  REQUIRE(bank.channel_count() == 64);

  MCMCConfig cfg;
  cfg.n_steps = 4000;
  cfg.burn_in = 200;
  cfg.proposal.move_std = task.lumpy.lump_width;
  cfg.seed = 55;
  cfg.max_lumps = 6;
  cfg.warn_on_bad_acceptance = false;

  const double t_io = mcmc_io_statistic(g, task, cfg);
  const double t_cio = mcmc_cio_statistic(bank.matrix * g, bank, task, cfg);
  CHECK(t_cio == doctest::Approx(t_io).epsilon(1e-6));
}

TEST_CASE("CIO does not beat IO on the toy task (data processing, statistical)") {
  IoTask task = testsupport::toy_task();
  const auto sig = project_signal(
      GaussianMixtureSignal{{{0.5, {4.0, 4.0}, {1.0, 0.8}}}}, task.op);
  task.signal = sig.values;

  TaskConfig gen{task.lumpy, GaussianMixtureSignal{{{0.5, {4.0, 4.0}, {1.0, 0.8}}}}, task.op,
                 task.noise};
  const auto test_set = generate_dataset(50, gen, 4321);

  // channels from the exact-model CMD covariance
  const auto bgs = generate_noiseless_backgrounds(800, task.lumpy, task.op, 99);
  const auto K = cmd_covariance(bgs, task.noise);
  MeanDifference delta;
  delta.vector = task.signal;
  const auto bank = build_cg_channels(K, delta, 8);

  MCMCConfig cfg;
  cfg.n_steps = 6000;
  cfg.burn_in = 300;
  cfg.proposal.move_std = task.lumpy.lump_width;
  cfg.seed = 808;
  cfg.max_lumps = 8;
  cfg.warn_on_bad_acceptance = false;

  const auto io_scores = mcmc_io_scores(test_set.images, task, cfg);
  const auto cio_scores = mcmc_cio_scores(test_set.images, bank, task, cfg);
  const auto io_auc = bootstrap_auc(split_scores(io_scores, test_set.images, "io"), 300, 1);
  const auto cio_auc = bootstrap_auc(split_scores(cio_scores, test_set.images, "cio"), 300, 2);
  const double slack = 2.0 * std::hypot(io_auc.auc_stderr, cio_auc.auc_stderr);
  CHECK(cio_auc.auc <= io_auc.auc + slack);
}

TEST_CASE("MCMC config validation") {
  MCMCConfig cfg;
  cfg.burn_in = cfg.n_steps;
  CHECK_THROWS(cfg.validate());
  cfg = MCMCConfig{};
  cfg.proposal.birth_prob = 0.5;  // sums to 1.4
  CHECK_THROWS(cfg.validate());
  CHECK(mcmc_preset("paper").n_steps == 200000);
  CHECK(mcmc_preset("paper").burn_in == 1000);
  CHECK(mcmc_preset("desk").n_steps == 20000);
  CHECK_THROWS(mcmc_preset("weekend"));
}

TEST_SUITE_END();
