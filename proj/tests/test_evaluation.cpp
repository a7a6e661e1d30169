#include <doctest.h>

#include <cmath>

#include "cgchan/evaluation.hpp"
#include "cgchan/rng.hpp"

using namespace cgchan;

namespace {

ObserverScores make_scores(std::vector<double> h0, std::vector<double> h1) {
  ObserverScores s;
  s.t_h0 = std::move(h0);
  s.t_h1 = std::move(h1);
  s.observer_id = "test";
  return s;
}

// brute-force pair counting with half ties
double auc_pairs(const ObserverScores& s) {
  double sum = 0.0;
  for (double a : s.t_h0)
    for (double b : s.t_h1) sum += b > a ? 1.0 : (b == a ? 0.5 : 0.0);
  return sum / (s.t_h0.size() * s.t_h1.size());
}

}  // namespace

TEST_SUITE_BEGIN("evaluation");

TEST_CASE("auc: separated, tied, and interleaved fixtures") {
  CHECK(auc(make_scores({0, 1}, {2, 3})).auc == doctest::Approx(1.0));
  CHECK(auc(make_scores({5, 5, 5}, {5, 5})).auc == doctest::Approx(0.5));
  CHECK(auc(make_scores({0, 2}, {1, 3})).auc == doctest::Approx(0.75));
}

TEST_CASE("auc equals exhaustive pair counting on random score sets") {
  auto rng = make_rng(10);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> coarse(0, 4);  // forces ties
  for (int rep = 0; rep < 20; ++rep) {
    ObserverScores s;
    for (int i = 0; i < 40; ++i) s.t_h0.push_back(rep % 2 ? gauss(rng) : coarse(rng));
    for (int i = 0; i < 25; ++i) s.t_h1.push_back(rep % 2 ? gauss(rng) + 0.6 : coarse(rng) + 1);
    CHECK(auc(s).auc == doctest::Approx(auc_pairs(s)).epsilon(1e-12));
  }
}

TEST_CASE("auc complement identity and monotone-transform invariance") {
  auto rng = make_rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ObserverScores s;
  for (int i = 0; i < 30; ++i) s.t_h0.push_back(gauss(rng));
  for (int i = 0; i < 30; ++i) s.t_h1.push_back(gauss(rng) + 0.8);
  ObserverScores flipped = make_scores(s.t_h1, s.t_h0);
  CHECK(auc(s).auc + auc(flipped).auc == doctest::Approx(1.0).epsilon(1e-14));

  ObserverScores transformed = s;
  for (double& t : transformed.t_h0) t = std::exp(3.0 * t + 1.0);
  for (double& t : transformed.t_h1) t = std::exp(3.0 * t + 1.0);
  CHECK(auc(transformed).auc == doctest::Approx(auc(s).auc).epsilon(1e-14));
}

TEST_CASE("roc points are monotone from (0,0) to (1,1)") {
  auto rng = make_rng(12);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ObserverScores s;
  for (int i = 0; i < 50; ++i) s.t_h0.push_back(gauss(rng));
  for (int i = 0; i < 50; ++i) s.t_h1.push_back(gauss(rng) + 1.0);
  const auto summary = auc(s);
  REQUIRE(summary.roc_points.size() >= 2);
  CHECK(summary.roc_points.front() == std::make_pair(0.0, 0.0));
  CHECK(summary.roc_points.back() == std::make_pair(1.0, 1.0));
  for (std::size_t i = 1; i < summary.roc_points.size(); ++i) {
    CHECK(summary.roc_points[i].first >= summary.roc_points[i - 1].first);
    CHECK(summary.roc_points[i].second >= summary.roc_points[i - 1].second);
  }
}

TEST_CASE("auc rejects empty classes") {
  CHECK_THROWS(auc(make_scores({}, {1.0})));
  CHECK_THROWS(auc(make_scores({1.0}, {})));
}

TEST_CASE("bootstrap: reproducible, degenerate scores give zero stderr") {
  ObserverScores degenerate = make_scores(std::vector<double>(20, 1.0),
                                          std::vector<double>(20, 1.0));
  const auto summary = bootstrap_auc(degenerate, 200, 99);
  CHECK(summary.auc_stderr == 0.0);
  CHECK(summary.n_boot == 200);

  auto rng = make_rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ObserverScores s;
  for (int i = 0; i < 40; ++i) s.t_h0.push_back(gauss(rng));
  for (int i = 0; i < 40; ++i) s.t_h1.push_back(gauss(rng) + 1.0);
  const auto a = bootstrap_auc(s, 500, 4242);
  const auto b = bootstrap_auc(s, 500, 4242);
  CHECK(a.auc_stderr == b.auc_stderr);
  CHECK(a.percentile_lo == b.percentile_lo);
  CHECK(a.percentile_hi == b.percentile_hi);
  CHECK(a.percentile_lo <= a.auc);
  CHECK(a.percentile_hi >= a.auc);
  CHECK_THROWS(bootstrap_auc(s, 50, 1));
}

TEST_CASE("bootstrap stderr scales like 1/sqrt(n)") {
  auto rng = make_rng(14);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> stderrs;
  for (int n : {100, 400, 1600}) {
    ObserverScores s;
    for (int i = 0; i < n; ++i) s.t_h0.push_back(gauss(rng));
    for (int i = 0; i < n; ++i) s.t_h1.push_back(gauss(rng) + 1.0);
    stderrs.push_back(bootstrap_auc(s, 400, 7).auc_stderr);
  }
  // quadrupling n should roughly halve the stderr
  CHECK(stderrs[0] / stderrs[1] > 1.4);
  CHECK(stderrs[0] / stderrs[1] < 3.0);
  CHECK(stderrs[1] / stderrs[2] > 1.4);
  CHECK(stderrs[1] / stderrs[2] < 3.0);
}

TEST_CASE("snr_t: affine invariance and normal-theory AUC identity") {
  auto rng = make_rng(15);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ObserverScores s;
  const double shift = 1.2;
  for (int i = 0; i < 4000; ++i) s.t_h0.push_back(gauss(rng));
  for (int i = 0; i < 4000; ++i) s.t_h1.push_back(gauss(rng) + shift);
  const double snr = snr_t(s).snr_t;
  CHECK(snr == doctest::Approx(shift).epsilon(0.06));

  // AUC ~ Phi(SNR / sqrt(2)) for equal-variance Gaussian scores
  const double expected_auc = normal_cdf(snr / std::sqrt(2.0));
  CHECK(auc(s).auc == doctest::Approx(expected_auc).epsilon(0.02));

  ObserverScores scaled = s;
  for (double& t : scaled.t_h0) t = 3.5 * t - 2.0;
  for (double& t : scaled.t_h1) t = 3.5 * t - 2.0;
  CHECK(snr_t(scaled).snr_t == doctest::Approx(snr).epsilon(1e-12));
}

TEST_CASE("snr_t rejects degenerate inputs") {
  CHECK_THROWS(snr_t(make_scores({1.0}, {2.0, 3.0})));
  CHECK_THROWS(snr_t(make_scores({1.0, 1.0}, {2.0, 2.0})));  // zero pooled variance
}

TEST_CASE("high-frequency energy fraction ranks noisy images above smooth ones") {
  const int g = 16;
  Eigen::VectorXd smooth(g * g), noisy(g * g);
  auto rng = make_rng(16);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      smooth[i * g + j] = std::exp(-((i - 8.0) * (i - 8.0) + (j - 8.0) * (j - 8.0)) / 18.0);
      noisy[i * g + j] = gauss(rng);
    }
  CHECK(high_frequency_energy_fraction(noisy, g) >
        10.0 * high_frequency_energy_fraction(smooth, g));
  CHECK(high_frequency_energy_fraction(Eigen::VectorXd::Zero(g * g), g) == 0.0);
}

TEST_SUITE_END();
