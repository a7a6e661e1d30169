#include "cgchan/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cgchan/rng.hpp"

namespace cgchan {

namespace {

// Average-rank Mann-Whitney statistic, O(n log n).
double auc_value(const std::vector<double>& h0, const std::vector<double>& h1) {
  const std::size_t n0 = h0.size(), n1 = h1.size();
  std::vector<std::pair<double, int>> all;
  all.reserve(n0 + n1);
  for (double t : h0) all.emplace_back(t, 0);
  for (double t : h1) all.emplace_back(t, 1);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double rank_sum_h1 = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k)
      if (all[k].second == 1) rank_sum_h1 += avg_rank;
    i = j;
  }
  const double u1 = rank_sum_h1 - 0.5 * static_cast<double>(n1) * (static_cast<double>(n1) + 1.0);
  return u1 / (static_cast<double>(n0) * static_cast<double>(n1));
}

std::vector<std::pair<double, double>> empirical_roc(const std::vector<double>& h0,
                                                     const std::vector<double>& h1) {
  // Sweep the threshold down through the distinct score values; ties move
  // both coordinates at once, so the curve is monotone in both.
  std::vector<double> thresholds;
  thresholds.reserve(h0.size() + h1.size());
  thresholds.insert(thresholds.end(), h0.begin(), h0.end());
  thresholds.insert(thresholds.end(), h1.begin(), h1.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<double> s0 = h0, s1 = h1;
  std::sort(s0.begin(), s0.end(), std::greater<>());
  std::sort(s1.begin(), s1.end(), std::greater<>());

  std::vector<std::pair<double, double>> pts;
  pts.reserve(thresholds.size() + 1);
  pts.emplace_back(0.0, 0.0);
  std::size_t i0 = 0, i1 = 0;
  for (double tau : thresholds) {
    while (i0 < s0.size() && s0[i0] >= tau) ++i0;
    while (i1 < s1.size() && s1[i1] >= tau) ++i1;
    pts.emplace_back(static_cast<double>(i0) / static_cast<double>(s0.size()),
                     static_cast<double>(i1) / static_cast<double>(s1.size()));
  }
  if (pts.back() != std::make_pair(1.0, 1.0)) pts.emplace_back(1.0, 1.0);
  return pts;
}

}  // namespace

RocSummary auc(const ObserverScores& scores) {
  if (scores.t_h0.empty() || scores.t_h1.empty())
    throw std::invalid_argument("auc: both classes must be nonempty");
  RocSummary s;
  s.auc = auc_value(scores.t_h0, scores.t_h1);
  s.roc_points = empirical_roc(scores.t_h0, scores.t_h1);
  return s;
}

RocSummary bootstrap_auc(const ObserverScores& scores, int n_boot, std::uint64_t seed) {
  if (n_boot < 100) throw std::invalid_argument("bootstrap_auc: n_boot must be >= 100");
  RocSummary s = auc(scores);
  s.n_boot = n_boot;

  const std::size_t n0 = scores.t_h0.size(), n1 = scores.t_h1.size();
  std::vector<double> boot_aucs(static_cast<std::size_t>(n_boot));
  std::vector<double> r0(n0), r1(n1);
  for (int b = 0; b < n_boot; ++b) {
    auto rng = make_rng(seed_mix(seed, "bootstrap", static_cast<std::uint64_t>(b)));
    std::uniform_int_distribution<std::size_t> pick0(0, n0 - 1);
    std::uniform_int_distribution<std::size_t> pick1(0, n1 - 1);
    for (std::size_t i = 0; i < n0; ++i) r0[i] = scores.t_h0[pick0(rng)];
    for (std::size_t i = 0; i < n1; ++i) r1[i] = scores.t_h1[pick1(rng)];
    boot_aucs[static_cast<std::size_t>(b)] = auc_value(r0, r1);
  }

  const double mean = std::accumulate(boot_aucs.begin(), boot_aucs.end(), 0.0) / n_boot;
  double var = 0.0;
  for (double a : boot_aucs) var += (a - mean) * (a - mean);
  s.auc_stderr = std::sqrt(var / (n_boot - 1));

  std::sort(boot_aucs.begin(), boot_aucs.end());
  auto percentile = [&](double p) {
    const double h = p * (n_boot - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, static_cast<std::size_t>(n_boot - 1));
    const double frac = h - static_cast<double>(lo);
    return boot_aucs[lo] * (1.0 - frac) + boot_aucs[hi] * frac;
  };
  s.percentile_lo = percentile(0.025);
  s.percentile_hi = percentile(0.975);
  return s;
}

SnrSummary snr_t(const ObserverScores& scores) {
  if (scores.t_h0.size() < 2 || scores.t_h1.size() < 2)
    throw std::invalid_argument("snr_t: needs >= 2 scores per class");
  auto moments = [](const std::vector<double>& t) {
    const double n = static_cast<double>(t.size());
    const double mean = std::accumulate(t.begin(), t.end(), 0.0) / n;
    double var = 0.0;
    for (double x : t) var += (x - mean) * (x - mean);
    return std::make_pair(mean, var / (n - 1.0));
  };
  const auto [m0, v0] = moments(scores.t_h0);
  const auto [m1, v1] = moments(scores.t_h1);
  const double pooled = 0.5 * (v0 + v1);
  if (!(pooled > 0.0)) throw std::runtime_error("snr_t: zero pooled variance");
  return SnrSummary{(m1 - m0) / std::sqrt(pooled)};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double high_frequency_energy_fraction(const Eigen::VectorXd& image, int grid) {
  if (image.size() != static_cast<Eigen::Index>(grid) * grid)
    throw std::invalid_argument("high_frequency_energy_fraction: size != grid^2");
  const double total = image.squaredNorm();
  if (!(total > 0.0)) return 0.0;
  auto at = [&](int i, int j) {
    i = std::clamp(i, 0, grid - 1);  // reflective border
    j = std::clamp(j, 0, grid - 1);
    return image[static_cast<Eigen::Index>(i) * grid + j];
  };
  double hf = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      double smooth = 0.0;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) smooth += at(i + di, j + dj);
      smooth /= 9.0;
      const double d = at(i, j) - smooth;
      hf += d * d;
    }
  }
  return hf / total;
}

}  // namespace cgchan
