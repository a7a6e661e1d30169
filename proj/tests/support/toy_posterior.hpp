#pragma once

// Brute-force lump-count posterior for a small grid: the continuous position
// integrals are replaced by exhaustive midpoint quadrature on a coarse
// lattice. Independent oracle for the MCMC sampler's N_b marginal.

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "cgchan/imaging.hpp"
#include "cgchan/observers.hpp"

namespace testsupport {

// Small, softly-informative task on an 8x8 grid: per-lump image SNR around
// 2-3 so the count posterior spreads over several values and lump positions
// stay fuzzy at the lattice scale.
inline cgchan::IoTask toy_task() {
  cgchan::IoTask task;
  task.lumpy = cgchan::LumpyModelParams(1.0, 0.55, 2.2);
  task.op = cgchan::GaussianOperator(cgchan::FieldOfView(8.0, 8.0, 8), 1.2, 10.0);
  task.noise = cgchan::NoiseModel(cgchan::NoiseKind::iid_gaussian, 8.0);
  task.signal = Eigen::VectorXd::Zero(64);  // unused by the marginal
  return task;
}

// P(N_b = n | g) for n = 0..nmax, integrating lump positions over an
// L x L midpoint lattice. Exact up to quadrature error and the shared
// truncation of the count support at nmax.
inline std::vector<double> quadrature_count_marginal(const Eigen::VectorXd& g,
                                                     const cgchan::IoTask& task, int nmax,
                                                     int lattice) {
  const int q = lattice * lattice;
  const double px = task.op.fov.extent_x / lattice;
  const double py = task.op.fov.extent_y / lattice;
  const double inv_two_var = 0.5 / (task.noise.std_dev * task.noise.std_dev);

  // per-lattice-point lump images, data overlaps c_i = g' d_i, pair matrix
  std::vector<Eigen::VectorXd> lump(q);
  Eigen::VectorXd c(q);
  for (int a = 0; a < lattice; ++a) {
    for (int b = 0; b < lattice; ++b) {
      const int i = a * lattice + b;
      lump[i] = Eigen::VectorXd::Zero(g.size());
      const cgchan::Vec2 center{(b + 0.5) * px, (a + 0.5) * py};
      cgchan::accumulate_lump_projection(lump[i], task.op, task.lumpy, center, 1.0);
      c[i] = g.dot(lump[i]);
    }
  }
  Eigen::MatrixXd pair(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j <= i; ++j) pair(i, j) = pair(j, i) = lump[i].dot(lump[j]);

  // relative likelihood of a lump tuple:
  //   exp(-(|g - sum d|^2 - |g|^2)/(2 s^2)) = exp((2 sum c - sum pair)/(2 s^2))
  auto tuple_ll = [&](const std::vector<int>& idx) {
    double twice_c = 0.0, pp = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      twice_c += 2.0 * c[idx[a]];
      for (std::size_t b = 0; b < idx.size(); ++b) pp += pair(idx[a], idx[b]);
    }
    return std::exp((twice_c - pp) * inv_two_var);
  };

  // enumerate sorted tuples with repetition; multiplicity = n!/prod(m_k!)
  std::vector<double> sums(nmax + 1, 0.0);
  sums[0] = 1.0;
  std::vector<int> idx;
  auto recurse = [&](auto&& self, int depth, int start, double mult_num) -> void {
    for (int i = start; i < q; ++i) {
      idx.push_back(i);
      // multiplicity bookkeeping: count of trailing equal indices
      int run = 0;
      for (auto it = idx.rbegin(); it != idx.rend() && *it == i; ++it) ++run;
      const double mult = mult_num * static_cast<double>(idx.size()) / run;
      sums[static_cast<int>(idx.size())] += mult * tuple_ll(idx);
      if (depth > 1) self(self, depth - 1, i, mult);
      idx.pop_back();
    }
  };
  if (nmax >= 1) recurse(recurse, nmax, 0, 1.0);

  // prior Pois(n | Nbar) with uniform positions; cell measure px*py per lump
  const double volume = task.op.fov.area();
  const double nbar = task.lumpy.mean_lump_count;
  std::vector<double> post(nmax + 1);
  double pois = std::exp(-nbar);
  double total = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    post[n] = pois * std::pow(px * py / volume, n) * sums[n];
    total += post[n];
    pois *= nbar / (n + 1);
  }
  for (double& v : post) v /= total;
  return post;
}

inline std::vector<double> chain_count_marginal(const Eigen::VectorXd& g,
                                                const cgchan::IoTask& task,
                                                const cgchan::MCMCConfig& cfg, int nmax) {
  std::vector<double> counts(nmax + 1, 0.0);
  long total = 0;
  cgchan::mcmc_io_statistic(g, task, cfg, nullptr, nullptr,
                            [&](const cgchan::LumpyState& s) {
                              counts[std::min(s.lump_count(), nmax)] += 1.0;
                              ++total;
                            });
  for (double& v : counts) v /= static_cast<double>(total);
  return counts;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

}  // namespace testsupport
