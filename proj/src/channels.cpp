#include "cgchan/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace cgchan {

std::string to_string(ChannelMethod m) {
  switch (m) {
    case ChannelMethod::cg: return "cg";
    case ChannelMethod::cg_cmd: return "cg_cmd";
    case ChannelMethod::pls: return "pls";
  }
  return "unknown";
}

ChannelMethod channel_method_from_string(const std::string& s) {
  if (s == "cg") return ChannelMethod::cg;
  if (s == "cg_cmd") return ChannelMethod::cg_cmd;
  if (s == "pls") return ChannelMethod::pls;
  throw std::invalid_argument("unknown channel method: " + s);
}

ChannelBank ChannelBank::prefix(int d) const {
  if (d < 1 || d > channel_count())
    throw std::invalid_argument("ChannelBank::prefix: requested count out of range");
  ChannelBank out = *this;
  out.matrix = matrix.topRows(d).eval();
  return out;
}

ChannelBank build_cg_channels(const CovarianceModel& K, const MeanDifference& delta, int D,
                              const CgBuildOptions& opts) {
  const Eigen::Index m = K.matrix.rows();
  if (K.matrix.cols() != m) throw std::invalid_argument("build_cg_channels: K must be square");
  if (delta.vector.size() != m)
    throw std::invalid_argument("build_cg_channels: delta size does not match K");
  if (D < 1 || D > m) throw std::invalid_argument("build_cg_channels: need 1 <= D <= M");
  if (!(opts.tau_orth > 0.0) || !(opts.tau_orth < 1.0))
    throw std::invalid_argument("build_cg_channels: tau_orth must be in (0, 1)");

  const double r0_norm = delta.vector.norm();
  if (!(r0_norm > 0.0)) throw std::invalid_argument("build_cg_channels: delta is zero");

  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd r = delta.vector;
  Eigen::VectorXd d = r;
  double rr = r.squaredNorm();

  std::vector<Eigen::VectorXd> channels;
  channels.reserve(D);
  channels.push_back(r / r0_norm);

  ChannelBank bank;
  bank.method = K.provenance == CovarianceProvenance::cmd ? ChannelMethod::cg_cmd
                                                          : ChannelMethod::cg;
  bank.tau_orth = opts.tau_orth;
  bank.build_log.initial_residual_norm = r0_norm;
  if (opts.record_template_history) bank.build_log.template_history.push_back(w);

  Eigen::VectorXd kd(m);
  for (int i = 0; i < D; ++i) {
    kd.noalias() = K.matrix.selfadjointView<Eigen::Lower>() * d;
    const double curvature = d.dot(kd);
    if (!(curvature > 0.0))
      throw std::runtime_error("build_cg_channels: non-positive curvature d'Kd = " +
                               std::to_string(curvature) + " at iteration " + std::to_string(i));
    CgIterationRecord rec;
    rec.alpha = rr / curvature;
    w += rec.alpha * d;
    r -= rec.alpha * kd;

    double r_norm = r.norm();
    if (opts.reorthogonalize && r_norm > 0.0) {
      double max_overlap = 0.0;
      for (const auto& t : channels)
        max_overlap = std::max(max_overlap, std::abs(t.dot(r)) / r_norm);
      if (max_overlap > opts.tau_orth) {
        for (const auto& t : channels) r -= t.dot(r) * t;
        r_norm = r.norm();
        rec.reorthogonalized = true;
      }
    }
    rec.residual_norm = r_norm;

    if (opts.record_template_history) bank.build_log.template_history.push_back(w);

    // 1e-300 guard: an exactly-vanished residual has no direction left even
    // when early termination is disabled (convergence_tol = 0)
    if (r_norm < opts.convergence_tol * r0_norm || r_norm < 1e-300) {
      bank.build_log.iterations.push_back(rec);
      break;  // exact convergence: no further channels to emit
    }
    if (i + 1 < D) channels.push_back(r / r_norm);

    const double rr_next = r.squaredNorm();
    rec.beta = rr_next / rr;
    d = r + rec.beta * d;
    rr = rr_next;
    bank.build_log.iterations.push_back(rec);
  }

  bank.truncated = static_cast<int>(channels.size()) < D;
  bank.matrix.resize(static_cast<Eigen::Index>(channels.size()), m);
  for (std::size_t i = 0; i < channels.size(); ++i)
    bank.matrix.row(static_cast<Eigen::Index>(i)) = channels[i].transpose();
  bank.build_log.final_template = std::move(w);
  return bank;
}

ChannelBank build_pls_channels(const LabeledDataset& dataset, int D) {
  if (D < 1) throw std::invalid_argument("build_pls_channels: D must be >= 1");
  const int n0 = dataset.count(Label::H0);
  const int n1 = dataset.count(Label::H1);
  if (n0 == 0 || n1 == 0)
    throw std::invalid_argument("build_pls_channels: both classes must be present");
  const Eigen::Index n = static_cast<Eigen::Index>(dataset.images.size());
  const Eigen::Index m = dataset.images[0].values.size();

  // columns = images
  Eigen::MatrixXd X(m, n);
  Eigen::VectorXd y(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    X.col(j) = dataset.images[static_cast<std::size_t>(j)].values;
    y[j] = dataset.images[static_cast<std::size_t>(j)].label == Label::H1 ? 1.0 : -1.0;
  }
  const Eigen::VectorXd xmean = X.rowwise().mean();
  X.colwise() -= xmean;
  y.array() -= y.mean();

  ChannelBank bank;
  bank.method = ChannelMethod::pls;
  bank.matrix.resize(D, m);

  int extracted = 0;
  double first_wnorm = 0.0;
  for (int k = 0; k < D; ++k) {
    Eigen::VectorXd wk = X * y;  // cross-covariance direction
    const double wnorm = wk.norm();
    if (k == 0) first_wnorm = wnorm;
    // relative cutoff: deflation of rank-exhausted data leaves only round-off
    if (!(wnorm > 1e-10 * first_wnorm)) {
      if (k == 0) throw std::runtime_error("build_pls_channels: zero cross-covariance direction");
      break;
    }
    wk /= wnorm;
    Eigen::VectorXd scores = X.transpose() * wk;  // n
    const double ss = scores.squaredNorm();
    if (!(ss > 0.0)) break;
    bank.matrix.row(extracted++) = wk.transpose();
    // deflate the images against the component scores
    Eigen::VectorXd loading = (X * scores) / ss;
    X.noalias() -= loading * scores.transpose();
  }
  if (extracted < D) {
    bank.matrix.conservativeResize(extracted, m);
    bank.truncated = true;
  }
  return bank;
}

Eigen::VectorXd channelize(const ChannelBank& bank, const Eigen::VectorXd& image) {
  if (image.size() != bank.matrix.cols())
    throw std::invalid_argument("channelize: image dimension does not match bank");
  return bank.matrix * image;
}

Eigen::MatrixXd channelize_all(const ChannelBank& bank, const std::vector<ImageVector>& images) {
  Eigen::MatrixXd v(bank.channel_count(), static_cast<Eigen::Index>(images.size()));
  for (std::size_t j = 0; j < images.size(); ++j) {
    if (images[j].values.size() != bank.matrix.cols())
      throw std::invalid_argument("channelize_all: image dimension does not match bank");
    v.col(static_cast<Eigen::Index>(j)).noalias() = bank.matrix * images[j].values;
  }
  return v;
}

Eigen::MatrixXd gram_matrix(const ChannelBank& bank) {
  return bank.matrix * bank.matrix.transpose();
}

}  // namespace cgchan
