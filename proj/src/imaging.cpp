#include "cgchan/imaging.hpp"

#include <cmath>
#include <stdexcept>

#include "cgchan/parallel.hpp"
#include "cgchan/rng.hpp"

namespace cgchan {

GaussianOperator::GaussianOperator(const FieldOfView& f, double w, double h)
    : fov(f), sensitivity_width(w), sensitivity_height(h) {
  if (!(w > 0.0)) throw std::invalid_argument("GaussianOperator: width must be > 0");
  if (!(h > 0.0)) throw std::invalid_argument("GaussianOperator: height must be > 0");
}

NoiseModel::NoiseModel(NoiseKind k, double sigma) : kind(k), std_dev(sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("NoiseModel: std_dev must be > 0");
}

int LabeledDataset::count(Label l) const {
  int n = 0;
  for (const auto& img : images)
    if (img.label == l) ++n;
  return n;
}

void accumulate_lump_projection(Eigen::VectorXd& image, const GaussianOperator& op,
                                const LumpyModelParams& params, const Vec2& center,
                                double sign) {
  const int g = op.fov.grid_size;
  const double s2 = params.lump_width * params.lump_width;
  const double w2 = op.sensitivity_width * op.sensitivity_width;
  const double v = s2 + w2;
  const double amp = sign * params.lump_amplitude * op.sensitivity_height * s2 / v;
  const double inv_two_v = 1.0 / (2.0 * v);

  // The kernel is separable in x and y: 2G exp calls instead of G^2.
  Eigen::VectorXd ex(g), ey(g);
  const double px = op.fov.pitch_x();
  const double py = op.fov.pitch_y();
  for (int j = 0; j < g; ++j) {
    const double dx = (j + 0.5) * px - center[0];
    ex[j] = std::exp(-dx * dx * inv_two_v);
  }
  for (int i = 0; i < g; ++i) {
    const double dy = (i + 0.5) * py - center[1];
    ey[i] = std::exp(-dy * dy * inv_two_v);
  }
  for (int i = 0; i < g; ++i) {
    const double row = amp * ey[i];
    double* out = image.data() + static_cast<std::ptrdiff_t>(i) * g;
    for (int j = 0; j < g; ++j) out[j] += row * ex[j];
  }
}

ImageVector project_background(const LumpyState& state, const LumpyModelParams& params,
                               const GaussianOperator& op) {
  ImageVector img;
  img.values = Eigen::VectorXd::Zero(op.measurement_count());
  img.label = Label::unlabeled;
  img.provenance = Provenance::noiseless_background;
  for (const auto& c : state.centers)
    accumulate_lump_projection(img.values, op, params, c, 1.0);
  return img;
}

ImageVector project_signal(const GaussianMixtureSignal& signal, const GaussianOperator& op) {
  signal.validate();
  const int g = op.fov.grid_size;
  const double w2 = op.sensitivity_width * op.sensitivity_width;
  ImageVector img;
  img.values = Eigen::VectorXd::Zero(op.measurement_count());
  img.label = Label::unlabeled;
  img.provenance = Provenance::noiseless_signal;

  Eigen::VectorXd ex(g), ey(g);
  for (const auto& c : signal.components) {
    const double vx = c.width[0] * c.width[0] + w2;
    const double vy = c.width[1] * c.width[1] + w2;
    const double amp = c.amplitude * op.sensitivity_height * c.width[0] * c.width[1] /
                       std::sqrt(vx * vy);
    for (int j = 0; j < g; ++j) {
      const double dx = (j + 0.5) * op.fov.pitch_x() - c.center[0];
      ex[j] = std::exp(-dx * dx / (2.0 * vx));
    }
    for (int i = 0; i < g; ++i) {
      const double dy = (i + 0.5) * op.fov.pitch_y() - c.center[1];
      ey[i] = std::exp(-dy * dy / (2.0 * vy));
    }
    for (int i = 0; i < g; ++i) {
      const double row = amp * ey[i];
      double* out = img.values.data() + static_cast<std::ptrdiff_t>(i) * g;
      for (int j = 0; j < g; ++j) out[j] += row * ex[j];
    }
  }
  return img;
}

ImageVector add_noise(const ImageVector& image, const NoiseModel& noise, std::mt19937_64& rng) {
  if (image.provenance == Provenance::measured)
    throw std::invalid_argument("add_noise: input already carries noise");
  if (noise.kind != NoiseKind::iid_gaussian)
    throw std::invalid_argument("add_noise: unsupported noise kind");
  ImageVector out;
  out.values.resize(image.values.size());
  out.label = image.label;
  out.provenance = Provenance::measured;
  std::normal_distribution<double> gauss(0.0, noise.std_dev);
  for (Eigen::Index m = 0; m < image.values.size(); ++m)
    out.values[m] = image.values[m] + gauss(rng);
  return out;
}

LabeledDataset generate_dataset(int n_per_class, const TaskConfig& task, std::uint64_t seed) {
  if (n_per_class < 1) throw std::invalid_argument("generate_dataset: n_per_class must be >= 1");
  const ImageVector sig = project_signal(task.signal, task.op);
  if (sig.values.size() != task.op.measurement_count())
    throw std::invalid_argument("generate_dataset: signal / operator grid mismatch");

  LabeledDataset ds;
  ds.seed = seed;
  ds.grid = task.op.fov.grid_size;
  ds.images.resize(2 * static_cast<std::size_t>(n_per_class));

  parallel_for(ds.images.size(), [&](std::size_t i) {
    const bool signal_present = i >= static_cast<std::size_t>(n_per_class);
    auto bg_rng = make_rng(seed_mix(seed, "background", i));
    auto noise_rng = make_rng(seed_mix(seed, "noise", i));
    const LumpyState state = sample_lumpy_state(task.lumpy, task.op.fov, bg_rng);
    ImageVector noiseless = project_background(state, task.lumpy, task.op);
    if (signal_present) noiseless.values += sig.values;
    noiseless.label = signal_present ? Label::H1 : Label::H0;
    ImageVector g = add_noise(noiseless, task.noise, noise_rng);
    g.label = noiseless.label;
    ds.images[i] = std::move(g);
  });
  return ds;
}

std::vector<ImageVector> generate_noiseless_backgrounds(int n, const LumpyModelParams& params,
                                                        const GaussianOperator& op,
                                                        std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_noiseless_backgrounds: n must be >= 1");
  std::vector<ImageVector> out(static_cast<std::size_t>(n));
  parallel_for(out.size(), [&](std::size_t i) {
    auto rng = make_rng(seed_mix(seed, "cmd-background", i));
    const LumpyState state = sample_lumpy_state(params, op.fov, rng);
    out[i] = project_background(state, params, op);
  });
  return out;
}

}  // namespace cgchan
