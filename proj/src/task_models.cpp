#include "cgchan/task_models.hpp"

#include <cmath>
#include <stdexcept>

namespace cgchan {

FieldOfView::FieldOfView(double ex, double ey, int g)
    : extent_x(ex), extent_y(ey), grid_size(g) {
  if (!(extent_x > 0.0) || !(extent_y > 0.0))
    throw std::invalid_argument("FieldOfView: extents must be positive");
  if (grid_size < 2) throw std::invalid_argument("FieldOfView: grid_size must be >= 2");
}

LumpyModelParams::LumpyModelParams(double nbar, double a, double s)
    : mean_lump_count(nbar), lump_amplitude(a), lump_width(s) {
  if (!(mean_lump_count > 0.0))
    throw std::invalid_argument("LumpyModelParams: mean_lump_count must be > 0");
  if (!(lump_width > 0.0))
    throw std::invalid_argument("LumpyModelParams: lump_width must be > 0");
}

void GaussianMixtureSignal::validate() const {
  if (components.empty())
    throw std::invalid_argument("GaussianMixtureSignal: needs at least one component");
  for (const auto& c : components)
    if (!(c.width[0] > 0.0) || !(c.width[1] > 0.0))
      throw std::invalid_argument("GaussianMixtureSignal: widths must be positive");
}

LumpyState sample_lumpy_state(const LumpyModelParams& params, const FieldOfView& fov,
                              std::mt19937_64& rng) {
  std::poisson_distribution<int> count(params.mean_lump_count);
  const int n = count(rng);
  LumpyState state;
  state.centers.reserve(n);
  std::uniform_real_distribution<double> ux(0.0, fov.extent_x);
  std::uniform_real_distribution<double> uy(0.0, fov.extent_y);
  for (int i = 0; i < n; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    state.centers.push_back({x, y});
  }
  return state;
}

double continuous_background_value(const LumpyState& state, const LumpyModelParams& params,
                                   const Vec2& r) {
  const double inv_two_s2 = 1.0 / (2.0 * params.lump_width * params.lump_width);
  double value = 0.0;
  for (const auto& c : state.centers) {
    const double dx = r[0] - c[0];
    const double dy = r[1] - c[1];
    value += params.lump_amplitude * std::exp(-(dx * dx + dy * dy) * inv_two_s2);
  }
  return value;
}

double continuous_signal_value(const GaussianMixtureSignal& signal, const Vec2& r) {
  double value = 0.0;
  for (const auto& c : signal.components) {
    const double dx = r[0] - c.center[0];
    const double dy = r[1] - c.center[1];
    value += c.amplitude * std::exp(-dx * dx / (2.0 * c.width[0] * c.width[0]) -
                                    dy * dy / (2.0 * c.width[1] * c.width[1]));
  }
  return value;
}

GaussianMixtureSignal default_signal() {
  GaussianMixtureSignal s;
  s.components = {
      {0.40, {32.0, 32.0}, {3.0, 2.0}},
      {0.28, {37.0, 31.0}, {1.5, 1.0}},
      {0.32, {30.0, 36.0}, {1.0, 1.5}},
  };
  return s;
}

}  // namespace cgchan
