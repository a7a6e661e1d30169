#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace cgchan {

using Vec2 = std::array<double, 2>;

// Square field of view discretized on a uniform G x G pixel lattice.
// Pixel (i, j) (row i, column j) has its center at
//   x = (j + 0.5) * pitch_x, y = (i + 0.5) * pitch_y,
// so on a 64 x 64 (a.u.) FOV with G = 64 the grid has unit pitch.
struct FieldOfView {
  double extent_x = 64.0;
  double extent_y = 64.0;
  int grid_size = 64;

  FieldOfView() = default;
  FieldOfView(double ex, double ey, int g);

  int pixel_count() const { return grid_size * grid_size; }
  double pitch_x() const { return extent_x / grid_size; }
  double pitch_y() const { return extent_y / grid_size; }
  Vec2 pixel_center(int row, int col) const {
    return {(col + 0.5) * pitch_x(), (row + 0.5) * pitch_y()};
  }
  bool contains(const Vec2& r) const {
    return r[0] >= 0.0 && r[0] <= extent_x && r[1] >= 0.0 && r[1] <= extent_y;
  }
  double area() const { return extent_x * extent_y; }
};

// Type-I lumpy background: a Poisson-distributed number of identical
// Gaussian lumps at uniform locations.
struct LumpyModelParams {
  double mean_lump_count = 5.0;  // N̄
  double lump_amplitude = 1.2;   // A
  double lump_width = 7.8;       // s (a.u.)

  LumpyModelParams() = default;
  LumpyModelParams(double nbar, double a, double s);
};

// One realization of the object parameter vector: lump count plus centers.
struct LumpyState {
  std::vector<Vec2> centers;

  int lump_count() const { return static_cast<int>(centers.size()); }
};

struct GaussianComponent {
  double amplitude = 0.0;
  Vec2 center{0.0, 0.0};
  Vec2 width{1.0, 1.0};  // (sigma_x, sigma_y), both > 0
};

struct GaussianMixtureSignal {
  std::vector<GaussianComponent> components;

  void validate() const;  // throws std::invalid_argument on bad widths / empty list
};

// Count ~ Poisson(N̄), centers i.i.d. uniform over the closed FOV rectangle.
// A zero-lump draw is a valid empty background. Deterministic per rng state.
LumpyState sample_lumpy_state(const LumpyModelParams& params, const FieldOfView& fov,
                              std::mt19937_64& rng);

// f_b(r) = sum_n A exp(-|r - r_n|^2 / (2 s^2)). Production imaging uses the
// analytic projection instead; this evaluator backs the quadrature oracles.
double continuous_background_value(const LumpyState& state, const LumpyModelParams& params,
                                   const Vec2& r);

// s(r) = sum_k a_k exp(-(x-mu_kx)^2/(2 sx^2) - (y-mu_ky)^2/(2 sy^2)).
double continuous_signal_value(const GaussianMixtureSignal& signal, const Vec2& r);

// The three-component signal used throughout the study presets.
GaussianMixtureSignal default_signal();

}  // namespace cgchan
