#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "cgchan/task_models.hpp"

namespace cgchan {

// Continuous-to-discrete operator with Gaussian sensitivity
//   h_m(r) = h / (2 pi w^2) * exp(-|r - r_m|^2 / (2 w^2)),
// one measurement per pixel center, M = G^2 measurements. All projections
// below are the closed-form Gaussian-product integrals over R^2 (no FOV
// truncation); tests validate them against 2-D adaptive quadrature.
struct GaussianOperator {
  FieldOfView fov;
  double sensitivity_width = 2.5;   // w
  double sensitivity_height = 36.0; // h

  GaussianOperator() = default;
  GaussianOperator(const FieldOfView& f, double w, double h);

  int measurement_count() const { return fov.pixel_count(); }
};

enum class NoiseKind { iid_gaussian };

struct NoiseModel {
  NoiseKind kind = NoiseKind::iid_gaussian;
  double std_dev = 1.0;  // per-pixel sigma, > 0

  NoiseModel() = default;
  NoiseModel(NoiseKind k, double sigma);
};

enum class Label : std::uint8_t { H0 = 0, H1 = 1, unlabeled = 2 };
enum class Provenance : std::uint8_t { noiseless_background, noiseless_signal, measured };

struct ImageVector {
  Eigen::VectorXd values;
  Label label = Label::unlabeled;
  Provenance provenance = Provenance::measured;
};

struct LabeledDataset {
  std::vector<ImageVector> images;
  std::uint64_t seed = 0;
  std::string meta;  // generation config hash
  int grid = 0;

  int count(Label l) const;
  int pixel_count() const { return images.empty() ? 0 : static_cast<int>(images[0].values.size()); }
};

// Projection of one unit-amplitude lump: writes amp * ex[j] * ey[i] over the
// grid (separable in x and y), accumulated with the given sign. Shared by the
// dataset generator and the MCMC samplers, which add/remove single lumps.
void accumulate_lump_projection(Eigen::VectorXd& image, const GaussianOperator& op,
                                const LumpyModelParams& params, const Vec2& center,
                                double sign);

// b_m = sum_n A h s^2/(s^2+w^2) exp(-|r_m - r_n|^2 / (2 (s^2+w^2)))
ImageVector project_background(const LumpyState& state, const LumpyModelParams& params,
                               const GaussianOperator& op);

// s_m = sum_k a_k h sx sy / sqrt((sx^2+w^2)(sy^2+w^2))
//       * exp(-(mu_x - x_m)^2/(2(sx^2+w^2)) - (mu_y - y_m)^2/(2(sy^2+w^2)))
ImageVector project_signal(const GaussianMixtureSignal& signal, const GaussianOperator& op);

// Adds i.i.d. zero-mean Gaussian noise; input must be noiseless.
ImageVector add_noise(const ImageVector& image, const NoiseModel& noise, std::mt19937_64& rng);

struct TaskConfig {
  LumpyModelParams lumpy;
  GaussianMixtureSignal signal;
  GaussianOperator op;
  NoiseModel noise;
};

// n_per_class H0 images (b + n) and n_per_class H1 images (b + s + n), SKE:
// one fixed signal image for every H1 image. Backgrounds and noise fields are
// independent across all 2n images; per-image streams are keyed by (seed,
// image index) so generation order cannot change the result.
LabeledDataset generate_dataset(int n_per_class, const TaskConfig& task, std::uint64_t seed);

// Noiseless background images (provenance = noiseless_background), used by
// covariance matrix decomposition.
std::vector<ImageVector> generate_noiseless_backgrounds(int n, const LumpyModelParams& params,
                                                        const GaussianOperator& op,
                                                        std::uint64_t seed);

}  // namespace cgchan
