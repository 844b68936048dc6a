#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "magcal/measurement.hpp"

namespace magcal {

/// Algebraic form of the magnetometer prediction inside the estimator.
/// kScaledHardIron is the measurement model (scale matrix applied to the
/// hard iron); kUnscaledHardIron is the alternate layout with the hard iron
/// added outside the scale matrix, kept selectable for comparison.
enum class MagPredictionForm { kScaledHardIron, kUnscaledHardIron };

/// Graph construction knobs: the field-change factor weight (loose for a
/// drifting external field, tight to hold the field fixed), optional scalar
/// channel, prediction form, and an optional prior pinning t_vec.
struct WeightConfig {
  double field_change_sigma = 1e-6;  // nT per axis per step
  bool use_scalar = true;
  MagPredictionForm form = MagPredictionForm::kScaledHardIron;
  std::optional<Vec6> t_prior;
  double t_prior_sigma = 1e-12;

  /// Holds every per-step field estimate equal (covariance 1e-12 nT^2).
  static WeightConfig fixed_field() { return WeightConfig{}; }

  /// Matches a random-walk field of intensity q nT/sqrt(hr) at step dt.
  static WeightConfig random_walk(double q, double dt) {
    WeightConfig w;
    w.field_change_sigma = q * std::sqrt(dt / 3600.0);
    return w;
  }
};

/// Full optimization state for k+1 time steps, stored flat in block order
/// [h_hi(3), h_vec(3), t_vec(6), e^0..e^k (3 each), attitudes (3 each)].
/// Attitudes are global rotation vectors; updates apply multiplicatively
/// through retract (C <- C * exp(skew(delta))), everything else adds.
class StateVector {
 public:
  explicit StateVector(int steps);
  static StateVector from_flat(Eigen::VectorXd flat, int steps);
  static int dimension(int steps) { return 12 + 6 * steps; }

  int steps() const { return steps_; }
  int k() const { return steps_ - 1; }
  int dim() const { return dimension(steps_); }

  Vec3 h_hi() const { return flat_.segment<3>(0); }
  Vec3 h_vec() const { return flat_.segment<3>(3); }
  Vec6 t_vec() const { return flat_.segment<6>(6); }
  void set_h_hi(const Vec3& v) { flat_.segment<3>(0) = v; }
  void set_h_vec(const Vec3& v) { flat_.segment<3>(3) = v; }
  void set_t_vec(const Vec6& v) { flat_.segment<6>(6) = v; }

  CalParams params() const;
  void set_params(const CalParams& p);

  int field_offset(int j) const { return 12 + 3 * j; }
  int attitude_offset(int j) const { return 12 + 3 * steps_ + 3 * j; }

  Vec3 field(int j) const { return flat_.segment<3>(field_offset(j)); }
  void set_field(int j, const Vec3& e) {
    flat_.segment<3>(field_offset(j)) = e;
  }

  RotVec attitude_rotvec(int j) const {
    return flat_.segment<3>(attitude_offset(j));
  }
  Dcm attitude(int j) const;
  void set_attitude(int j, const Dcm& c);

  const Eigen::VectorXd& flat() const { return flat_; }

  /// Applies a full-dimension update: additive on parameter and field
  /// blocks, multiplicative (right perturbation) on attitude blocks.
  void retract(const Eigen::VectorXd& delta);
  StateVector retracted(const Eigen::VectorXd& delta) const;

 private:
  int steps_;
  Eigen::VectorXd flat_;
};

enum class FactorKind { kFieldChange, kGyro, kAttitude, kMagnetometer, kTvPrior };

/// One factor node: its graph position and the whitening transform
/// (inverse square root of the measurement covariance).
struct Factor {
  FactorKind kind;
  int step;  // kFieldChange/kGyro: 1..k, kAttitude/kMagnetometer: 0..k
  int row;
  int rows;
  Eigen::MatrixXd sqrt_info;
  Eigen::VectorXd value;  // prior factors only
};

struct FactorSet {
  std::vector<Factor> factors;
  int rows = 0;
  int steps = 0;
  MagPredictionForm form = MagPredictionForm::kScaledHardIron;
  bool use_scalar = true;
};

/// Whitened residual y and whitened sparse Jacobian L of the predicted
/// measurements, in the convention L * delta ~= y at the linearization
/// point (equivalently L = -dy/dx in local coordinates).
struct SparseSystem {
  Eigen::VectorXd y;
  Eigen::SparseMatrix<double> L;
};

/// One factor per measurement plus k field-change factors. Throws
/// SingularCovarianceError when any measurement covariance is not positive
/// definite, ValidationError on an empty measurement set.
FactorSet build_graph(const MeasurementSet& meas, const WeightConfig& weights);

/// Unwhitened residual stack in graph row order: field changes, gyro,
/// attitude, then magnetometer rows. Rotation residuals are log-map
/// (rotation vector) differences of the relative rotation.
Eigen::VectorXd residual(
    const StateVector& state, const MeasurementSet& meas,
    MagPredictionForm form = MagPredictionForm::kScaledHardIron);

SparseSystem jacobian(const StateVector& state, const MeasurementSet& meas,
                      const FactorSet& factors);

SparseSystem jacobian(const StateVector& state, const MeasurementSet& meas,
                      const WeightConfig& weights);

}  // namespace magcal
