#pragma once

#include <vector>

#include "magcal/magmodel.hpp"

namespace magcal {

/// Time-indexed measurements with their noise covariances. For k+1 time
/// steps there are k+1 magnetometer and attitude entries and k gyro
/// increments (one per step-to-step transition).
struct MeasurementSet {
  double dt = 0.1;  // s

  std::vector<MagMeasurement> mag;
  std::vector<Mat3> mag_vec_cov;       // nT^2
  std::vector<double> mag_scalar_var;  // nT^2

  std::vector<EulerRpy> rpy;
  std::vector<Mat3> rpy_cov;  // rad^2

  std::vector<Vec3> gyro;     // incremental body rotations, rad
  std::vector<Mat3> gyro_cov; // rad^2

  int steps() const { return static_cast<int>(mag.size()); }
  int k() const { return steps() - 1; }

  void validate() const {
    const std::size_t n = mag.size();
    if (n == 0) throw ValidationError("empty measurement set");
    if (mag_vec_cov.size() != n || mag_scalar_var.size() != n ||
        rpy.size() != n || rpy_cov.size() != n || gyro.size() != n - 1 ||
        gyro_cov.size() != n - 1) {
      throw DimensionMismatchError("measurement channel lengths disagree");
    }
    if (!(dt > 0.0)) throw ValidationError("non-positive sample interval");
  }
};

}  // namespace magcal
