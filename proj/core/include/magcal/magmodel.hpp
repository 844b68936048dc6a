#pragma once

#include <array>

#include "magcal/geometry.hpp"

namespace magcal {

/// Earth's total magnetic field in the navigation frame, nT.
using ExternalField = Vec3;

/// Magnitude range considered physical for an Earth core field, nT.
/// Checked on simulation truth, never on estimates.
bool plausible_earth_field(const ExternalField& e);

/// The calibration unknowns: hard iron offset, vector-sensor bias, and the
/// combined scale / non-orthogonality matrix in vectorized form
/// [k_x, k_y, k_z, alpha, beta, gamma].
struct CalParams {
  Vec3 h_hi = Vec3::Zero();   // hard iron, body frame, nT
  Vec3 h_vec = Vec3::Zero();  // vector magnetometer bias, nT
  Vec6 t_vec = (Vec6() << 1, 1, 1, 0, 0, 0).finished();

  static CalParams identity() { return CalParams{}; }

  /// Reconstructs the combined scale/non-orthogonality matrix:
  ///   [ k_x             0                0      ]
  ///   [ sin(b)cos(g)    k_y cos(b)cos(g) sin(g) ]
  ///   [ sin(a)          0                k_z cos(a) ]
  Mat3 matrix_form() const;

  /// Scale factors positive, misalignment angles below pi/4.
  bool valid() const;
};

/// Value and per-entry partial derivatives of the scale/non-orthogonality
/// matrix with respect to the six t_vec entries.
struct CalMatrix {
  Mat3 value;
  std::array<Mat3, 6> partials;
};

CalMatrix cal_matrix(const CalParams& p);

/// Soft iron distortion: symmetric positive definite, simulation truth only.
struct SoftIron {
  Mat3 m = Mat3::Identity();

  static SoftIron identity() { return SoftIron{}; }
  static SoftIron from_unique(double a, double b, double c, double d, double e,
                              double f);
  bool valid() const;
};

/// One epoch of magnetometer data: vector components plus the total-field
/// scalar reading, all in nT.
struct MagMeasurement {
  Vec3 vec = Vec3::Zero();
  double scalar = 0.0;
};

/// Vector magnetometer forward model:
///   T * (T_si * C_n^b * e^n + h_hi) + h_vec
Vec3 predict_vector(const CalParams& p, const SoftIron& si, const Dcm& c_nb,
                    const ExternalField& e);

/// Scalar (total-field) magnetometer forward model:
///   || T_si * C_n^b * e^n + h_hi ||
/// Scale and vector-bias terms do not apply to a total-field sensor.
double predict_scalar(const SoftIron& si, const Dcm& c_nb,
                      const ExternalField& e, const Vec3& h_hi);

}  // namespace magcal
