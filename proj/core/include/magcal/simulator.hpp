#pragma once

#include <cstdint>
#include <vector>

#include "magcal/measurement.hpp"

namespace magcal {

/// Attitude excitation profile: pitch, roll, and yaw doublets flown on a
/// list of headings roughly 90 degrees apart. A doublet is one period of
/// +A then -A deflection shaped as back-to-back raised-cosine pulses, so
/// the peak deflection is hit exactly when period/4 lands on the sample
/// grid.
struct ProfileSpec {
  std::vector<double> headings = {0.0, 1.5707963267948966, 3.141592653589793,
                                  -1.5707963267948966};
  double amplitude = 0.3;     // rad, doublet deflection
  double period = 4.0;        // s, one doublet
  double dwell = 2.0;         // s, hold before the doublets on each heading
  double transition = 2.0;    // s, raised-cosine yaw ramp between headings
  double sample_rate = 10.0;  // Hz

  bool valid() const;
  double duration() const;  // s
};

/// Deterministic attitude sequence for the profile. The profile itself is
/// maneuver-scripted and does not consume randomness; the seed parameter is
/// accepted for interface uniformity with the other generators.
std::vector<EulerRpy> generate_profile(const ProfileSpec& spec,
                                       std::uint64_t seed);

/// Random-walk external field: e0 has the given magnitude with uniformly
/// random orientation, then each axis receives independent N(0, q^2 dt/3600)
/// increments (q in nT/sqrt(hr)).
std::vector<ExternalField> generate_field(int k_steps, double e0_magnitude,
                                          double q, double dt,
                                          std::uint64_t seed);

/// Measurement noise intensities. A zero entry disables the noise draw for
/// that channel; the covariance attached to the measurements then falls back
/// to the channel default so whitening stays defined.
struct NoiseSpec {
  double sigma_vec = 5.0;      // nT
  double sigma_scalar = 1.0;   // nT
  double gyro_bias_instability = 3.87e-5;  // rad/s, Gauss-Markov steady state
  double gyro_arw = 9.89e-5;   // rad/sqrt(s)
  double gyro_bias_corr_time = 1000.0;     // s
  double sigma_attitude = 0.043;  // rad per Euler axis
  double field_q = 0.0;        // nT/sqrt(hr) random-walk intensity

  static NoiseSpec zero();
  bool valid() const;
};

/// How simulation truth parameters are sampled. Directions are uniformly
/// random; magnitudes are fixed by the caller.
struct TruthSpec {
  double h_hi_magnitude = 5000.0;   // nT
  double h_vec_magnitude = 1000.0;  // nT
  double scale_sigma = 0.1;         // k ~ N(1, sigma^2)
  double ortho_sigma = 0.01;        // rad, angles ~ N(0, sigma^2)
  double soft_iron_sigma = 1e-5;    // symmetric perturbation of I
  double e0_magnitude = 50000.0;    // nT
};

/// Ground truth for one simulated calibration run.
struct TruthRecord {
  double dt = 0.1;
  std::vector<EulerRpy> euler;
  std::vector<Dcm> attitude;        // C_n^b per step
  std::vector<ExternalField> field; // e^n per step
  CalParams params;
  SoftIron soft_iron;

  int steps() const { return static_cast<int>(attitude.size()); }
  int k() const { return steps() - 1; }
};

TruthRecord simulate_truth(const ProfileSpec& profile, const TruthSpec& truth,
                           double q, std::uint64_t seed);

/// Noisy measurements from a truth record. Gyro increments carry a
/// first-order Gauss-Markov bias plus white angle-random-walk noise; the
/// attached gyro covariance combines both terms per step.
MeasurementSet synthesize_measurements(const TruthRecord& truth,
                                       const NoiseSpec& noise,
                                       std::uint64_t seed);

}  // namespace magcal
