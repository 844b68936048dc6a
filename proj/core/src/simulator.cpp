#include "magcal/simulator.hpp"

#include <cmath>
#include <random>

namespace magcal {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Raised-cosine pulse: 0 at the ends, 1 at the midpoint of [0, len].
double bump(double t, double len) {
  return 0.5 * (1.0 - std::cos(2.0 * kPi * t / len));
}

// One period of +A then -A deflection.
double doublet(double t, double amplitude, double period) {
  const double half = 0.5 * period;
  if (t < half) return amplitude * bump(t, half);
  return -amplitude * bump(t - half, half);
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

}  // namespace

bool ProfileSpec::valid() const {
  return !headings.empty() && amplitude >= 0.0 && amplitude <= kPi / 4.0 &&
         period > 0.0 && dwell >= 0.0 && transition >= 0.0 &&
         sample_rate > 0.0;
}

double ProfileSpec::duration() const {
  const auto n = static_cast<double>(headings.size());
  return n * (dwell + 3.0 * period) + (n - 1.0) * transition;
}

std::vector<EulerRpy> generate_profile(const ProfileSpec& spec,
                                       std::uint64_t /*seed*/) {
  if (!spec.valid()) throw ValidationError("invalid profile spec");

  // Piecewise schedule per heading: dwell, pitch doublet, roll doublet,
  // yaw doublet, then a yaw ramp to the next heading.
  struct Segment {
    enum Kind { Dwell, Pitch, Roll, Yaw, Transition } kind;
    double start, length;
    double heading, next_heading;
  };
  std::vector<Segment> segments;
  double t0 = 0.0;
  const std::size_t n = spec.headings.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double h = spec.headings[i];
    segments.push_back({Segment::Dwell, t0, spec.dwell, h, h});
    t0 += spec.dwell;
    segments.push_back({Segment::Pitch, t0, spec.period, h, h});
    t0 += spec.period;
    segments.push_back({Segment::Roll, t0, spec.period, h, h});
    t0 += spec.period;
    segments.push_back({Segment::Yaw, t0, spec.period, h, h});
    t0 += spec.period;
    if (i + 1 < n) {
      segments.push_back(
          {Segment::Transition, t0, spec.transition, h, spec.headings[i + 1]});
      t0 += spec.transition;
    }
  }
  const double duration = t0;

  const double dt = 1.0 / spec.sample_rate;
  const int count = static_cast<int>(std::llround(duration * spec.sample_rate)) + 1;

  std::vector<EulerRpy> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    const double t = j * dt;
    EulerRpy e;
    e.yaw = wrap_angle(spec.headings.back());
    if (t < duration) {
      for (const auto& seg : segments) {
        if (t < seg.start || t >= seg.start + seg.length) continue;
        const double u = t - seg.start;
        switch (seg.kind) {
          case Segment::Dwell:
            e.yaw = wrap_angle(seg.heading);
            break;
          case Segment::Pitch:
            e.pitch = doublet(u, spec.amplitude, spec.period);
            e.yaw = wrap_angle(seg.heading);
            break;
          case Segment::Roll:
            e.roll = doublet(u, spec.amplitude, spec.period);
            e.yaw = wrap_angle(seg.heading);
            break;
          case Segment::Yaw:
            e.yaw = wrap_angle(seg.heading +
                               doublet(u, spec.amplitude, spec.period));
            break;
          case Segment::Transition: {
            const double delta = wrap_angle(seg.next_heading - seg.heading);
            e.yaw = wrap_angle(seg.heading + delta * bump(u, 2.0 * seg.length));
            break;
          }
        }
        break;
      }
    }
    out.push_back(e);
  }
  return out;
}

std::vector<ExternalField> generate_field(int k_steps, double e0_magnitude,
                                          double q, double dt,
                                          std::uint64_t seed) {
  if (k_steps < 1) throw ValidationError("field sequence needs >= 1 step");
  if (!(e0_magnitude > 0.0)) {
    throw ValidationError("initial field magnitude must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);

  std::vector<ExternalField> field;
  field.reserve(k_steps);
  field.push_back(e0_magnitude * random_unit(rng));

  const double step_sigma = q * std::sqrt(dt / 3600.0);
  for (int j = 1; j < k_steps; ++j) {
    Vec3 w = Vec3::Zero();
    if (step_sigma > 0.0) w = step_sigma * Vec3(n(rng), n(rng), n(rng));
    field.push_back(field.back() + w);
  }
  return field;
}

NoiseSpec NoiseSpec::zero() {
  NoiseSpec s;
  s.sigma_vec = 0.0;
  s.sigma_scalar = 0.0;
  s.gyro_bias_instability = 0.0;
  s.gyro_arw = 0.0;
  s.sigma_attitude = 0.0;
  s.field_q = 0.0;
  return s;
}

bool NoiseSpec::valid() const {
  return sigma_vec >= 0.0 && sigma_scalar >= 0.0 &&
         gyro_bias_instability >= 0.0 && gyro_arw >= 0.0 &&
         gyro_bias_corr_time > 0.0 && sigma_attitude >= 0.0 && field_q >= 0.0;
}

TruthRecord simulate_truth(const ProfileSpec& profile, const TruthSpec& truth,
                           double q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);

  TruthRecord rec;
  rec.dt = 1.0 / profile.sample_rate;
  rec.euler = generate_profile(profile, seed);
  rec.attitude.reserve(rec.euler.size());
  for (const auto& e : rec.euler) rec.attitude.push_back(dcm_from_euler(e));

  rec.params.h_hi = truth.h_hi_magnitude * random_unit(rng);
  rec.params.h_vec = truth.h_vec_magnitude * random_unit(rng);
  for (int i = 0; i < 3; ++i) {
    double k;
    do {
      k = 1.0 + truth.scale_sigma * n(rng);
    } while (k <= 0.05);
    rec.params.t_vec[i] = k;
  }
  for (int i = 3; i < 6; ++i) {
    double a;
    do {
      a = truth.ortho_sigma * n(rng);
    } while (std::abs(a) >= kPi / 4.0);
    rec.params.t_vec[i] = a;
  }

  do {
    Mat3 perturb;
    const double s = truth.soft_iron_sigma;
    const double d01 = s * n(rng), d02 = s * n(rng), d12 = s * n(rng);
    perturb << s * n(rng), d01, d02,
               d01, s * n(rng), d12,
               d02, d12, s * n(rng);
    rec.soft_iron.m = Mat3::Identity() + perturb;
  } while (!rec.soft_iron.valid());

  const std::uint64_t field_seed = rng();
  rec.field = generate_field(static_cast<int>(rec.attitude.size()),
                             truth.e0_magnitude, q, rec.dt, field_seed);
  return rec;
}

MeasurementSet synthesize_measurements(const TruthRecord& truth,
                                       const NoiseSpec& noise,
                                       std::uint64_t seed) {
  if (truth.steps() < 1) throw ValidationError("empty truth record");
  if (!noise.valid()) throw ValidationError("invalid noise spec");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const NoiseSpec defaults{};
  const auto effective = [](double sigma, double fallback) {
    return sigma > 0.0 ? sigma : fallback;
  };

  const int steps = truth.steps();
  const double dt = truth.dt;

  MeasurementSet set;
  set.dt = dt;
  set.mag.resize(steps);
  set.rpy.resize(steps);
  set.gyro.resize(steps - 1);

  const double sv = effective(noise.sigma_vec, defaults.sigma_vec);
  const double ss = effective(noise.sigma_scalar, defaults.sigma_scalar);
  const double sa = effective(noise.sigma_attitude, defaults.sigma_attitude);
  const double arw = effective(noise.gyro_arw, defaults.gyro_arw);
  const double bi =
      effective(noise.gyro_bias_instability, defaults.gyro_bias_instability);
  set.mag_vec_cov.assign(steps, sv * sv * Mat3::Identity());
  set.mag_scalar_var.assign(steps, ss * ss);
  set.rpy_cov.assign(steps, sa * sa * Mat3::Identity());
  set.gyro_cov.assign(steps - 1,
                      (arw * arw * dt + bi * bi * dt * dt) * Mat3::Identity());

  // Gauss-Markov gyro bias, stationary initialization.
  Vec3 bias = Vec3::Zero();
  const double tau = noise.gyro_bias_corr_time;
  const double phi = std::exp(-dt / tau);
  const double innov = noise.gyro_bias_instability *
                       std::sqrt(std::max(0.0, 1.0 - phi * phi));
  if (noise.gyro_bias_instability > 0.0) {
    bias = noise.gyro_bias_instability * Vec3(nd(rng), nd(rng), nd(rng));
  }

  for (int j = 0; j < steps; ++j) {
    Vec3 m = predict_vector(truth.params, truth.soft_iron, truth.attitude[j],
                            truth.field[j]);
    double s = predict_scalar(truth.soft_iron, truth.attitude[j],
                              truth.field[j], truth.params.h_hi);
    if (noise.sigma_vec > 0.0) {
      m += noise.sigma_vec * Vec3(nd(rng), nd(rng), nd(rng));
    }
    if (noise.sigma_scalar > 0.0) s += noise.sigma_scalar * nd(rng);
    set.mag[j].vec = m;
    set.mag[j].scalar = s;

    EulerRpy rpy = truth.euler[j];
    if (noise.sigma_attitude > 0.0) {
      rpy.roll = wrap_angle(rpy.roll + noise.sigma_attitude * nd(rng));
      rpy.pitch += noise.sigma_attitude * nd(rng);
      rpy.yaw = wrap_angle(rpy.yaw + noise.sigma_attitude * nd(rng));
    }
    set.rpy[j] = rpy;

    if (j > 0) {
      if (noise.gyro_bias_instability > 0.0) {
        bias = phi * bias + innov * Vec3(nd(rng), nd(rng), nd(rng));
      }
      Vec3 w = relative_rotvec(truth.attitude[j - 1], truth.attitude[j]);
      w += bias * dt;
      if (noise.gyro_arw > 0.0) {
        w += noise.gyro_arw * std::sqrt(dt) * Vec3(nd(rng), nd(rng), nd(rng));
      }
      set.gyro[j - 1] = w;
    }
  }
  set.validate();
  return set;
}

}  // namespace magcal
