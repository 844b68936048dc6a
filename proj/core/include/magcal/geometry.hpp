#pragma once

#include <Eigen/Core>

#include "magcal/errors.hpp"

namespace magcal {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Direction cosine matrix, right-multiply column-space convention:
/// C_a^b maps a-frame vectors into the b frame.
using Dcm = Eigen::Matrix3d;

/// Roll/pitch/yaw Euler angles in radians, aerospace 3-2-1 sequence.
/// Valid range: pitch in (-pi/2, pi/2), roll/yaw in (-pi, pi].
struct EulerRpy {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

/// Axis-angle rotation vector (radians). Canonical form has magnitude
/// in [0, pi]; at exactly pi the axis has its first nonzero component
/// positive so the log map is deterministic.
using RotVec = Eigen::Vector3d;

/// Skew-symmetric matrix [v]x with [v]x * u = v x u.
Mat3 skew(const Vec3& v);

/// Inverse of skew: extracts v from [v]x.
Vec3 unskew(const Mat3& s);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// True when c is orthonormal with determinant +1 within tol (elementwise).
bool is_rotation(const Mat3& c, double tol = 1e-9);

/// Navigation-to-body DCM from roll/pitch/yaw, C_n^b = Rx(roll) * Ry(pitch) * Rz(yaw)
/// with passive (coordinate transformation) elementary rotations in NED.
Dcm dcm_from_euler(const EulerRpy& e);

/// Inverse of dcm_from_euler.
/// Throws GimbalLockError when pitch is within 1e-6 rad of +-pi/2.
EulerRpy euler_from_dcm(const Dcm& c);

/// Exponential map so(3) -> SO(3) (Rodrigues formula).
/// Uses a second-order Taylor expansion for angles below 1e-7 rad.
Dcm dcm_from_rotvec(const RotVec& v);

/// Logarithm map SO(3) -> so(3), canonicalized (see RotVec).
RotVec rotvec_from_dcm(const Dcm& c);

/// Body-frame incremental rotation taking the previous attitude to the
/// current one: log(c_curr * c_prev^T). This is the gyro factor prediction.
RotVec relative_rotvec(const Dcm& c_prev, const Dcm& c_curr);

/// Inverse of the right Jacobian of the SO(3) exponential map at phi.
/// Satisfies log(exp(phi) * exp(delta)) ~= phi + jr_inv(phi) * delta for
/// small delta.
Mat3 so3_right_jacobian_inverse(const RotVec& phi);

}  // namespace magcal
