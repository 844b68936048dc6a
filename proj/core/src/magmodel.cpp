#include "magcal/magmodel.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace magcal {

namespace {
constexpr double kQuarterPi = 0.78539816339744830961;
}

bool plausible_earth_field(const ExternalField& e) {
  const double mag = e.norm();
  return mag > 1e3 && mag < 1e5;
}

Mat3 CalParams::matrix_form() const {
  const double kx = t_vec[0], ky = t_vec[1], kz = t_vec[2];
  const double a = t_vec[3], b = t_vec[4], g = t_vec[5];
  Mat3 t;
  t << kx, 0.0, 0.0,
      std::sin(b) * std::cos(g), ky * std::cos(b) * std::cos(g), std::sin(g),
      std::sin(a), 0.0, kz * std::cos(a);
  return t;
}

bool CalParams::valid() const {
  return t_vec[0] > 0.0 && t_vec[1] > 0.0 && t_vec[2] > 0.0 &&
         std::abs(t_vec[3]) < kQuarterPi && std::abs(t_vec[4]) < kQuarterPi &&
         std::abs(t_vec[5]) < kQuarterPi && h_hi.allFinite() &&
         h_vec.allFinite();
}

CalMatrix cal_matrix(const CalParams& p) {
  const double ky = p.t_vec[1], kz = p.t_vec[2];
  const double a = p.t_vec[3], b = p.t_vec[4], g = p.t_vec[5];
  const double sa = std::sin(a), ca = std::cos(a);
  const double sb = std::sin(b), cb = std::cos(b);
  const double sg = std::sin(g), cg = std::cos(g);

  CalMatrix out;
  out.value = p.matrix_form();
  for (auto& m : out.partials) m.setZero();

  out.partials[0](0, 0) = 1.0;       // d/dk_x
  out.partials[1](1, 1) = cb * cg;   // d/dk_y
  out.partials[2](2, 2) = ca;        // d/dk_z

  out.partials[3](2, 0) = ca;        // d/dalpha
  out.partials[3](2, 2) = -kz * sa;

  out.partials[4](1, 0) = cb * cg;   // d/dbeta
  out.partials[4](1, 1) = -ky * sb * cg;

  out.partials[5](1, 0) = -sb * sg;  // d/dgamma
  out.partials[5](1, 1) = -ky * cb * sg;
  out.partials[5](1, 2) = cg;
  return out;
}

SoftIron SoftIron::from_unique(double a, double b, double c, double d,
                               double e, double f) {
  SoftIron si;
  si.m << a, b, c,
          b, d, e,
          c, e, f;
  return si;
}

bool SoftIron::valid() const {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) return false;
  Eigen::LLT<Mat3> llt(m);
  return llt.info() == Eigen::Success;
}

Vec3 predict_vector(const CalParams& p, const SoftIron& si, const Dcm& c_nb,
                    const ExternalField& e) {
  return p.matrix_form() * (si.m * (c_nb * e) + p.h_hi) + p.h_vec;
}

double predict_scalar(const SoftIron& si, const Dcm& c_nb,
                      const ExternalField& e, const Vec3& h_hi) {
  return (si.m * (c_nb * e) + h_hi).norm();
}

}  // namespace magcal
