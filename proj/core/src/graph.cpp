#include "magcal/graph.hpp"

#include <Eigen/Cholesky>

namespace magcal {

namespace {

// Lower-triangular W with W * cov * W^T = I, i.e. the inverse of the
// Cholesky factor of the covariance.
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& cov) {
  if (!cov.allFinite()) {
    throw SingularCovarianceError("non-finite measurement covariance");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw SingularCovarianceError("measurement covariance not positive definite");
  }
  return llt.matrixL().solve(
      Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
}

struct MagBlocks {
  Vec3 predicted_vec;
  double predicted_scalar = 0.0;
  Mat3 d_h_hi, d_h_vec, d_field, d_att;
  Eigen::Matrix<double, 3, 6> d_t;
  Eigen::RowVector3d s_h_hi, s_field, s_att;
  Eigen::Matrix<double, 1, 6> s_t;
};

// Vector and scalar magnetometer predictions with partials against every
// connected block, in local attitude coordinates.
MagBlocks mag_blocks(const CalMatrix& cm, const Vec3& h_hi, const Vec3& h_vec,
                     const Dcm& c, const Vec3& e, MagPredictionForm form) {
  MagBlocks out;
  const Vec3 u = c * e;
  const Mat3 tc = cm.value * c;
  const Mat3 dc_datt = -c * skew(e);  // d(C(delta) e)/d delta at 0

  if (form == MagPredictionForm::kScaledHardIron) {
    const Vec3 g = u + h_hi;
    out.predicted_vec = cm.value * g + h_vec;
    out.d_h_hi = cm.value;
    out.d_h_vec = Mat3::Identity();
    for (int i = 0; i < 6; ++i) out.d_t.col(i) = cm.partials[i] * g;
    out.d_field = tc;
    out.d_att = cm.value * dc_datt;

    const double norm = g.norm();
    if (norm < 1.0) {
      throw NumericalError("predicted scalar field magnitude below 1 nT");
    }
    out.predicted_scalar = norm;
    const Eigen::RowVector3d unit = (g / norm).transpose();
    out.s_h_hi = unit;
    out.s_t.setZero();
    out.s_field = unit * c;
    out.s_att = unit * dc_datt;
  } else {
    const Vec3 tu = cm.value * u;
    const Vec3 g = h_hi + tu;
    out.predicted_vec = g + h_vec;
    out.d_h_hi = Mat3::Identity();
    out.d_h_vec = Mat3::Identity();
    for (int i = 0; i < 6; ++i) out.d_t.col(i) = cm.partials[i] * u;
    out.d_field = tc;
    out.d_att = cm.value * dc_datt;

    const double norm = g.norm();
    if (norm < 1.0) {
      throw NumericalError("predicted scalar field magnitude below 1 nT");
    }
    out.predicted_scalar = norm;
    const Eigen::RowVector3d unit = (g / norm).transpose();
    out.s_h_hi = unit;
    for (int i = 0; i < 6; ++i) out.s_t(0, i) = unit * (cm.partials[i] * u);
    out.s_field = unit * tc;
    out.s_att = unit * (cm.value * dc_datt);
  }
  return out;
}

void check_dims(const StateVector& state, const MeasurementSet& meas) {
  if (state.steps() != meas.steps()) {
    throw DimensionMismatchError("state has " + std::to_string(state.steps()) +
                                 " steps, measurements have " +
                                 std::to_string(meas.steps()));
  }
}

}  // namespace

StateVector::StateVector(int steps) : steps_(steps) {
  if (steps < 1) throw ValidationError("state needs >= 1 step");
  flat_ = Eigen::VectorXd::Zero(dimension(steps));
  flat_.segment<6>(6) << 1, 1, 1, 0, 0, 0;
}

StateVector StateVector::from_flat(Eigen::VectorXd flat, int steps) {
  if (flat.size() != dimension(steps)) {
    throw DimensionMismatchError("flat vector length does not match steps");
  }
  StateVector s(steps);
  s.flat_ = std::move(flat);
  return s;
}

CalParams StateVector::params() const {
  CalParams p;
  p.h_hi = h_hi();
  p.h_vec = h_vec();
  p.t_vec = t_vec();
  return p;
}

void StateVector::set_params(const CalParams& p) {
  set_h_hi(p.h_hi);
  set_h_vec(p.h_vec);
  set_t_vec(p.t_vec);
}

Dcm StateVector::attitude(int j) const {
  return dcm_from_rotvec(attitude_rotvec(j));
}

void StateVector::set_attitude(int j, const Dcm& c) {
  flat_.segment<3>(attitude_offset(j)) = rotvec_from_dcm(c);
}

void StateVector::retract(const Eigen::VectorXd& delta) {
  if (delta.size() != dim()) {
    throw DimensionMismatchError("update vector length does not match state");
  }
  flat_.head(12 + 3 * steps_) += delta.head(12 + 3 * steps_);
  for (int j = 0; j < steps_; ++j) {
    const int off = attitude_offset(j);
    const Dcm updated =
        dcm_from_rotvec(flat_.segment<3>(off)) *
        dcm_from_rotvec(delta.segment<3>(off));
    flat_.segment<3>(off) = rotvec_from_dcm(updated);
  }
}

StateVector StateVector::retracted(const Eigen::VectorXd& delta) const {
  StateVector out = *this;
  out.retract(delta);
  return out;
}

FactorSet build_graph(const MeasurementSet& meas, const WeightConfig& weights) {
  meas.validate();
  if (!(weights.field_change_sigma > 0.0)) {
    throw SingularCovarianceError("field-change sigma must be positive");
  }

  FactorSet fs;
  fs.steps = meas.steps();
  fs.form = weights.form;
  fs.use_scalar = weights.use_scalar;
  const int k = meas.k();
  int row = 0;

  const Mat3 d_info = (1.0 / weights.field_change_sigma) * Mat3::Identity();
  for (int j = 1; j <= k; ++j) {
    fs.factors.push_back({FactorKind::kFieldChange, j, row, 3, d_info, {}});
    row += 3;
  }
  for (int j = 1; j <= k; ++j) {
    fs.factors.push_back({FactorKind::kGyro, j, row, 3,
                          inverse_sqrt(meas.gyro_cov[j - 1]), {}});
    row += 3;
  }
  for (int j = 0; j <= k; ++j) {
    fs.factors.push_back(
        {FactorKind::kAttitude, j, row, 3, inverse_sqrt(meas.rpy_cov[j]), {}});
    row += 3;
  }
  const int mag_rows = weights.use_scalar ? 4 : 3;
  for (int j = 0; j <= k; ++j) {
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(mag_rows, mag_rows);
    info.topLeftCorner<3, 3>() = inverse_sqrt(meas.mag_vec_cov[j]);
    if (weights.use_scalar) {
      if (!(meas.mag_scalar_var[j] > 0.0)) {
        throw SingularCovarianceError("scalar variance must be positive");
      }
      info(3, 3) = 1.0 / std::sqrt(meas.mag_scalar_var[j]);
    }
    fs.factors.push_back(
        {FactorKind::kMagnetometer, j, row, mag_rows, std::move(info), {}});
    row += mag_rows;
  }
  if (weights.t_prior) {
    if (!(weights.t_prior_sigma > 0.0)) {
      throw SingularCovarianceError("prior sigma must be positive");
    }
    Eigen::MatrixXd info =
        (1.0 / weights.t_prior_sigma) * Eigen::MatrixXd::Identity(6, 6);
    Eigen::VectorXd value = *weights.t_prior;
    fs.factors.push_back(
        {FactorKind::kTvPrior, -1, row, 6, std::move(info), std::move(value)});
    row += 6;
  }
  fs.rows = row;
  return fs;
}

Eigen::VectorXd residual(const StateVector& state, const MeasurementSet& meas,
                         MagPredictionForm form) {
  check_dims(state, meas);
  const int k = meas.k();
  Eigen::VectorXd y(13 * k + 7);
  int row = 0;

  for (int j = 1; j <= k; ++j, row += 3) {
    y.segment<3>(row) = state.field(j) - state.field(j - 1);
  }
  for (int j = 1; j <= k; ++j, row += 3) {
    const Dcm measured = dcm_from_rotvec(meas.gyro[j - 1]);
    const Dcm predicted = state.attitude(j) * state.attitude(j - 1).transpose();
    y.segment<3>(row) = rotvec_from_dcm(measured * predicted.transpose());
  }
  for (int j = 0; j <= k; ++j, row += 3) {
    const Dcm measured = dcm_from_euler(meas.rpy[j]);
    y.segment<3>(row) =
        rotvec_from_dcm(measured * state.attitude(j).transpose());
  }
  const CalParams p = state.params();
  const CalMatrix cm = cal_matrix(p);
  for (int j = 0; j <= k; ++j, row += 4) {
    const MagBlocks mb =
        mag_blocks(cm, p.h_hi, p.h_vec, state.attitude(j), state.field(j), form);
    y.segment<3>(row) = meas.mag[j].vec - mb.predicted_vec;
    y(row + 3) = meas.mag[j].scalar - mb.predicted_scalar;
  }
  return y;
}

SparseSystem jacobian(const StateVector& state, const MeasurementSet& meas,
                      const FactorSet& factors) {
  check_dims(state, meas);
  if (factors.steps != state.steps()) {
    throw DimensionMismatchError("factor set does not match state steps");
  }

  const int dim = state.dim();
  SparseSystem sys;
  sys.y.resize(factors.rows);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(factors.rows) * 20);

  const auto add_block = [&trips](int row, int col,
                                  const Eigen::MatrixXd& block) {
    for (int r = 0; r < block.rows(); ++r) {
      for (int c = 0; c < block.cols(); ++c) {
        if (block(r, c) != 0.0) trips.emplace_back(row + r, col + c, block(r, c));
      }
    }
  };

  const CalParams p = state.params();
  const CalMatrix cm = cal_matrix(p);

  for (const Factor& f : factors.factors) {
    const Eigen::MatrixXd& w = f.sqrt_info;
    switch (f.kind) {
      case FactorKind::kFieldChange: {
        sys.y.segment<3>(f.row) =
            w * (state.field(f.step) - state.field(f.step - 1));
        add_block(f.row, state.field_offset(f.step - 1), w);
        add_block(f.row, state.field_offset(f.step), -w);
        break;
      }
      case FactorKind::kGyro: {
        const Dcm c_curr = state.attitude(f.step);
        const Dcm predicted = c_curr * state.attitude(f.step - 1).transpose();
        const Dcm measured = dcm_from_rotvec(meas.gyro[f.step - 1]);
        const Vec3 r0 = rotvec_from_dcm(measured * predicted.transpose());
        sys.y.segment<3>(f.row) = w * r0;
        const Mat3 a = so3_right_jacobian_inverse(r0) * c_curr;
        add_block(f.row, state.attitude_offset(f.step - 1), -w * a);
        add_block(f.row, state.attitude_offset(f.step), w * a);
        break;
      }
      case FactorKind::kAttitude: {
        const Dcm c_hat = state.attitude(f.step);
        const Dcm measured = dcm_from_euler(meas.rpy[f.step]);
        const Vec3 r0 = rotvec_from_dcm(measured * c_hat.transpose());
        sys.y.segment<3>(f.row) = w * r0;
        const Mat3 a = so3_right_jacobian_inverse(r0) * c_hat;
        add_block(f.row, state.attitude_offset(f.step), w * a);
        break;
      }
      case FactorKind::kMagnetometer: {
        const MagBlocks mb = mag_blocks(cm, p.h_hi, p.h_vec,
                                        state.attitude(f.step),
                                        state.field(f.step), factors.form);
        Eigen::VectorXd r(f.rows);
        r.head<3>() = meas.mag[f.step].vec - mb.predicted_vec;
        Eigen::MatrixXd jh(f.rows, 3), jv(f.rows, 3), jt(f.rows, 6),
            je(f.rows, 3), ja(f.rows, 3);
        jh.topRows<3>() = mb.d_h_hi;
        jv.topRows<3>() = mb.d_h_vec;
        jt.topRows<3>() = mb.d_t;
        je.topRows<3>() = mb.d_field;
        ja.topRows<3>() = mb.d_att;
        if (factors.use_scalar) {
          r(3) = meas.mag[f.step].scalar - mb.predicted_scalar;
          jh.row(3) = mb.s_h_hi;
          jv.row(3).setZero();
          jt.row(3) = mb.s_t;
          je.row(3) = mb.s_field;
          ja.row(3) = mb.s_att;
        }
        sys.y.segment(f.row, f.rows) = w * r;
        add_block(f.row, 0, w * jh);
        add_block(f.row, 3, w * jv);
        add_block(f.row, 6, w * jt);
        add_block(f.row, state.field_offset(f.step), w * je);
        add_block(f.row, state.attitude_offset(f.step), w * ja);
        break;
      }
      case FactorKind::kTvPrior: {
        sys.y.segment<6>(f.row) = w * (f.value - state.t_vec());
        add_block(f.row, 6, w);
        break;
      }
    }
  }

  sys.L.resize(factors.rows, dim);
  sys.L.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

SparseSystem jacobian(const StateVector& state, const MeasurementSet& meas,
                      const WeightConfig& weights) {
  return jacobian(state, meas, build_graph(meas, weights));
}

}  // namespace magcal
