#include "vloc/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace vloc {

void PoseSE3::normalize() {
  const double n = q_.norm();
  if (!(n > 0.5) || !std::isfinite(n)) {
    throw ConfigError("PoseSE3: quaternion norm " + std::to_string(n) +
                      " is not normalizable");
  }
  q_.coeffs() /= n;
}

namespace {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

}  // namespace

PoseSE3 se3_exp(const TangentVec6& delta) {
  const Vec3 rho = delta.head<3>();
  const Vec3 omega = delta.tail<3>();
  const double theta = omega.norm();

  Eigen::Quaterniond q;
  Mat3 v_mat;
  if (theta < 1e-8) {
    // sin(t/2)/t = 1/2 - t^2/48, (1-cos t)/t^2 = 1/2 - t^2/24,
    // (t - sin t)/t^3 = 1/6 - t^2/120
    const double t2 = theta * theta;
    const double half_sinc = 0.5 - t2 / 48.0;
    q = Eigen::Quaterniond(std::cos(0.5 * theta), half_sinc * omega.x(),
                           half_sinc * omega.y(), half_sinc * omega.z());
    const Mat3 om = skew(omega);
    v_mat = Mat3::Identity() + (0.5 - t2 / 24.0) * om +
            (1.0 / 6.0 - t2 / 120.0) * (om * om);
  } else {
    const double half = 0.5 * theta;
    const Vec3 axis = omega / theta;
    const double s = std::sin(half);
    q = Eigen::Quaterniond(std::cos(half), s * axis.x(), s * axis.y(),
                           s * axis.z());
    const Mat3 om = skew(omega);
    const double t2 = theta * theta;
    v_mat = Mat3::Identity() + ((1.0 - std::cos(theta)) / t2) * om +
            ((theta - std::sin(theta)) / (t2 * theta)) * (om * om);
  }
  return PoseSE3(q, v_mat * rho);
}

PoseSE3 se3_compose(const PoseSE3& a, const PoseSE3& b) {
  return PoseSE3(a.rotation() * b.rotation(),
                 a.rotation() * b.translation() + a.translation());
}

PoseSE3 se3_inverse(const PoseSE3& p) {
  const Eigen::Quaterniond qi = p.rotation().conjugate();
  return PoseSE3(qi, -(qi * p.translation()));
}

Vec3 transform_point(const PoseSE3& pose, const Vec3& point_world) {
  return pose.rotation() * point_world + pose.translation();
}

Vec2 project(const PinholeCamera& camera, const Vec3& point_cam) {
  if (!(point_cam.z() > kMinDepth)) {
    throw BehindCamera("project: depth " + std::to_string(point_cam.z()) +
                       " <= " + std::to_string(kMinDepth));
  }
  const double inv_z = 1.0 / point_cam.z();
  return {camera.fx * point_cam.x() * inv_z + camera.cx,
          camera.fy * point_cam.y() * inv_z + camera.cy};
}

Mat26 project_jacobian(const PinholeCamera& camera, const PoseSE3& pose,
                       const Vec3& point_world) {
  const Vec3 pc = transform_point(pose, point_world);
  if (!(pc.z() > kMinDepth)) {
    throw BehindCamera("project_jacobian: depth " + std::to_string(pc.z()) +
                       " <= " + std::to_string(kMinDepth));
  }
  // d(pixel)/d(p_cam)
  const double inv_z = 1.0 / pc.z();
  const double inv_z2 = inv_z * inv_z;
  Eigen::Matrix<double, 2, 3> dpix;
  dpix << camera.fx * inv_z, 0.0, -camera.fx * pc.x() * inv_z2,
          0.0, camera.fy * inv_z, -camera.fy * pc.y() * inv_z2;
  // Left perturbation exp(delta)*pose moves the camera-frame point by
  // d(p_cam) = rho + omega x p_cam at delta = 0.
  Eigen::Matrix<double, 3, 6> dcam;
  dcam.leftCols<3>() = Mat3::Identity();
  dcam.rightCols<3>() = -skew(pc);
  return dpix * dcam;
}

PoseError pose_error(const PoseSE3& est, const PoseSE3& gt) {
  PoseError e;
  e.translation = (est.camera_center() - gt.camera_center()).norm();
  const Eigen::Quaterniond q_rel = est.rotation() * gt.rotation().conjugate();
  const double angle =
      2.0 * std::atan2(q_rel.vec().norm(), std::abs(q_rel.w()));
  e.rotation_deg = angle * 180.0 / M_PI;
  return e;
}

std::string pose_to_string(const PoseSE3& pose) {
  const Eigen::Quaterniond& q = pose.rotation();
  const Vec3& t = pose.translation();
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%.17g %.17g %.17g %.17g %.17g %.17g %.17g", q.w(), q.x(),
                q.y(), q.z(), t.x(), t.y(), t.z());
  return buf;
}

PoseSE3 pose_from_string(const std::string& text) {
  std::istringstream in(text);
  double v[7];
  for (double& x : v) {
    if (!(in >> x)) {
      throw ParseError("pose string needs 7 numbers: '" + text + "'");
    }
  }
  double trailing;
  if (in >> trailing) {
    throw ParseError("pose string has extra tokens: '" + text + "'");
  }
  try {
    return PoseSE3(Eigen::Quaterniond(v[0], v[1], v[2], v[3]),
                   Vec3(v[4], v[5], v[6]));
  } catch (const ConfigError& e) {
    throw ParseError(std::string("pose string: ") + e.what());
  }
}

}  // namespace vloc
