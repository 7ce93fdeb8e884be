#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <string>

#include "vloc/errors.hpp"

namespace vloc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat26 = Eigen::Matrix<double, 2, 6>;

/// Depth below which projection is treated as behind the camera.
inline constexpr double kMinDepth = 1e-6;

/// Rigid world-to-camera transform: x_cam = R * x_world + t.
/// Rotation is stored as a unit quaternion and renormalized after every
/// construction and composition.
class PoseSE3 {
 public:
  PoseSE3() : q_(Eigen::Quaterniond::Identity()), t_(Vec3::Zero()) {}

  PoseSE3(const Eigen::Quaterniond& q, const Vec3& t) : q_(q), t_(t) {
    normalize();
  }

  static PoseSE3 from_rotation_matrix(const Mat3& rotation, const Vec3& t) {
    return PoseSE3(Eigen::Quaterniond(rotation), t);
  }

  const Eigen::Quaterniond& rotation() const { return q_; }
  const Vec3& translation() const { return t_; }
  Mat3 rotation_matrix() const { return q_.toRotationMatrix(); }

  /// Camera center in world coordinates: -R^T t.
  Vec3 camera_center() const { return -(q_.conjugate() * t_); }

 private:
  void normalize();

  Eigen::Quaterniond q_;
  Vec3 t_;
};

/// Pose update in the tangent space: (rho_x, rho_y, rho_z, omega_x, omega_y,
/// omega_z) with translation in scene units and rotation in radians.
using TangentVec6 = Vec6;

struct PinholeCamera {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;
};

/// Exponential map: Rodrigues for the rotation, V(omega)*rho for the
/// translation. Small angles (|omega| < 1e-8) use the Taylor expansions.
PoseSE3 se3_exp(const TangentVec6& delta);

/// Composition a*b: (R_a R_b, R_a t_b + t_a).
PoseSE3 se3_compose(const PoseSE3& a, const PoseSE3& b);

/// Inverse: (R^T, -R^T t).
PoseSE3 se3_inverse(const PoseSE3& p);

/// World point into camera coordinates: R*P + t.
Vec3 transform_point(const PoseSE3& pose, const Vec3& point_world);

/// Pinhole projection of a camera-frame point. Throws BehindCamera when
/// z <= kMinDepth. The result may lie outside the image; callers clip.
Vec2 project(const PinholeCamera& camera, const Vec3& point_cam);

/// 2x6 Jacobian of the projected pixel with respect to a left-multiplied
/// pose perturbation exp(delta)*pose, evaluated at delta = 0. Columns are
/// ordered (rho, omega) like TangentVec6. Throws BehindCamera.
Mat26 project_jacobian(const PinholeCamera& camera, const PoseSE3& pose,
                       const Vec3& point_world);

struct PoseError {
  double translation = 0.0;  // |c_est - c_gt|, scene units
  double rotation_deg = 0.0; // angle of R_est * R_gt^T
};

PoseError pose_error(const PoseSE3& est, const PoseSE3& gt);

/// Text form "qw qx qy qz tx ty tz" used in map and result files.
std::string pose_to_string(const PoseSE3& pose);
PoseSE3 pose_from_string(const std::string& text);  // throws ParseError

}  // namespace vloc
