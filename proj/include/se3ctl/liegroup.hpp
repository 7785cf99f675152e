#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace se3ctl {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Exponential coordinates / velocity: (rho, phi), translation first.
using Twist = Vector6;

inline Eigen::Vector3d rho(const Twist& xi) { return xi.head<3>(); }
inline Eigen::Vector3d phi(const Twist& xi) { return xi.tail<3>(); }
Twist make_twist(const Eigen::Vector3d& rho, const Eigen::Vector3d& phi);

/**
 * @brief Rigid transform in SE(3), stored as rotation C and translation r.
 *
 * Semantics are those of the 4x4 homogeneous matrix [C r; 0 1].
 */
class Pose {
 public:
  Pose() : R_(Eigen::Matrix3d::Identity()), t_(Eigen::Vector3d::Zero()) {}
  Pose(const Eigen::Matrix3d& R, const Eigen::Vector3d& t) : R_(R), t_(t) {}

  static Pose identity() { return Pose(); }
  static Pose from_matrix(const Eigen::Matrix4d& m);
  static Pose from_translation(const Eigen::Vector3d& t) {
    return Pose(Eigen::Matrix3d::Identity(), t);
  }
  static Pose from_rotation(const Eigen::Matrix3d& R) {
    return Pose(R, Eigen::Vector3d::Zero());
  }

  const Eigen::Matrix3d& rotation() const { return R_; }
  const Eigen::Vector3d& translation() const { return t_; }
  Eigen::Matrix4d matrix() const;

  Pose inverse() const { return Pose(R_.transpose(), -R_.transpose() * t_); }
  Pose operator*(const Pose& o) const { return Pose(R_ * o.R_, R_ * o.t_ + t_); }
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return R_ * p + t_; }

  /// Projects the rotation back onto SO(3) (nearest orthonormal matrix).
  Pose orthonormalized() const;
  /// max |R R^T - I| entry, plus |det R - 1|.
  double orthonormality_error() const;
  bool is_approx(const Pose& o, double tol) const;

 private:
  Eigen::Matrix3d R_;
  Eigen::Vector3d t_;
};

Eigen::Matrix3d hat3(const Eigen::Vector3d& v);
Eigen::Vector3d vee3(const Eigen::Matrix3d& m);

/// 4x4 Lie-algebra matrix [phi^ rho; 0 0].
Eigen::Matrix4d hat(const Twist& xi);
/// Inverse of hat; throws StructureError if m is not hat-structured to tol.
Twist vee(const Eigen::Matrix4d& m, double tol = 1e-9);

Eigen::Matrix3d so3_exp(const Eigen::Vector3d& phi);
/// Principal-branch SO(3) log; throws BranchError within branch_tol of pi.
Eigen::Vector3d so3_log(const Eigen::Matrix3d& R, double branch_tol = 1e-6);
/// Closed-form SO(3) left Jacobian and its inverse.
Eigen::Matrix3d so3_left_jacobian(const Eigen::Vector3d& phi);
Eigen::Matrix3d so3_inv_left_jacobian(const Eigen::Vector3d& phi);

Pose exp(const Twist& xi);
Twist log(const Pose& p, double branch_tol = 1e-6);

/// Group adjoint [C, r^C; 0, C].
Matrix6 adjoint(const Pose& p);
/// Algebra adjoint ("curly hat") [phi^, rho^; 0, phi^].
Matrix6 ad(const Twist& xi);

/// Truncated series sum_{n<=order} (ad xi)^n / (n+1)!.
Matrix6 left_jacobian(const Twist& xi, int order = 2);
/// Truncated series sum_{n<=order} B_n/n! (ad xi)^n; order <= 20.
Matrix6 inv_left_jacobian(const Twist& xi, int order = 2);

enum class Small { First, Second };

/**
 * @brief First-order BCH approximation of log(exp(xi1) exp(xi2)).
 *
 * Small::First  -> J(xi2)^-1 xi1 + xi2
 * Small::Second -> xi1 + J(-xi1)^-1 xi2
 * The flagged argument must have norm <= max_norm.
 */
Twist bch_compose(const Twist& xi1, const Twist& xi2, Small small, double max_norm = 0.5);

/// Extrinsic xyz Euler: R = Rz(g) Ry(b) Rx(a). Vector order (x,y,z,a,b,g).
Pose euler_to_pose(const Vector6& e);
Pose euler_to_pose(double x, double y, double z, double a, double b, double g);
/// Throws GimbalLockError when pitch is within tol of +-pi/2.
Vector6 pose_to_euler(const Pose& p, double tol = 1e-6);

}  // namespace se3ctl
