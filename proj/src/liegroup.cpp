#include "se3ctl/liegroup.hpp"

#include <Eigen/SVD>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "se3ctl/errors.hpp"

namespace se3ctl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSmallAngle = 1e-3;

// Taylor-guarded coefficients of the SO(3) series.
// a = sin t / t, b = (1 - cos t) / t^2, c = (t - sin t) / t^3
struct So3Coeffs {
  double a, b, c;
};

So3Coeffs so3_coeffs(double t) {
  const double t2 = t * t;
  if (t < kSmallAngle) {
    return {1.0 - t2 / 6.0 + t2 * t2 / 120.0, 0.5 - t2 / 24.0 + t2 * t2 / 720.0,
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0};
  }
  const double s = std::sin(t);
  const double h = std::sin(0.5 * t);
  return {s / t, 2.0 * h * h / t2, (t - s) / (t2 * t)};
}

Eigen::Matrix<double, 21, 1> bernoulli() {
  Eigen::Matrix<double, 21, 1> b = Eigen::Matrix<double, 21, 1>::Zero();
  b[0] = 1.0;
  b[1] = -0.5;
  b[2] = 1.0 / 6.0;
  b[4] = -1.0 / 30.0;
  b[6] = 1.0 / 42.0;
  b[8] = -1.0 / 30.0;
  b[10] = 5.0 / 66.0;
  b[12] = -691.0 / 2730.0;
  b[14] = 7.0 / 6.0;
  b[16] = -3617.0 / 510.0;
  b[18] = 43867.0 / 798.0;
  b[20] = -174611.0 / 330.0;
  return b;
}

}  // namespace

Twist make_twist(const Eigen::Vector3d& r, const Eigen::Vector3d& p) {
  Twist xi;
  xi << r, p;
  return xi;
}

Pose Pose::from_matrix(const Eigen::Matrix4d& m) {
  if ((m.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > 1e-9) {
    throw StructureError("Pose::from_matrix: bottom row must be [0 0 0 1]");
  }
  return Pose(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = R_;
  m.topRightCorner<3, 1>() = t_;
  return m;
}

Pose Pose::orthonormalized() const {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(R_, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d R = svd.matrixU() * svd.matrixV().transpose();
  if (R.determinant() < 0.0) {
    Eigen::Matrix3d U = svd.matrixU();
    U.col(2) *= -1.0;
    R = U * svd.matrixV().transpose();
  }
  return Pose(R, t_);
}

double Pose::orthonormality_error() const {
  const double e = (R_ * R_.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return e + std::abs(R_.determinant() - 1.0);
}

bool Pose::is_approx(const Pose& o, double tol) const {
  return (R_ - o.R_).cwiseAbs().maxCoeff() <= tol && (t_ - o.t_).cwiseAbs().maxCoeff() <= tol;
}

Eigen::Matrix3d hat3(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(),  //
      v.z(), 0.0, -v.x(),   //
      -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Vector3d vee3(const Eigen::Matrix3d& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

Eigen::Matrix4d hat(const Twist& xi) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.topLeftCorner<3, 3>() = hat3(phi(xi));
  m.topRightCorner<3, 1>() = rho(xi);
  return m;
}

Twist vee(const Eigen::Matrix4d& m, double tol) {
  const Eigen::Matrix3d w = m.topLeftCorner<3, 3>();
  const double sym = (w + w.transpose()).cwiseAbs().maxCoeff();
  const double bottom = m.row(3).cwiseAbs().maxCoeff();
  if (!(sym <= tol) || !(bottom <= tol)) {
    throw StructureError("vee: matrix is not in se(3) (skew residual " + std::to_string(sym) +
                         ", bottom row " + std::to_string(bottom) + ")");
  }
  return make_twist(m.topRightCorner<3, 1>(), vee3(w));
}

Eigen::Matrix3d so3_exp(const Eigen::Vector3d& p) {
  const So3Coeffs k = so3_coeffs(p.norm());
  const Eigen::Matrix3d P = hat3(p);
  return Eigen::Matrix3d::Identity() + k.a * P + k.b * P * P;
}

Eigen::Vector3d so3_log(const Eigen::Matrix3d& R, double branch_tol) {
  const Eigen::Vector3d w = 0.5 * vee3(R - R.transpose());  // sin(t) * axis
  const double s = w.norm();
  const double c = 0.5 * (R.trace() - 1.0);
  const double t = std::atan2(s, c);
  if (kPi - t < branch_tol) {
    throw BranchError("log: rotation angle " + std::to_string(t) +
                      " rad is within the branch tolerance of pi");
  }
  if (t < kSmallAngle) {
    // t / sin t = 1 + t^2/6 + 7 t^4/360
    const double t2 = t * t;
    return (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * w;
  }
  if (c > -0.5) {
    return (t / s) * w;
  }
  // Near pi the antisymmetric part is tiny; recover the axis from the symmetric part.
  const Eigen::Matrix3d B = (0.5 * (R + R.transpose()) - c * Eigen::Matrix3d::Identity()) / (1.0 - c);
  int i = 0;
  B.diagonal().maxCoeff(&i);
  Eigen::Vector3d axis = B.col(i) / std::sqrt(B(i, i));
  axis.normalize();
  if (axis.dot(w) < 0.0) axis = -axis;
  return t * axis;
}

Eigen::Matrix3d so3_left_jacobian(const Eigen::Vector3d& p) {
  const So3Coeffs k = so3_coeffs(p.norm());
  const Eigen::Matrix3d P = hat3(p);
  return Eigen::Matrix3d::Identity() + k.b * P + k.c * P * P;
}

Eigen::Matrix3d so3_inv_left_jacobian(const Eigen::Vector3d& p) {
  const double t = p.norm();
  double d;  // (1 - (t/2) cot(t/2)) / t^2
  if (t < kSmallAngle) {
    const double t2 = t * t;
    d = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    const double h = 0.5 * t;
    d = (1.0 - h * std::cos(h) / std::sin(h)) / (t * t);
  }
  const Eigen::Matrix3d P = hat3(p);
  return Eigen::Matrix3d::Identity() - 0.5 * P + d * P * P;
}

Pose exp(const Twist& xi) {
  const Eigen::Vector3d p = phi(xi);
  return Pose(so3_exp(p), so3_left_jacobian(p) * rho(xi));
}

Twist log(const Pose& pose, double branch_tol) {
  const Eigen::Vector3d p = so3_log(pose.rotation(), branch_tol);
  return make_twist(so3_inv_left_jacobian(p) * pose.translation(), p);
}

Matrix6 adjoint(const Pose& p) {
  Matrix6 A = Matrix6::Zero();
  const Eigen::Matrix3d& C = p.rotation();
  A.topLeftCorner<3, 3>() = C;
  A.topRightCorner<3, 3>() = hat3(p.translation()) * C;
  A.bottomRightCorner<3, 3>() = C;
  return A;
}

Matrix6 ad(const Twist& xi) {
  Matrix6 A = Matrix6::Zero();
  const Eigen::Matrix3d P = hat3(phi(xi));
  A.topLeftCorner<3, 3>() = P;
  A.topRightCorner<3, 3>() = hat3(rho(xi));
  A.bottomRightCorner<3, 3>() = P;
  return A;
}

Matrix6 left_jacobian(const Twist& xi, int order) {
  if (order < 0) throw DomainError("left_jacobian: order must be >= 0");
  const Matrix6 A = ad(xi);
  Matrix6 term = Matrix6::Identity();
  Matrix6 J = Matrix6::Identity();
  double fact = 1.0;  // (n+1)!
  for (int n = 1; n <= order; ++n) {
    term = term * A;
    fact *= static_cast<double>(n + 1);
    J += term / fact;
  }
  return J;
}

Matrix6 inv_left_jacobian(const Twist& xi, int order) {
  if (order < 0 || order > 20) throw DomainError("inv_left_jacobian: order must be in [0, 20]");
  static const Eigen::Matrix<double, 21, 1> B = bernoulli();
  const Matrix6 A = ad(xi);
  Matrix6 term = Matrix6::Identity();
  Matrix6 J = Matrix6::Identity();
  double fact = 1.0;  // n!
  for (int n = 1; n <= order; ++n) {
    term = term * A;
    fact *= static_cast<double>(n);
    if (B[n] != 0.0) J += (B[n] / fact) * term;
  }
  return J;
}

Twist bch_compose(const Twist& xi1, const Twist& xi2, Small small, double max_norm) {
  const Twist& flagged = (small == Small::First) ? xi1 : xi2;
  if (flagged.norm() > max_norm) {
    throw ApproximationDomainError("bch_compose: flagged argument norm " +
                                   std::to_string(flagged.norm()) + " exceeds " +
                                   std::to_string(max_norm));
  }
  // Full-order inverse Jacobian: a truncated one leaves an O(eps) residual when the large argument is far from zero.
  constexpr int kOrder = 20;
  if (small == Small::First) return inv_left_jacobian(xi2, kOrder) * xi1 + xi2;
  return xi1 + inv_left_jacobian(-xi1, kOrder) * xi2;
}

Pose euler_to_pose(const Vector6& e) { return euler_to_pose(e[0], e[1], e[2], e[3], e[4], e[5]); }

Pose euler_to_pose(double x, double y, double z, double a, double b, double g) {
  const Eigen::Matrix3d R = (Eigen::AngleAxisd(g, Eigen::Vector3d::UnitZ()) *
                             Eigen::AngleAxisd(b, Eigen::Vector3d::UnitY()) *
                             Eigen::AngleAxisd(a, Eigen::Vector3d::UnitX()))
                                .toRotationMatrix();
  return Pose(R, Eigen::Vector3d(x, y, z));
}

Vector6 pose_to_euler(const Pose& p, double tol) {
  const Eigen::Matrix3d& R = p.rotation();
  const double cb = std::hypot(R(0, 0), R(1, 0));
  const double b = std::atan2(-R(2, 0), cb);
  if (std::abs(std::abs(b) - 0.5 * kPi) < tol) {
    throw GimbalLockError("pose_to_euler: pitch " + std::to_string(b) + " is at gimbal lock");
  }
  const double a = std::atan2(R(2, 1), R(2, 2));
  const double g = std::atan2(R(1, 0), R(0, 0));
  Vector6 e;
  e << p.translation(), a, b, g;
  return e;
}

}  // namespace se3ctl
