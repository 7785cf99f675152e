#include "se3ctl/sim/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "se3ctl/errors.hpp"

namespace se3ctl::sim {

SurfaceModel SurfaceModel::flat(const Pose& frame) { return {Kind::Flat, frame, 0.0, 0.0}; }

SurfaceModel SurfaceModel::ramp(double radius, double extent_deg, const Pose& frame) {
  if (!(radius > 0.0 && extent_deg > 0.0 && extent_deg < 360.0)) {
    throw DomainError("ramp: radius must be > 0 and extent in (0, 360) deg");
  }
  return {Kind::Ramp, frame, radius, extent_deg * std::numbers::pi / 180.0};
}

SurfaceModel SurfaceModel::hemisphere(double radius, const Pose& frame) {
  if (!(radius > 0.0)) throw DomainError("hemisphere: radius must be > 0");
  return {Kind::Hemisphere, frame, radius, 0.0};
}

SurfaceQuery query_surface(const SurfaceModel& s, const Eigen::Vector3d& p) {
  const Eigen::Vector3d q = s.frame.inverse() * p;
  const Eigen::Matrix3d& R = s.frame.rotation();
  SurfaceQuery out;
  Eigen::Vector3d n_local;
  Eigen::Vector3d pt_local;
  switch (s.kind) {
    case SurfaceModel::Kind::Flat:
      n_local = Eigen::Vector3d::UnitZ();
      pt_local = {q.x(), q.y(), 0.0};
      out.distance = q.z();
      break;
    case SurfaceModel::Kind::Ramp: {
      const double rr = std::hypot(q.y(), q.z());
      if (rr < 1e-9) {
        out.on_surface = false;
        n_local = Eigen::Vector3d::UnitZ();
      } else {
        n_local = {0.0, q.y() / rr, q.z() / rr};
        out.on_surface = std::abs(std::atan2(q.y(), q.z())) <= 0.5 * s.extent;
      }
      pt_local = Eigen::Vector3d(q.x(), 0.0, 0.0) + s.radius * n_local;
      out.distance = rr - s.radius;
      break;
    }
    case SurfaceModel::Kind::Hemisphere: {
      const double rr = q.norm();
      if (rr < 1e-9) {
        out.on_surface = false;
        n_local = Eigen::Vector3d::UnitZ();
      } else {
        n_local = q / rr;
        out.on_surface = n_local.z() >= 0.0;
      }
      pt_local = s.radius * n_local;
      out.distance = rr - s.radius;
      break;
    }
  }
  out.normal = R * n_local;
  out.point = s.frame * pt_local;
  return out;
}

std::optional<Contact> contact_pose(const SurfaceModel& s, const Pose& sensor_in_world, const Shear& shear,
                                    const ContactOptions& opt) {
  const Eigen::Vector3d c = sensor_in_world.translation();
  const SurfaceQuery q = query_surface(s, c);
  if (!q.on_surface) return std::nullopt;
  const double depth = opt.tip_radius - q.distance;
  if (depth < 0.0 || depth > opt.max_depth) return std::nullopt;

  const Eigen::Matrix3d& Rws = sensor_in_world.rotation();
  const Eigen::Vector3d zf = -q.normal;
  Eigen::Vector3d x0 = Rws.col(0) - Rws.col(0).dot(zf) * zf;
  if (x0.norm() < 1e-6) x0 = Rws.col(1) - Rws.col(1).dot(zf) * zf;
  x0.normalize();
  Eigen::Matrix3d Rwf0;
  Rwf0 << x0, zf.cross(x0), zf;

  Vector6 e;
  try {
    e = pose_to_euler(Pose::from_rotation(Rwf0.transpose() * Rws));
  } catch (const GimbalLockError&) {
    return std::nullopt;  // sensor axis parallel to the surface
  }
  // Rotating the feature frame about its own z changes only the Euler spin,
  // so the tilt angles come from geometry and the spin from the shear state.
  const Eigen::Matrix3d Rfs = euler_to_pose(0, 0, 0, e[3], e[4], shear.spin).rotation();
  const Eigen::Vector3d tfs(shear.x, shear.y, depth);
  const Eigen::Matrix3d Rwf = Rws * Rfs.transpose();

  Contact out;
  out.x_fs = Pose(Rfs, tfs);
  out.feature_frame = Pose(Rwf, c - Rwf * tfs);
  out.depth = depth;
  out.normal = q.normal;
  return out;
}

std::optional<Contact> ContactTracker::update(const SurfaceModel& s, const Pose& sensor_in_world) {
  Shear shear;
  if (anchor_) {
    const Pose stick = (s.frame * *anchor_).inverse() * sensor_in_world;
    Vector6 e;
    try {
      e = pose_to_euler(stick);
    } catch (const GimbalLockError&) {
      anchor_.reset();
      return std::nullopt;
    }
    shear.x = e[0];
    shear.y = e[1];
    shear.spin = e[5];
    if (opt_.slip_radius >= 0.0) {
      const double r = std::hypot(shear.x, shear.y);
      if (r > opt_.slip_radius) {
        shear.x *= opt_.slip_radius / r;
        shear.y *= opt_.slip_radius / r;
      }
    }
    if (opt_.slip_spin >= 0.0) shear.spin = std::clamp(shear.spin, -opt_.slip_spin, opt_.slip_spin);
  }
  std::optional<Contact> c = contact_pose(s, sensor_in_world, shear, opt_);
  if (!c) {
    anchor_.reset();
    return std::nullopt;
  }
  anchor_ = s.frame.inverse() * c->feature_frame;
  return c;
}

}  // namespace se3ctl::sim
