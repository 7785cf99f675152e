#pragma once

#include <optional>

#include "se3ctl/liegroup.hpp"

namespace se3ctl::sim {

/**
 * @brief Rigid surface placed in the world by `frame`.
 *
 * flat:       plane z = 0 of the frame, outward normal +z.
 * ramp:       convex circular arc about the frame x-axis (cylinder of `radius`
 *             centred at the origin), limited to +-extent/2 from +z.
 * hemisphere: upper half of a sphere of `radius` centred at the frame origin.
 */
struct SurfaceModel {
  enum class Kind { Flat, Ramp, Hemisphere };
  Kind kind = Kind::Flat;
  Pose frame;
  double radius = 0.0;  ///< mm (ramp, hemisphere)
  double extent = 0.0;  ///< rad (ramp arc span)

  static SurfaceModel flat(const Pose& frame = Pose::identity());
  static SurfaceModel ramp(double radius = 300.0, double extent_deg = 60.0, const Pose& frame = Pose::identity());
  static SurfaceModel hemisphere(double radius = 60.0, const Pose& frame = Pose::identity());
};

struct SurfaceQuery {
  Eigen::Vector3d point;   ///< closest surface point (world)
  Eigen::Vector3d normal;  ///< outward unit normal (world)
  double distance = 0.0;   ///< signed distance of the query point, positive outside
  bool on_surface = true;  ///< false outside the ramp span / below the hemisphere equator
};

SurfaceQuery query_surface(const SurfaceModel& s, const Eigen::Vector3d& p);

/// Hemispherical sensor tip; the sensor frame origin is the tip centre.
struct ContactOptions {
  double tip_radius = 20.0;  ///< mm
  double max_depth = 10.0;   ///< engagement envelope [0, max_depth] mm
  double slip_radius = -1.0; ///< tangential shear limit (mm); < 0 means sticking contact
  double slip_spin = -1.0;   ///< spin shear limit (rad); < 0 means sticking contact
};

/// Tangential shear of the sensor relative to its anchor, in the feature frame.
struct Shear {
  double x = 0.0, y = 0.0;  ///< mm
  double spin = 0.0;        ///< rad
};

struct Contact {
  Pose x_fs;           ///< sensor pose in the feature frame
  Pose feature_frame;  ///< X_wf
  double depth = 0.0;  ///< mm along the local normal
  Eigen::Vector3d normal;  ///< outward normal at the contact (world)
};

/**
 * @brief Contact pose for a given shear state.
 *
 * Depth, tilt and the feature-frame z-axis come from the local geometry;
 * tangential offset and spin come from `shear`. Returns nullopt outside the
 * engagement envelope.
 */
std::optional<Contact> contact_pose(const SurfaceModel& s, const Pose& sensor_in_world,
                                    const Shear& shear = {}, const ContactOptions& opt = {});

/**
 * @brief Tracks the shear anchor across steps (stick, or stick-slip with limits).
 *
 * The anchor is stored in the surface frame, so shear accumulates from motion
 * relative to the surface even when the surface itself moves.
 */
class ContactTracker {
 public:
  explicit ContactTracker(ContactOptions opt = {}) : opt_(opt) {}

  std::optional<Contact> update(const SurfaceModel& s, const Pose& sensor_in_world);
  void reset() { anchor_.reset(); }
  bool engaged() const { return anchor_.has_value(); }
  const ContactOptions& options() const { return opt_; }

 private:
  ContactOptions opt_;
  std::optional<Pose> anchor_;  ///< feature frame in the surface frame at the previous step
};

}  // namespace se3ctl::sim
