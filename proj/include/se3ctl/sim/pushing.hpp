#pragma once

#include <string>
#include <string_view>

namespace se3ctl::sim {

/**
 * @brief Differential pushing model in the contact frame {c}.
 *
 * (y, z) are the target coordinates in {c} and phi the object rotation, so the
 * target bearing is atan2(y, z) - phi. A pusher step (dy, dz) is the resulting
 * change of the target coordinates and rotates the object by (alpha/r0) dy.
 */
struct PushedObject {
  double y = 0.0;      ///< mm
  double z = 100.0;    ///< mm
  double phi = 0.0;    ///< rad
  double alpha = 0.7;  ///< slip factor in (0, 1]
  double r0 = 40.0;    ///< mm, contact point to centre of friction

  double bearing() const;
  double range() const;
  void validate() const;
};

/// Largest pusher step per call for which the differential model is used (mm).
inline constexpr double kMaxPushStep = 5.0;

PushedObject push_object_step(const PushedObject& obj, double dy, double dz);

struct BearingSensitivity {
  double d_dy;      ///< z / r^2
  double d_dz;      ///< -y / r^2
  double d_dphi;    ///< -1
  double flip_radius;  ///< r0 / alpha
};

BearingSensitivity bearing_sensitivity(const PushedObject& obj);

/// Pushed-object presets: geometry of the contacted face and friction parameters.
struct ObjectPreset {
  std::string name;
  double alpha = 0.7;
  double r0 = 40.0;     ///< mm
  double depth = 80.0;  ///< mm, pushed face to opposite face
};

ObjectPreset object_preset(std::string_view name);

}  // namespace se3ctl::sim
