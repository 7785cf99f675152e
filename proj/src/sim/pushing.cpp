#include "se3ctl/sim/pushing.hpp"

#include <cmath>

#include "se3ctl/errors.hpp"

namespace se3ctl::sim {

double PushedObject::bearing() const { return std::atan2(y, z) - phi; }
double PushedObject::range() const { return std::hypot(y, z); }

void PushedObject::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("PushedObject: alpha must be in (0, 1]");
  if (!(r0 > 0.0)) throw DomainError("PushedObject: r0 must be > 0");
}

PushedObject push_object_step(const PushedObject& obj, double dy, double dz) {
  obj.validate();
  if (std::abs(dy) > kMaxPushStep || std::abs(dz) > kMaxPushStep) {
    throw StepSizeError("push_object_step: |dy|, |dz| must be <= 5 mm per step");
  }
  PushedObject out = obj;
  out.y += dy;
  out.z += dz;
  out.phi += (obj.alpha / obj.r0) * dy;
  return out;
}

BearingSensitivity bearing_sensitivity(const PushedObject& obj) {
  obj.validate();
  const double r2 = obj.y * obj.y + obj.z * obj.z;
  if (!(r2 > 0.0)) throw SingularTargetError("bearing_sensitivity: target at the contact origin");
  return {obj.z / r2, -obj.y / r2, -1.0, obj.r0 / obj.alpha};
}

ObjectPreset object_preset(std::string_view name) {
  if (name == "square") return {"square", 0.7, 40.0, 80.0};
  if (name == "circle") return {"circle", 0.5, 40.0, 80.0};
  if (name == "hexagon") return {"hexagon", 0.6, 40.0, 70.0};
  throw ConfigError("unknown object preset '" + std::string(name) + "'");
}

}  // namespace se3ctl::sim
