#include "se3ctl/sim/observation.hpp"

#include <cmath>
#include <numbers>

#include "se3ctl/errors.hpp"

namespace se3ctl::sim {

Vector6 network_test_mae() {
  Vector6 m;
  m << 0.4259, 0.4224, 0.1230, 0.0087, 0.0111, 0.0203;
  return m;
}

ObservationModel ObservationModel::from_mae(const Vector6& mae, double cov_multiplier) {
  return {mae * std::sqrt(0.5 * std::numbers::pi), cov_multiplier};
}

ObservationModel ObservationModel::desk_scale() { return from_mae(network_test_mae()); }

void ObservationModel::validate() const {
  if (!(std.array() > 0.0).all()) throw DomainError("ObservationModel: stds must be > 0");
  if (!(cov_multiplier > 0.0)) throw DomainError("ObservationModel: cov_multiplier must be > 0");
}

PoseGaussian observe(const ObservationModel& m, const Pose& true_x_fs, Rng& rng) {
  const Twist xi = log(true_x_fs.inverse()) + m.std.cwiseProduct(standard_normal6(rng));
  const Matrix6 J = left_jacobian(xi);
  const Matrix6 D = m.std.array().square().matrix().asDiagonal();
  return {exp(xi), symmetrize(Matrix6(m.cov_multiplier * J * D * J.transpose()))};
}

StudySequence make_study_sequence(std::size_t n, const ObservationModel& m, const SampleSpec& spec, Rng& rng) {
  StudySequence seq;
  seq.truth.reserve(n);
  seq.observations.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Pose x_fs = euler_to_pose(sample_contact_pose(spec, rng));
    seq.truth.push_back(x_fs.inverse());
    seq.observations.push_back(observe(m, x_fs, rng));
  }
  return seq;
}

}  // namespace se3ctl::sim
