#include "se3ctl/gdnmath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "se3ctl/errors.hpp"

namespace se3ctl {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;

void check_shapes(const PoseTable& a, const PoseTable& b, const char* what) {
  if (a.rows() != b.rows()) throw ShapeError(std::string(what) + ": row count mismatch");
  if (a.rows() == 0) throw ShapeError(std::string(what) + ": empty table");
}
}  // namespace

void SampleSpec::validate() const {
  if (!(r_max > 0.0 && z_max > z_min && phi_max > 0.0 && phi_max < 90.0 && gamma_max > gamma_min)) {
    throw DomainError("SampleSpec: degenerate sampling range");
  }
}

double softplus_stable(double x) { return std::max(0.0, x) + std::log1p(std::exp(-std::abs(x))); }

double softbound(double x, const SoftboundParams& p) {
  // max(x, lo) + min(x, hi) - x is clamp(x, lo, hi); the clamp avoids cancellation at |x| ~ 1e308.
  return std::clamp(x, p.x_min, p.x_max) + std::log1p(std::exp(-std::abs(x - p.x_min))) -
         std::log1p(std::exp(-std::abs(x - p.x_max)));
}

double softbound_naive(double x, const SoftboundParams& p) {
  const auto sp = [](double v) { return std::log1p(std::exp(v)); };
  return p.x_min + sp(x - p.x_min) - sp(x - p.x_max);
}

Vector6 default_mse_weights() {
  Vector6 a;
  a << 1, 1, 1, 100, 100, 100;
  return a;
}

double weighted_mse(const PoseTable& labels, const PoseTable& preds, const Vector6& alpha) {
  check_shapes(labels, preds, "weighted_mse");
  const PoseTable e = labels - preds;
  const Eigen::RowVectorXd w = alpha.transpose();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < e.rows(); ++i) sum += e.row(i).array().square().matrix().dot(w);
  return sum / static_cast<double>(labels.rows());
}

Vector6 mae_per_component(const PoseTable& labels, const PoseTable& preds) {
  check_shapes(labels, preds, "mae_per_component");
  return (labels - preds).cwiseAbs().colwise().mean().transpose();
}

double mean_nll(const PoseTable& labels, const std::vector<HeteroPrediction>& preds) {
  if (static_cast<Eigen::Index>(preds.size()) != labels.rows() || preds.empty()) {
    throw ShapeError("mean_nll: row count mismatch");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    const HeteroPrediction& p = preds[static_cast<std::size_t>(i)];
    if (!(p.inv_sigma.array() > 0.0).all()) throw DomainError("mean_nll: inv_sigma must be positive");
    const Vector6 e = labels.row(i).transpose() - p.mu;
    for (int j = 0; j < 6; ++j) {
      const double w = p.inv_sigma[j] * e[j];
      sum += w * w - 2.0 * std::log(p.inv_sigma[j]);
    }
  }
  return 3.0 * std::log(2.0 * std::numbers::pi) + sum / (2.0 * static_cast<double>(labels.rows()));
}

Vector6 contact_pose_from_unit(const SampleSpec& spec, double r_unit, double theta, double z,
                               double phi_unit, double cap_theta, double gamma) {
  const double r = spec.r_max * std::sqrt(r_unit);
  const double ph = std::acos(1.0 - (1.0 - std::cos(spec.phi_max * kDeg)) * phi_unit);
  const double cx = std::sin(ph) * std::cos(cap_theta);
  const double cy = std::sin(ph) * std::sin(cap_theta);
  const double cz = std::cos(ph);
  Vector6 e;
  e << r * std::cos(theta), r * std::sin(theta), z, -std::asin(cy), -std::atan2(cx, cz), gamma;
  return e;
}

Vector6 sample_contact_pose(const SampleSpec& spec, Rng& rng) {
  spec.validate();
  const double two_pi = 2.0 * std::numbers::pi;
  const double r_unit = uniform(rng, 0.0, 1.0);
  const double theta = uniform(rng, 0.0, two_pi);
  const double z = uniform(rng, spec.z_min, spec.z_max);
  const double phi_unit = uniform(rng, 0.0, 1.0);
  const double cap_theta = uniform(rng, 0.0, two_pi);
  const double gamma = uniform(rng, spec.gamma_min * kDeg, spec.gamma_max * kDeg);
  return contact_pose_from_unit(spec, r_unit, theta, z, phi_unit, cap_theta, gamma);
}

Twist label_pipeline(const Vector6& euler_fs) { return log(euler_to_pose(euler_fs).inverse()); }

}  // namespace se3ctl
