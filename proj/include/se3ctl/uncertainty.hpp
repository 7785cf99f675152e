#pragma once

#include <Eigen/Core>
#include <vector>

#include "se3ctl/liegroup.hpp"
#include "se3ctl/random.hpp"

namespace se3ctl {

/**
 * @brief Concentrated Gaussian on SE(3): X = exp(eps^) * mean, eps ~ N(0, cov).
 *
 * Units of cov: mm^2 (translation), rad^2 (rotation), mm*rad (cross terms).
 */
struct PoseGaussian {
  Pose mean;
  Matrix6 cov = Matrix6::Identity();
};

/// Gaussian on R^n; dynamic size so the closed forms also run in 1-D.
struct EuclideanGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m);
Matrix6 symmetrize(const Matrix6& m);

/// SPD inverse via Cholesky; throws IllConditionedError when cov is not SPD.
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& cov, const char* what);

/// beta(eps) exp(-1/2 eps^T S^-1 eps), eps = log(x mean^-1), beta = eta/|det J(eps)|.
double density(const PoseGaussian& pg, const Pose& x, int jacobian_order = 2);

/// exp(eps^) * mean with eps drawn through the Cholesky factor of cov.
Pose sample(const PoseGaussian& pg, Rng& rng);

/// mu = log(mean), cov = J^-1(mu) S J^-T(mu).
EuclideanGaussian to_global_tangent(const PoseGaussian& pg);
/// mean = exp(mu), S = J(mu) cov J(mu)^T.
PoseGaussian from_global_tangent(const EuclideanGaussian& eg);

/// mean' = t mean, cov' = Ad(t) S Ad(t)^T + noise_cov.
PoseGaussian transform(const PoseGaussian& pg, const Pose& t, const Matrix6& noise_cov);

struct FuseOptions {
  int iterations = 5;
  /// Stop once |mu*'| drops below this; 0 disables the early exit.
  double tolerance = 0.0;
  /// Inputs with a covariance eigenvalue above this are flagged as not concentrated.
  double concentration_limit = 1.0;
};

struct FuseReport {
  PoseGaussian result;
  int iterations_run = 0;
  /// |mu*'| after each iteration.
  std::vector<double> step_norms;
  bool inputs_concentrated = true;
};

/// Iterative SE(3) fusion of two concentrated Gaussians, initialised at a.mean.
PoseGaussian fuse(const PoseGaussian& a, const PoseGaussian& b, int iterations = 5);
FuseReport fuse_detailed(const PoseGaussian& a, const PoseGaussian& b, const FuseOptions& opt = {});

/// Normalised product of two Gaussians.
EuclideanGaussian gaussian_product(const EuclideanGaussian& a, const EuclideanGaussian& b);
/// Fusion of two posteriors sharing a prior: precisions add, the prior's is removed once.
EuclideanGaussian gaussian_fusion_with_prior(const EuclideanGaussian& a, const EuclideanGaussian& b,
                                             const EuclideanGaussian& prior);
/// y = A x + z for independent Gaussians x, z.
EuclideanGaussian linear_gaussian_transform(const Eigen::MatrixXd& A, const EuclideanGaussian& x,
                                            const EuclideanGaussian& z);

}  // namespace se3ctl
