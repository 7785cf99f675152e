#include "se3ctl/uncertainty.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "se3ctl/errors.hpp"

namespace se3ctl {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }
Matrix6 symmetrize(const Matrix6& m) { return 0.5 * (m + m.transpose()); }

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& cov, const char* what) {
  if (!cov.allFinite()) throw IllConditionedError(std::string(what) + ": non-finite covariance");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw IllConditionedError(std::string(what) + ": covariance is not positive definite");
  }
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  if (!inv.allFinite()) throw IllConditionedError(std::string(what) + ": inverse is not finite");
  return symmetrize(inv);
}

double density(const PoseGaussian& pg, const Pose& x, int jacobian_order) {
  Eigen::LLT<Matrix6> llt(pg.cov);
  if (llt.info() != Eigen::Success) {
    throw IllConditionedError("density: covariance is not positive definite");
  }
  const Eigen::Matrix<double, 6, 6> L = llt.matrixL();
  double log_det = 0.0;
  for (int i = 0; i < 6; ++i) log_det += 2.0 * std::log(L(i, i));
  const Twist eps = log(x * pg.mean.inverse());
  const Vector6 w = llt.matrixL().solve(eps);
  const double log_eta = -3.0 * std::log(2.0 * std::numbers::pi) - 0.5 * log_det;
  const double det_j = std::abs(left_jacobian(eps, jacobian_order).determinant());
  return std::exp(log_eta - 0.5 * w.squaredNorm()) / det_j;
}

Pose sample(const PoseGaussian& pg, Rng& rng) {
  Eigen::LLT<Matrix6> llt(pg.cov);
  if (llt.info() != Eigen::Success) {
    throw IllConditionedError("sample: Cholesky factorisation failed (covariance not SPD)");
  }
  const Vector6 eps = llt.matrixL() * standard_normal6(rng);
  return exp(eps) * pg.mean;
}

EuclideanGaussian to_global_tangent(const PoseGaussian& pg) {
  const Twist mu = log(pg.mean);
  const Matrix6 Ji = inv_left_jacobian(mu);
  return {mu, symmetrize(Matrix6(Ji * pg.cov * Ji.transpose()))};
}

PoseGaussian from_global_tangent(const EuclideanGaussian& eg) {
  if (eg.mean.size() != 6 || eg.cov.rows() != 6 || eg.cov.cols() != 6) {
    throw ShapeError("from_global_tangent: expected a 6-D Gaussian");
  }
  const Twist mu = eg.mean;
  const Matrix6 J = left_jacobian(mu);
  const Matrix6 S = eg.cov;
  return {exp(mu), symmetrize(Matrix6(J * S * J.transpose()))};
}

PoseGaussian transform(const PoseGaussian& pg, const Pose& t, const Matrix6& noise_cov) {
  const Matrix6 A = adjoint(t);
  return {t * pg.mean, symmetrize(Matrix6(A * pg.cov * A.transpose() + noise_cov))};
}

PoseGaussian fuse(const PoseGaussian& a, const PoseGaussian& b, int iterations) {
  FuseOptions opt;
  opt.iterations = iterations;
  return fuse_detailed(a, b, opt).result;
}

FuseReport fuse_detailed(const PoseGaussian& a, const PoseGaussian& b, const FuseOptions& opt) {
  if (opt.iterations < 1) throw DomainError("fuse: iterations must be >= 1");
  FuseReport rep;
  for (const PoseGaussian* g : {&a, &b}) {
    Eigen::SelfAdjointEigenSolver<Matrix6> es(g->cov, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > opt.concentration_limit) rep.inputs_concentrated = false;
  }
  const Matrix6 P1 = spd_inverse(a.cov, "fuse");
  const Matrix6 P2 = spd_inverse(b.cov, "fuse");
  const Pose inv1 = a.mean.inverse();
  const Pose inv2 = b.mean.inverse();

  Pose x = a.mean;
  Matrix6 cov = a.cov;
  for (int k = 0; k < opt.iterations; ++k) {
    const Twist xi1 = log(x * inv1);
    const Twist xi2 = log(x * inv2);
    const Matrix6 J1 = inv_left_jacobian(xi1);
    const Matrix6 J2 = inv_left_jacobian(xi2);
    const Matrix6 W1 = J1.transpose() * P1;
    const Matrix6 W2 = J2.transpose() * P2;
    cov = spd_inverse(Matrix6(symmetrize(Matrix6(W1 * J1 + W2 * J2))), "fuse");
    const Twist mu = -cov * (W1 * xi1 + W2 * xi2);
    x = exp(mu) * x;
    rep.step_norms.push_back(mu.norm());
    rep.iterations_run = k + 1;
    if (opt.tolerance > 0.0 && mu.norm() < opt.tolerance) break;
  }
  rep.result = {x, cov};
  return rep;
}

EuclideanGaussian gaussian_product(const EuclideanGaussian& a, const EuclideanGaussian& b) {
  const Eigen::MatrixXd Pa = spd_inverse(a.cov, "gaussian_product");
  const Eigen::MatrixXd Pb = spd_inverse(b.cov, "gaussian_product");
  const Eigen::MatrixXd S = spd_inverse(symmetrize(Eigen::MatrixXd(Pa + Pb)), "gaussian_product");
  return {S * (Pa * a.mean + Pb * b.mean), S};
}

EuclideanGaussian gaussian_fusion_with_prior(const EuclideanGaussian& a, const EuclideanGaussian& b,
                                             const EuclideanGaussian& prior) {
  const Eigen::MatrixXd Pa = spd_inverse(a.cov, "gaussian_fusion_with_prior");
  const Eigen::MatrixXd Pb = spd_inverse(b.cov, "gaussian_fusion_with_prior");
  const Eigen::MatrixXd Px = spd_inverse(prior.cov, "gaussian_fusion_with_prior");
  const Eigen::MatrixXd P = symmetrize(Eigen::MatrixXd(Pa + Pb - Px));
  Eigen::LLT<Eigen::MatrixXd> llt(P);
  if (llt.info() != Eigen::Success) {
    throw DegenerateFusionError("gaussian_fusion_with_prior: combined precision is not positive definite");
  }
  const Eigen::MatrixXd S = symmetrize(Eigen::MatrixXd(llt.solve(Eigen::MatrixXd::Identity(P.rows(), P.cols()))));
  return {S * (Pa * a.mean + Pb * b.mean - Px * prior.mean), S};
}

EuclideanGaussian linear_gaussian_transform(const Eigen::MatrixXd& A, const EuclideanGaussian& x,
                                            const EuclideanGaussian& z) {
  if (A.cols() != x.mean.size() || A.rows() != z.mean.size()) {
    throw ShapeError("linear_gaussian_transform: dimension mismatch");
  }
  return {A * x.mean + z.mean, symmetrize(Eigen::MatrixXd(A * x.cov * A.transpose() + z.cov))};
}

}  // namespace se3ctl
