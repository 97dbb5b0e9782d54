#include "fbosc/gaussian_states.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace fbosc {

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d sigma = Eigen::Matrix4d::Zero();
  sigma(quad::q0, quad::p0) = 1.0;
  sigma(quad::p0, quad::q0) = -1.0;
  sigma(quad::qG, quad::pG) = 1.0;
  sigma(quad::pG, quad::qG) = -1.0;
  return sigma;
}

Eigen::Matrix2d single_mode_block(double x, double y, double z) {
  const double sh2 = std::sinh(z) * std::sinh(z);
  const double ch2 = std::cosh(z) * std::cosh(z);
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = 0.5 * (std::exp(x) * sh2 + std::exp(y) * ch2);
  m(1, 1) = 0.5 * (std::exp(-x) * sh2 + std::exp(-y) * ch2);
  return m;
}

Eigen::Matrix2d correlation_block(double x, double y, double z) {
  const double sh = std::sinh(z);
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = 0.25 * (std::exp(x) + std::exp(y)) * sh;
  m(1, 1) = -0.25 * (std::exp(-x) + std::exp(-y)) * sh;
  return m;
}

InputCovariance input_covariance(const InputStateParams& p) {
  InputCovariance v;
  const Eigen::Matrix2d cross = correlation_block(2.0 * p.r0, 2.0 * p.rG, p.rE);
  v.block<2, 2>(0, 0) = single_mode_block(2.0 * p.rG, 2.0 * p.r0, 0.5 * p.rE);
  v.block<2, 2>(0, 2) = cross;
  v.block<2, 2>(2, 0) = cross.transpose();
  v.block<2, 2>(2, 2) = single_mode_block(2.0 * p.r0, 2.0 * p.rG, 0.5 * p.rE);
  return v;
}

InputCovariance effective_covariance(const InputStateParams& params) {
  return params.covariance ? *params.covariance : input_covariance(params);
}

CovarianceValidity covariance_validity(const InputCovariance& v) {
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
    throw Error(ErrorCode::NotSymmetric, "covariance matrix is not symmetric");

  const Eigen::Matrix4cd m =
      v.cast<std::complex<double>>() + std::complex<double>(0.0, 0.5) * symplectic_form().cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m, Eigen::EigenvaluesOnly);
  CovarianceValidity out;
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  out.valid = out.min_eigenvalue >= -kPhysicalityTol;
  if (out.valid && out.min_eigenvalue < -1e-14)
    out.warning = "covariance is at the edge of physicality (min eigenvalue " +
                  std::to_string(out.min_eigenvalue) + ")";
  return out;
}

Eigen::Matrix4d noise_shaping_factor(const InputCovariance& v) {
  Eigen::LLT<Eigen::Matrix4d> llt(v);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(v);
  const Eigen::Vector4d root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().transpose();
}

}  // namespace fbosc
