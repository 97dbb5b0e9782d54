#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>

#include "fbosc/config.hpp"

namespace fbosc {

/// Joint covariance of (q0, p0, qG, pG), vacuum = 1/2 on the diagonal.
/// Inputs are white, so the same matrix is the input spectral density at
/// every frequency.
using InputCovariance = Eigen::Matrix4d;

inline constexpr double kPhysicalityTol = 1e-10;
inline constexpr double kSymmetryTol = 1e-14;

/// Symplectic form for two modes in (q0, p0, qG, pG) order.
Eigen::Matrix4d symplectic_form();

/// I(x, y, z) = diag(e^x sinh^2 z + e^y cosh^2 z, e^-x sinh^2 z + e^-y cosh^2 z) / 2
Eigen::Matrix2d single_mode_block(double x, double y, double z);
/// Z(x, y, z) = diag((e^x + e^y) sinh z, -(e^-x + e^-y) sinh z) / 4
Eigen::Matrix2d correlation_block(double x, double y, double z);

/// [[I(2rG, 2r0, rE/2), Z(2r0, 2rG, rE)], [Z^T, I(2r0, 2rG, rE/2)]]
InputCovariance input_covariance(const InputStateParams& params);

/// The explicit covariance override when present, else input_covariance().
InputCovariance effective_covariance(const InputStateParams& params);

struct CovarianceValidity {
  bool valid = false;
  double min_eigenvalue = 0.0;  // of v + (i/2) Sigma
  std::optional<std::string> warning;
};

/// Checks v + (i/2) Sigma >= 0. Throws NotSymmetric when v is not symmetric
/// to kSymmetryTol (relative to its largest entry).
CovarianceValidity covariance_validity(const InputCovariance& v);

/// Lower-triangular L with L L^T = v; falls back to a symmetric square root
/// when v is only positive semidefinite.
Eigen::Matrix4d noise_shaping_factor(const InputCovariance& v);

}  // namespace fbosc
