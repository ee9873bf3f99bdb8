#pragma once

#include "shapaudit/types.hpp"

namespace shapaudit {

struct LinearFit {
  Vector coef;
  double intercept = 0.0;
};

// Minimum-norm least squares (complete orthogonal decomposition); never
// fails on rank-deficient systems.
LinearFit fit_ols(const Matrix& X, const Vector& y);

// L2 penalty on coefficients only, intercept unpenalized.
LinearFit fit_ridge(const Matrix& X, const Vector& y, double lambda);

struct CoordinateDescentResult {
  LinearFit fit;
  int sweeps = 0;
  bool converged = false;
};

// Cyclic coordinate descent with soft-thresholding for
//   (1/2n) ||y - Xw - b||^2 + lambda * l1_ratio * ||w||_1
//                           + lambda * (1 - l1_ratio) / 2 * ||w||^2.
// l1_ratio = 1 is the lasso. Stops when the max coefficient change in a
// sweep drops below tol.
CoordinateDescentResult fit_elastic_net(const Matrix& X, const Vector& y,
                                        double lambda, double l1_ratio,
                                        double tol = 1e-8,
                                        int max_sweeps = 10000);

double elastic_net_objective(const Matrix& X, const Vector& y,
                             const LinearFit& fit, double lambda,
                             double l1_ratio);

// One cyclic sweep over intercept and all coordinates; returns the largest
// absolute coefficient change. Exposed for the descent property tests.
double elastic_net_sweep(const Matrix& X, const Vector& y, LinearFit& fit,
                         double lambda, double l1_ratio);

Vector predict_linear(const LinearFit& fit, const Matrix& X);

}  // namespace shapaudit
