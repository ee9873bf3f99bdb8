#pragma once

#include "shapaudit/types.hpp"

namespace shapaudit {

struct SvrParams {
  double C = 1.0;
  double epsilon = 0.1;
  double gamma = 0.0;  // 0 = 1/d
  int degree = 0;      // 0 = RBF, otherwise polynomial of this degree
  double coef0 = 1.0;  // polynomial offset
  double tol = 1e-6;
  int max_passes = 50000;
};

// Epsilon-insensitive support vector regression. The bias is absorbed by
// augmenting the kernel with +1, which leaves a box-constrained dual
//   max -1/2 b'Kb + y'b - eps ||b||_1,  b_i in [-C, C]
// solvable by projected coordinate ascent with soft-thresholding.
struct SvrModel {
  Matrix support;  // training inputs
  Vector beta;     // dual coefficients, |beta_i| <= C
  double gamma = 0.0;
  int degree = 0;
  double coef0 = 1.0;
  bool converged = false;
  int passes = 0;
};

SvrModel fit_svr(const Matrix& X, const Vector& y, const SvrParams& p);
Vector predict_svr(const SvrModel& m, const Matrix& X);

double kernel_value(const SvrModel& m, const RowVector& a, const RowVector& b);

}  // namespace shapaudit
